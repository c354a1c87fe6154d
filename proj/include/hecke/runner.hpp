#pragma once

// Command dispatch behind the hecke_cli tool.

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "hecke/experiments.hpp"

namespace hecke {

enum class Command { Factor, Chars, LValue, Moment1, Moment2, Density, Verify, C0 };
enum class OutputFormat { Csv, Json };

std::optional<Command> parse_command(const std::string& name);
std::string command_name(Command c);

struct RunConfig {
    Command command = Command::Verify;
    std::int64_t qnorm_min = 3;
    std::int64_t qnorm_max = 500;
    bool primes_only = false;
    std::optional<GaussInt> q;  // single modulus instead of a norm range
    double sigma = 1.0;
    TestFunctionKind testfn = TestFunctionKind::Fejer;
    std::string out_path;  // empty: stdout
    OutputFormat format = OutputFormat::Csv;
    std::string cache_dir;  // empty: no Gauss-sum cache
    int workers = 1;
    std::uint64_t seed = 1;
    bool timing = false;  // record wall-clock seconds instead of 0
};

/// Invalid configuration; maps to exit status 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Throws UsageError when the configuration violates its invariants.
void validate(const RunConfig& config);

struct RunResult {
    int exit_code = 0;   // 0 pass, 1 verification failure, 2 usage error
    std::string output;  // the document written to out_path, or meant for stdout
    std::string notes;   // human-readable remarks for stderr
};

/// Executes a validated configuration. Writes output to config.out_path when set.
/// HECKE_CACHE_DIR, when set, overrides config.cache_dir.
RunResult run(const RunConfig& config);

/// Calls fn(k) for k in [0, n) on up to `workers` threads. fn must write only to slot k of its output.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace hecke
