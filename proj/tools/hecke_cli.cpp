// hecke_cli <command> [flags]; see README.md for the commands and output schemas.

#include <cstdio>
#include <iostream>
#include <regex>

#include "CLI11.hpp"
#include "hecke/runner.hpp"

namespace {

// Accepts "a+bi", "a-bi", "a", "bi", "i", "a,b".
std::optional<hecke::GaussInt> parse_gauss(std::string s) {
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
    std::smatch m;
    if (std::regex_match(s, m, std::regex(R"(([+-]?\d+),([+-]?\d+))")))
        return hecke::GaussInt{std::stoll(m[1]), std::stoll(m[2])};
    if (std::regex_match(s, m, std::regex(R"(([+-]?\d+))"))) return hecke::GaussInt{std::stoll(m[1]), 0};
    if (std::regex_match(s, m, std::regex(R"(([+-]?\d*)i)"))) {
        const std::string b = m[1];
        return hecke::GaussInt{0, b.empty() || b == "+" ? 1 : b == "-" ? -1 : std::stoll(b)};
    }
    if (std::regex_match(s, m, std::regex(R"(([+-]?\d+)([+-]\d*)i)"))) {
        const std::string b = m[2];
        return hecke::GaussInt{std::stoll(m[1]), b == "+" ? 1 : b == "-" ? -1 : std::stoll(b)};
    }
    return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Central values and low-lying zeros of Hecke L-functions over Q(i)"};
    app.require_subcommand(0, 0);

    std::string command;
    std::string q_text;
    std::string testfn = "fejer";
    std::string format = "csv";
    hecke::RunConfig config;

    app.add_option("command", command, "factor | chars | lvalue | moment1 | moment2 | density | verify | c0")
        ->required();
    app.add_option("--qnorm-min", config.qnorm_min, "smallest N(q) in the sweep");
    app.add_option("--qnorm-max", config.qnorm_max, "largest N(q) in the sweep");
    app.add_flag("--primes-only", config.primes_only, "only prime moduli");
    app.add_option("--q", q_text, "a single modulus, e.g. -1+2i (replaces the norm range)");
    app.add_option("--sigma", config.sigma, "support of the test function's Fourier transform");
    app.add_option("--testfn", testfn, "fejer | cosine");
    app.add_option("--out", config.out_path, "output file (default stdout)");
    app.add_option("--format", format, "csv | json");
    app.add_option("--cache-dir", config.cache_dir, "Gauss-sum cache directory (HECKE_CACHE_DIR overrides)");
    app.add_option("--workers", config.workers, "worker threads");
    app.add_option("--seed", config.seed, "seed for randomized checks");
    app.add_flag("--timing", config.timing, "fill wall_s with measured seconds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        const auto cmd = hecke::parse_command(command);
        if (!cmd) throw hecke::UsageError("unknown command '" + command + "'");
        config.command = *cmd;
        const auto kind = hecke::parse_test_function(testfn);
        if (!kind) throw hecke::UsageError("unknown test function '" + testfn + "'");
        config.testfn = *kind;
        if (format == "csv")
            config.format = hecke::OutputFormat::Csv;
        else if (format == "json")
            config.format = hecke::OutputFormat::Json;
        else
            throw hecke::UsageError("unknown format '" + format + "'");
        if (!q_text.empty()) {
            config.q = parse_gauss(q_text);
            if (!config.q) throw hecke::UsageError("cannot parse q '" + q_text + "'");
        }

        const hecke::RunResult r = hecke::run(config);
        if (config.out_path.empty()) std::fwrite(r.output.data(), 1, r.output.size(), stdout);
        std::cerr << r.notes;
        return r.exit_code;
    } catch (const hecke::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
