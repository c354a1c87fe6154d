#pragma once

// Invariant checks from every module, reported as lemma rows (check, parameter, observed, bound, pass).

#include <cstdint>
#include <vector>

#include "hecke/experiments.hpp"

namespace hecke {

struct VerifyOptions {
    std::uint64_t seed = 1;
    int workers = 1;
};

std::vector<LemmaRow> run_verify_suite(const VerifyOptions& options);

}  // namespace hecke
