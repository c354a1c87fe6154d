#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hecke/hecke_lift.hpp"

using namespace hecke;

namespace {

constexpr double kPi = std::numbers::pi;

const std::vector<GaussInt> kSample{GaussInt{-3, 0}, GaussInt{-1, 2}, GaussInt{3, 2}, GaussInt{9, 0},
                                    GaussInt{-3, 0} * GaussInt{-1, 2}, GaussInt{5, 4}, GaussInt{-1, 2} * GaussInt{-1, 2}};

std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("hecke_test_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

// Gauss sum by brute force over the Hermite box of (1+i)^3 q: every residue x with
// chi~(x) != 0 weighted by exp(2 pi i Im(x / ((1+i)^3 q))).
std::complex<double> oracle_gauss_sum(const Character& chi) {
    const GaussInt c = kOnePlusICubed * chi.modulus().q();
    const ResidueRing ring(c);
    const double nc = static_cast<double>(norm(c));
    std::complex<double> g{0.0, 0.0};
    for (std::int64_t idx = 0; idx < ring.size(); ++idx) {
        const GaussInt x = ring.element(idx);
        if (!is_odd(x)) continue;
        const auto v = lifted_value(chi, x);
        if (v == 0.0) continue;
        // x / c = x conj(c) / N(c)
        const GaussInt w = x * c.conj();
        const double im = static_cast<double>(w.im) / nc;
        g += v * std::polar(1.0, 2.0 * kPi * im);
    }
    return g;
}

}  // namespace

TEST_CASE("lifted values kill units and vanish off the group") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::int64_t> coord(-80, 80);
    for (const GaussInt& q : kSample) {
        const auto m = Modulus::build(q);
        for (const auto& chi : characters(m, {.odd_only = true, .primitive_only = true})) {
            for (int k = 0; k < 30; ++k) {
                const GaussInt n{coord(rng), coord(rng)};
                if (n.is_zero()) continue;
                if (!is_odd(n)) {
                    CHECK(lifted_value(chi, n) == 0.0);
                    continue;
                }
                const auto v = lifted_value(chi, n);
                for (const GaussInt& u : kUnits) CHECK(std::abs(lifted_value(chi, u * n) - v) < 1e-14);
                CHECK(std::abs(v - chi(primary_part(n))) < 1e-14);
            }
            CHECK(lifted_value(chi, q) == 0.0);
        }
    }
}

TEST_CASE("Gauss sums: table vs brute force vs literal trace form") {
    for (const GaussInt& q : kSample) {
        const auto m = Modulus::build(q);
        const GaussSumTable table(m);
        for (const auto& chi : characters(m, {.odd_only = true, .primitive_only = true})) {
            const auto g = table.gauss_sum(chi);
            CHECK(std::abs(g - oracle_gauss_sum(chi)) < 1e-9);
            CHECK(std::abs(g - gauss_sum_direct(chi)) < 1e-9);
            CHECK(std::abs(std::norm(g) - 8.0 * static_cast<double>(norm(q))) < 1e-8 * norm(q));
            CHECK(std::abs(HeckeCharacter::lift(chi).conj().gauss_sum() - std::conj(g)) < 1e-9);
            CHECK(std::abs(table.gauss_sum(chi.conj()) - std::conj(g)) < 1e-9);
        }
    }
}

TEST_CASE("lift requires a primitive odd character") {
    const auto m = Modulus::build(GaussInt{9, 0});
    for (const auto& chi : characters(m)) {
        if (chi.is_odd() && chi.is_primitive())
            CHECK_NOTHROW(HeckeCharacter::lift(chi));
        else
            CHECK_THROWS(HeckeCharacter::lift(chi));
    }
}

TEST_CASE("trace form of the additive character") {
    CHECK(trace_identity_deviation(42, 2000) < 1e-12);
    // tr(z/2i) = Im z
    const std::complex<double> z{0.3, 0.7};
    CHECK(std::abs(additive_character_trace(z) - std::polar(1.0, 2.0 * kPi * 0.7)) < 1e-12);
}

TEST_CASE("von Mangoldt function") {
    CHECK(lambda_K(GaussInt{-3, 0}) == doctest::Approx(std::log(9.0)));
    CHECK(lambda_K(GaussInt{9, 0}) == doctest::Approx(std::log(9.0)));
    CHECK(lambda_K(GaussInt{-1, 2}) == doctest::Approx(std::log(5.0)));
    CHECK(lambda_K(GaussInt{-1, 2} * GaussInt{-1, 2} * GaussInt{-1, 2}) == doctest::Approx(std::log(5.0)));
    CHECK(lambda_K(GaussInt{5, 0}) == 0.0);  // (-1+2i)(-1-2i)
    CHECK(lambda_K(GaussInt{1, 0}) == 0.0);
    CHECK(lambda_K(GaussInt{15, 0}) == 0.0);
}

TEST_CASE("lift primitivity scan") {
    for (const GaussInt& q : kSample) {
        const auto m = Modulus::build(q);
        for (const auto& chi : characters(m)) {
            if (chi.is_odd() && chi.is_primitive()) CHECK(verify_lift_primitive(chi));
            if (!chi.is_primitive()) CHECK_FALSE(verify_lift_primitive(chi));
        }
    }
}

TEST_CASE("Gauss-sum cache round trip and corruption") {
    const auto dir = scratch_dir("cache");
    const GaussSumCache cache(dir);
    const auto m = Modulus::build(GaussInt{5, 4});
    const auto chars = characters(m, {.odd_only = true, .primitive_only = true});

    const auto cold = lift_family(m, chars, &cache);
    REQUIRE(std::filesystem::exists(cache.file_for(m->q())));
    const auto loaded = cache.load(m->q());
    REQUIRE(loaded);
    CHECK(loaded->size() == chars.size());

    const auto warm = lift_family(m, chars, &cache);
    REQUIRE(warm.size() == cold.size());
    for (std::size_t k = 0; k < cold.size(); ++k) CHECK(warm[k].gauss_sum() == cold[k].gauss_sum());

    // unparsable file
    {
        std::ofstream out(cache.file_for(m->q()), std::ios::trunc);
        out << "{not json";
    }
    CHECK_FALSE(cache.load(m->q()));
    const auto recomputed = lift_family(m, chars, &cache);
    for (std::size_t k = 0; k < cold.size(); ++k) CHECK(recomputed[k].gauss_sum() == cold[k].gauss_sum());
    CHECK(cache.load(m->q()));

    // well-formed but wrong modulus
    {
        std::ofstream out(cache.file_for(m->q()), std::ios::trunc);
        out << R"({"q": [1, 0], "characters": []})";
    }
    CHECK_FALSE(cache.load(m->q()));

    // well-formed with a damaged value
    {
        std::ofstream out(cache.file_for(m->q()), std::ios::trunc);
        out << R"({"q": [5, 4], "characters": [)";
        for (std::size_t k = 0; k < chars.size(); ++k) {
            out << (k ? "," : "") << R"({"exponents": [)";
            for (std::size_t j = 0; j < chars[k].exponents().size(); ++j)
                out << (j ? "," : "") << chars[k].exponents()[j];
            out << R"(], "gauss_sum": [1.0, 2.0]})";
        }
        out << "]}";
    }
    const auto repaired = lift_family(m, chars, &cache);
    for (std::size_t k = 0; k < cold.size(); ++k) CHECK(repaired[k].gauss_sum() == cold[k].gauss_sum());

    std::filesystem::remove_all(dir);
}
