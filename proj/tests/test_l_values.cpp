#include <cmath>
#include <map>
#include <numbers>

#include "doctest.h"
#include "hecke/analytic_kernels.hpp"
#include "hecke/l_values.hpp"

using namespace hecke;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCatalan = 0.91596559417721901505;

const std::vector<GaussInt> kSample{GaussInt{-1, 2}, GaussInt{-3, 0}, GaussInt{3, 2}, GaussInt{9, 0},
                                    GaussInt{-3, 0} * GaussInt{-1, 2}};

// Both AFE sums term by term over primary generators, no binning.
std::complex<double> naive_afe(const HeckeCharacter& chi, double x) {
    const double n = static_cast<double>(chi.modulus().norm());
    const double y = x / (32.0 * n);
    const auto bound = static_cast<std::int64_t>(std::max(x, 1.0 / y) * 45.0);
    std::complex<double> s1{0.0, 0.0}, s2{0.0, 0.0};
    for (const GaussInt& a : primary_up_to(bound)) {
        const auto v = chi(a);
        if (v == 0.0) continue;
        const double na = static_cast<double>(norm(a));
        s1 += v * eval_V(na / x) / std::sqrt(na);
        s2 += std::conj(v) * eval_V(na * y) / std::sqrt(na);
    }
    return s1 + chi.gauss_sum() / std::sqrt(8.0 * n) * s2;
}

// The pair sum term by term with the kernel from quadrature.
std::complex<double> naive_pairs(const HeckeCharacter& chi, std::int64_t limit) {
    const double n = static_cast<double>(chi.modulus().norm());
    const auto elems = primary_up_to(limit);
    std::map<std::int64_t, double> w;
    std::complex<double> acc{0.0, 0.0};
    for (const GaussInt& a : elems) {
        const auto va = chi(a);
        if (va == 0.0) continue;
        const std::int64_t na = norm(a);
        for (const GaussInt& b : elems) {
            const std::int64_t nb = norm(b);
            if (na * nb > limit) break;
            const auto vb = chi(b);
            if (vb == 0.0) continue;
            const double p = static_cast<double>(na * nb);
            auto it = w.find(na * nb);
            if (it == w.end()) it = w.emplace(na * nb, eval_W(p / n, 1e-13)).first;
            acc += va * std::conj(vb) * it->second / std::sqrt(p);
        }
    }
    return acc;
}

}  // namespace

TEST_CASE("binned AFE equals the term-by-term sum") {
    for (const GaussInt& q : kSample) {
        const auto m = Modulus::build(q);
        const AfeTables tables(m);
        for (const auto& chi : characters(m, {.odd_only = true, .primitive_only = true})) {
            const auto lift = HeckeCharacter::lift(chi);
            const auto binned = tables.evaluate(lift);
            CHECK(std::abs(binned - naive_afe(lift, static_cast<double>(m->norm()))) < 1e-10);
            CHECK(std::abs(l_half(lift).value - binned) < 1e-12);
        }
    }
}

TEST_CASE("AFE is independent of x and respects conjugation") {
    for (const GaussInt& q : kSample) {
        const auto m = Modulus::build(q);
        const double n = static_cast<double>(m->norm());
        for (const auto& chi : characters(m, {.odd_only = true, .primitive_only = true})) {
            const auto lift = HeckeCharacter::lift(chi);
            const auto l = l_half(lift).value;
            for (double f : {0.1, 0.5, 2.0, 10.0}) CHECK(std::abs(l_half(lift, f * n).value - l) < 1e-9);
            CHECK(std::abs(l_half(lift.conj()).value - std::conj(l)) < 1e-12);
        }
    }
    const auto m = Modulus::build(GaussInt{3, 2});
    const auto lift = HeckeCharacter::lift(characters(m, {.odd_only = true, .primitive_only = true}).front());
    CHECK_THROWS(l_half(lift, std::nan("")));
}

TEST_CASE("pair table against the direct pair sum") {
    for (const GaussInt& q : {GaussInt{-1, 2}, GaussInt{3, 2}}) {
        const auto m = Modulus::build(q);
        const PairTable pairs(m);
        CHECK(pairs.truncation() >= 50 * m->norm());
        CHECK(pairs.est_tail() <= 1e-8);
        for (const auto& chi : characters(m, {.odd_only = true, .primitive_only = true})) {
            const auto lift = HeckeCharacter::lift(chi);
            const auto a = pairs.a_chi_complex(chi);
            CHECK(std::abs(a - naive_pairs(lift, pairs.truncation())) < 1e-9);
            CHECK(std::abs(a.imag()) < 1e-12);
            CHECK(a.real() >= -1e-8);
            CHECK(std::abs(std::norm(l_half(lift).value) - 2.0 * a.real()) < 1e-6);
            CHECK(a_chi(lift) == doctest::Approx(a.real()).epsilon(1e-12));
        }
    }
}

TEST_CASE("pair tail estimate shrinks with kappa") {
    CHECK(pair_tail_estimate(50.0, 500) > pair_tail_estimate(100.0, 500));
    CHECK(pair_tail_estimate(100.0, 500) < 1e-8);
}

TEST_CASE("odd-ideal zeta partial sum") {
    // sum over odd ideals of N^-s = zeta(s) L(s, chi_-4) (1 - 2^-s)
    const double exact = kPi * kPi / 6.0 * kCatalan * 0.75;
    const auto p = odd_zeta_partial(2.0, 200000);
    CHECK(p.value.imag() == 0.0);
    CHECK(std::abs(p.value.real() - exact) <= p.tail_bound);
    CHECK(std::abs(p.value.real() - exact) > 0.0);
    CHECK(p.tail_bound < 1e-4);
    CHECK_THROWS(odd_zeta_partial(1.2, 1000));
}

TEST_CASE("partial sums do not depend on the summation order") {
    const auto m = Modulus::build(GaussInt{-3, 0});
    const auto lift = HeckeCharacter::lift(characters(m, {.odd_only = true, .primitive_only = true}).front());
    const auto a = dirichlet_tail_check(lift, 2.0, 50000, SumOrder::ByNorm);
    const auto b = dirichlet_tail_check(lift, 2.0, 50000, SumOrder::Lexicographic);
    CHECK(a.terms == b.terms);
    CHECK(std::abs(a.value - b.value) < 1e-12);
    const auto z = odd_zeta_partial(2.0, 50000);
    CHECK(std::abs(a.value) < z.value.real());
    // the tail bound covers the step from 5e4 to 2e5
    const auto c = dirichlet_tail_check(lift, 2.0, 200000);
    CHECK(std::abs(c.value - a.value) <= a.tail_bound);
}

TEST_CASE("family evaluation") {
    const auto m = Modulus::build(GaussInt{5, 4});
    const auto family = evaluate_family(m, nullptr, {.x = 0.0, .with_a_chi = true});
    const auto chars = characters(m, {.odd_only = true, .primitive_only = true});
    REQUIRE(family.size() == chars.size());
    for (std::size_t k = 0; k < chars.size(); ++k) {
        CHECK(family[k].index == chars[k].index());
        const auto lift = HeckeCharacter::lift(chars[k]);
        CHECK(std::abs(family[k].l_half - l_half(lift).value) < 1e-12);
        CHECK(std::abs(family[k].gauss_sum - lift.gauss_sum()) < 1e-9);
        CHECK(std::abs(2.0 * family[k].a_chi.real() - std::norm(family[k].l_half)) < 1e-6);
    }
    const auto bare = evaluate_family(m, nullptr);
    CHECK(bare.front().a_chi == std::complex<double>{0.0, 0.0});
}
