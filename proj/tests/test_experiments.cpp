#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "doctest.h"
#include "hecke/experiments.hpp"

using namespace hecke;

namespace {

constexpr double kPi = std::numbers::pi;

// phi(x) = int phi^(u) e(ux) du by Simpson on [-sigma, sigma].
double fourier_oracle(const AdmissibleTestFunction& f, double x) {
    const int n = 4000;
    const double a = -f.sigma(), h = 2.0 * f.sigma() / n;
    double acc = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double u = a + k * h;
        const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        acc += w * f.phi_hat(u) * std::cos(2.0 * kPi * u * x);
    }
    return acc * h / 3.0;
}

}  // namespace

TEST_CASE("test functions are Fourier pairs") {
    for (auto kind : {TestFunctionKind::Fejer, TestFunctionKind::Cosine})
        for (double sigma : {0.5, 1.0, 1.5, 1.9}) {
            const auto f = AdmissibleTestFunction::make(kind, sigma);
            CHECK(f.integral_phi() == doctest::Approx(1.0));
            CHECK(f.phi_hat(sigma * 1.01) == 0.0);
            CHECK(f.phi_hat(0.3) == f.phi_hat(-0.3));
            for (double x : {0.0, 0.13, 0.5, 1.7, 4.2}) CHECK(std::abs(f.phi(x) - fourier_oracle(f, x)) < 1e-8);
        }
    CHECK_THROWS(AdmissibleTestFunction::fejer(2.0));
    CHECK_THROWS(AdmissibleTestFunction::cosine(0.0));
    CHECK(parse_test_function("fejer") == TestFunctionKind::Fejer);
    CHECK(parse_test_function("cosine") == TestFunctionKind::Cosine);
    CHECK_FALSE(parse_test_function("gauss"));
    CHECK(AdmissibleTestFunction::cosine(1.0).name() == "cosine");
}

TEST_CASE("first moment: per-character sum vs orthogonality") {
    for (const GaussInt& q : enumerate_moduli(3, 120, false)) {
        if (psi_star(q) == 0) continue;
        const auto m = Modulus::build(q);
        const auto direct = family_statistics(m, nullptr, false).sum_l;
        const auto swapped = first_moment_orthogonality(m);
        CHECK(std::abs(direct - swapped) < 1e-9 * std::max(1.0, std::abs(direct)));
        CHECK(std::abs(direct.imag()) < 1e-9);
    }
}

TEST_CASE("moment rows") {
    const auto m = Modulus::build(GaussInt{-7, 0});
    const auto stats = family_statistics(m, nullptr, true);
    CHECK(stats.psi_star == psi_star(GaussInt{-7, 0}));
    CHECK(stats.prime);
    CHECK(stats.max_imag_a < 1e-10);
    CHECK(std::abs(stats.sum_two_a.real() - stats.sum_abs_l2) < 1e-6 * stats.sum_abs_l2);
    const auto r1 = first_moment_row(stats);
    CHECK(r1.main_term == doctest::Approx(0.5 * stats.psi_star));
    CHECK(r1.ratio == doctest::Approx(stats.sum_l.real() / r1.main_term));
    CHECK_FALSE(r1.composite);
    const auto r2 = second_moment_row(stats);
    const double n = 49.0;
    CHECK(r2.main_term == doctest::Approx(kPi / 16.0 * 48.0 / n * stats.psi_star * std::log(n)));
    const auto nv = nonvanishing_from(stats);
    CHECK(nv.count == stats.nonvanishing);
    CHECK(nv.normalized == doctest::Approx(nv.count * std::log(n) / stats.psi_star));
    CHECK(first_moment(m).statistic == r1.statistic);
}

TEST_CASE("one-level density: direct vs orthogonality") {
    const auto f = AdmissibleTestFunction::fejer(1.5);
    const PrimePowerTable table(static_cast<std::int64_t>(std::pow(150.0, 1.5)) + 1);
    for (const GaussInt& q : enumerate_moduli(3, 150, false)) {
        if (psi_star(q) == 0) continue;
        const auto m = Modulus::build(q);
        const auto a = one_level_density(m, f, DensityRoute::Direct, &table);
        const auto b = one_level_density(m, f, DensityRoute::Orthogonality, &table);
        CHECK(std::abs(a.s_tilde - b.s_tilde) < 1e-9 * std::max(1.0, std::abs(a.s_tilde)));
        CHECK(a.density == doctest::Approx(1.0 - a.s_tilde / (a.psi_star * std::log(static_cast<double>(a.qnorm)))));
    }
    // without a table one is built
    const auto m = Modulus::build(GaussInt{3, 2});
    CHECK(one_level_density(m, f).s_tilde == doctest::Approx(one_level_density(m, f, DensityRoute::Direct, &table).s_tilde));
}

TEST_CASE("norm inequality scan") {
    CHECK_FALSE(norm_inequality_scan(20));
    CHECK_THROWS(norm_inequality_scan(101));
}

TEST_CASE("lattice counts against brute force") {
    for (double x : {10.0, 100.0, 1000.0, 5000.0}) {
        std::int64_t brute = 0;
        for (std::int64_t a = -80; a <= 80; ++a)
            for (std::int64_t b = -80; b <= 80; ++b)
                if (a * a + b * b <= x && is_odd({a, b}) && is_primary({a, b})) ++brute;
        CHECK(gauss_circle_primary(x) == brute);
    }
    const GaussInt q{-1, 2};
    double brute = 0.0;
    for (const GaussInt& a : primary_up_to(20000))
        if (!divides(q, a)) brute += 1.0 / static_cast<double>(norm(a));
    CHECK(harmonic_sum(20000, q).value == doctest::Approx(brute).epsilon(1e-12));
}

TEST_CASE("C0 estimate") {
    const auto est = estimate_c0();
    CHECK(est.spread <= 1e-3);
    CHECK(est.grid.size() == 4);
    CHECK(c0() == est.value);
    CHECK_THROWS(estimate_c0({1e3, 1e6}, 1e-9));
    const auto h = harmonic_sum(1e6, GaussInt{1, 0});
    CHECK(std::abs(h.value - h.main) < 1e-2);
}

TEST_CASE("moduli enumeration") {
    const auto all = enumerate_moduli(1, 400, false);
    std::set<std::pair<std::int64_t, std::int64_t>> seen;
    for (const auto& q : all) {
        CHECK(is_primary(q));
        CHECK(seen.insert({q.re, q.im}).second);
    }
    CHECK(all.size() == primary_up_to(400).size());
    for (std::size_t k = 1; k < all.size(); ++k) CHECK(norm_order_less(all[k - 1], all[k]));
    const auto primes = enumerate_moduli(1, 400, true);
    std::size_t expected = 0;
    for (const auto& q : all) expected += is_gaussian_prime(q);
    CHECK(primes.size() == expected);
    for (const auto& q : primes) CHECK(is_gaussian_prime(q));
    CHECK(std::find(primes.begin(), primes.end(), GaussInt{-3, 0}) != primes.end());
    CHECK_THROWS(enumerate_moduli(1, 200000, false));
}

TEST_CASE("dyadic medians") {
    const std::vector<std::pair<double, double>> keyed{{10, 5}, {12, 1}, {15, 3}, {25, 2}, {30, 4}, {45, 0.5}, {5, 99}};
    const auto bins = dyadic_medians(keyed, 10.0);
    REQUIRE(bins.size() == 3);
    CHECK(bins[0].median == 3);
    CHECK(bins[1].median == 3);
    CHECK(bins[2].median == 0.5);
    CHECK(bins[1].lo == 20);
    CHECK_FALSE(strictly_decreasing(bins));
    CHECK(strictly_decreasing({bins[0], bins[2]}));
    CHECK_FALSE(strictly_decreasing({bins[0]}));
}

TEST_CASE("output schemas") {
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333333");

    ExperimentRow r;
    r.q = {-1, 2};
    r.n_q = 5;
    r.psi_star = 1;
    r.statistic = {1.5, 0.0};
    r.main_term = 0.5;
    r.ratio = 3.0;
    CHECK(moments_csv({r}) == "qnorm,q_re,q_im,psi_star,stat_re,stat_im,main_term,ratio,wall_s\n5,-1,2,1,1.5,0,0.5,3,0\n");
    CHECK(moments_json({r}).find("\"stat_re\": 1.5") != std::string::npos);

    DensityResult d;
    d.q = {-1, 2};
    d.qnorm = 5;
    d.psi_star = 1;
    d.sigma = 1.5;
    d.testfn = "fejer";
    d.s_tilde = -0.25;
    d.density = 1.1;
    CHECK(density_csv({d}) == "qnorm,q_re,q_im,sigma,testfn,psi_star,s_tilde,density,wall_s\n5,-1,2,1.5,fejer,1,-0.25,1.1,0\n");

    const LemmaRow l{"check", "a,b", 0.5, 1.0, true};
    CHECK(lemmas_csv({l}) == "check_name,param,observed,bound,pass\ncheck,\"a,b\",0.5,1,true\n");
    CHECK(lemmas_json({l}).find("\"pass\": true") != std::string::npos);
}
