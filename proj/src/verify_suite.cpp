#include "hecke/verify_suite.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "hecke/analytic_kernels.hpp"
#include "hecke/runner.hpp"

namespace hecke {

namespace {

constexpr double kPi = std::numbers::pi;

LemmaRow at_most(std::string name, std::string param, double observed, double bound) {
    return {std::move(name), std::move(param), observed, bound, observed <= bound};
}

LemmaRow at_least(std::string name, std::string param, double observed, double bound) {
    return {std::move(name), std::move(param), observed, bound, observed >= bound};
}

template <class T, class Fn>
std::vector<T> map_moduli(const std::vector<GaussInt>& qs, int workers, Fn&& fn) {
    std::vector<T> out(qs.size());
    parallel_for(qs.size(), workers, [&](std::size_t k) { out[k] = fn(qs[k]); });
    return out;
}

double max_of(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
}

double sum_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

GaussInt random_coprime(std::mt19937_64& rng, const Factorization& f, std::int64_t box) {
    std::uniform_int_distribution<std::int64_t> coord(-box, box);
    for (;;) {
        const GaussInt z{coord(rng), coord(rng)};
        if (z.is_zero()) continue;
        bool ok = true;
        for (const auto& pp : f.factors)
            if (divides(pp.prime, z)) ok = false;
        if (ok) return z;
    }
}

// ---------------------------------------------------------------------------

void arithmetic_checks(const VerifyOptions& opt, std::vector<LemmaRow>& rows) {
    {
        double failures = 0;
        for (std::int64_t a = -100; a <= 100; ++a)
            for (std::int64_t b = -100; b <= 100; ++b) {
                const GaussInt z{a, b};
                if (z.is_zero() || !is_odd(z) || norm(z) > 10000) continue;
                const Factorization f = factor(z);
                if (f.product() != z) ++failures;
            }
        rows.push_back(at_most("factor_reconstructs", "N(z)<=10000", failures, 0));
    }
    const auto moduli = enumerate_moduli(1, 10000, false);
    {
        const auto bad = map_moduli<double>(moduli, opt.workers, [](const GaussInt& q) {
            std::int64_t s = 0;
            for (const GaussInt& d : primary_divisors(q)) s += euler_phi(d);
            return s == norm(q) ? 0.0 : 1.0;
        });
        rows.push_back(at_most("phi_divisor_sum", "N(q)<=10000", sum_of(bad), 0));
    }
    {
        const auto small = enumerate_moduli(1, 2000, false);
        const auto bad = map_moduli<double>(small, opt.workers, [](const GaussInt& q) {
            const ResidueRing ring(q);
            std::int64_t count = 0;
            for (std::int64_t idx = 0; idx < ring.size(); ++idx)
                if (is_unit(gcd(ring.element(idx), q))) ++count;
            return count == euler_phi(q) ? 0.0 : 1.0;
        });
        rows.push_back(at_most("phi_brute_count", "N(q)<=2000", sum_of(bad), 0));
    }
    {
        std::vector<GaussInt> wide;
        for_each_primary(1000000, [&](const GaussInt& q) {
            if (norm(q) >= 10) wide.push_back(q);
        });
        const auto ratios = map_moduli<double>(wide, opt.workers, [](const GaussInt& q) {
            const double ln = std::log(static_cast<double>(norm(q)));
            return omega(q) * std::log(ln) / ln;
        });
        rows.push_back(at_most("omega_ratio_max", "10<=N(q)<=1e6", max_of(ratios), 3.0));
    }
    {
        std::mt19937_64 rng(opt.seed);
        std::uniform_int_distribution<std::int64_t> coord(-1000, 1000);
        double failures = 0;
        for (int k = 0; k < 1000; ++k) {
            GaussInt z{coord(rng), coord(rng)};
            if (!is_odd(z)) z = z + GaussInt{1, 0};
            if (z.is_zero() || !is_odd(z)) continue;
            const GaussInt p = primary_part(z);
            for (const GaussInt& u : kUnits)
                if (primary_part(u * z) != p) ++failures;
        }
        rows.push_back(at_most("primary_unit_invariance", "1000 random z", failures, 0));
    }
}

void character_checks(const VerifyOptions& opt, std::vector<LemmaRow>& rows) {
    {
        const auto qs = enumerate_moduli(3, 2000, false);
        const auto bad = map_moduli<double>(qs, opt.workers, [](const GaussInt& q) {
            const auto m = Modulus::build(q);
            std::int64_t count = 0;
            for_each_character(m, {.odd_only = true, .primitive_only = true}, [&](const Character&) { ++count; });
            return count == psi_star(q) ? 0.0 : 1.0;
        });
        rows.push_back(at_most("psi_star_count", "3<=N(q)<=2000", sum_of(bad), 0));
    }
    {
        const auto qs = enumerate_moduli(3, 1500, false);
        std::mt19937_64 rng(opt.seed + 1);
        std::uniform_int_distribution<std::size_t> pick(0, qs.size() - 1);
        double worst = 0.0;
        for (int k = 0; k < 100; ++k) {
            const auto m = Modulus::build(qs[pick(rng)]);
            const GaussInt n = random_coprime(rng, m->factorization(), 200);
            const GaussInt mm = random_coprime(rng, m->factorization(), 200);
            const int sign = (rng() & 1) != 0 ? -1 : 1;
            const double rhs = orthogonality_rhs(*m, n, mm, sign);
            worst = std::max(worst, std::abs(orthogonality_direct(m, n, mm, sign) - rhs));
        }
        rows.push_back(at_most("orthogonality", "100 random (q,n,m,a), N(q)<=1500", worst, 1e-9));
    }
    {
        double worst = 0.0;
        for (const GaussInt& q : {GaussInt{9, 0}, GaussInt{-3, 0} * GaussInt{-1, 2}, GaussInt{3, 2}, GaussInt{-7, 0}}) {
            const auto m = Modulus::build(q);
            const auto all = characters(m);
            const auto& units = m->units();
            for (std::size_t a = 0; a < units.size(); a += 3)
                for (std::size_t b = 0; b < units.size(); b += 5) {
                    std::complex<double> s{0.0, 0.0};
                    for (const auto& chi : all) s += chi.at_index(units[a]) * std::conj(chi.at_index(units[b]));
                    const double expect = a == b ? static_cast<double>(m->phi()) : 0.0;
                    worst = std::max(worst, std::abs(s - expect));
                }
        }
        rows.push_back(at_most("character_unitarity", "q in {9,-3(-1+2i),3+2i,-7}", worst, 1e-9));
    }
    {
        const auto qs = enumerate_moduli(3, 200, false);
        const auto bad = map_moduli<double>(qs, opt.workers, [](const GaussInt& q) {
            const auto m = Modulus::build(q);
            double b = 0;
            for_each_character(m, {.odd_only = true, .primitive_only = true}, [&](const Character& chi) {
                const Character c = chi.conj();
                if (!c.is_odd() || !c.is_primitive()) ++b;
            });
            return b;
        });
        rows.push_back(at_most("conjugation_closure", "N(q)<=200", sum_of(bad), 0));
    }
}

void lift_checks(const VerifyOptions& opt, std::vector<LemmaRow>& rows) {
    {
        const auto qs = enumerate_moduli(3, 1000, false);
        const auto dev = map_moduli<double>(qs, opt.workers, [](const GaussInt& q) {
            const auto m = Modulus::build(q);
            const GaussSumTable table(m);
            const double target = 8.0 * static_cast<double>(m->norm());
            double w = 0.0;
            for_each_character(m, {.odd_only = true, .primitive_only = true}, [&](const Character& chi) {
                w = std::max(w, std::abs(std::norm(table.gauss_sum(chi)) - target) / target);
            });
            return w;
        });
        rows.push_back(at_most("gauss_sum_magnitude", "N(q)<=1000", max_of(dev), 1e-9));
    }
    {
        const auto qs = enumerate_moduli(3, 50, false);
        const auto dev = map_moduli<double>(qs, opt.workers, [](const GaussInt& q) {
            const auto m = Modulus::build(q);
            const GaussSumTable table(m);
            double w = 0.0;
            for_each_character(m, {.odd_only = true, .primitive_only = true}, [&](const Character& chi) {
                w = std::max(w, std::abs(table.gauss_sum(chi) - gauss_sum_direct(chi)));
            });
            return w;
        });
        rows.push_back(at_most("gauss_sum_direct", "N(q)<=50", max_of(dev), 1e-9));
    }
    rows.push_back(at_most("trace_identity", "10000 samples", trace_identity_deviation(opt.seed, 10000), 1e-9));
    {
        std::mt19937_64 rng(opt.seed + 2);
        std::uniform_int_distribution<std::int64_t> coord(-500, 500);
        double failures = 0;
        double worst_mult = 0.0;
        for (const GaussInt& q : {GaussInt{-3, 0}, GaussInt{-1, 2}, GaussInt{9, 0}, GaussInt{5, 4} * GaussInt{-1, 2}}) {
            const GaussInt qq = primary_part(q);
            const auto m = Modulus::build(qq);
            for (const auto& chi : characters(m, {.odd_only = true, .primitive_only = true})) {
                const HeckeCharacter lift = HeckeCharacter::lift(chi);
                for (int k = 0; k < 200; ++k) {
                    GaussInt n{coord(rng), coord(rng)};
                    if (!is_odd(n)) n = n + GaussInt{1, 0};
                    if (n.is_zero()) continue;
                    const auto v = lift(n);
                    for (const GaussInt& u : kUnits)
                        if (lift(u * n) != v) ++failures;
                    GaussInt n2{coord(rng), coord(rng)};
                    if (!is_odd(n2)) n2 = n2 + GaussInt{0, 1};
                    worst_mult = std::max(worst_mult, std::abs(lift(n * n2) - v * lift(n2)));
                }
            }
        }
        rows.push_back(at_most("lift_associate_invariance", "200 random n per character", failures, 0));
        rows.push_back(at_most("lift_multiplicativity", "200 random pairs per character", worst_mult, 1e-12));
    }
    {
        double failures = 0;
        int primes = 0;
        for (std::int64_t p = 3; primes < 100; ++p) {
            if (!is_prime_u64(static_cast<std::uint64_t>(p))) continue;
            for (const GaussInt& pi : primary_primes_over(p)) {
                if (primes >= 100) break;
                ++primes;
                const double base = lambda_K(pi);
                GaussInt power = pi;
                const double np = static_cast<double>(norm(pi));
                for (int k = 2; k <= 5 && std::pow(np, k) < 1e18; ++k) {
                    power = power * pi;
                    if (lambda_K(power) != base) ++failures;
                }
            }
        }
        rows.push_back(at_most("lambda_prime_powers", "100 primes, k<=5 while N(p^k)<1e18", failures, 0));
    }
    {
        const auto qs = enumerate_moduli(3, 200, false);
        const auto bad = map_moduli<double>(qs, opt.workers, [](const GaussInt& q) {
            const auto m = Modulus::build(q);
            double b = 0;
            for_each_character(m, {.odd_only = true, .primitive_only = true}, [&](const Character& chi) {
                if (!verify_lift_primitive(chi, 200)) ++b;
            });
            return b;
        });
        rows.push_back(at_most("lift_primitive", "N(q)<=200", sum_of(bad), 0));
    }
}

void kernel_checks(std::vector<LemmaRow>& rows) {
    {
        double worst = 0.0;
        ContourQuadrature quad{.c = 2.0, .T = 60.0, .h = 0.02};
        for (int k = 0; k < 50; ++k) {
            const double xi = 1e-4 * std::pow(30.0 / 1e-4, k / 49.0);
            worst = std::max(worst, std::abs(eval_V(xi) - V_contour(xi, quad)));
        }
        rows.push_back(at_most("V_closed_vs_contour", "50 points in [1e-4,30], c=2", worst, 1e-9));
    }
    {
        double worst = 0.0;
        for (int k = 0; k < 30; ++k) {
            const double x = 1e-2 * std::pow(1e4, k / 29.0);
            const double a = W_contour(x, {.c = 0.8, .T = 0.0, .h = 0.05});
            const double b = W_contour(x, {.c = 1.0, .T = 0.0, .h = 0.05});
            const double c = W_contour(x, {.c = 2.0, .T = 0.0, .h = 0.05});
            worst = std::max({worst, std::abs(a - b), std::abs(a - c), std::abs(b - c)});
        }
        rows.push_back(at_most("W_contour_shift", "30 points in [1e-2,1e2], c in {0.8,1,2}", worst, 1e-9));
    }
    {
        double violations = 0;
        double prev = eval_V(0.0);
        for (int k = 1; k <= 5000; ++k) {
            const double xi = 0.01 * k;
            const double v = eval_V(xi);
            if (!(v <= prev) || !(v > 0.0 || xi > 20.0) || v > 1.0) ++violations;
            prev = v;
        }
        rows.push_back(at_most("V_monotone", "[0,50] step 0.01", violations, 0));
        double tail = 0;
        for (int k = 0; k <= 4800; ++k) {
            const double xi = 2.0 + 0.01 * k;
            if (eval_V(xi) > std::exp(-xi)) ++tail;
        }
        rows.push_back(at_most("V_tail_bound", "V(xi)<=exp(-xi), xi in [2,50]", tail, 0));
    }
    rows.push_back(at_most("V_small_limit", "|V(1e-12)-1|", std::abs(eval_V(1e-12) - 1.0), 1e-2));
    rows.push_back(at_most("W_small_limit", "|W(1e-6)-1|", std::abs(eval_W(1e-6) - 1.0), 1e-2));
    rows.push_back(at_most("W_decay", "W(100)", std::abs(W_contour(100.0, {.c = 2.0, .T = 0.0, .h = 0.05})), 1e-3));
    {
        // |Gamma(1/2 + it)|^2 = pi / cosh(pi t)
        const double t = 30.0;
        const double lhs = 2.0 * log_gamma({0.5, t}).real();
        const double rhs = std::log(kPi) - (kPi * t + std::log1p(std::exp(-2.0 * kPi * t)) - std::log(2.0));
        rows.push_back(at_most("log_gamma_reflection", "t=30", std::abs(lhs - rhs) / std::abs(rhs), 1e-12));
    }
}

struct AfeCheck {
    double x_dev = 0.0;
    double conj_dev = 0.0;
    double cross_dev = 0.0;
    double imag_a = 0.0;
    double min_a = 0.0;
};

void l_value_checks(const VerifyOptions& opt, std::vector<LemmaRow>& rows) {
    const auto qs = enumerate_moduli(3, 500, false);
    const auto checks = map_moduli<AfeCheck>(qs, opt.workers, [](const GaussInt& q) {
        AfeCheck c;
        const auto m = Modulus::build(q);
        const auto chars = characters(m, {.odd_only = true, .primitive_only = true});
        if (chars.empty()) return c;
        const double n = static_cast<double>(m->norm());
        const AfeTables half(m, n / 2), one(m, n), two(m, 2 * n);
        const PairTable pairs(m);
        const GaussSumTable gauss(m);
        for (const auto& chi : chars) {
            const HeckeCharacter lift = HeckeCharacter::lift(chi, gauss.gauss_sum(chi));
            const auto l1 = one.evaluate(lift);
            const auto l2 = two.evaluate(lift);
            const auto l0 = half.evaluate(lift);
            c.x_dev = std::max({c.x_dev, std::abs(l1 - l2), std::abs(l1 - l0), std::abs(l0 - l2)});
            const HeckeCharacter bar = HeckeCharacter::lift(chi.conj(), gauss.gauss_sum(chi.conj()));
            c.conj_dev = std::max(c.conj_dev, std::abs(one.evaluate(bar) - std::conj(l1)));
            const auto a = pairs.a_chi_complex(chi);
            c.cross_dev = std::max(c.cross_dev, std::abs(std::norm(l1) - 2.0 * a.real()) / (1.0 + std::norm(l1)));
            c.imag_a = std::max(c.imag_a, std::abs(a.imag()));
            c.min_a = std::min(c.min_a, a.real());
        }
        return c;
    });
    AfeCheck w;
    for (const auto& c : checks) {
        w.x_dev = std::max(w.x_dev, c.x_dev);
        w.conj_dev = std::max(w.conj_dev, c.conj_dev);
        w.cross_dev = std::max(w.cross_dev, c.cross_dev);
        w.imag_a = std::max(w.imag_a, c.imag_a);
        w.min_a = std::min(w.min_a, c.min_a);
    }
    rows.push_back(at_most("afe_x_independence", "N(q)<=500, x in {N/2,N,2N}", w.x_dev, 1e-6));
    rows.push_back(at_most("afe_conjugation", "N(q)<=500", w.conj_dev, 1e-10));
    rows.push_back(at_most("afe_cross_route", "N(q)<=500, ||L|^2-2A|/(1+|L|^2)", w.cross_dev, 1e-5));
    rows.push_back(at_most("a_chi_imaginary", "N(q)<=500", w.imag_a, 1e-10));
    rows.push_back(at_least("a_chi_nonnegative", "N(q)<=500", w.min_a, -1e-8));
    {
        const auto m = Modulus::build({3, 2});
        const auto chi = characters(m, {.odd_only = true, .primitive_only = true}).front();
        const HeckeCharacter lift = HeckeCharacter::lift(chi);
        const auto by_norm = dirichlet_tail_check(lift, 2.0, 200000, SumOrder::ByNorm);
        const auto lex = dirichlet_tail_check(lift, 2.0, 200000, SumOrder::Lexicographic);
        rows.push_back(at_most("dirichlet_reorder", "q=3+2i, s=2, N<=2e5", std::abs(by_norm.value - lex.value), 1e-12));
        const auto zeta = odd_zeta_partial(1.5, 200000);
        rows.push_back(at_most("dirichlet_triangle", "q=3+2i, s=1.5",
                               std::abs(dirichlet_tail_check(lift, 1.5, 200000).value) - zeta.value.real(), 0.0));
    }
}

void experiment_checks(const VerifyOptions& opt, std::vector<LemmaRow>& rows) {
    const auto qs = enumerate_moduli(3, 300, false);
    {
        const auto dev = map_moduli<double>(qs, opt.workers, [](const GaussInt& q) {
            const auto m = Modulus::build(q);
            if (psi_star(q) == 0) return 0.0;
            const auto direct = family_statistics(m, nullptr, false).sum_l;
            const auto swapped = first_moment_orthogonality(m);
            return std::abs(direct - swapped) / std::max(1.0, std::abs(direct));
        });
        rows.push_back(at_most("first_moment_two_route", "N(q)<=300", max_of(dev), 1e-6));
    }
    {
        const auto f = AdmissibleTestFunction::fejer(1.5);
        const PrimePowerTable table(static_cast<std::int64_t>(std::pow(300.0, 1.5)) + 1);
        const auto dev = map_moduli<double>(qs, opt.workers, [&](const GaussInt& q) {
            const auto m = Modulus::build(q);
            if (psi_star(q) == 0) return 0.0;
            const auto a = one_level_density(m, f, DensityRoute::Direct, &table);
            const auto b = one_level_density(m, f, DensityRoute::Orthogonality, &table);
            return std::abs(a.s_tilde - b.s_tilde) / std::max(1.0, std::abs(a.s_tilde));
        });
        rows.push_back(at_most("density_two_route", "N(q)<=300, fejer sigma=1.5", max_of(dev), 1e-6));
    }
    {
        const auto f = AdmissibleTestFunction::fejer(1.0);
        // Simpson on [-200, 200]
        constexpr int kN = 400000;
        const double h = 400.0 / kN;
        double acc = 0.0;
        for (int k = 0; k <= kN; ++k) {
            const double c = (k == 0 || k == kN) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
            acc += c * f.phi(-200.0 + k * h);
        }
        rows.push_back(at_most("fejer_integral", "sigma=1, [-200,200]", std::abs(acc * h / 3.0 - 1.0), 1e-3));
    }
    {
        const auto hit = norm_inequality_scan(40);
        rows.push_back(at_most("norm_inequality", "B=40", hit ? 1.0 : 0.0, 0));
    }
    for (double x : {1e3, 1e4, 1e5, 1e6}) {
        const double err = std::abs(static_cast<double>(gauss_circle_primary(x)) - kPi * x / 8.0);
        rows.push_back(at_most("gauss_circle", "x=" + format_number(x), err, 4.0 * std::sqrt(x)));
    }
    {
        const auto est = estimate_c0();
        rows.push_back(at_most("c0_spread", "x in {1e6,2e6,4e6,1e7}", est.spread, 1e-3));
        const auto shifted = estimate_c0({1.5e6, 3e6, 6e6, 1.5e7});
        rows.push_back(at_most("c0_shift_stability", "grid x1.5", std::abs(shifted.value - est.value), 1e-3));
    }
    for (const GaussInt& q : {GaussInt{1, 0}, GaussInt{-3, 0}, GaussInt{-1, 2}}) {
        const auto h = harmonic_sum(1e6, q);
        rows.push_back(at_most("harmonic_sum", "q=" + q.str() + ",x=1e6", std::abs(h.value - h.main), 1e-2));
    }
}

}  // namespace

std::vector<LemmaRow> run_verify_suite(const VerifyOptions& options) {
    std::vector<LemmaRow> rows;
    arithmetic_checks(options, rows);
    character_checks(options, rows);
    lift_checks(options, rows);
    kernel_checks(rows);
    l_value_checks(options, rows);
    experiment_checks(options, rows);
    return rows;
}

}  // namespace hecke
