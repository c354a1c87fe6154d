#include "hecke/l_values.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "hecke/analytic_kernels.hpp"

namespace hecke {

namespace {

constexpr double kPi = std::numbers::pi;

// sum_{n > c X} n^-1/2 exp(-n/X), counting at most one primary generator per unit of norm.
double afe_tail(double scale, double cutoff) {
    return std::sqrt(scale / cutoff) * std::exp(-cutoff);
}

}  // namespace

AfeTables::AfeTables(ModulusPtr modulus, double x, double v_cutoff) : modulus_(std::move(modulus)) {
    const Modulus& m = *modulus_;
    const double qn = static_cast<double>(m.norm());
    if (!std::isfinite(x)) throw std::invalid_argument("AfeTables: x must be finite");
    x_ = x > 0.0 ? x : qn;
    if (!(v_cutoff >= 2.0)) throw std::invalid_argument("AfeTables: V cutoff must be at least 2");
    const double scale1 = x_;
    const double scale2 = 32.0 * qn / x_;
    const auto bound1 = static_cast<std::int64_t>(std::floor(v_cutoff * scale1));
    const auto bound2 = static_cast<std::int64_t>(std::floor(v_cutoff * scale2));
    truncation_norm_ = std::max(bound1, bound2);
    est_tail_ = afe_tail(scale1, v_cutoff) + afe_tail(scale2, v_cutoff);

    first_.assign(m.units().size(), 0.0);
    second_.assign(m.units().size(), 0.0);
    for_each_primary(truncation_norm_, [&](const GaussInt& a) {
        const std::int32_t pos = m.unit_position(m.index(a));
        if (pos < 0) return;
        const auto n = static_cast<double>(a.re * a.re + a.im * a.im);
        const double w = 1.0 / std::sqrt(n);
        if (n <= static_cast<double>(bound1)) first_[static_cast<std::size_t>(pos)] += w * eval_V(n / scale1);
        if (n <= static_cast<double>(bound2)) second_[static_cast<std::size_t>(pos)] += w * eval_V(n / scale2);
    });
}

std::complex<double> AfeTables::evaluate(const HeckeCharacter& chi) const {
    if (chi.modulus().q() != modulus_->q()) throw std::invalid_argument("AfeTables: character belongs to another modulus");
    std::vector<std::int64_t> phases;
    chi.base().unit_phases(phases);
    return evaluate(phases, chi.gauss_sum());
}

std::complex<double> AfeTables::evaluate(const std::vector<std::int64_t>& phases, std::complex<double> gauss_sum) const {
    const Modulus& m = *modulus_;
    std::complex<double> s1{0.0, 0.0};
    std::complex<double> s2{0.0, 0.0};
    for (std::size_t p = 0; p < phases.size(); ++p) {
        const std::complex<double>& r = m.root(phases[p]);
        s1 += r * first_[p];
        s2 += std::conj(r) * second_[p];
    }
    return s1 + gauss_sum / std::sqrt(8.0 * static_cast<double>(m.norm())) * s2;
}

CentralValue l_half(const HeckeCharacter& chi, double x) {
    const AfeTables tables(chi.base().modulus_ptr(), x);
    return {chi.modulus().q(), chi.base().exponents(), tables.evaluate(chi), tables.x(), tables.truncation_norm(),
            tables.est_tail()};
}

// ---------------------------------------------------------------------------

double pair_tail_estimate(double kappa, std::int64_t qnorm) {
    if (!(kappa > 0.0) || qnorm < 1) throw std::invalid_argument("pair_tail_estimate: bad arguments");
    const WTable& w = WTable::instance();
    const double log_n = std::log(static_cast<double>(qnorm));
    // Simpson in t = log(u / kappa) up to u = 2000 kappa; W is below 1e-40 long before that.
    const double t_max = std::log(2000.0);
    constexpr int kIntervals = 800;
    const double h = t_max / kIntervals;
    double acc = 0.0;
    for (int k = 0; k <= kIntervals; ++k) {
        const double u = kappa * std::exp(k * h);
        const double f = (std::log(u) + log_n + 3.0) * std::sqrt(u) * w(u);
        const double c = (k == 0 || k == kIntervals) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        acc += c * f;
    }
    acc *= h / 3.0;
    return (kPi / 8.0) * (kPi / 8.0) * std::sqrt(static_cast<double>(qnorm)) * acc;
}

PairTable::PairTable(ModulusPtr modulus, double tail_target) : modulus_(std::move(modulus)) {
    const Modulus& m = *modulus_;
    const std::int64_t qn = m.norm();
    double kappa = 50.0;
    while (pair_tail_estimate(kappa, qn) > tail_target) {
        kappa *= 1.05;
        if (kappa > 2000.0) throw std::runtime_error("PairTable: tail target unreachable");
    }
    truncation_ = static_cast<std::int64_t>(std::floor(kappa * static_cast<double>(qn)));
    est_tail_ = pair_tail_estimate(static_cast<double>(truncation_) / static_cast<double>(qn), qn);

    struct Elem {
        std::int64_t norm;
        double inv_sqrt;
        std::int32_t pos;
    };
    std::vector<Elem> elems;
    for (const GaussInt& a : primary_up_to(truncation_)) {
        const std::int32_t pos = m.unit_position(m.index(a));
        if (pos < 0) continue;
        const std::int64_t n = a.re * a.re + a.im * a.im;
        elems.push_back({n, 1.0 / std::sqrt(static_cast<double>(n)), pos});
    }

    // Unit position of a * b^-1 from the exponent vectors: positions are mixed-radix numbers.
    const auto& orders = m.basis().orders;
    const std::size_t rank = orders.size();
    const auto phi = static_cast<std::int32_t>(m.phi());
    auto quotient = [&](std::int32_t pa, std::int32_t pb) -> std::int32_t {
        if (rank == 1) {
            const std::int32_t d = pa - pb;
            return d < 0 ? d + phi : d;
        }
        const auto da = m.dlog(m.units()[static_cast<std::size_t>(pa)]);
        const auto db = m.dlog(m.units()[static_cast<std::size_t>(pb)]);
        std::int64_t p = 0;
        for (std::size_t j = 0; j < rank; ++j) {
            std::int64_t d = da[j] - db[j];
            if (d < 0) d += orders[j];
            p = p * orders[j] + d;
        }
        return static_cast<std::int32_t>(p);
    };

    const WTable& wt = WTable::instance();
    std::vector<double> w_of(static_cast<std::size_t>(truncation_) + 1, std::numeric_limits<double>::quiet_NaN());
    weights_.assign(m.units().size(), 0.0);
    const double qd = static_cast<double>(qn);
    for (const Elem& a : elems) {
        if (a.norm > truncation_) break;
        const std::int64_t limit = truncation_ / a.norm;
        for (const Elem& b : elems) {
            if (b.norm > limit) break;
            const std::int64_t prod = a.norm * b.norm;
            double& w = w_of[static_cast<std::size_t>(prod)];
            if (std::isnan(w)) w = wt(static_cast<double>(prod) / qd);
            weights_[static_cast<std::size_t>(quotient(a.pos, b.pos))] += a.inv_sqrt * b.inv_sqrt * w;
            ++pairs_;
        }
    }
}

std::complex<double> PairTable::a_chi_complex(const Character& chi) const {
    if (chi.modulus().q() != modulus_->q()) throw std::invalid_argument("PairTable: character belongs to another modulus");
    std::vector<std::int64_t> phases;
    chi.unit_phases(phases);
    return a_chi_complex(phases);
}

std::complex<double> PairTable::a_chi_complex(const std::vector<std::int64_t>& phases) const {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t p = 0; p < phases.size(); ++p) acc += modulus_->root(phases[p]) * weights_[p];
    return acc;
}

double a_chi(const HeckeCharacter& chi) {
    const PairTable table(chi.base().modulus_ptr());
    return table.a_chi(chi.base());
}

// ---------------------------------------------------------------------------

namespace {

template <class Coeff>
DirichletPartialSum partial_sum(Coeff&& coeff, double s, std::int64_t norm_bound, SumOrder order) {
    if (!(s >= 1.5)) throw std::invalid_argument("dirichlet partial sum: s must be >= 1.5");
    if (norm_bound < 1) throw std::invalid_argument("dirichlet partial sum: bound must be positive");
    std::vector<GaussInt> gens = primary_up_to(norm_bound);
    if (order == SumOrder::Lexicographic)
        std::sort(gens.begin(), gens.end(),
                  [](const GaussInt& a, const GaussInt& b) { return a.re != b.re ? a.re < b.re : a.im < b.im; });
    DirichletPartialSum out;
    out.norm_bound = norm_bound;
    for (const GaussInt& a : gens) {
        const std::complex<double> c = coeff(a);
        if (c == std::complex<double>{0.0, 0.0}) continue;
        out.value += c * std::pow(static_cast<double>(norm(a)), -s);
        ++out.terms;
    }
    // Partial summation against #{a primary : N(a) <= u} <= (pi/8) u + 4 sqrt(u).
    const double x = static_cast<double>(norm_bound);
    out.tail_bound = s * ((kPi / 8.0) * std::pow(x, 1.0 - s) / (s - 1.0) + 4.0 * std::pow(x, 0.5 - s) / (s - 0.5));
    return out;
}

}  // namespace

DirichletPartialSum dirichlet_tail_check(const HeckeCharacter& chi, double s, std::int64_t norm_bound,
                                         SumOrder order) {
    return partial_sum([&](const GaussInt& a) { return chi(a); }, s, norm_bound, order);
}

DirichletPartialSum odd_zeta_partial(double s, std::int64_t norm_bound, SumOrder order) {
    return partial_sum([](const GaussInt&) { return std::complex<double>{1.0, 0.0}; }, s, norm_bound, order);
}

// ---------------------------------------------------------------------------

std::vector<FamilyValue> evaluate_family(const ModulusPtr& modulus, const GaussSumCache* cache,
                                         const FamilyOptions& options) {
    const auto chars = characters(modulus, {.odd_only = true, .primitive_only = true});
    const auto lifts = lift_family(modulus, chars, cache);
    const AfeTables afe(modulus, options.x);
    std::optional<PairTable> pairs;
    if (options.with_a_chi) pairs.emplace(modulus);

    std::vector<FamilyValue> out;
    out.reserve(chars.size());
    std::vector<std::int64_t> phases;
    for (std::size_t k = 0; k < chars.size(); ++k) {
        chars[k].unit_phases(phases);
        FamilyValue v;
        v.index = chars[k].index();
        v.exponents = chars[k].exponents();
        v.gauss_sum = lifts[k].gauss_sum();
        v.l_half = afe.evaluate(phases, v.gauss_sum);
        if (pairs) v.a_chi = pairs->a_chi_complex(phases);
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace hecke
