#include "hecke/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "hecke/analytic_kernels.hpp"

namespace hecke {

namespace {

constexpr double kPi = std::numbers::pi;

double sinc(double t) { return std::abs(t) < 1e-8 ? 1.0 - t * t / 6.0 : std::sin(t) / t; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool coprime(const Factorization& f, const GaussInt& n) {
    for (const auto& pp : f.factors)
        if (divides(pp.prime, n)) return false;
    return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Test functions

AdmissibleTestFunction::AdmissibleTestFunction(TestFunctionKind kind, double sigma) : kind_(kind), sigma_(sigma) {
    if (!(sigma > 0.0 && sigma < 2.0)) throw std::invalid_argument("test function: sigma must lie in (0, 2)");
}

AdmissibleTestFunction AdmissibleTestFunction::fejer(double sigma) { return {TestFunctionKind::Fejer, sigma}; }
AdmissibleTestFunction AdmissibleTestFunction::cosine(double sigma) { return {TestFunctionKind::Cosine, sigma}; }
AdmissibleTestFunction AdmissibleTestFunction::make(TestFunctionKind kind, double sigma) { return {kind, sigma}; }

std::string AdmissibleTestFunction::name() const { return kind_ == TestFunctionKind::Fejer ? "fejer" : "cosine"; }

double AdmissibleTestFunction::phi_hat(double u) const {
    const double a = std::abs(u);
    if (a >= sigma_) return 0.0;
    if (kind_ == TestFunctionKind::Fejer) return 1.0 - a / sigma_;
    const double c = std::cos(kPi * a / (2.0 * sigma_));
    return c * c;
}

double AdmissibleTestFunction::phi(double x) const {
    if (kind_ == TestFunctionKind::Fejer) {
        const double s = sinc(kPi * sigma_ * x);
        return sigma_ * s * s;
    }
    const double t = 2.0 * kPi * sigma_ * x;
    return sigma_ * (sinc(t) + 0.5 * sinc(kPi - t) + 0.5 * sinc(kPi + t));
}

std::optional<TestFunctionKind> parse_test_function(const std::string& name) {
    if (name == "fejer") return TestFunctionKind::Fejer;
    if (name == "cosine") return TestFunctionKind::Cosine;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Moments

FamilyStatistics family_statistics(const ModulusPtr& modulus, const GaussSumCache* cache, bool with_a_chi,
                                   double threshold) {
    const Modulus& m = *modulus;
    FamilyStatistics s;
    s.q = m.q();
    s.qnorm = m.norm();
    s.phi = m.phi();
    s.psi_star = psi_star(m.factorization());
    s.omega = omega(m.factorization());
    s.prime = m.factorization().factors.size() == 1 && m.factorization().factors.front().exponent == 1;
    s.threshold = threshold;
    for (const FamilyValue& v : evaluate_family(modulus, cache, {.x = 0.0, .with_a_chi = with_a_chi})) {
        s.sum_l += v.l_half;
        s.sum_abs_l2 += std::norm(v.l_half);
        s.sum_two_a += 2.0 * v.a_chi;
        s.max_imag_a = std::max(s.max_imag_a, std::abs(v.a_chi.imag()));
        if (std::abs(v.l_half) > threshold) ++s.nonvanishing;
    }
    return s;
}

double first_moment_main_term(const Modulus& modulus) {
    return 0.5 * static_cast<double>(psi_star(modulus.factorization()));
}

double second_moment_main_term(const Modulus& modulus) {
    const double n = static_cast<double>(modulus.norm());
    return kPi / 16.0 * static_cast<double>(modulus.phi()) / n * static_cast<double>(psi_star(modulus.factorization())) *
           std::log(n);
}

namespace {

ExperimentRow make_row(const FamilyStatistics& s, std::complex<double> statistic, double main) {
    ExperimentRow r;
    r.q = s.q;
    r.n_q = s.qnorm;
    r.psi_star = s.psi_star;
    r.statistic = statistic;
    r.main_term = main;
    r.ratio = main != 0.0 ? statistic.real() / main : 0.0;
    r.composite = !s.prime;
    return r;
}

}  // namespace

ExperimentRow first_moment_row(const FamilyStatistics& s) {
    return make_row(s, s.sum_l, 0.5 * static_cast<double>(s.psi_star));
}

ExperimentRow second_moment_row(const FamilyStatistics& s) {
    const double n = static_cast<double>(s.qnorm);
    const double main =
        s.qnorm > 1 ? kPi / 16.0 * static_cast<double>(s.phi) / n * static_cast<double>(s.psi_star) * std::log(n) : 0.0;
    return make_row(s, s.sum_two_a, main);
}

ExperimentRow first_moment(const ModulusPtr& modulus, const GaussSumCache* cache) {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentRow r = first_moment_row(family_statistics(modulus, cache, false));
    r.wall_s = seconds_since(t0);
    return r;
}

ExperimentRow second_moment(const ModulusPtr& modulus, const GaussSumCache* cache) {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentRow r = second_moment_row(family_statistics(modulus, cache, true));
    r.wall_s = seconds_since(t0);
    return r;
}

std::complex<double> first_moment_orthogonality(const ModulusPtr& modulus) {
    const Modulus& m = *modulus;
    const double qn = static_cast<double>(m.norm());
    const double x = qn;
    const double scale2 = 32.0 * qn / x;
    constexpr double kCut = 40.0;
    const GaussInt one{1, 0};

    // sum_n N(n)^-1/2 V(N(n)/x) sum*_chi chi(n)
    double first = 0.0;
    for_each_primary(static_cast<std::int64_t>(std::floor(kCut * x)), [&](const GaussInt& n) {
        if (!coprime(m.factorization(), n)) return;
        const auto nn = static_cast<double>(norm(n));
        first += eval_V(nn / x) / std::sqrt(nn) * orthogonality_rhs(m, n, one, -1);
    });

    // sum_n N(n)^-1/2 V(N(n) x/(32 N(q))) sum*_chi conj chi(n) g(chi~), where
    // g(chi~) = sum_r chi(r) G(r) and sum*_chi chi(r) conj chi(n) is the divisor sum.
    const GaussSumTable table(modulus);
    std::map<std::int64_t, std::complex<double>> by_class;
    std::complex<double> second{0.0, 0.0};
    for_each_primary(static_cast<std::int64_t>(std::floor(kCut * scale2)), [&](const GaussInt& n) {
        if (!coprime(m.factorization(), n)) return;
        const std::int64_t idx = m.index(n);
        auto it = by_class.find(idx);
        if (it == by_class.end()) {
            std::complex<double> acc{0.0, 0.0};
            for (std::size_t p = 0; p < m.units().size(); ++p)
                acc += table.weights()[p] * orthogonality_rhs(m, m.ring().element(m.units()[p]), n, -1);
            it = by_class.emplace(idx, acc).first;
        }
        const auto nn = static_cast<double>(norm(n));
        second += eval_V(nn / scale2) / std::sqrt(nn) * it->second;
    });
    return first + second / std::sqrt(8.0 * qn);
}

NonvanishingResult nonvanishing_from(const FamilyStatistics& s) {
    NonvanishingResult r;
    r.count = s.nonvanishing;
    r.psi_star = s.psi_star;
    const double log_n = std::log(static_cast<double>(s.qnorm));
    r.reference = log_n > 0.0 ? static_cast<double>(s.psi_star) / log_n : 0.0;
    r.normalized = s.psi_star > 0 ? static_cast<double>(s.nonvanishing) * log_n / static_cast<double>(s.psi_star) : 0.0;
    return r;
}

NonvanishingResult nonvanishing_count(const ModulusPtr& modulus, const GaussSumCache* cache, double threshold) {
    return nonvanishing_from(family_statistics(modulus, cache, false, threshold));
}

// ---------------------------------------------------------------------------
// One-level density

PrimePowerTable::PrimePowerTable(std::int64_t norm_bound)
    : bound_(norm_bound), entries_(primary_prime_powers_up_to(norm_bound)) {}

DensityResult one_level_density(const ModulusPtr& modulus, const AdmissibleTestFunction& f, DensityRoute route,
                                const PrimePowerTable* table) {
    const auto t0 = std::chrono::steady_clock::now();
    const Modulus& m = *modulus;
    if (m.norm() < 2) throw std::invalid_argument("one_level_density: N(q) must be at least 2");
    const double log_q = std::log(static_cast<double>(m.norm()));
    const auto bound = static_cast<std::int64_t>(std::floor(std::exp(f.sigma() * log_q) * (1.0 + 1e-12)));
    std::optional<PrimePowerTable> own;
    if (table == nullptr || table->norm_bound() < bound) {
        own.emplace(bound);
        table = &*own;
    }

    DensityResult r;
    r.q = m.q();
    r.qnorm = m.norm();
    r.psi_star = psi_star(m.factorization());
    r.sigma = f.sigma();
    r.testfn = f.name();

    std::vector<double> bins;
    if (route == DensityRoute::Direct) bins.assign(m.units().size(), 0.0);
    const GaussInt one{1, 0};
    double s = 0.0;
    for (const PrimaryPrimePower& e : table->entries()) {
        if (e.norm > bound) break;
        if (divides(e.prime, m.q())) continue;
        const double nn = static_cast<double>(e.norm);
        const double weight = f.phi_hat(std::log(nn) / log_q);
        if (weight == 0.0) continue;
        const double c = std::log(static_cast<double>(norm(e.prime))) / std::sqrt(nn) * weight;
        ++r.prime_powers;
        if (route == DensityRoute::Direct) {
            bins[static_cast<std::size_t>(m.unit_position(m.index(e.value)))] += c;
        } else {
            s += c * (orthogonality_rhs(m, e.value, one, -1) + orthogonality_rhs(m, one, e.value, -1));
        }
    }
    if (route == DensityRoute::Direct) {
        std::vector<std::int64_t> phases;
        for_each_character(modulus, {.odd_only = true, .primitive_only = true}, [&](const Character& chi) {
            chi.unit_phases(phases);
            double acc = 0.0;
            for (std::size_t p = 0; p < phases.size(); ++p) acc += 2.0 * m.root(phases[p]).real() * bins[p];
            s += acc;
        });
    }
    r.s_tilde = s;
    r.density = r.psi_star > 0 ? f.integral_phi() - s / (static_cast<double>(r.psi_star) * log_q) : 0.0;
    r.wall_s = seconds_since(t0);
    return r;
}

// ---------------------------------------------------------------------------
// Lattice-point lemmas

std::optional<std::pair<GaussInt, GaussInt>> norm_inequality_scan(int bound) {
    if (bound < 0 || bound > 100) throw std::invalid_argument("norm_inequality_scan: bound must be in [0, 100]");
    const std::int64_t b = bound;
    for (std::int64_t mr = -b; mr <= b; ++mr)
        for (std::int64_t mi = -b; mi <= b; ++mi) {
            const std::int64_t nm = mr * mr + mi * mi;
            for (std::int64_t nr = -b; nr <= b; ++nr)
                for (std::int64_t ni = -b; ni <= b; ++ni) {
                    const std::int64_t sr = mr + nr;
                    const std::int64_t si = mi + ni;
                    const std::int64_t ns = sr * sr + si * si;
                    if (ns < nr * nr + ni * ni) continue;
                    if (64 * ns < nm) return std::make_pair(GaussInt{mr, mi}, GaussInt{nr, ni});
                }
        }
    return std::nullopt;
}

namespace {

std::int64_t floor_div4(std::int64_t a) { return a >= 0 ? a / 4 : -((-a + 3) / 4); }

}  // namespace

std::int64_t gauss_circle_primary(double x) {
    if (!(x >= 1.0)) throw std::invalid_argument("gauss_circle_primary: x must be at least 1");
    const auto bound = static_cast<std::int64_t>(std::floor(x));
    const std::int64_t r = isqrt(bound);
    std::int64_t count = 0;
    for (std::int64_t b = -(r - (r & 1)); b <= r; b += 2) {
        const std::int64_t amax = isqrt(bound - b * b);
        const std::int64_t want = ((1 - b) % 4 + 4) % 4;
        // a == want mod 4 in [-amax, amax]
        count += floor_div4(amax - want) - floor_div4(-amax - 1 - want);
    }
    return count;
}

C0Estimate estimate_c0(const std::vector<double>& grid_in, double max_spread) {
    std::vector<double> grid = grid_in.empty() ? std::vector<double>{1e6, 2e6, 4e6, 1e7} : grid_in;
    std::sort(grid.begin(), grid.end());
    if (grid.front() < 2.0) throw std::invalid_argument("estimate_c0: grid points must be at least 2");
    std::vector<std::int64_t> bounds;
    for (double x : grid) bounds.push_back(static_cast<std::int64_t>(std::floor(x)));
    std::vector<double> partial(grid.size(), 0.0);
    for_each_primary(bounds.back(), [&](const GaussInt& a) {
        const std::int64_t n = a.re * a.re + a.im * a.im;
        const auto k = static_cast<std::size_t>(std::lower_bound(bounds.begin(), bounds.end(), n) - bounds.begin());
        partial[k] += 1.0 / static_cast<double>(n);
    });
    C0Estimate est;
    double running = 0.0;
    double lo = 0.0, hi = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        running += partial[k];
        const double v = running - kPi / 8.0 * std::log(grid[k]);
        est.grid.emplace_back(grid[k], v);
        est.value += v;
        lo = k == 0 ? v : std::min(lo, v);
        hi = k == 0 ? v : std::max(hi, v);
    }
    est.value /= static_cast<double>(grid.size());
    est.spread = hi - lo;
    if (est.spread > max_spread)
        throw std::runtime_error("estimate_c0: spread " + format_number(est.spread) + " exceeds " +
                                 format_number(max_spread));
    return est;
}

double c0() {
    static const double value = estimate_c0().value;
    return value;
}

HarmonicSum harmonic_sum(double x, const GaussInt& q) {
    if (!(x >= 2.0)) throw std::invalid_argument("harmonic_sum: x must be at least 2");
    if (!is_odd(q) || !is_primary(q)) throw std::invalid_argument("harmonic_sum: q must be odd and primary");
    const Factorization f = factor(q);
    HarmonicSum h;
    for_each_primary(static_cast<std::int64_t>(std::floor(x)), [&](const GaussInt& n) {
        if (!coprime(f, n)) return;
        h.value += 1.0 / static_cast<double>(n.re * n.re + n.im * n.im);
    });
    double prime_term = 0.0;
    for (const auto& pp : f.factors) {
        const auto np = static_cast<double>(norm(pp.prime));
        prime_term += std::log(np) / (np - 1.0);
    }
    const double density = static_cast<double>(euler_phi(f)) / static_cast<double>(norm(q));
    h.main = density * (kPi / 8.0 * std::log(x) + c0() + kPi / 8.0 * prime_term);
    return h;
}

// ---------------------------------------------------------------------------
// Sweeps

std::vector<GaussInt> enumerate_moduli(std::int64_t qnorm_min, std::int64_t qnorm_max, bool primes_only) {
    if (qnorm_min > qnorm_max) throw std::invalid_argument("enumerate_moduli: empty norm range");
    if (qnorm_max > kDefaultModulusBound)
        throw std::invalid_argument("enumerate_moduli: N(q) bound exceeds " + std::to_string(kDefaultModulusBound));
    std::vector<GaussInt> out;
    if (primes_only) {
        for (std::int64_t p : primes_up_to(qnorm_max)) {
            if (p == 2) continue;
            const std::int64_t n = p % 4 == 1 ? p : p * p;
            if (n < qnorm_min || n > qnorm_max) continue;
            for (const GaussInt& pi : primary_primes_over(p)) out.push_back(pi);
        }
    } else {
        for_each_primary(qnorm_max, [&](const GaussInt& a) {
            if (norm(a) >= qnorm_min) out.push_back(a);
        });
    }
    std::sort(out.begin(), out.end(), norm_order_less);
    return out;
}

std::vector<DyadicBin> dyadic_medians(const std::vector<std::pair<double, double>>& keyed, double start) {
    if (!(start > 0.0)) throw std::invalid_argument("dyadic_medians: start must be positive");
    std::map<int, std::vector<double>> groups;
    for (const auto& [key, value] : keyed) {
        if (key < start) continue;
        groups[static_cast<int>(std::floor(std::log2(key / start)))].push_back(value);
    }
    std::vector<DyadicBin> out;
    for (auto& [k, values] : groups) {
        std::sort(values.begin(), values.end());
        const std::size_t n = values.size();
        DyadicBin bin;
        bin.lo = start * std::ldexp(1.0, k);
        bin.hi = 2.0 * bin.lo;
        bin.count = n;
        bin.median = n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
        out.push_back(bin);
    }
    return out;
}

bool strictly_decreasing(const std::vector<DyadicBin>& bins) {
    if (bins.size() < 2) return false;
    for (std::size_t k = 1; k < bins.size(); ++k)
        if (!(bins[k].median < bins[k - 1].median)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Output

std::string format_number(double v) {
    if (v == 0.0) return "0";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

std::string moments_csv(const std::vector<ExperimentRow>& rows) {
    std::ostringstream os;
    os << "qnorm,q_re,q_im,psi_star,stat_re,stat_im,main_term,ratio,wall_s\n";
    for (const auto& r : rows) {
        os << r.n_q << ',' << r.q.re << ',' << r.q.im << ',' << r.psi_star << ',' << format_number(r.statistic.real())
           << ',' << format_number(r.statistic.imag()) << ',' << format_number(r.main_term) << ','
           << format_number(r.ratio) << ',' << format_number(r.wall_s) << '\n';
    }
    return os.str();
}

namespace {

nlohmann::ordered_json number_json(double v) {
    if (!std::isfinite(v)) return nullptr;
    return std::stod(format_number(v));
}

}  // namespace

std::string moments_json(const std::vector<ExperimentRow>& rows) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json o;
        o["qnorm"] = r.n_q;
        o["q_re"] = r.q.re;
        o["q_im"] = r.q.im;
        o["psi_star"] = r.psi_star;
        o["stat_re"] = number_json(r.statistic.real());
        o["stat_im"] = number_json(r.statistic.imag());
        o["main_term"] = number_json(r.main_term);
        o["ratio"] = number_json(r.ratio);
        o["wall_s"] = number_json(r.wall_s);
        doc.push_back(std::move(o));
    }
    return doc.dump(2) + "\n";
}

std::string density_csv(const std::vector<DensityResult>& rows) {
    std::ostringstream os;
    os << "qnorm,q_re,q_im,sigma,testfn,psi_star,s_tilde,density,wall_s\n";
    for (const auto& r : rows) {
        os << r.qnorm << ',' << r.q.re << ',' << r.q.im << ',' << format_number(r.sigma) << ',' << r.testfn << ','
           << r.psi_star << ',' << format_number(r.s_tilde) << ',' << format_number(r.density) << ','
           << format_number(r.wall_s) << '\n';
    }
    return os.str();
}

std::string density_json(const std::vector<DensityResult>& rows) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json o;
        o["qnorm"] = r.qnorm;
        o["q_re"] = r.q.re;
        o["q_im"] = r.q.im;
        o["sigma"] = number_json(r.sigma);
        o["testfn"] = r.testfn;
        o["psi_star"] = r.psi_star;
        o["s_tilde"] = number_json(r.s_tilde);
        o["density"] = number_json(r.density);
        o["wall_s"] = number_json(r.wall_s);
        doc.push_back(std::move(o));
    }
    return doc.dump(2) + "\n";
}

namespace {

// RFC 4180 quoting for free-text fields.
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

}  // namespace

std::string lemmas_csv(const std::vector<LemmaRow>& rows) {
    std::ostringstream os;
    os << "check_name,param,observed,bound,pass\n";
    for (const auto& r : rows)
        os << csv_field(r.check_name) << ',' << csv_field(r.param) << ',' << format_number(r.observed) << ',' << format_number(r.bound) << ','
           << (r.pass ? "true" : "false") << '\n';
    return os.str();
}

std::string lemmas_json(const std::vector<LemmaRow>& rows) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json o;
        o["check_name"] = r.check_name;
        o["param"] = r.param;
        o["observed"] = number_json(r.observed);
        o["bound"] = number_json(r.bound);
        o["pass"] = r.pass;
        doc.push_back(std::move(o));
    }
    return doc.dump(2) + "\n";
}

}  // namespace hecke
