#pragma once

// Numerical experiments over families of lifted characters: moments of central values,
// non-vanishing counts, the prime side of the one-level density, and the lattice-point
// lemmas they rest on.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hecke/l_values.hpp"

namespace hecke {

enum class TestFunctionKind { Fejer, Cosine };

/// An even test function phi with compactly supported Fourier transform phi^ on [-sigma, sigma].
///   Fejer:  phi^(u) = max(0, 1 - |u|/sigma),             phi(x) = sigma sinc^2(pi sigma x)
///   Cosine: phi^(u) = cos^2(pi u / (2 sigma)) on [-s, s], phi(x) = sigma (sinc(2 pi sigma x)
///           + sinc(pi - 2 pi sigma x)/2 + sinc(pi + 2 pi sigma x)/2)
/// with sinc(t) = sin(t)/t. The integral of phi is phi^(0) = 1 for both.
class AdmissibleTestFunction {
public:
    /// sigma in (0, 2).
    static AdmissibleTestFunction fejer(double sigma);
    static AdmissibleTestFunction cosine(double sigma);
    static AdmissibleTestFunction make(TestFunctionKind kind, double sigma);

    TestFunctionKind kind() const { return kind_; }
    double sigma() const { return sigma_; }
    /// "fejer" or "cosine".
    std::string name() const;

    double phi_hat(double u) const;
    double phi(double x) const;
    double integral_phi() const { return phi_hat(0.0); }

private:
    AdmissibleTestFunction(TestFunctionKind kind, double sigma);

    TestFunctionKind kind_;
    double sigma_;
};

std::optional<TestFunctionKind> parse_test_function(const std::string& name);

struct ExperimentRow {
    GaussInt q;
    std::int64_t n_q = 0;  // N(q)
    std::int64_t psi_star = 0;
    std::complex<double> statistic;
    double main_term = 0.0;
    double ratio = 0.0;  // Re(statistic) / main_term, 0 when main_term = 0
    double wall_s = 0.0;
    bool composite = false;  // q is not a Gaussian prime
};

/// Everything the moment experiments need from one per-character pass over the family.
struct FamilyStatistics {
    GaussInt q;
    std::int64_t qnorm = 0;
    std::int64_t phi = 0;
    std::int64_t psi_star = 0;
    int omega = 0;
    bool prime = false;
    std::complex<double> sum_l;      // sum of L(1/2)
    double sum_abs_l2 = 0.0;         // sum of |L(1/2)|^2
    std::complex<double> sum_two_a;  // sum of 2 A(chi~), when computed
    std::int64_t nonvanishing = 0;   // |L(1/2)| > threshold
    double threshold = 1e-8;
    double max_imag_a = 0.0;         // largest |Im A(chi~)|
};

FamilyStatistics family_statistics(const ModulusPtr& modulus, const GaussSumCache* cache, bool with_a_chi,
                                   double threshold = 1e-8);

double first_moment_main_term(const Modulus& modulus);
double second_moment_main_term(const Modulus& modulus);

ExperimentRow first_moment_row(const FamilyStatistics& stats);
/// Statistic is sum 2 A(chi~); requires stats computed with A.
ExperimentRow second_moment_row(const FamilyStatistics& stats);

ExperimentRow first_moment(const ModulusPtr& modulus, const GaussSumCache* cache = nullptr);
ExperimentRow second_moment(const ModulusPtr& modulus, const GaussSumCache* cache = nullptr);

/// The first moment with the character sum moved inside the AFE sums and evaluated by the
/// divisor-sum side of orthogonality, term by term. Cost grows like N(q)^2; meant for N(q) <= 300.
std::complex<double> first_moment_orthogonality(const ModulusPtr& modulus);

struct NonvanishingResult {
    std::int64_t count = 0;
    std::int64_t psi_star = 0;
    double reference = 0.0;   // psi*(q) / log N(q)
    double normalized = 0.0;  // count log N(q) / psi*(q)
};

NonvanishingResult nonvanishing_count(const ModulusPtr& modulus, const GaussSumCache* cache = nullptr,
                                      double threshold = 1e-8);
NonvanishingResult nonvanishing_from(const FamilyStatistics& stats);

/// Primary prime powers with their von Mangoldt weight, sorted by norm.
class PrimePowerTable {
public:
    explicit PrimePowerTable(std::int64_t norm_bound);

    std::int64_t norm_bound() const { return bound_; }
    const std::vector<PrimaryPrimePower>& entries() const { return entries_; }

private:
    std::int64_t bound_;
    std::vector<PrimaryPrimePower> entries_;
};

enum class DensityRoute { Orthogonality, Direct };

struct DensityResult {
    GaussInt q;
    std::int64_t qnorm = 0;
    std::int64_t psi_star = 0;
    double sigma = 0.0;
    std::string testfn;
    double s_tilde = 0.0;
    double density = 0.0;
    std::int64_t prime_powers = 0;  // terms in the prime sum
    double wall_s = 0.0;
};

/// Prime side of the explicit formula averaged over the family:
///   s~ = sum*_chi sum_n Lambda(n) N(n)^-1/2 phi^(log N(n)/log N(q)) (chi~(n) + conj chi~(n)),
///   density = int phi - s~ / (psi*(q) log N(q)),
/// n over primary prime powers coprime to q with N(n) <= N(q)^sigma. The table must reach that far;
/// when null one is built.
DensityResult one_level_density(const ModulusPtr& modulus, const AdmissibleTestFunction& f,
                                DensityRoute route = DensityRoute::Orthogonality,
                                const PrimePowerTable* table = nullptr);

/// First (m, n) with |re|, |im| <= bound, N(m+n) >= N(n) and 64 N(m+n) < N(m); bound <= 100.
std::optional<std::pair<GaussInt, GaussInt>> norm_inequality_scan(int bound);

/// #{a primary : N(a) <= x}.
std::int64_t gauss_circle_primary(double x);

struct HarmonicSum {
    double value = 0.0;
    double main = 0.0;
};

/// sum_{N(n) <= x, n primary, (n, q) = 1} 1/N(n) and its main term
///   (phi(q)/N(q)) ((pi/8) log x + C0 + (pi/8) sum_{p | q} log N(p)/(N(p) - 1)).
HarmonicSum harmonic_sum(double x, const GaussInt& q);

struct C0Estimate {
    double value = 0.0;
    double spread = 0.0;                         // max - min over the grid
    std::vector<std::pair<double, double>> grid;  // (x, sum_{N(a)<=x} 1/N(a) - (pi/8) log x)
};

/// C0 as the mean of sum_{N(a)<=x} 1/N(a) - (pi/8) log x over x in the grid (default
/// {1e6, 2e6, 4e6, 1e7}). Throws std::runtime_error when the spread exceeds max_spread.
C0Estimate estimate_c0(const std::vector<double>& grid = {}, double max_spread = 1e-3);
/// The default-grid estimate, computed once.
double c0();

/// Primary q with min <= N(q) <= max sorted by (norm, re, im), one per ideal. With primes_only,
/// only primes (split primes of norm p and inert -p of norm p^2).
std::vector<GaussInt> enumerate_moduli(std::int64_t qnorm_min, std::int64_t qnorm_max, bool primes_only);

struct DyadicBin {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;
    double median = 0.0;
};

/// Medians of values grouped by key into [start 2^k, start 2^(k+1)); empty bins are dropped.
std::vector<DyadicBin> dyadic_medians(const std::vector<std::pair<double, double>>& keyed, double start);
/// True when every bin median is strictly below the previous one (and there are at least two bins).
bool strictly_decreasing(const std::vector<DyadicBin>& bins);

// Output formats. Numbers are printed with %.15g so that output is byte-stable.

std::string format_number(double v);
std::string moments_csv(const std::vector<ExperimentRow>& rows);
std::string moments_json(const std::vector<ExperimentRow>& rows);
std::string density_csv(const std::vector<DensityResult>& rows);
std::string density_json(const std::vector<DensityResult>& rows);

struct LemmaRow {
    std::string check_name;
    std::string param;
    double observed = 0.0;
    double bound = 0.0;
    bool pass = false;
};

std::string lemmas_csv(const std::vector<LemmaRow>& rows);
std::string lemmas_json(const std::vector<LemmaRow>& rows);

}  // namespace hecke
