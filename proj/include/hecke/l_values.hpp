#pragma once

// Central values L(1/2, chi~) by the approximate functional equation
//
//   L(1/2) = sum_A chi~(A) N(A)^-1/2 V(N(A)/x)
//          + g(chi~)/sqrt(8 N(q)) sum_A conj chi~(A) N(A)^-1/2 V(N(A) x / (32 N(q))),
//
// and A(chi~) = sum_{A,B} chi~(A) conj chi~(B) (N(A)N(B))^-1/2 W(N(A)N(B)/N(q)) with |L(1/2)|^2 = 2A.
// Ideals coprime to 2 are summed through their primary generators.
//
// Both sums only see chi~(A) = chi(a mod q), so the coefficients are first collected by residue
// class (a table independent of the character); each character is then one pass over the unit group.

#include <complex>
#include <cstdint>
#include <vector>

#include "hecke/hecke_lift.hpp"

namespace hecke {

/// The two AFE series binned by the unit position of a mod q.
class AfeTables {
public:
    /// x <= 0 means x = N(q). Terms stop once the V argument exceeds v_cutoff.
    AfeTables(ModulusPtr modulus, double x = 0.0, double v_cutoff = 40.0);

    const Modulus& modulus() const { return *modulus_; }
    double x() const { return x_; }
    /// Per unit position: sum of N(a)^-1/2 V(N(a)/x).
    const std::vector<double>& first() const { return first_; }
    /// Per unit position: sum of N(a)^-1/2 V(N(a) x / (32 N(q))).
    const std::vector<double>& second() const { return second_; }
    /// Largest norm summed in either series.
    std::int64_t truncation_norm() const { return truncation_norm_; }
    /// Bound on the dropped terms, both series, |g| / sqrt(8N) = 1 included.
    double est_tail() const { return est_tail_; }

    std::complex<double> evaluate(const HeckeCharacter& chi) const;
    /// Same, from precomputed unit phases of the base character.
    std::complex<double> evaluate(const std::vector<std::int64_t>& phases, std::complex<double> gauss_sum) const;

private:
    ModulusPtr modulus_;
    double x_;
    std::vector<double> first_;
    std::vector<double> second_;
    std::int64_t truncation_norm_ = 0;
    double est_tail_ = 0.0;
};

struct CentralValue {
    GaussInt q;
    std::vector<std::int64_t> exponents;
    std::complex<double> value;
    double x_param = 0.0;
    std::int64_t truncation_norm = 0;
    double est_tail = 0.0;
};

/// L(1/2, chi~) with the free parameter x (x <= 0 means N(q)). Throws on x not finite.
CentralValue l_half(const HeckeCharacter& chi, double x = 0.0);

/// The pair sum behind A(chi~), binned by the unit position of a b^-1 mod q.
///
/// Pairs are kept while N(a)N(b) <= kappa N(q), kappa >= 50 chosen so that the estimated tail
///   (pi/8)^2 sqrt(N(q)) int_kappa^inf (log(u N(q)) + 3) u^-1/2 W(u) du
/// is at most tail_target.
class PairTable {
public:
    explicit PairTable(ModulusPtr modulus, double tail_target = 1e-8);

    const Modulus& modulus() const { return *modulus_; }
    const std::vector<double>& weights() const { return weights_; }
    /// Largest product N(a)N(b) summed.
    std::int64_t truncation() const { return truncation_; }
    double est_tail() const { return est_tail_; }
    std::int64_t pair_count() const { return pairs_; }

    /// The full (complex) accumulated sum; its imaginary part vanishes up to rounding.
    std::complex<double> a_chi_complex(const Character& chi) const;
    std::complex<double> a_chi_complex(const std::vector<std::int64_t>& phases) const;
    double a_chi(const Character& chi) const { return a_chi_complex(chi).real(); }

private:
    ModulusPtr modulus_;
    std::vector<double> weights_;
    std::int64_t truncation_ = 0;
    double est_tail_ = 0.0;
    std::int64_t pairs_ = 0;
};

/// Estimated A(chi~) tail for pairs with N(A)N(B) > kappa N(q).
double pair_tail_estimate(double kappa, std::int64_t qnorm);

double a_chi(const HeckeCharacter& chi);

enum class SumOrder { ByNorm, Lexicographic };

struct DirichletPartialSum {
    std::complex<double> value;
    double tail_bound = 0.0;
    std::int64_t terms = 0;
    std::int64_t norm_bound = 0;
};

/// Partial sum of sum_A chi~(A) N(A)^-s over odd ideals with N(A) <= norm_bound, s >= 1.5, with a
/// bound on the rest from the primary lattice-point count. Lexicographic order runs over generators
/// by (re, im).
DirichletPartialSum dirichlet_tail_check(const HeckeCharacter& chi, double s, std::int64_t norm_bound = 1000000,
                                         SumOrder order = SumOrder::ByNorm);
/// Same with chi~ replaced by 1: the odd-ideal partial sum of the Dedekind zeta function of Q(i).
DirichletPartialSum odd_zeta_partial(double s, std::int64_t norm_bound = 1000000, SumOrder order = SumOrder::ByNorm);

/// One primitive odd character of a family with its Gauss sum and central data.
struct FamilyValue {
    std::int64_t index = 0;
    std::vector<std::int64_t> exponents;
    std::complex<double> gauss_sum;
    std::complex<double> l_half;
    std::complex<double> a_chi;  // zero unless requested
};

struct FamilyOptions {
    double x = 0.0;  // AFE parameter, <= 0 means N(q)
    bool with_a_chi = false;
};

/// All primitive odd characters mod q in index order, evaluated per character.
std::vector<FamilyValue> evaluate_family(const ModulusPtr& modulus, const GaussSumCache* cache,
                                         const FamilyOptions& options = {});

}  // namespace hecke
