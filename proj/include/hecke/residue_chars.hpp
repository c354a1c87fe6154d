#pragma once

// Residue rings Z[i]/(q), the unit group (Z[i]/(q))^*, and its characters.
//
// Residues are addressed by a dense index in [0, N(q)) taken from a Hermite basis
// of the lattice (q): the class of x + yi is reduced into the box
// 0 <= x < N(q)/g, 0 <= y < g with g = gcd(re q, im q). Characters are exponent
// vectors against an invariant-factor basis of the unit group and are evaluated
// through an integer phase k in [0, M), M the group exponent: chi = exp(2 pi i k / M).

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "hecke/zi_arith.hpp"

namespace hecke {

class ResidueRing {
public:
    explicit ResidueRing(GaussInt m);

    const GaussInt& modulus() const { return m_; }
    std::int64_t size() const { return n_; }

    std::int64_t index(const GaussInt& z) const;
    /// Representative in the Hermite box for a residue index.
    GaussInt element(std::int64_t idx) const;
    /// The minimal-norm representative of z mod m, ties broken by (re, im).
    GaussInt canonical(const GaussInt& z) const;
    std::int64_t mul(std::int64_t a, std::int64_t b) const;
    std::int64_t pow(std::int64_t a, std::uint64_t e) const;

private:
    GaussInt m_;
    std::int64_t n_ = 1;
    std::int64_t width_ = 1;  // N(m) / g
    std::int64_t g_ = 1;      // gcd(re m, im m)
    std::int64_t shift_ = 0;  // first coordinate of the basis vector (shift_, g_)
};

struct UnitGroupBasis {
    std::vector<std::int64_t> generators;  // residue indices
    std::vector<std::int64_t> orders;      // invariant factors, each divides the previous
};

/// One primary divisor d of q with the weights used by the orthogonality relation.
struct DivisorTerm {
    GaussInt d;
    int mobius_cofactor = 0;  // mu(q/d)
    std::int64_t phi = 0;     // phi(d)
};

inline constexpr std::int64_t kDefaultModulusBound = 100000;

class Modulus {
public:
    /// Builds the unit group of Z[i]/(q) for an odd primary q with N(q) <= max_norm.
    static std::shared_ptr<const Modulus> build(const GaussInt& q, std::int64_t max_norm = kDefaultModulusBound);

    const GaussInt& q() const { return q_; }
    std::int64_t norm() const { return ring_.size(); }
    const Factorization& factorization() const { return factorization_; }
    const ResidueRing& ring() const { return ring_; }
    const UnitGroupBasis& basis() const { return basis_; }
    std::int64_t phi() const { return static_cast<std::int64_t>(units_.size()); }
    std::size_t rank() const { return basis_.orders.size(); }
    /// Group exponent M = lcm of the orders.
    std::int64_t exponent() const { return exponent_; }

    std::int64_t index(const GaussInt& z) const { return ring_.index(z); }
    bool is_unit_index(std::int64_t idx) const { return unit_pos_[static_cast<std::size_t>(idx)] >= 0; }
    /// Position of a residue in units(), or -1 for non-units.
    std::int32_t unit_position(std::int64_t idx) const { return unit_pos_[static_cast<std::size_t>(idx)]; }
    /// Exponent vector of a unit residue against the basis.
    std::span<const std::int32_t> dlog(std::int64_t idx) const;
    /// Unit residue indices in mixed-radix order of their exponent vectors (last component fastest).
    const std::vector<std::int64_t>& units() const { return units_; }
    std::int64_t one_index() const { return one_; }
    std::int64_t minus_one_index() const { return minus_one_; }

    /// exp(2 pi i k / M).
    const std::complex<double>& root(std::int64_t k) const { return roots_[static_cast<std::size_t>(k)]; }

    /// Per prime factor (same order as the factorization): residue indices generating the kernel
    /// of reduction (Z[i]/(q))^* -> (Z[i]/(q/p))^*.
    const std::vector<std::vector<std::int64_t>>& kernel_generators() const { return kernel_generators_; }

    const std::vector<DivisorTerm>& divisor_terms() const { return divisor_terms_; }

private:
    Modulus(const GaussInt& q, Factorization f);

    void decompose();
    void build_kernels();

    GaussInt q_;
    Factorization factorization_;
    ResidueRing ring_;
    UnitGroupBasis basis_;
    std::int64_t exponent_ = 1;
    std::vector<std::int64_t> units_;
    std::vector<std::int32_t> unit_pos_;  // residue index -> position in units_, or -1
    std::vector<std::int32_t> dlog_;      // rank entries per position in units_
    std::int64_t one_ = 0;
    std::int64_t minus_one_ = 0;
    std::vector<std::complex<double>> roots_;
    std::vector<std::vector<std::int64_t>> kernel_generators_;
    std::vector<DivisorTerm> divisor_terms_;
};

using ModulusPtr = std::shared_ptr<const Modulus>;

class Character {
public:
    /// Exponents are reduced mod the corresponding orders.
    Character(ModulusPtr modulus, std::vector<std::int64_t> exponents);

    const Modulus& modulus() const { return *modulus_; }
    const ModulusPtr& modulus_ptr() const { return modulus_; }
    const std::vector<std::int64_t>& exponents() const { return exponents_; }
    /// Lexicographic rank of the exponent vector; a stable id within the modulus.
    std::int64_t index() const { return index_; }

    bool is_odd() const { return odd_; }
    bool is_primitive() const { return primitive_; }
    bool is_trivial() const;

    /// Phase k with chi = exp(2 pi i k / M) at a unit residue index.
    std::int64_t phase(std::int64_t residue_index) const;
    std::complex<double> at_index(std::int64_t residue_index) const;
    /// chi(n); zero when n is not coprime to q.
    std::complex<double> operator()(const GaussInt& n) const;

    Character conj() const;

    /// Calls fn(residue_index, phase) for every unit residue in the modulus' dlog order.
    void for_each_unit_phase(const std::function<void(std::int64_t, std::int64_t)>& fn) const;

    /// Phases of all units in dlog order written into out (size phi).
    void unit_phases(std::vector<std::int64_t>& out) const;

private:
    ModulusPtr modulus_;
    std::vector<std::int64_t> exponents_;
    std::vector<std::int64_t> steps_;  // e_j * M / o_j mod M
    std::int64_t index_ = 0;
    bool odd_ = false;
    bool primitive_ = false;
};

struct CharacterFilter {
    bool odd_only = false;
    bool primitive_only = false;
};

/// Every character passing the filter exactly once, ordered by index.
std::vector<Character> characters(const ModulusPtr& modulus, CharacterFilter filter = {});
void for_each_character(const ModulusPtr& modulus, CharacterFilter filter,
                        const std::function<void(const Character&)>& fn);

/// Number of primitive characters mod q: multiplicative with N(p) - 2 at primes and
/// N(p)^k (1 - 1/N(p))^2 at higher powers.
std::int64_t psi(const Factorization& f);
std::int64_t psi(const GaussInt& q);
/// Number of primitive odd characters mod q: (psi(q) - mu(q)) / 2.
std::int64_t psi_star(const Factorization& f);
std::int64_t psi_star(const GaussInt& q);

/// Divisor-sum side of the orthogonality relation for primitive characters of parity
/// chi(-1) = sign:
///   1/2 sum_{d|q, n == m mod d} mu(q/d) phi(d) + sign/2 sum_{d|q, n == -m mod d} mu(q/d) phi(d).
/// Requires (nm, q) = 1.
double orthogonality_rhs(const Modulus& modulus, const GaussInt& n, const GaussInt& m, int sign);
double orthogonality_rhs(const GaussInt& q, const GaussInt& n, const GaussInt& m, int sign);

/// Character side: sum over primitive chi with chi(-1) = sign of chi(n) conj(chi(m)), by enumeration.
std::complex<double> orthogonality_direct(const ModulusPtr& modulus, const GaussInt& n, const GaussInt& m,
                                          int sign);

}  // namespace hecke
