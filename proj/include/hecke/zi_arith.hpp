#pragma once

// Exact arithmetic in the Gaussian integers Z[i].
//
// Elements are held in machine-width integers. Every operation that could
// exceed int64 checks for overflow and throws std::overflow_error instead of
// wrapping. Norms are accepted up to 2^62.

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace hecke {

struct GaussInt {
    std::int64_t re = 0;
    std::int64_t im = 0;

    constexpr GaussInt() = default;
    constexpr GaussInt(std::int64_t r, std::int64_t i = 0) : re(r), im(i) {}

    constexpr bool operator==(const GaussInt&) const = default;

    constexpr bool is_zero() const { return re == 0 && im == 0; }
    constexpr GaussInt conj() const { return {re, -im}; }

    std::string str() const;
};

std::ostream& operator<<(std::ostream& os, const GaussInt& z);

GaussInt operator+(const GaussInt& a, const GaussInt& b);
GaussInt operator-(const GaussInt& a, const GaussInt& b);
GaussInt operator-(const GaussInt& a);
GaussInt operator*(const GaussInt& a, const GaussInt& b);

inline constexpr std::int64_t kMaxNorm = std::int64_t{1} << 62;

/// The four units 1, i, -1, -i in that order.
inline constexpr std::array<GaussInt, 4> kUnits{GaussInt{1, 0}, GaussInt{0, 1}, GaussInt{-1, 0},
                                                GaussInt{0, -1}};

/// (1+i)^3 = -2+2i.
inline constexpr GaussInt kOnePlusICubed{-2, 2};

/// re^2 + im^2; throws std::overflow_error above 2^62.
std::int64_t norm(const GaussInt& z);

bool is_unit(const GaussInt& z);
/// Odd means coprime to 1+i, i.e. odd norm.
bool is_odd(const GaussInt& z);
/// z == 1 mod (1+i)^3.
bool is_primary(const GaussInt& z);

/// True iff d divides z exactly in Z[i]. d must be nonzero.
bool divides(const GaussInt& d, const GaussInt& z);
/// Exact quotient z/d; throws std::domain_error if d does not divide z.
GaussInt div_exact(const GaussInt& z, const GaussInt& d);
/// Quotient rounded to the nearest lattice point (ties toward +infinity per component).
GaussInt div_round(const GaussInt& a, const GaussInt& b);
/// a - b*div_round(a, b); the remainder has norm at most N(b)/2.
GaussInt mod_round(const GaussInt& a, const GaussInt& b);
/// A gcd, normalized to be primary when odd.
GaussInt gcd(GaussInt a, GaussInt b);
GaussInt pow(GaussInt base, std::uint64_t exp);

/// Ordering by (norm, re, im); used wherever output order must be stable.
bool norm_order_less(const GaussInt& a, const GaussInt& b);

struct PrimaryDecomposition {
    GaussInt unit;
    GaussInt primary;
};

/// z = unit * primary with primary == 1 mod (1+i)^3. z must be odd and nonzero.
PrimaryDecomposition primary_decompose(const GaussInt& z);

/// Primary associate of an odd z.
inline GaussInt primary_part(const GaussInt& z) { return primary_decompose(z).primary; }

struct PrimePower {
    GaussInt prime;  // primary Gaussian prime
    int exponent = 0;
};

struct Factorization {
    GaussInt unit{1, 0};
    std::vector<PrimePower> factors;  // sorted by norm_order_less on the prime

    /// unit * prod prime^exponent.
    GaussInt product() const;
};

/// Factors an odd nonzero Gaussian integer into primary primes.
Factorization factor(const GaussInt& z);

/// Moebius function of the ideal (z).
int mobius(const Factorization& f);
int mobius(const GaussInt& z);
/// Number of invertible residues mod (z).
std::int64_t euler_phi(const Factorization& f);
std::int64_t euler_phi(const GaussInt& z);
/// Number of distinct prime ideals dividing (z).
int omega(const Factorization& f);
int omega(const GaussInt& z);

/// Primary divisors of a primary q, sorted by norm_order_less; includes 1 and q.
std::vector<GaussInt> primary_divisors(const GaussInt& q);
std::vector<GaussInt> primary_divisors(const Factorization& f);

/// True iff z is a Gaussian prime (up to units).
bool is_gaussian_prime(const GaussInt& z);

// Rational helpers used by the factorization and by prime-power enumerations.

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);
bool is_prime_u64(std::uint64_t n);
/// Rational primes <= n by sieve.
std::vector<std::int64_t> primes_up_to(std::int64_t n);
/// Trial-division factorization of n >= 1 into (prime, exponent) pairs.
std::vector<std::pair<std::int64_t, int>> factor_u64(std::int64_t n);
/// floor(sqrt(n)) exactly.
std::int64_t isqrt(std::int64_t n);

/// A square root of -1 mod p for a prime p == 1 mod 4, taken as c^((p-1)/4) for the
/// least quadratic non-residue c.
std::int64_t sqrt_minus_one_mod(std::int64_t p);
/// (a, b) with a^2 + b^2 = p, a odd and b even, for a prime p == 1 mod 4.
std::pair<std::int64_t, std::int64_t> two_squares(std::int64_t p);

/// Primary primes of norm p (two of them for p == 1 mod 4, none otherwise) or of norm p^2
/// (the inert -p for p == 3 mod 4). Sorted by norm_order_less.
std::vector<GaussInt> primary_primes_over(std::int64_t p);

/// Calls fn(a) for every primary a with N(a) <= bound, in row order (im outer, re inner).
void for_each_primary(std::int64_t bound, const std::function<void(const GaussInt&)>& fn);
/// Every primary a with N(a) <= bound, sorted by norm_order_less.
std::vector<GaussInt> primary_up_to(std::int64_t bound);

/// A primary generator of a prime-ideal power with N <= bound.
struct PrimaryPrimePower {
    GaussInt value;     // primary generator of p^k
    GaussInt prime;     // primary generator of p
    int exponent = 1;
    std::int64_t norm = 0;
};
/// All prime-ideal powers of odd norm <= bound, sorted by (norm, re, im) of the generator.
std::vector<PrimaryPrimePower> primary_prime_powers_up_to(std::int64_t bound);

}  // namespace hecke
