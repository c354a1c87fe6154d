#include "hecke/zi_arith.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace hecke {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("Gaussian integer overflow");
    return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("Gaussian integer overflow");
    return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("Gaussian integer overflow");
    return r;
}

std::int64_t to_i64(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("Gaussian integer overflow");
    return static_cast<std::int64_t>(v);
}

// floor((2n + d) / (2d)) for d > 0, i.e. n/d rounded to nearest.
__int128 round_div(__int128 n, __int128 d) {
    __int128 num = 2 * n + d;
    __int128 den = 2 * d;
    __int128 q = num / den;
    if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
    return q;
}

void require_odd_nonzero(const GaussInt& z, const char* what) {
    if (z.is_zero()) throw std::invalid_argument(std::string(what) + ": zero input");
    if (!is_odd(z)) throw std::invalid_argument(std::string(what) + ": even input " + z.str());
}

}  // namespace

std::string GaussInt::str() const {
    std::ostringstream os;
    os << *this;
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const GaussInt& z) {
    if (z.im == 0) return os << z.re;
    if (z.re == 0) {
        if (z.im == 1) return os << "i";
        if (z.im == -1) return os << "-i";
        return os << z.im << "i";
    }
    os << z.re << (z.im < 0 ? "-" : "+");
    std::int64_t a = z.im < 0 ? -z.im : z.im;
    if (a != 1) os << a;
    return os << "i";
}

GaussInt operator+(const GaussInt& a, const GaussInt& b) {
    return {checked_add(a.re, b.re), checked_add(a.im, b.im)};
}

GaussInt operator-(const GaussInt& a, const GaussInt& b) {
    return {checked_sub(a.re, b.re), checked_sub(a.im, b.im)};
}

GaussInt operator-(const GaussInt& a) { return {checked_sub(0, a.re), checked_sub(0, a.im)}; }

GaussInt operator*(const GaussInt& a, const GaussInt& b) {
    return {checked_sub(checked_mul(a.re, b.re), checked_mul(a.im, b.im)),
            checked_add(checked_mul(a.re, b.im), checked_mul(a.im, b.re))};
}

std::int64_t norm(const GaussInt& z) {
    std::int64_t n = checked_add(checked_mul(z.re, z.re), checked_mul(z.im, z.im));
    if (n > kMaxNorm) throw std::overflow_error("norm exceeds 2^62: " + z.str());
    return n;
}

bool is_unit(const GaussInt& z) {
    return (z.im == 0 && (z.re == 1 || z.re == -1)) || (z.re == 0 && (z.im == 1 || z.im == -1));
}

bool is_odd(const GaussInt& z) { return ((z.re ^ z.im) & 1) != 0; }

bool is_primary(const GaussInt& z) {
    // (z - 1) / (-2 + 2i) = ((x + y) + (x - y) i)(-1) / 4 with x = re - 1, y = im,
    // up to sign; both combinations must be divisible by 4.
    const __int128 x = static_cast<__int128>(z.re) - 1;
    const __int128 y = z.im;
    return ((x + y) % 4 == 0) && ((x - y) % 4 == 0);
}

bool divides(const GaussInt& d, const GaussInt& z) {
    if (d.is_zero()) throw std::invalid_argument("divides: zero divisor");
    const __int128 n = static_cast<__int128>(d.re) * d.re + static_cast<__int128>(d.im) * d.im;
    const __int128 x = static_cast<__int128>(z.re) * d.re + static_cast<__int128>(z.im) * d.im;
    const __int128 y = static_cast<__int128>(z.im) * d.re - static_cast<__int128>(z.re) * d.im;
    return x % n == 0 && y % n == 0;
}

GaussInt div_exact(const GaussInt& z, const GaussInt& d) {
    if (d.is_zero()) throw std::invalid_argument("div_exact: zero divisor");
    const __int128 n = static_cast<__int128>(d.re) * d.re + static_cast<__int128>(d.im) * d.im;
    const __int128 x = static_cast<__int128>(z.re) * d.re + static_cast<__int128>(z.im) * d.im;
    const __int128 y = static_cast<__int128>(z.im) * d.re - static_cast<__int128>(z.re) * d.im;
    if (x % n != 0 || y % n != 0)
        throw std::domain_error("div_exact: " + d.str() + " does not divide " + z.str());
    return {to_i64(x / n), to_i64(y / n)};
}

GaussInt div_round(const GaussInt& a, const GaussInt& b) {
    if (b.is_zero()) throw std::invalid_argument("div_round: zero divisor");
    const __int128 n = static_cast<__int128>(b.re) * b.re + static_cast<__int128>(b.im) * b.im;
    const __int128 x = static_cast<__int128>(a.re) * b.re + static_cast<__int128>(a.im) * b.im;
    const __int128 y = static_cast<__int128>(a.im) * b.re - static_cast<__int128>(a.re) * b.im;
    return {to_i64(round_div(x, n)), to_i64(round_div(y, n))};
}

GaussInt mod_round(const GaussInt& a, const GaussInt& b) { return a - b * div_round(a, b); }

GaussInt gcd(GaussInt a, GaussInt b) {
    while (!b.is_zero()) {
        GaussInt r = mod_round(a, b);
        a = b;
        b = r;
    }
    if (a.is_zero()) return a;
    if (is_odd(a)) return primary_part(a);
    return a;
}

GaussInt pow(GaussInt base, std::uint64_t exp) {
    GaussInt result{1, 0};
    while (exp > 0) {
        if (exp & 1) result = result * base;
        exp >>= 1;
        if (exp > 0) base = base * base;
    }
    return result;
}

bool norm_order_less(const GaussInt& a, const GaussInt& b) {
    const std::int64_t na = norm(a);
    const std::int64_t nb = norm(b);
    if (na != nb) return na < nb;
    if (a.re != b.re) return a.re < b.re;
    return a.im < b.im;
}

PrimaryDecomposition primary_decompose(const GaussInt& z) {
    require_odd_nonzero(z, "primary_decompose");
    // z = u * p  <=>  p = u^{-1} z; the inverse of kUnits[k] is kUnits[(4 - k) % 4].
    for (int k = 0; k < 4; ++k) {
        const GaussInt candidate = kUnits[(4 - k) % 4] * z;
        if (is_primary(candidate)) return {kUnits[k], candidate};
    }
    throw std::logic_error("primary_decompose: no primary associate for " + z.str());
}

GaussInt Factorization::product() const {
    GaussInt r = unit;
    for (const auto& pp : factors) r = r * pow(pp.prime, static_cast<std::uint64_t>(pp.exponent));
    return r;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // Deterministic for all 64-bit n with these bases.
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::vector<std::int64_t> primes_up_to(std::int64_t n) {
    std::vector<std::int64_t> out;
    if (n < 2) return out;
    std::vector<bool> composite(static_cast<std::size_t>(n) + 1, false);
    for (std::int64_t p = 2; p <= n; ++p) {
        if (composite[p]) continue;
        out.push_back(p);
        for (std::int64_t m = p * p; m <= n; m += p) composite[m] = true;
    }
    return out;
}

std::int64_t isqrt(std::int64_t n) {
    if (n < 0) throw std::domain_error("isqrt of negative");
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && static_cast<__int128>(r) * r > n) --r;
    while (static_cast<__int128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

std::vector<std::pair<std::int64_t, int>> factor_u64(std::int64_t n) {
    if (n < 1) throw std::invalid_argument("factor_u64: n must be positive");
    std::vector<std::pair<std::int64_t, int>> out;
    auto strip = [&](std::int64_t p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e > 0) out.emplace_back(p, e);
    };
    strip(2);
    strip(3);
    for (std::int64_t p = 5; p * p <= n; p += 6) {
        strip(p);
        strip(p + 2);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

std::int64_t sqrt_minus_one_mod(std::int64_t p) {
    if (p % 4 != 1 || !is_prime_u64(static_cast<std::uint64_t>(p)))
        throw std::invalid_argument("sqrt_minus_one_mod: p must be a prime == 1 mod 4");
    const auto up = static_cast<std::uint64_t>(p);
    for (std::uint64_t c = 2;; ++c) {
        if (powmod(c, (up - 1) / 2, up) == up - 1) return static_cast<std::int64_t>(powmod(c, (up - 1) / 4, up));
    }
}

std::pair<std::int64_t, std::int64_t> two_squares(std::int64_t p) {
    if (p == 2) return {1, 1};
    std::int64_t r = sqrt_minus_one_mod(p);
    if (r > p / 2) r = p - r;
    // Euclidean descent on (p, r): the first remainder below sqrt(p) is one of the squares.
    std::int64_t a = p;
    std::int64_t b = r;
    const std::int64_t limit = isqrt(p);
    while (b > limit) {
        const std::int64_t t = a % b;
        a = b;
        b = t;
    }
    const std::int64_t rest = p - b * b;
    const std::int64_t c = isqrt(rest);
    if (c * c != rest) throw std::logic_error("two_squares: descent failed");
    // Return the odd component first.
    return (b % 2 != 0) ? std::pair{b, c} : std::pair{c, b};
}

std::vector<GaussInt> primary_primes_over(std::int64_t p) {
    std::vector<GaussInt> out;
    if (p == 2) return out;
    if (p % 4 == 3) {
        out.push_back(primary_part(GaussInt{p, 0}));
    } else {
        auto [a, b] = two_squares(p);
        out.push_back(primary_part(GaussInt{a, b}));
        out.push_back(primary_part(GaussInt{a, -b}));
        std::sort(out.begin(), out.end(), norm_order_less);
    }
    return out;
}

Factorization factor(const GaussInt& z) {
    require_odd_nonzero(z, "factor");
    Factorization f;
    GaussInt rest = z;
    for (auto [p, e] : factor_u64(norm(z))) {
        if (p % 4 == 3) {
            if (e % 2 != 0) throw std::logic_error("factor: odd power of inert prime in norm");
            const GaussInt pi = primary_part(GaussInt{p, 0});
            f.factors.push_back({pi, e / 2});
            for (int k = 0; k < e / 2; ++k) rest = div_exact(rest, pi);
            continue;
        }
        for (const GaussInt& pi : primary_primes_over(p)) {
            int k = 0;
            while (k < e && divides(pi, rest)) {
                rest = div_exact(rest, pi);
                ++k;
            }
            if (k > 0) f.factors.push_back({pi, k});
        }
    }
    if (!is_unit(rest)) throw std::logic_error("factor: incomplete factorization of " + z.str());
    f.unit = rest;
    std::sort(f.factors.begin(), f.factors.end(),
              [](const PrimePower& a, const PrimePower& b) { return norm_order_less(a.prime, b.prime); });
    return f;
}

int mobius(const Factorization& f) {
    for (const auto& pp : f.factors)
        if (pp.exponent > 1) return 0;
    return (f.factors.size() % 2 == 0) ? 1 : -1;
}

int mobius(const GaussInt& z) { return mobius(factor(z)); }

std::int64_t euler_phi(const Factorization& f) {
    std::int64_t r = 1;
    for (const auto& pp : f.factors) {
        const std::int64_t np = norm(pp.prime);
        r = checked_mul(r, np - 1);
        for (int k = 1; k < pp.exponent; ++k) r = checked_mul(r, np);
    }
    return r;
}

std::int64_t euler_phi(const GaussInt& z) { return euler_phi(factor(z)); }

int omega(const Factorization& f) { return static_cast<int>(f.factors.size()); }

int omega(const GaussInt& z) { return omega(factor(z)); }

std::vector<GaussInt> primary_divisors(const Factorization& f) {
    std::vector<GaussInt> out{GaussInt{1, 0}};
    for (const auto& pp : f.factors) {
        const std::size_t base = out.size();
        GaussInt power{1, 0};
        for (int k = 1; k <= pp.exponent; ++k) {
            power = power * pp.prime;
            for (std::size_t j = 0; j < base; ++j) out.push_back(out[j] * power);
        }
    }
    std::sort(out.begin(), out.end(), norm_order_less);
    return out;
}

std::vector<GaussInt> primary_divisors(const GaussInt& q) {
    if (!is_odd(q) || !is_primary(q)) throw std::invalid_argument("primary_divisors: non-primary " + q.str());
    return primary_divisors(factor(q));
}

bool is_gaussian_prime(const GaussInt& z) {
    if (z.is_zero() || is_unit(z)) return false;
    const std::int64_t n = norm(z);
    if (is_prime_u64(static_cast<std::uint64_t>(n))) return true;
    const std::int64_t r = isqrt(n);
    return r * r == n && r % 4 == 3 && is_prime_u64(static_cast<std::uint64_t>(r));
}

// ---------------------------------------------------------------------------
// Enumerations

void for_each_primary(std::int64_t bound, const std::function<void(const GaussInt&)>& fn) {
    if (bound < 1) return;
    const std::int64_t r = isqrt(bound);
    // Primary: re odd, im even, re + im == 1 mod 4.
    for (std::int64_t b = -(r - (r & 1)); b <= r; b += 2) {
        const std::int64_t rest = bound - b * b;
        const std::int64_t amax = isqrt(rest);
        std::int64_t a = -amax;
        const std::int64_t want = ((1 - b) % 4 + 4) % 4;
        a += ((want - a) % 4 + 4) % 4;
        for (; a <= amax; a += 4) fn(GaussInt{a, b});
    }
}

std::vector<GaussInt> primary_up_to(std::int64_t bound) {
    std::vector<GaussInt> out;
    for_each_primary(bound, [&](const GaussInt& a) { out.push_back(a); });
    std::sort(out.begin(), out.end(), norm_order_less);
    return out;
}

std::vector<PrimaryPrimePower> primary_prime_powers_up_to(std::int64_t bound) {
    std::vector<PrimaryPrimePower> out;
    if (bound < 5) return out;
    for (std::int64_t p : primes_up_to(bound)) {
        if (p == 2) continue;
        if (p % 4 == 3 && p > bound / p) continue;
        for (const GaussInt& pi : primary_primes_over(p)) {
            const std::int64_t np = norm(pi);
            GaussInt power = pi;
            std::int64_t n = np;
            for (int k = 1;; ++k) {
                out.push_back({power, pi, k, n});
                if (n > bound / np) break;
                n *= np;
                power = power * pi;
            }
        }
    }
    std::sort(out.begin(), out.end(),
              [](const PrimaryPrimePower& a, const PrimaryPrimePower& b) { return norm_order_less(a.value, b.value); });
    return out;
}

}  // namespace hecke
