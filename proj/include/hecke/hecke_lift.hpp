#pragma once

// The Hecke character attached to a primitive odd character chi mod q:
//   chi~(n) = chi(n0),  n = u n0 with u a unit and n0 primary,
// a character mod (1+i)^3 q that is trivial on units. Also its Gauss sum and the
// von Mangoldt function of Z[i].

#include <complex>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <vector>

#include "hecke/residue_chars.hpp"

namespace hecke {

/// chi(n0) for odd n coprime to q; zero otherwise. Accepts any character (no parity check).
std::complex<double> lifted_value(const Character& chi, const GaussInt& n);

/// Character-independent weights of the Gauss sum over (Z[i]/(1+i)^3 q)^*.
///
/// Every unit x mod (1+i)^3 q is u (q + r (1 - q)) for a unit u and a unit residue r mod q,
/// and chi~(x) = chi(r). Hence g(chi~) = sum_r chi(r) G(r) with
///   G(r) = sum_u e(Im(u (q + r (1 - q)) / ((1+i)^3 q))).
class GaussSumTable {
public:
    explicit GaussSumTable(ModulusPtr modulus);

    const Modulus& modulus() const { return *modulus_; }
    /// G(r) for the units of the modulus in dlog order.
    const std::vector<std::complex<double>>& weights() const { return weights_; }

    std::complex<double> gauss_sum(const Character& chi) const;

private:
    ModulusPtr modulus_;
    std::vector<std::complex<double>> weights_;
};

class HeckeCharacter {
public:
    /// Requires chi primitive and odd; computes the Gauss sum.
    static HeckeCharacter lift(const Character& chi);
    /// As above with a precomputed Gauss sum (from GaussSumTable or the cache).
    static HeckeCharacter lift(const Character& chi, std::complex<double> gauss_sum);

    const Character& base() const { return base_; }
    const Modulus& modulus() const { return base_.modulus(); }
    std::complex<double> gauss_sum() const { return gauss_sum_; }
    /// N((1+i)^3 q) = 8 N(q).
    std::int64_t conductor_norm() const { return 8 * base_.modulus().norm(); }

    std::complex<double> operator()(const GaussInt& n) const { return lifted_value(base_, n); }

    /// The lift of conj(chi); its Gauss sum is conj(g(chi~)).
    HeckeCharacter conj() const;

private:
    HeckeCharacter(Character base, std::complex<double> g) : base_(std::move(base)), gauss_sum_(g) {}

    Character base_;
    std::complex<double> gauss_sum_;
};

/// Additive character e(tr(z / 2i)) in its literal form.
std::complex<double> additive_character_trace(std::complex<double> z);

/// The Gauss sum by direct summation over all residues mod (1+i)^3 q, using the literal trace form of
/// the additive character. Quadratic in N(q); a reference for small moduli.
std::complex<double> gauss_sum_direct(const Character& chi);

/// Largest |e(tr(z/2i)) - e(Im z)| over `samples` pseudo-random z.
double trace_identity_deviation(std::uint64_t seed, int samples = 10000);

/// log N(p) when (n) is a power of the prime ideal (p), else 0. n odd and nonzero.
double lambda_K(const GaussInt& n);

/// Checks by direct kernel scans that chi~ is primitive mod (1+i)^3 q: non-trivial on the kernel of
/// reduction to (1+i)^3 q/p for every prime p | q, and to (1+i)^2 q. The character is lifted without a
/// parity check so even characters can be scanned too.
bool verify_lift_primitive(const Character& chi, std::int64_t max_norm = 500);

/// On-disk Gauss-sum cache: one JSON document per modulus,
///   {"q": [re, im], "characters": [{"exponents": [...], "gauss_sum": [re, im]}]}.
/// Unreadable or mismatching documents count as misses.
class GaussSumCache {
public:
    struct Entry {
        std::vector<std::int64_t> exponents;
        std::complex<double> gauss_sum;
    };

    explicit GaussSumCache(std::filesystem::path dir);

    const std::filesystem::path& dir() const { return dir_; }
    std::filesystem::path file_for(const GaussInt& q) const;

    std::optional<std::vector<Entry>> load(const GaussInt& q) const;
    void store(const GaussInt& q, const std::vector<Entry>& entries) const;

private:
    std::filesystem::path dir_;
    mutable std::mutex mutex_;
};

/// Lifts of the given primitive odd characters, Gauss sums read from the cache when it holds every
/// requested character and computed (then stored) otherwise. cache may be null.
std::vector<HeckeCharacter> lift_family(const ModulusPtr& modulus, const std::vector<Character>& chars,
                                        const GaussSumCache* cache);

}  // namespace hecke
