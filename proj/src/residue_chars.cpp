#include "hecke/residue_chars.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hecke {

namespace {

__int128 floor_div(__int128 a, __int128 b) {
    __int128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

__int128 floor_mod(__int128 a, __int128 b) { return a - b * floor_div(a, b); }

struct ExtGcd {
    std::int64_t g, x, y;  // g = x*a + y*b, g >= 0
};

ExtGcd ext_gcd(std::int64_t a, std::int64_t b) {
    std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        const std::int64_t q = old_r / r;
        std::int64_t tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
        tmp = old_t - q * t;
        old_t = t;
        t = tmp;
    }
    if (old_r < 0) return {-old_r, -old_s, -old_t};
    return {old_r, old_s, old_t};
}

std::int64_t ipow(std::int64_t b, int e) {
    std::int64_t r = 1;
    for (int k = 0; k < e; ++k) r *= b;
    return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// ResidueRing

ResidueRing::ResidueRing(GaussInt m) : m_(m) {
    if (m.is_zero()) throw std::invalid_argument("ResidueRing: zero modulus");
    n_ = hecke::norm(m);
    // Second coordinates of the lattice {u m + v i m} form g Z; the vector with second
    // coordinate g is u (a, b) + v (-b, a) with u b + v a = g.
    const ExtGcd e = ext_gcd(m.im, m.re);
    g_ = e.g;
    width_ = n_ / g_;
    const __int128 first = static_cast<__int128>(e.x) * m.re - static_cast<__int128>(e.y) * m.im;
    shift_ = static_cast<std::int64_t>(floor_mod(first, width_));
}

std::int64_t ResidueRing::index(const GaussInt& z) const {
    __int128 x = z.re;
    __int128 y = z.im;
    const __int128 k = floor_div(y, g_);
    y -= k * g_;
    x = floor_mod(x - k * shift_, width_);
    return static_cast<std::int64_t>(x + static_cast<__int128>(width_) * y);
}

GaussInt ResidueRing::element(std::int64_t idx) const { return {idx % width_, idx / width_}; }

GaussInt ResidueRing::canonical(const GaussInt& z) const {
    const GaussInt r = mod_round(z, m_);
    GaussInt best = r;
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
        for (std::int64_t dy = -1; dy <= 1; ++dy) {
            const GaussInt c = r + m_ * GaussInt{dx, dy};
            if (norm_order_less(c, best)) best = c;
        }
    }
    return best;
}

std::int64_t ResidueRing::mul(std::int64_t a, std::int64_t b) const { return index(element(a) * element(b)); }

std::int64_t ResidueRing::pow(std::int64_t a, std::uint64_t e) const {
    std::int64_t r = index(GaussInt{1, 0});
    while (e > 0) {
        if (e & 1) r = mul(r, a);
        e >>= 1;
        if (e > 0) a = mul(a, a);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Modulus

std::shared_ptr<const Modulus> Modulus::build(const GaussInt& q, std::int64_t max_norm) {
    if (q.is_zero() || !is_odd(q)) throw std::invalid_argument("Modulus: q must be odd, got " + q.str());
    if (!is_primary(q)) throw std::invalid_argument("Modulus: q must be primary, got " + q.str());
    if (hecke::norm(q) > max_norm)
        throw std::invalid_argument("Modulus: N(q) = " + std::to_string(hecke::norm(q)) + " exceeds bound " +
                                    std::to_string(max_norm));
    return std::shared_ptr<const Modulus>(new Modulus(q, factor(q)));
}

Modulus::Modulus(const GaussInt& q, Factorization f) : q_(q), factorization_(std::move(f)), ring_(q) {
    const std::int64_t n = ring_.size();
    unit_pos_.assign(static_cast<std::size_t>(n), -1);
    std::vector<std::int64_t> unit_list;
    for (std::int64_t idx = 0; idx < n; ++idx) {
        const GaussInt x = ring_.element(idx);
        bool unit = true;
        for (const auto& pp : factorization_.factors) {
            if (divides(pp.prime, x)) {
                unit = false;
                break;
            }
        }
        if (unit) {
            unit_pos_[static_cast<std::size_t>(idx)] = 0;
            unit_list.push_back(idx);
        }
    }
    if (static_cast<std::int64_t>(unit_list.size()) != euler_phi(factorization_))
        throw std::logic_error("Modulus: unit count disagrees with phi(q)");
    units_ = std::move(unit_list);
    one_ = ring_.index(GaussInt{1, 0});
    minus_one_ = ring_.index(GaussInt{-1, 0});

    decompose();
    build_kernels();

    for (const GaussInt& d : primary_divisors(factorization_)) {
        const Factorization cof = factor(div_exact(q_, d));
        divisor_terms_.push_back({d, mobius(cof), euler_phi(factor(d))});
    }
}

void Modulus::decompose() {
    const std::int64_t phi = static_cast<std::int64_t>(units_.size());
    const auto n = static_cast<std::size_t>(ring_.size());

    // Basis of each l-primary component, built so that every new generator has maximal
    // order modulo the subgroup spanned so far and meets it trivially.
    std::vector<std::vector<std::pair<std::int64_t, std::int64_t>>> primary_parts;  // (generator, order)
    for (auto [ell, v] : factor_u64(phi)) {
        const std::int64_t part_order = ipow(ell, v);
        const std::int64_t cofactor = phi / part_order;

        std::vector<char> seen(n, 0);
        std::vector<std::int64_t> part;
        for (std::int64_t u : units_) {
            const std::int64_t s = ring_.pow(u, static_cast<std::uint64_t>(cofactor));
            if (!seen[static_cast<std::size_t>(s)]) {
                seen[static_cast<std::size_t>(s)] = 1;
                part.push_back(s);
            }
        }
        std::sort(part.begin(), part.end());
        if (static_cast<std::int64_t>(part.size()) != part_order)
            throw std::logic_error("Modulus: primary component has wrong size");

        std::vector<std::int32_t> pos(n, -1);  // residue -> position in span
        std::vector<std::int64_t> span{one_};
        std::vector<std::vector<std::int64_t>> span_exps{{}};
        pos[static_cast<std::size_t>(one_)] = 0;
        std::vector<std::pair<std::int64_t, std::int64_t>> gens;

        while (static_cast<std::int64_t>(span.size()) < part_order) {
            std::int64_t best = -1;
            int best_depth = 0;
            for (std::int64_t s : part) {
                if (pos[static_cast<std::size_t>(s)] >= 0) continue;
                int depth = 0;
                std::int64_t t = s;
                while (pos[static_cast<std::size_t>(t)] < 0) {
                    t = ring_.pow(t, static_cast<std::uint64_t>(ell));
                    ++depth;
                }
                if (depth > best_depth) {
                    best_depth = depth;
                    best = s;
                }
            }
            const std::int64_t quotient_order = ipow(ell, best_depth);
            const std::int64_t h = ring_.pow(best, static_cast<std::uint64_t>(quotient_order));
            const auto& c = span_exps[static_cast<std::size_t>(pos[static_cast<std::size_t>(h)])];
            std::int64_t g = best;
            for (std::size_t i = 0; i < gens.size(); ++i) {
                if (c[i] % quotient_order != 0) throw std::logic_error("Modulus: basis correction not divisible");
                const std::int64_t corr = (gens[i].second - c[i] / quotient_order) % gens[i].second;
                g = ring_.mul(g, ring_.pow(gens[i].first, static_cast<std::uint64_t>(corr)));
            }
            // Extend the span by the cyclic group <g>, which meets it trivially.
            const std::size_t old_size = span.size();
            std::int64_t gj = one_;
            for (std::int64_t j = 1; j < quotient_order; ++j) {
                gj = ring_.mul(gj, g);
                for (std::size_t k = 0; k < old_size; ++k) {
                    const std::int64_t e = ring_.mul(span[k], gj);
                    if (pos[static_cast<std::size_t>(e)] >= 0) throw std::logic_error("Modulus: span not direct");
                    pos[static_cast<std::size_t>(e)] = static_cast<std::int32_t>(span.size());
                    span.push_back(e);
                    auto exps = span_exps[k];
                    exps.push_back(j);
                    span_exps.push_back(std::move(exps));
                }
            }
            for (std::size_t k = 0; k < old_size; ++k) span_exps[k].push_back(0);
            gens.emplace_back(g, quotient_order);
        }
        std::sort(gens.begin(), gens.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        primary_parts.push_back(std::move(gens));
    }

    // Invariant factors: the k-th generator is the product of the k-th largest generator of
    // every primary component.
    std::size_t rank = 0;
    for (const auto& p : primary_parts) rank = std::max(rank, p.size());
    for (std::size_t k = 0; k < rank; ++k) {
        std::int64_t g = one_;
        std::int64_t order = 1;
        for (const auto& p : primary_parts) {
            if (k < p.size()) {
                g = ring_.mul(g, p[k].first);
                order *= p[k].second;
            }
        }
        basis_.generators.push_back(g);
        basis_.orders.push_back(order);
    }
    exponent_ = basis_.orders.empty() ? 1 : basis_.orders.front();

    // Fill the discrete-log table by walking exponent vectors in mixed-radix order.
    std::vector<std::int64_t> ordered;
    ordered.reserve(static_cast<std::size_t>(phi));
    dlog_.assign(static_cast<std::size_t>(phi) * rank, 0);
    std::fill(unit_pos_.begin(), unit_pos_.end(), -1);
    std::vector<std::int64_t> digits(rank, 0);
    std::vector<std::int64_t> prefix(rank + 1, one_);  // prefix[j] = prod_{i<j} g_i^{d_i}
    for (std::int64_t p = 0; p < phi; ++p) {
        const std::int64_t x = prefix[rank];
        if (unit_pos_[static_cast<std::size_t>(x)] >= 0) throw std::logic_error("Modulus: basis is not a bijection");
        unit_pos_[static_cast<std::size_t>(x)] = static_cast<std::int32_t>(p);
        ordered.push_back(x);
        for (std::size_t j = 0; j < rank; ++j) dlog_[static_cast<std::size_t>(p) * rank + j] = static_cast<std::int32_t>(digits[j]);
        for (std::size_t j = rank; j-- > 0;) {
            if (++digits[j] < basis_.orders[j]) {
                prefix[j + 1] = ring_.mul(prefix[j + 1], basis_.generators[j]);
                for (std::size_t k = j + 2; k <= rank; ++k) prefix[k] = prefix[j + 1];
                break;
            }
            digits[j] = 0;
        }
    }
    units_ = std::move(ordered);

    const auto m = static_cast<std::size_t>(exponent_);
    roots_.assign(m, {1.0, 0.0});
    for (std::size_t k = 1; k < m; ++k) {
        if (2 * k > m) {
            roots_[k] = std::conj(roots_[m - k]);
            continue;
        }
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
        roots_[k] = {std::cos(angle), std::sin(angle)};
    }
}

void Modulus::build_kernels() {
    const auto n = static_cast<std::size_t>(ring_.size());
    for (const auto& pp : factorization_.factors) {
        const GaussInt cofactor = div_exact(q_, pp.prime);
        const ResidueRing local(pp.prime);
        std::vector<char> in_span(n, 0);
        std::vector<std::int64_t> span{one_};
        in_span[static_cast<std::size_t>(one_)] = 1;
        std::vector<std::int64_t> gens;
        for (std::int64_t t = 0; t < local.size(); ++t) {
            const std::int64_t x = ring_.index(GaussInt{1, 0} + cofactor * local.element(t));
            if (!is_unit_index(x) || in_span[static_cast<std::size_t>(x)]) continue;
            gens.push_back(x);
            std::vector<std::int64_t> powers;
            for (std::int64_t p = x; !in_span[static_cast<std::size_t>(p)]; p = ring_.mul(p, x)) powers.push_back(p);
            const std::size_t old_size = span.size();
            for (std::int64_t p : powers) {
                for (std::size_t k = 0; k < old_size; ++k) {
                    const std::int64_t e = ring_.mul(span[k], p);
                    in_span[static_cast<std::size_t>(e)] = 1;
                    span.push_back(e);
                }
            }
        }
        kernel_generators_.push_back(std::move(gens));
    }
}

std::span<const std::int32_t> Modulus::dlog(std::int64_t idx) const {
    const std::int32_t p = unit_pos_[static_cast<std::size_t>(idx)];
    if (p < 0) throw std::invalid_argument("Modulus::dlog: residue is not a unit");
    return {dlog_.data() + static_cast<std::size_t>(p) * rank(), rank()};
}

// ---------------------------------------------------------------------------
// Character

Character::Character(ModulusPtr modulus, std::vector<std::int64_t> exponents)
    : modulus_(std::move(modulus)), exponents_(std::move(exponents)) {
    const auto& orders = modulus_->basis().orders;
    if (exponents_.size() != orders.size()) throw std::invalid_argument("Character: exponent vector has wrong length");
    const std::int64_t m = modulus_->exponent();
    steps_.resize(orders.size());
    index_ = 0;
    for (std::size_t j = 0; j < orders.size(); ++j) {
        exponents_[j] = ((exponents_[j] % orders[j]) + orders[j]) % orders[j];
        steps_[j] = (exponents_[j] * (m / orders[j])) % m;
        index_ = index_ * orders[j] + exponents_[j];
    }
    odd_ = phase(modulus_->minus_one_index()) != 0;
    primitive_ = true;
    for (const auto& gens : modulus_->kernel_generators()) {
        bool nontrivial = false;
        for (std::int64_t g : gens) {
            if (phase(g) != 0) {
                nontrivial = true;
                break;
            }
        }
        if (!nontrivial) {
            primitive_ = false;
            break;
        }
    }
}

bool Character::is_trivial() const {
    return std::all_of(exponents_.begin(), exponents_.end(), [](std::int64_t e) { return e == 0; });
}

std::int64_t Character::phase(std::int64_t residue_index) const {
    const auto d = modulus_->dlog(residue_index);
    const std::int64_t m = modulus_->exponent();
    std::int64_t k = 0;
    for (std::size_t j = 0; j < d.size(); ++j) k = (k + d[j] * steps_[j]) % m;
    return k;
}

std::complex<double> Character::at_index(std::int64_t residue_index) const {
    if (!modulus_->is_unit_index(residue_index)) return {0.0, 0.0};
    return modulus_->root(phase(residue_index));
}

std::complex<double> Character::operator()(const GaussInt& n) const { return at_index(modulus_->index(n)); }

Character Character::conj() const {
    std::vector<std::int64_t> e(exponents_.size());
    for (std::size_t j = 0; j < e.size(); ++j) e[j] = -exponents_[j];
    return Character(modulus_, std::move(e));
}

void Character::for_each_unit_phase(const std::function<void(std::int64_t, std::int64_t)>& fn) const {
    const auto& units = modulus_->units();
    const auto& orders = modulus_->basis().orders;
    const std::int64_t m = modulus_->exponent();
    const std::size_t rank = orders.size();
    std::vector<std::int64_t> digits(rank, 0);
    std::int64_t k = 0;
    for (std::int64_t u : units) {
        fn(u, k);
        // Wrapping digit j adds o_j * step_j == 0 mod M in total, so carries need no correction.
        for (std::size_t j = rank; j-- > 0;) {
            k += steps_[j];
            if (k >= m) k -= m;
            if (++digits[j] < orders[j]) break;
            digits[j] = 0;
        }
    }
}

void Character::unit_phases(std::vector<std::int64_t>& out) const {
    out.resize(modulus_->units().size());
    const auto& orders = modulus_->basis().orders;
    const std::int64_t m = modulus_->exponent();
    const std::size_t rank = orders.size();
    if (rank == 1) {
        const std::int64_t step = steps_[0];
        std::int64_t k = 0;
        for (auto& o : out) {
            o = k;
            k += step;
            if (k >= m) k -= m;
        }
        return;
    }
    std::vector<std::int64_t> digits(rank, 0);
    std::int64_t k = 0;
    for (auto& o : out) {
        o = k;
        for (std::size_t j = rank; j-- > 0;) {
            k += steps_[j];
            if (k >= m) k -= m;
            if (++digits[j] < orders[j]) break;
            digits[j] = 0;
        }
    }
}

void for_each_character(const ModulusPtr& modulus, CharacterFilter filter,
                        const std::function<void(const Character&)>& fn) {
    const auto& orders = modulus->basis().orders;
    const std::size_t rank = orders.size();
    std::vector<std::int64_t> e(rank, 0);
    const std::int64_t total = modulus->phi();
    for (std::int64_t c = 0; c < total; ++c) {
        Character chi(modulus, e);
        if ((!filter.odd_only || chi.is_odd()) && (!filter.primitive_only || chi.is_primitive())) fn(chi);
        for (std::size_t j = rank; j-- > 0;) {
            if (++e[j] < orders[j]) break;
            e[j] = 0;
        }
    }
}

std::vector<Character> characters(const ModulusPtr& modulus, CharacterFilter filter) {
    std::vector<Character> out;
    for_each_character(modulus, filter, [&](const Character& chi) { out.push_back(chi); });
    return out;
}

// ---------------------------------------------------------------------------
// Counting and orthogonality

std::int64_t psi(const Factorization& f) {
    std::int64_t r = 1;
    for (const auto& pp : f.factors) {
        const std::int64_t np = norm(pp.prime);
        if (pp.exponent == 1) {
            r *= np - 2;
        } else {
            r *= ipow(np, pp.exponent - 2) * (np - 1) * (np - 1);
        }
    }
    return r;
}

std::int64_t psi(const GaussInt& q) { return psi(factor(q)); }

std::int64_t psi_star(const Factorization& f) { return (psi(f) - mobius(f)) / 2; }

std::int64_t psi_star(const GaussInt& q) { return psi_star(factor(q)); }

namespace {

double orthogonality_rhs_terms(const std::vector<DivisorTerm>& terms, const Factorization& f, const GaussInt& n,
                               const GaussInt& m, int sign) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("orthogonality_rhs: sign must be +1 or -1");
    for (const auto& pp : f.factors) {
        if (divides(pp.prime, n) || divides(pp.prime, m))
            throw std::invalid_argument("orthogonality_rhs: n and m must be coprime to q");
    }
    std::int64_t same = 0;
    std::int64_t opposite = 0;
    const GaussInt diff = n - m;
    const GaussInt sum = n + m;
    for (const auto& t : terms) {
        if (divides(t.d, diff)) same += t.mobius_cofactor * t.phi;
        if (divides(t.d, sum)) opposite += t.mobius_cofactor * t.phi;
    }
    return 0.5 * static_cast<double>(same) + 0.5 * sign * static_cast<double>(opposite);
}

}  // namespace

double orthogonality_rhs(const Modulus& modulus, const GaussInt& n, const GaussInt& m, int sign) {
    return orthogonality_rhs_terms(modulus.divisor_terms(), modulus.factorization(), n, m, sign);
}

double orthogonality_rhs(const GaussInt& q, const GaussInt& n, const GaussInt& m, int sign) {
    if (!is_odd(q) || !is_primary(q)) throw std::invalid_argument("orthogonality_rhs: q must be odd and primary");
    const Factorization f = factor(q);
    std::vector<DivisorTerm> terms;
    for (const GaussInt& d : primary_divisors(f)) terms.push_back({d, mobius(factor(div_exact(q, d))), euler_phi(factor(d))});
    return orthogonality_rhs_terms(terms, f, n, m, sign);
}

std::complex<double> orthogonality_direct(const ModulusPtr& modulus, const GaussInt& n, const GaussInt& m,
                                          int sign) {
    const std::int64_t in = modulus->index(n);
    const std::int64_t im = modulus->index(m);
    std::complex<double> total{0.0, 0.0};
    for_each_character(modulus, {.odd_only = false, .primitive_only = true}, [&](const Character& chi) {
        if (chi.is_odd() != (sign == -1)) return;
        total += chi.at_index(in) * std::conj(chi.at_index(im));
    });
    return total;
}

}  // namespace hecke
