#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "hecke/residue_chars.hpp"

using namespace hecke;

namespace {

const std::vector<GaussInt> kSample{GaussInt{-3, 0}, GaussInt{-1, 2}, GaussInt{3, 2}, GaussInt{9, 0},
                                    GaussInt{-3, 0} * GaussInt{-1, 2}, GaussInt{-1, 2} * GaussInt{-1, 2},
                                    GaussInt{-1, 2} * GaussInt{-1, -2}, GaussInt{5, 4}, GaussInt{-7, 0}};

// Order of a unit residue by repeated multiplication.
std::int64_t brute_order(const ResidueRing& ring, std::int64_t idx, std::int64_t one) {
    std::int64_t x = idx, k = 1;
    while (x != one) {
        x = ring.mul(x, idx);
        ++k;
    }
    return k;
}

}  // namespace

TEST_CASE("residue ring index round trip") {
    for (const GaussInt& q : kSample) {
        const ResidueRing ring(q);
        CHECK(ring.size() == norm(q));
        std::set<std::int64_t> seen;
        for (std::int64_t idx = 0; idx < ring.size(); ++idx) {
            const GaussInt e = ring.element(idx);
            CHECK(ring.index(e) == idx);
            CHECK(ring.index(e + q * GaussInt{2, -3}) == idx);
            const GaussInt c = ring.canonical(e);
            CHECK(divides(q, c - e));
            CHECK(2 * norm(c) <= norm(q));
            seen.insert(idx);
        }
        CHECK(static_cast<std::int64_t>(seen.size()) == ring.size());
    }
}

TEST_CASE("unit group of (3) is cyclic of order 8") {
    const auto m = Modulus::build(GaussInt{-3, 0});
    CHECK(m->phi() == 8);
    REQUIRE(m->rank() == 1);
    CHECK(m->basis().orders[0] == 8);
    CHECK(brute_order(m->ring(), m->basis().generators[0], m->one_index()) == 8);
}

TEST_CASE("unit group decomposition") {
    for (const GaussInt& q : kSample) {
        const auto m = Modulus::build(q);
        CHECK(m->phi() == euler_phi(q));
        std::int64_t prod = 1;
        for (std::size_t j = 0; j < m->rank(); ++j) {
            prod *= m->basis().orders[j];
            CHECK(brute_order(m->ring(), m->basis().generators[j], m->one_index()) == m->basis().orders[j]);
            if (j > 0) CHECK(m->basis().orders[j - 1] % m->basis().orders[j] == 0);
        }
        CHECK(prod == m->phi());
        // dlog reproduces every unit from the generators
        for (std::int64_t idx : m->units()) {
            const auto e = m->dlog(idx);
            std::int64_t x = m->one_index();
            for (std::size_t j = 0; j < m->rank(); ++j)
                x = m->ring().mul(x, m->ring().pow(m->basis().generators[j], static_cast<std::uint64_t>(e[j])));
            CHECK(x == idx);
        }
        // units are exactly the residues coprime to q
        std::int64_t coprime = 0;
        for (std::int64_t idx = 0; idx < m->ring().size(); ++idx) {
            const bool unit = is_unit(gcd(m->ring().element(idx), q));
            coprime += unit;
            CHECK(m->is_unit_index(idx) == unit);
        }
        CHECK(coprime == m->phi());
        CHECK(m->minus_one_index() == m->index(GaussInt{-1, 0}));
    }
}

TEST_CASE("characters are homomorphisms") {
    std::mt19937_64 rng(5);
    for (const GaussInt& q : kSample) {
        const auto m = Modulus::build(q);
        const auto& units = m->units();
        std::uniform_int_distribution<std::size_t> pick(0, units.size() - 1);
        for (const auto& chi : characters(m)) {
            for (int k = 0; k < 20; ++k) {
                const auto a = units[pick(rng)], b = units[pick(rng)];
                CHECK(std::abs(chi.at_index(m->ring().mul(a, b)) - chi.at_index(a) * chi.at_index(b)) < 1e-12);
            }
            CHECK(std::abs(chi.at_index(m->one_index()) - 1.0) < 1e-15);
            CHECK(std::abs(chi(GaussInt{1, 0} + q)) > 0.5);
        }
        CHECK(static_cast<std::int64_t>(characters(m).size()) == m->phi());
    }
}

TEST_CASE("parity and primitivity agree with a brute scan") {
    for (const GaussInt& q : kSample) {
        const auto m = Modulus::build(q);
        for (const auto& chi : characters(m)) {
            const bool odd = std::abs(chi.at_index(m->minus_one_index()) + 1.0) < 1e-9;
            CHECK(chi.is_odd() == odd);
            // imprimitive iff chi factors through some q/p: constant on classes mod q/p
            bool primitive = true;
            for (const auto& pp : m->factorization().factors) {
                const GaussInt qp = div_exact(q, pp.prime);
                std::map<std::int64_t, std::int64_t> phase_by_class;
                const ResidueRing small(qp);
                bool factors_through = true;
                for (std::int64_t idx : m->units()) {
                    const std::int64_t cls = small.index(m->ring().element(idx));
                    const auto [it, fresh] = phase_by_class.emplace(cls, chi.phase(idx));
                    if (!fresh && it->second != chi.phase(idx)) {
                        factors_through = false;
                        break;
                    }
                }
                if (factors_through) primitive = false;
            }
            CHECK(chi.is_primitive() == primitive);
        }
    }
}

TEST_CASE("psi and psi* count primitive characters") {
    for (const GaussInt& q : kSample) {
        const auto m = Modulus::build(q);
        std::int64_t prim = 0, prim_odd = 0;
        for (const auto& chi : characters(m)) {
            prim += chi.is_primitive();
            prim_odd += chi.is_primitive() && chi.is_odd();
        }
        CHECK(psi(q) == prim);
        CHECK(psi_star(q) == prim_odd);
        CHECK(static_cast<std::int64_t>(characters(m, {.odd_only = true, .primitive_only = true}).size()) == prim_odd);
    }
}

TEST_CASE("conjugate characters") {
    const auto m = Modulus::build(GaussInt{5, 4});
    for (const auto& chi : characters(m, {.odd_only = true, .primitive_only = true})) {
        const Character c = chi.conj();
        CHECK(c.is_odd());
        CHECK(c.is_primitive());
        for (std::int64_t idx : m->units()) CHECK(std::abs(c.at_index(idx) - std::conj(chi.at_index(idx))) < 1e-12);
    }
}

TEST_CASE("orthogonality relation") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::int64_t> coord(-60, 60);
    for (const GaussInt& q : kSample) {
        const auto m = Modulus::build(q);
        for (int k = 0; k < 15; ++k) {
            GaussInt n{coord(rng), coord(rng)}, mm{coord(rng), coord(rng)};
            if (n.is_zero() || mm.is_zero() || !is_unit(gcd(n * mm, q))) continue;
            for (int sign : {-1, 1}) {
                const auto direct = orthogonality_direct(m, n, mm, sign);
                CHECK(std::abs(direct - orthogonality_rhs(*m, n, mm, sign)) < 1e-9);
                CHECK(std::abs(direct - orthogonality_rhs(q, n, mm, sign)) < 1e-9);
            }
        }
    }
    CHECK_THROWS(orthogonality_rhs(GaussInt{-3, 0}, GaussInt{3, 0}, GaussInt{1, 0}, 1));
}

TEST_CASE("modulus bound") {
    CHECK_THROWS(Modulus::build(GaussInt{401, 0}, 1000));
    CHECK_THROWS(Modulus::build(GaussInt{2, 1}));  // odd but not primary
}
