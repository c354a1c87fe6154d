#include "hecke/hecke_lift.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>

#include "json.hpp"

namespace hecke {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool coprime_to(const Modulus& m, const GaussInt& n) {
    for (const auto& pp : m.factorization().factors)
        if (divides(pp.prime, n)) return false;
    return true;
}

}  // namespace

std::complex<double> lifted_value(const Character& chi, const GaussInt& n) {
    if (n.is_zero() || !is_odd(n)) return {0.0, 0.0};
    const Modulus& m = chi.modulus();
    if (!coprime_to(m, n)) return {0.0, 0.0};
    return chi.at_index(m.index(primary_part(n)));
}

// ---------------------------------------------------------------------------

GaussSumTable::GaussSumTable(ModulusPtr modulus) : modulus_(std::move(modulus)) {
    const Modulus& m = *modulus_;
    const GaussInt q = m.q();
    const GaussInt big = kOnePlusICubed * q;
    const GaussInt big_conj = big.conj();
    const std::int64_t period = 8 * m.norm();
    const GaussInt one_minus_q = GaussInt{1, 0} - q;
    weights_.reserve(m.units().size());
    for (std::int64_t r : m.units()) {
        const GaussInt y = q + m.ring().element(r) * one_minus_q;
        std::complex<double> acc{0.0, 0.0};
        for (const GaussInt& u : kUnits) {
            // Im(x / big) = Im(x * conj(big)) / N(big), and only its class mod 1 matters.
            const GaussInt x = u * y;
            const __int128 t = static_cast<__int128>(x.im) * big_conj.re + static_cast<__int128>(x.re) * big_conj.im;
            std::int64_t k = static_cast<std::int64_t>(t % period);
            if (k < 0) k += period;
            const double angle = kTwoPi * static_cast<double>(k) / static_cast<double>(period);
            acc += std::complex<double>{std::cos(angle), std::sin(angle)};
        }
        weights_.push_back(acc);
    }
}

std::complex<double> GaussSumTable::gauss_sum(const Character& chi) const {
    if (chi.modulus_ptr() != modulus_ && chi.modulus().q() != modulus_->q())
        throw std::invalid_argument("GaussSumTable: character belongs to another modulus");
    std::vector<std::int64_t> phases;
    chi.unit_phases(phases);
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t p = 0; p < phases.size(); ++p) acc += modulus_->root(phases[p]) * weights_[p];
    return acc;
}

// ---------------------------------------------------------------------------

HeckeCharacter HeckeCharacter::lift(const Character& chi) {
    const GaussSumTable table(chi.modulus_ptr());
    return lift(chi, table.gauss_sum(chi));
}

HeckeCharacter HeckeCharacter::lift(const Character& chi, std::complex<double> gauss_sum) {
    if (!chi.is_primitive()) throw std::invalid_argument("HeckeCharacter::lift: character is not primitive");
    if (!chi.is_odd()) throw std::invalid_argument("HeckeCharacter::lift: character is even (chi(-1) = 1)");
    return HeckeCharacter(chi, gauss_sum);
}

HeckeCharacter HeckeCharacter::conj() const { return HeckeCharacter(base_.conj(), std::conj(gauss_sum_)); }

// ---------------------------------------------------------------------------

std::complex<double> additive_character_trace(std::complex<double> z) {
    const std::complex<double> w = z / std::complex<double>{0.0, 2.0};
    const double trace = 2.0 * w.real();
    return std::polar(1.0, kTwoPi * trace);
}

std::complex<double> gauss_sum_direct(const Character& chi) {
    const Modulus& m = chi.modulus();
    const GaussInt big = kOnePlusICubed * m.q();
    const ResidueRing ring(big);
    const double big_norm = static_cast<double>(norm(big));
    std::complex<double> acc{0.0, 0.0};
    for (std::int64_t idx = 0; idx < ring.size(); ++idx) {
        const GaussInt x = ring.element(idx);
        const std::complex<double> v = lifted_value(chi, x);
        if (v == std::complex<double>{0.0, 0.0}) continue;
        const GaussInt num = x * big.conj();
        const std::complex<double> z{static_cast<double>(num.re) / big_norm, static_cast<double>(num.im) / big_norm};
        acc += v * additive_character_trace(z);
    }
    return acc;
}

double trace_identity_deviation(std::uint64_t seed, int samples) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-50.0, 50.0);
    double worst = 0.0;
    for (int k = 0; k < samples; ++k) {
        const std::complex<double> z{dist(rng), dist(rng)};
        const std::complex<double> reduced = std::polar(1.0, kTwoPi * z.imag());
        worst = std::max(worst, std::abs(additive_character_trace(z) - reduced));
    }
    return worst;
}

double lambda_K(const GaussInt& n) {
    if (n.is_zero() || !is_odd(n)) throw std::invalid_argument("lambda_K: n must be odd and nonzero");
    if (is_unit(n)) return 0.0;
    const Factorization f = factor(n);
    if (f.factors.size() != 1) return 0.0;
    return std::log(static_cast<double>(norm(f.factors.front().prime)));
}

bool verify_lift_primitive(const Character& chi, std::int64_t max_norm) {
    const Modulus& m = chi.modulus();
    if (m.norm() > max_norm)
        throw std::invalid_argument("verify_lift_primitive: N(q) exceeds the scan bound " + std::to_string(max_norm));
    const GaussInt q = m.q();
    const ResidueRing ring(kOnePlusICubed * q);

    std::vector<GaussInt> targets;
    for (const auto& pp : m.factorization().factors) targets.push_back(kOnePlusICubed * div_exact(q, pp.prime));
    targets.push_back(GaussInt{0, 2} * q);  // (1+i)^2 q

    for (const GaussInt& target : targets) {
        bool nontrivial = false;
        for (std::int64_t idx = 0; idx < ring.size() && !nontrivial; ++idx) {
            const GaussInt x = ring.element(idx);
            if (!divides(target, x - GaussInt{1, 0})) continue;
            const std::complex<double> v = lifted_value(chi, x);
            if (std::abs(v) < 0.5) continue;  // not a unit mod (1+i)^3 q
            if (std::abs(v - 1.0) > 1e-9) nontrivial = true;
        }
        if (!nontrivial) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------

GaussSumCache::GaussSumCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path GaussSumCache::file_for(const GaussInt& q) const {
    return dir_ / ("gauss_" + std::to_string(q.re) + "_" + std::to_string(q.im) + ".json");
}

std::optional<std::vector<GaussSumCache::Entry>> GaussSumCache::load(const GaussInt& q) const {
    std::lock_guard lock(mutex_);
    std::ifstream in(file_for(q));
    if (!in) return std::nullopt;
    try {
        const nlohmann::json doc = nlohmann::json::parse(in);
        const auto& qv = doc.at("q");
        if (!qv.is_array() || qv.size() != 2 || qv[0].get<std::int64_t>() != q.re || qv[1].get<std::int64_t>() != q.im)
            return std::nullopt;
        std::vector<Entry> out;
        for (const auto& c : doc.at("characters")) {
            Entry e;
            e.exponents = c.at("exponents").get<std::vector<std::int64_t>>();
            const auto& g = c.at("gauss_sum");
            if (!g.is_array() || g.size() != 2) return std::nullopt;
            e.gauss_sum = {g[0].get<double>(), g[1].get<double>()};
            out.push_back(std::move(e));
        }
        return out;
    } catch (const nlohmann::json::exception&) {
        return std::nullopt;
    }
}

void GaussSumCache::store(const GaussInt& q, const std::vector<Entry>& entries) const {
    nlohmann::json doc;
    doc["q"] = {q.re, q.im};
    doc["characters"] = nlohmann::json::array();
    for (const auto& e : entries)
        doc["characters"].push_back({{"exponents", e.exponents}, {"gauss_sum", {e.gauss_sum.real(), e.gauss_sum.imag()}}});
    std::lock_guard lock(mutex_);
    std::filesystem::create_directories(dir_);
    const auto target = file_for(q);
    auto tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("GaussSumCache: cannot write " + tmp.string());
        out << doc.dump();
    }
    std::filesystem::rename(tmp, target);
}

std::vector<HeckeCharacter> lift_family(const ModulusPtr& modulus, const std::vector<Character>& chars,
                                        const GaussSumCache* cache) {
    std::vector<HeckeCharacter> out;
    out.reserve(chars.size());
    if (cache != nullptr) {
        if (auto entries = cache->load(modulus->q())) {
            std::map<std::vector<std::int64_t>, std::complex<double>> by_exponents;
            for (auto& e : *entries) by_exponents.emplace(e.exponents, e.gauss_sum);
            bool complete = true;
            const double target = 8.0 * static_cast<double>(modulus->norm());
            for (const auto& chi : chars) {
                auto it = by_exponents.find(chi.exponents());
                // a value off the circle |g|^2 = 8N(q) means the file was damaged
                if (it == by_exponents.end() || !(std::abs(std::norm(it->second) - target) <= 1e-9 * target)) {
                    complete = false;
                    break;
                }
                out.push_back(HeckeCharacter::lift(chi, it->second));
            }
            if (complete) return out;
            out.clear();
        }
    }
    const GaussSumTable table(modulus);
    std::vector<GaussSumCache::Entry> entries;
    for (const auto& chi : chars) {
        const auto g = table.gauss_sum(chi);
        out.push_back(HeckeCharacter::lift(chi, g));
        entries.push_back({chi.exponents(), g});
    }
    if (cache != nullptr) cache->store(modulus->q(), entries);
    return out;
}

}  // namespace hecke
