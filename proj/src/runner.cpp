#include "hecke/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>
#include <thread>
#include <variant>

#include "hecke/verify_suite.hpp"
#include "json.hpp"

namespace hecke {

namespace {

using Cell = std::variant<std::int64_t, double, std::string>;

// A header plus rows, rendered as CSV or as a JSON array of objects.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;

    std::string csv() const {
        std::ostringstream os;
        for (std::size_t k = 0; k < header.size(); ++k) os << (k ? "," : "") << header[k];
        os << '\n';
        for (const auto& row : rows) {
            for (std::size_t k = 0; k < row.size(); ++k) {
                if (k) os << ',';
                std::visit(
                    [&](const auto& v) {
                        using T = std::decay_t<decltype(v)>;
                        if constexpr (std::is_same_v<T, double>)
                            os << format_number(v);
                        else
                            os << v;
                    },
                    row[k]);
            }
            os << '\n';
        }
        return os.str();
    }

    std::string json() const {
        nlohmann::ordered_json doc = nlohmann::ordered_json::array();
        for (const auto& row : rows) {
            nlohmann::ordered_json o;
            for (std::size_t k = 0; k < row.size(); ++k) {
                std::visit(
                    [&](const auto& v) {
                        using T = std::decay_t<decltype(v)>;
                        if constexpr (std::is_same_v<T, double>)
                            o[header[k]] = std::stod(format_number(v));
                        else
                            o[header[k]] = v;
                    },
                    row[k]);
            }
            doc.push_back(std::move(o));
        }
        return doc.dump(2) + "\n";
    }

    std::string render(OutputFormat f) const { return f == OutputFormat::Json ? json() : csv(); }
};

std::string join_exponents(const std::vector<std::int64_t>& e) {
    std::string s;
    for (std::size_t k = 0; k < e.size(); ++k) s += (k ? ";" : "") + std::to_string(e[k]);
    return s;
}

std::string factor_string(const Factorization& f) {
    std::string s;
    for (const auto& pp : f.factors) {
        if (!s.empty()) s += '*';
        s += '(' + pp.prime.str() + ')';
        if (pp.exponent > 1) s += '^' + std::to_string(pp.exponent);
    }
    return s.empty() ? "1" : s;
}

std::vector<GaussInt> moduli_for(const RunConfig& c) {
    if (c.q) return {primary_part(*c.q)};
    return enumerate_moduli(c.qnorm_min, c.qnorm_max, c.primes_only);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string composite_note(const std::vector<GaussInt>& qs) {
    std::size_t composite = 0;
    for (const auto& q : qs)
        if (!is_gaussian_prime(q)) ++composite;
    if (composite == 0) return {};
    return "note: " + std::to_string(composite) +
           " composite moduli included; the main terms are the prime-modulus formulas\n";
}

Table factor_table(const std::vector<GaussInt>& qs, int workers) {
    Table t{{"qnorm", "q_re", "q_im", "factors", "phi", "psi", "psi_star", "mobius"}, {}};
    t.rows.resize(qs.size());
    parallel_for(qs.size(), workers, [&](std::size_t k) {
        const auto& q = qs[k];
        const Factorization f = factor(q);
        t.rows[k] = {norm(q), q.re, q.im, factor_string(f), euler_phi(f), psi(f), psi_star(f),
                     std::int64_t{mobius(f)}};
    });
    return t;
}

Table chars_table(const std::vector<GaussInt>& qs, int workers) {
    Table t{{"qnorm", "q_re", "q_im", "index", "exponents", "odd", "primitive"}, {}};
    std::vector<std::vector<std::vector<Cell>>> per(qs.size());
    parallel_for(qs.size(), workers, [&](std::size_t k) {
        const auto m = Modulus::build(qs[k]);
        for_each_character(m, {}, [&](const Character& chi) {
            per[k].push_back({m->norm(), m->q().re, m->q().im, chi.index(), join_exponents(chi.exponents()),
                              std::int64_t{chi.is_odd()}, std::int64_t{chi.is_primitive()}});
        });
    });
    for (auto& rows : per)
        for (auto& r : rows) t.rows.push_back(std::move(r));
    return t;
}

Table lvalue_table(const std::vector<GaussInt>& qs, int workers, const GaussSumCache* cache) {
    Table t{{"qnorm", "q_re", "q_im", "index", "exponents", "g_re", "g_im", "l_re", "l_im", "a_chi"}, {}};
    std::vector<std::vector<std::vector<Cell>>> per(qs.size());
    parallel_for(qs.size(), workers, [&](std::size_t k) {
        const auto m = Modulus::build(qs[k]);
        for (const auto& v : evaluate_family(m, cache, {.x = 0.0, .with_a_chi = true}))
            per[k].push_back({m->norm(), m->q().re, m->q().im, v.index, join_exponents(v.exponents),
                              v.gauss_sum.real(), v.gauss_sum.imag(), v.l_half.real(), v.l_half.imag(),
                              v.a_chi.real()});
    });
    for (auto& rows : per)
        for (auto& r : rows) t.rows.push_back(std::move(r));
    return t;
}

Table c0_table() {
    const auto est = estimate_c0();
    Table t{{"point", "x", "value"}, {}};
    for (const auto& [x, v] : est.grid) t.rows.push_back({std::string("grid"), x, v});
    t.rows.push_back({std::string("mean"), 0.0, est.value});
    t.rows.push_back({std::string("spread"), 0.0, est.spread});
    return t;
}

void write_output(const std::string& path, const std::string& doc) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) throw UsageError("cannot write " + path);
    out << doc;
    if (!out) throw UsageError("cannot write " + path);
}

}  // namespace

std::optional<Command> parse_command(const std::string& name) {
    static const std::pair<const char*, Command> table[] = {
        {"factor", Command::Factor},   {"chars", Command::Chars},     {"lvalue", Command::LValue},
        {"moment1", Command::Moment1}, {"moment2", Command::Moment2}, {"density", Command::Density},
        {"verify", Command::Verify},   {"c0", Command::C0}};
    for (const auto& [n, c] : table)
        if (name == n) return c;
    return std::nullopt;
}

std::string command_name(Command c) {
    switch (c) {
        case Command::Factor: return "factor";
        case Command::Chars: return "chars";
        case Command::LValue: return "lvalue";
        case Command::Moment1: return "moment1";
        case Command::Moment2: return "moment2";
        case Command::Density: return "density";
        case Command::Verify: return "verify";
        case Command::C0: return "c0";
    }
    return "?";
}

void validate(const RunConfig& c) {
    if (c.qnorm_min < 1) throw UsageError("qnorm-min must be at least 1");
    if (c.qnorm_min > c.qnorm_max) throw UsageError("qnorm-min exceeds qnorm-max");
    if (c.qnorm_max > kDefaultModulusBound)
        throw UsageError("qnorm-max above " + std::to_string(kDefaultModulusBound));
    if (!(c.sigma > 0.0 && c.sigma < 2.0)) throw UsageError("sigma must lie in (0, 2)");
    if (c.workers < 1) throw UsageError("workers must be at least 1");
    if (c.q) {
        if (c.q->is_zero() || !is_odd(*c.q)) throw UsageError("q must be odd and nonzero");
        if (norm(*c.q) > kDefaultModulusBound)
            throw UsageError("N(q) above " + std::to_string(kDefaultModulusBound));
    }
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), n);
    if (threads <= 1) {
        for (std::size_t k = 0; k < n; ++k) fn(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t k; (k = next.fetch_add(1)) < n;) {
                try {
                    fn(k);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    next = n;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

RunResult run(const RunConfig& config) {
    validate(config);
    RunResult result;

    std::string cache_dir = config.cache_dir;
    if (const char* env = std::getenv("HECKE_CACHE_DIR"); env != nullptr && *env != '\0') cache_dir = env;
    std::unique_ptr<GaussSumCache> cache;
    if (!cache_dir.empty()) cache = std::make_unique<GaussSumCache>(cache_dir);

    const int workers = config.workers;
    switch (config.command) {
        case Command::Factor: {
            result.output = factor_table(moduli_for(config), workers).render(config.format);
            break;
        }
        case Command::Chars: {
            result.output = chars_table(moduli_for(config), workers).render(config.format);
            break;
        }
        case Command::LValue: {
            result.output = lvalue_table(moduli_for(config), workers, cache.get()).render(config.format);
            break;
        }
        case Command::Moment1:
        case Command::Moment2: {
            const bool second = config.command == Command::Moment2;
            const auto qs = moduli_for(config);
            std::vector<ExperimentRow> rows(qs.size());
            parallel_for(qs.size(), workers, [&](std::size_t k) {
                const auto t0 = std::chrono::steady_clock::now();
                const auto stats = family_statistics(Modulus::build(qs[k]), cache.get(), second);
                rows[k] = second ? second_moment_row(stats) : first_moment_row(stats);
                rows[k].wall_s = config.timing ? seconds_since(t0) : 0.0;
            });
            result.output = config.format == OutputFormat::Json ? moments_json(rows) : moments_csv(rows);
            result.notes = composite_note(qs);
            break;
        }
        case Command::Density: {
            const auto qs = moduli_for(config);
            const auto f = AdmissibleTestFunction::make(config.testfn, config.sigma);
            std::int64_t top = 1;
            for (const auto& q : qs) top = std::max(top, norm(q));
            const PrimePowerTable table(static_cast<std::int64_t>(std::pow(static_cast<double>(top), config.sigma)) + 1);
            std::vector<DensityResult> rows(qs.size());
            parallel_for(qs.size(), workers, [&](std::size_t k) {
                const auto t0 = std::chrono::steady_clock::now();
                rows[k] = one_level_density(Modulus::build(qs[k]), f, DensityRoute::Direct, &table);
                rows[k].wall_s = config.timing ? seconds_since(t0) : 0.0;
            });
            result.output = config.format == OutputFormat::Json ? density_json(rows) : density_csv(rows);
            result.notes = composite_note(qs);
            break;
        }
        case Command::Verify: {
            const auto rows = run_verify_suite({.seed = config.seed, .workers = workers});
            result.output = config.format == OutputFormat::Json ? lemmas_json(rows) : lemmas_csv(rows);
            std::size_t failed = 0;
            for (const auto& r : rows)
                if (!r.pass) {
                    ++failed;
                    result.notes += "FAIL " + r.check_name + " (" + r.param + "): observed " +
                                    format_number(r.observed) + ", bound " + format_number(r.bound) + "\n";
                }
            result.notes += std::to_string(rows.size() - failed) + "/" + std::to_string(rows.size()) + " checks passed\n";
            result.exit_code = failed == 0 ? 0 : 1;
            break;
        }
        case Command::C0: {
            result.output = c0_table().render(config.format);
            break;
        }
    }

    if (!config.out_path.empty()) write_output(config.out_path, result.output);
    return result;
}

}  // namespace hecke
