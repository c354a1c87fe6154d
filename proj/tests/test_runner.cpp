#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hecke/runner.hpp"
#include "json.hpp"

using namespace hecke;

namespace {

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("hecke_runner_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("command names") {
    for (auto c : {Command::Factor, Command::Chars, Command::LValue, Command::Moment1, Command::Moment2,
                   Command::Density, Command::Verify, Command::C0})
        CHECK(parse_command(command_name(c)) == c);
    CHECK_FALSE(parse_command("moments"));
}

TEST_CASE("configuration invariants") {
    RunConfig c;
    CHECK_NOTHROW(validate(c));
    c.qnorm_min = 600;
    CHECK_THROWS_AS(validate(c), UsageError);
    c = {};
    c.sigma = 2.0;
    CHECK_THROWS_AS(validate(c), UsageError);
    c = {};
    c.workers = 0;
    CHECK_THROWS_AS(validate(c), UsageError);
    c = {};
    c.q = GaussInt{2, 0};
    CHECK_THROWS_AS(validate(c), UsageError);
    c = {};
    c.qnorm_max = 1000000;
    CHECK_THROWS_AS(validate(c), UsageError);
}

TEST_CASE("moment1 over prime moduli") {
    RunConfig c;
    c.command = Command::Moment1;
    c.qnorm_min = 100;
    c.qnorm_max = 500;
    c.primes_only = true;
    const auto r = run(c);
    CHECK(r.exit_code == 0);
    const auto rows = lines(r.output);
    REQUIRE(!rows.empty());
    CHECK(rows[0] == "qnorm,q_re,q_im,psi_star,stat_re,stat_im,main_term,ratio,wall_s");
    CHECK(rows.size() == enumerate_moduli(100, 500, true).size() + 1);
    CHECK(r.notes.empty());
    for (std::size_t k = 1; k < rows.size(); ++k) CHECK(rows[k].substr(rows[k].rfind(',')) == ",0");
}

TEST_CASE("outputs are independent of the worker count") {
    for (auto cmd : {Command::Moment1, Command::Moment2, Command::Density, Command::LValue, Command::Factor}) {
        RunConfig c;
        c.command = cmd;
        c.qnorm_min = 20;
        c.qnorm_max = 90;
        c.sigma = 1.5;
        const auto a = run(c).output;
        c.workers = 3;
        const auto b = run(c).output;
        CHECK(a == b);
        CHECK(a == run(c).output);
    }
}

TEST_CASE("composite moduli are flagged") {
    RunConfig c;
    c.command = Command::Moment1;
    c.qnorm_min = 40;
    c.qnorm_max = 50;
    const auto r = run(c);
    CHECK(r.notes.find("composite") != std::string::npos);
}

TEST_CASE("json mirrors csv") {
    RunConfig c;
    c.command = Command::Density;
    c.qnorm_min = 50;
    c.qnorm_max = 120;
    c.testfn = TestFunctionKind::Cosine;
    const auto csv = lines(run(c).output);
    c.format = OutputFormat::Json;
    const auto doc = nlohmann::json::parse(run(c).output);
    REQUIRE(doc.is_array());
    CHECK(doc.size() + 1 == csv.size());
    std::vector<std::string> keys;
    for (auto it = doc[0].begin(); it != doc[0].end(); ++it) keys.push_back(it.key());
    // parsed objects come back key-sorted
    std::vector<std::string> csv_keys;
    std::istringstream in(csv[0]);
    for (std::string k; std::getline(in, k, ',');) csv_keys.push_back(k);
    std::sort(csv_keys.begin(), csv_keys.end());
    std::sort(keys.begin(), keys.end());
    CHECK(keys == csv_keys);
    CHECK(doc[0]["testfn"] == "cosine");
}

TEST_CASE("single modulus and output file") {
    const auto dir = scratch_dir("out");
    std::filesystem::create_directories(dir);
    RunConfig c;
    c.command = Command::Chars;
    c.q = GaussInt{2, 1};  // an associate of -1+2i
    c.out_path = (dir / "chars.csv").string();
    const auto r = run(c);
    std::ifstream in(c.out_path);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == r.output);
    const auto rows = lines(r.output);
    CHECK(rows[0] == "qnorm,q_re,q_im,index,exponents,odd,primitive");
    CHECK(rows.size() == 5);  // phi(-1+2i) = 4
    c.out_path = (dir / "missing" / "x.csv").string();
    CHECK_THROWS_AS(run(c), UsageError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("cache hit matches a cold run; the environment overrides the flag") {
    const auto flag_dir = scratch_dir("flag");
    const auto env_dir = scratch_dir("env");
    RunConfig c;
    c.command = Command::LValue;
    c.qnorm_min = 30;
    c.qnorm_max = 60;
    const auto cold = run(c).output;
    c.cache_dir = flag_dir.string();
    const auto first = run(c).output;
    CHECK(std::filesystem::exists(flag_dir));
    const auto second = run(c).output;
    CHECK(cold == first);
    CHECK(cold == second);

    ::setenv("HECKE_CACHE_DIR", env_dir.c_str(), 1);
    std::filesystem::remove_all(flag_dir);
    const auto third = run(c).output;
    ::unsetenv("HECKE_CACHE_DIR");
    CHECK(third == cold);
    CHECK(std::filesystem::exists(env_dir));
    CHECK_FALSE(std::filesystem::exists(flag_dir));
    std::filesystem::remove_all(env_dir);
}

TEST_CASE("factor table") {
    RunConfig c;
    c.command = Command::Factor;
    c.q = GaussInt{15, 0};
    const auto rows = lines(run(c).output);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == "qnorm,q_re,q_im,factors,phi,psi,psi_star,mobius");
    CHECK(rows[1] == "225,-15,0,(-1-2i)*(-1+2i)*(-3),128,63,32,-1");
}

TEST_CASE("parallel_for propagates errors") {
    CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t k) {
                        if (k == 7) throw std::runtime_error("boom");
                    }),
                    std::runtime_error);
    std::vector<int> v(100, 0);
    parallel_for(v.size(), 4, [&](std::size_t k) { v[k] = static_cast<int>(k); });
    for (std::size_t k = 0; k < v.size(); ++k) CHECK(v[k] == static_cast<int>(k));
}
