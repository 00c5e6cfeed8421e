#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "jdrisk/cli/config.hpp"
#include "jdrisk/cli/crosscheck.hpp"
#include "jdrisk/cli/run.hpp"
#include "json.hpp"

using namespace jdrisk;
using namespace jdrisk::cli;
using Catch::Matchers::ContainsSubstring;

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / "jdrisk_test_cli" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

fs::path write_file(const fs::path& dir, const std::string& name, const std::string& text) {
    const fs::path p = dir / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

int run(std::vector<std::string> args) {
    args.insert(args.begin(), "jdrisk_cli");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

const char* kRuin = R"({
  "model": {"p": 1.0, "sigma_P": 1.0, "r": 0.2, "sigma_R": 0.5, "lambda_P": 1.0,
            "claims": {"family": "exponential", "mean": 0.5}},
  "task": {"kind": "ruin", "u": [0.0, 1.0]},
  "numerics": {"sim": {"paths": 400, "t_max": 20, "dt_max": 0.1, "scheme": "exponential", "seed": 3}}
})";

std::string message_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("configuration parses into typed blocks", "[config]") {
    const RunConfig c = parse_config(kRuin);
    CHECK(c.task.kind == Task::ruin);
    CHECK(c.task.u == std::vector<double>{0.0, 1.0});
    CHECK(c.model.params.lambda_P == 1.0);
    CHECK(c.model.claims.mean() == 0.5);
    CHECK(c.numerics.sim.n_paths == 400);
    CHECK(c.numerics.paths_given);
    CHECK(c.numerics.sim.scheme == Scheme::exponential);
    CHECK(c.output.format == "csv");
    CHECK(task_name(Task::dividends_threshold) == "dividends-threshold");
}

TEST_CASE("unknown keys are rejected by name", "[config]") {
    try {
        parse_config(R"({"model": {"p": 1, "lamda_P": 1}, "task": {"kind": "ruin", "u": [1]}})");
        FAIL("accepted an unknown key");
    } catch (const ConfigError& e) {
        CHECK(e.where() == "model.lamda_P");
        CHECK_THAT(std::string(e.what()), ContainsSubstring("unknown key"));
    }
    CHECK_THAT(message_of(R"({"model": {"p": 1}, "task": {"kind": "ruin", "u": [1]}, "extra": 1})"),
               ContainsSubstring("extra"));
    CHECK_THAT(message_of(R"({"model": {"p": 1}, "task": {"kind": "ruin", "u": [1]},
                              "numerics": {"sim": {"dtt": 0.1}}})"),
               ContainsSubstring("numerics.sim.dtt"));
}

TEST_CASE("type, range and presence errors name the key", "[config]") {
    CHECK_THAT(message_of(R"({"model": {"p": "one"}, "task": {"kind": "ruin", "u": [1]}})"), ContainsSubstring("model.p"));
    CHECK_THAT(message_of(R"({"model": {}, "task": {"kind": "ruin", "u": [1]}})"), ContainsSubstring("model.p"));
    CHECK_THAT(message_of(R"({"model": {"p": 1, "lambda_P": 1}, "task": {"kind": "ruin", "u": [1]}})"),
               ContainsSubstring("model.claims"));
    CHECK_THAT(message_of(R"({"model": {"p": 1}, "task": {"kind": "ruin", "u": [-1]}})"), ContainsSubstring("task.u"));
    CHECK_THAT(message_of(R"({"model": {"p": 1}, "task": {"kind": "fly", "u": [1]}})"), ContainsSubstring("task.kind"));
    CHECK_THAT(message_of(R"({"model": {"p": 1, "claims": {"family": "exponential", "mean": -1}},
                              "task": {"kind": "ruin", "u": [1]}})"),
               ContainsSubstring("model.claims"));
    CHECK_THAT(message_of(R"({"model": {"p": 1, "delta": 0.1}, "task": {"kind": "dividends-threshold", "u": [1], "b": 2}})"),
               ContainsSubstring("task.mu"));
    CHECK_THAT(message_of(R"({"model": {"p": 1}, "task": {"kind": "crosscheck"}})"), ContainsSubstring("task.scenario"));
}

TEST_CASE("syntax errors report line and column", "[config]") {
    const std::string msg = message_of("{\n  \"model\": {\"p\": 1,}\n}");
    CHECK_THAT(msg, ContainsSubstring("line 2"));
    CHECK_THAT(msg, ContainsSubstring("column"));
}

TEST_CASE("bundled configurations parse", "[config]") {
    int count = 0;
    for (const auto& entry : fs::directory_iterator(JDRISK_CONFIG_DIR)) {
        if (entry.path().extension() != ".json") continue;
        CHECK_NOTHROW(load_config(entry.path().string()));
        ++count;
    }
    CHECK(count > 0);
}

TEST_CASE("ruin from zero surplus reports psi near one", "[run]") {
    const RunReport rep = execute(parse_config(kRuin));
    bool seen = false;
    for (const Row& r : rep.rows) {
        CHECK((r.method == "mc" || r.method == "closed" || r.method == "ide"));
        CHECK(std::isfinite(r.uncertainty));
        if (r.u == 0.0 && r.scenario == "ruin:psi") {
            CHECK(r.value > 0.99);
            seen = true;
        }
    }
    CHECK(seen);
    CHECK(rep.manifest.contains("assumptions"));
    CHECK(rep.manifest["seed"] == 3);
}

TEST_CASE("closed forms with jumps are a configuration error", "[run]") {
    const RunConfig c = parse_config(R"({
      "model": {"p": 1, "sigma_P": 1, "r": 0.05, "sigma_R": 0.5, "delta": 0.1, "lambda_P": 1,
                "claims": {"family": "exponential", "mean": 0.5}},
      "task": {"kind": "closed-form", "quantity": "gerber", "u": [1]}})");
    CHECK_THROWS_WITH(execute(c), ContainsSubstring("closed forms require lambda_P = lambda_R = 0"));
}

TEST_CASE("jump-free barrier crosscheck agrees three ways", "[crosscheck]") {
    CrosscheckOptions opt;
    opt.paths = 20000;
    opt.seed = 11;
    const CrosscheckReport rep = crosscheck("example-4-2-rho0", opt);
    std::set<std::string> methods;
    for (const Row& r : rep.rows) methods.insert(r.method);
    CHECK(methods == std::set<std::string>{"closed", "ide", "mc"});
    for (const Comparison& c : rep.comparisons) {
        INFO(c.methods << " at u = " << c.u << ": gap " << c.gap << ", tolerance " << c.tolerance);
        CHECK(c.pass);
    }
    CHECK(rep.passed());
    CHECK_THROWS_AS(crosscheck("no-such-scenario", opt), InvalidArgument);
    CHECK_FALSE(crosscheck_scenarios().empty());
}

TEST_CASE("exit codes", "[cli]") {
    const fs::path dir = scratch("exit");
    const fs::path ok = write_file(dir, "ok.json", kRuin);
    CHECK(run({"--config", ok.string(), "--out", (dir / "ok").string(), "--quiet"}) == exit_ok);
    CHECK(fs::exists(dir / "ok" / "results.csv"));
    CHECK(fs::exists(dir / "ok" / "manifest.json"));

    const fs::path bad = write_file(dir, "bad.json", R"({"model": {"p": 1, "bogus": 2}, "task": {"kind": "ruin", "u": [1]}})");
    CHECK(run({"--config", bad.string(), "--out", (dir / "bad").string(), "--quiet"}) == exit_config);
    CHECK(run({"--quiet"}) == exit_config);
    CHECK(run({"--config", (dir / "missing.json").string()}) == exit_config);
    CHECK(run({"--config", ok.string(), "--grid", "2"}) == exit_config);

    const fs::path numeric = write_file(dir, "numeric.json", R"({
      "model": {"p": 1, "sigma_P": 0.5, "lambda_P": 1, "r": 0.2, "sigma_R": 0.5,
                "claims": {"family": "exponential", "mean": 0.5}},
      "task": {"kind": "solve-ide", "quantity": "phi", "u": [1]},
      "numerics": {"grid": {"u_max": 50, "n": 501}, "ide": {"max_iter": 1, "direct_fallback": false}}})");
    CHECK(run({"--config", numeric.string(), "--out", (dir / "numeric").string(), "--quiet"}) == exit_numeric);

    // A 5-node grid cannot meet the 1e-3 deterministic tolerance.
    const fs::path cc = write_file(dir, "cc.json", R"({
      "model": {"p": 1}, "task": {"kind": "crosscheck", "scenario": "example-3-2"},
      "numerics": {"sim": {"paths": 50}, "grid": {"n": 5}}})");
    CHECK(run({"--config", cc.string(), "--out", (dir / "cc").string(), "--quiet"}) == exit_crosscheck);
}

TEST_CASE("reruns are byte-identical apart from the timestamp", "[cli]") {
    const fs::path dir = scratch("rerun");
    const fs::path cfg = write_file(dir, "ruin.json", kRuin);
    REQUIRE(run({"--config", cfg.string(), "--out", (dir / "a").string(), "--quiet"}) == exit_ok);
    REQUIRE(run({"--config", cfg.string(), "--out", (dir / "b").string(), "--quiet"}) == exit_ok);
    CHECK(read_file(dir / "a" / "results.csv") == read_file(dir / "b" / "results.csv"));
    auto ma = nlohmann::json::parse(read_file(dir / "a" / "manifest.json"));
    auto mb = nlohmann::json::parse(read_file(dir / "b" / "manifest.json"));
    CHECK(ma.contains("timestamp"));
    ma.erase("timestamp");
    mb.erase("timestamp");
    CHECK(ma.dump() == mb.dump());

    REQUIRE(run({"--config", cfg.string(), "--out", (dir / "c").string(), "--seed", "4", "--quiet"}) == exit_ok);
    CHECK(read_file(dir / "a" / "results.csv") != read_file(dir / "c" / "results.csv"));
}
