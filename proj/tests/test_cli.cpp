#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

#include "gossip/cli.hpp"
#include "gossip/config_io.hpp"
#include "gossip/errors.hpp"

using namespace gossip;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code = -1;
    std::string out;
    std::string err;
};

CliRun invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    CliRun r;
    r.code = cli::run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

class TempDir {
public:
    TempDir() {
        path_ = fs::temp_directory_path() / ("gossip-cli-" + std::to_string(std::random_device{}()));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    fs::path file(const std::string& name, const std::string& text) const {
        const fs::path p = path_ / name;
        std::ofstream(p) << text;
        return p;
    }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

const char* kSwitching = R"json({
  "name": "demo",
  "network": {"n": 16, "lambda_e": 1, "lambda_s": 1, "lambda": 1},
  "ctmc": {"states": ["ring", {"kind": "grid", "wraparound": true}], "q": ["1", "sqrt(n)"]},
  "run": {"horizon": 100, "burn_in": 10, "seed": 3, "replicates": 2}
})json";

std::size_t count_lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

TEST_CASE("config documents") {
    const json doc = json::parse(kSwitching);
    const LoadedConfig cfg = config_from_json(doc);
    CHECK(cfg.name == "demo");
    CHECK(cfg.sim.n == 16);
    CHECK(cfg.replicates == 2);
    CHECK(cfg.sim.ctmc.state_count() == 2);
    CHECK(cfg.sim.ctmc.states[1].kind == TopologyKind::Grid);
    CHECK(cfg.sim.ctmc.transition_probs[0][1] == 1.0);
    CHECK(cfg.sim.effective_burn_in() == 10.0);

    json over = doc;
    apply_override(over, "network.n=400");
    apply_override(over, "run.mode=spread");
    apply_override(over, "ctmc.q=[\"n\", \"log(n)\"]");
    const LoadedConfig o = config_from_json(over);
    CHECK(o.sim.n == 400);
    CHECK(o.sim.mode == SimMode::SpreadExperiment);
    CHECK(o.sim.ctmc.leave_rates[1].evaluate(400) == doctest::Approx(std::log(400.0)));
    CHECK_THROWS_AS(apply_override(over, "network.n"), ConfigError);

    json bad = doc;
    bad["network"]["lamda"] = 1;
    CHECK_THROWS_AS(config_from_json(bad), ConfigError);
    bad = doc;
    bad["ctmc"]["q"] = json::array({"1"});
    CHECK_THROWS_AS(config_from_json(bad), ConfigError);
    bad = doc;
    bad["ctmc"]["p"] = json::array({json::array({0.0, 0.5}), json::array({1.0, 0.0})});
    CHECK_THROWS_AS(config_from_json(bad), ConfigError);
}

TEST_CASE("edge-list topologies from files and inline lists") {
    TempDir dir;
    dir.file("g.txt", "# three-node path\n0 1\n1 2 2.5\n");
    const auto spec = topology_from_json(json::parse(R"json({"kind": "custom", "edges_file": "g.txt", "weighted": true})json"), dir.path());
    REQUIRE(spec.edges.size() == 2);
    CHECK(spec.edges[1].weight == 2.5);
    CHECK(spec.weighted);
    const auto inline_spec = topology_from_json(json::parse(R"json({"kind": "custom", "edges": [[0, 1], [1, 2]]})json"));
    CHECK(inline_spec.edges.size() == 2);
    CHECK_THROWS_AS(topology_from_json(json::parse(R"json({"kind": "custom", "edges_file": "missing.txt"})json"), dir.path()),
                    ConfigError);
    CHECK_THROWS_AS(topology_from_json(json::parse(R"json("star")json")), ConfigError);
}

TEST_CASE("cli: simulate") {
    TempDir dir;
    const auto cfg = dir.file("c.json", kSwitching).string();
    const auto r = invoke({"--config", cfg, "simulate"});
    REQUIRE(r.code == cli::kExitOk);
    const json j = json::parse(r.out);
    CHECK(j["per_node_age"].size() == 16);
    CHECK(j["network_avg_age"].get<double>() > 0.0);

    const auto log_path = (dir.path() / "events.csv").string();
    const auto with_log = invoke({"--config", cfg, "--format", "csv", "simulate", "--event-log", log_path});
    REQUIRE(with_log.code == cli::kExitOk);
    CHECK(with_log.out.rfind("# gossip-age-sim v1\nnode,age\n", 0) == 0);
    std::ifstream log(log_path);
    std::string header;
    std::getline(log, header);
    CHECK(header == "t,event_kind,actor,target");

    const auto big = invoke({"--config", cfg, "--set", "network.n=100", "simulate", "--event-log", log_path});
    CHECK(big.code == cli::kExitConfig);
}

TEST_CASE("cli: errors map to exit codes") {
    TempDir dir;
    const auto cfg = dir.file("c.json", kSwitching).string();
    const auto typo = invoke({"--config", cfg, "--set", "ctmc.q=[\"1\", \"sqt(n)\"]", "simulate"});
    CHECK(typo.code == cli::kExitConfig);
    CHECK(typo.err.find("sqt") != std::string::npos);

    const auto missing = invoke({"--config", (dir.path() / "nope.json").string(), "simulate"});
    CHECK(missing.code == cli::kExitConfig);
    CHECK(invoke({"--bogus", "simulate"}).code == cli::kExitConfig);
    CHECK(invoke({}).code == cli::kExitConfig);

    const auto grid = invoke({"--config", cfg, "--set", "network.n=15", "simulate"});
    CHECK(grid.code == cli::kExitConfig);

    // chain that can never leave state 0 after entering it
    const auto reducible = invoke({"--config", cfg, "--set", "ctmc.q=[\"0\", \"1\"]", "ctmc"});
    CHECK(reducible.code == cli::kExitConfig);

    const auto dead = dir.file("dead.json", R"json({"network": {"n": 4}, "ctmc": {"states": ["disconnected"], "q": ["1"]},
                                               "run": {"spread_cap": 100}})json");
    const auto guard = invoke({"--config", dead.string(), "--trials", "2", "spread"});
    CHECK(guard.code == cli::kExitGuard);
    CHECK(guard.err.find("warning") != std::string::npos);
}

TEST_CASE("cli: sweep rows and job independence") {
    TempDir dir;
    const auto cfg = dir.file("c.json", kSwitching).string();
    const auto one = invoke({"--config", cfg, "--jobs", "1", "sweep", "--n-list", "100,144", "--rates", "sqrt=sqrt(n),lin=n",
                          "--replicates", "2"});
    REQUIRE(one.code == cli::kExitOk);
    // version line + header + 2 variants x 2 n x 2 replicates
    CHECK(count_lines(one.out) == 2 + 8);
    CHECK(one.out.find("demo,100,sqrt,0,network_avg_age,") != std::string::npos);
    const auto eight = invoke({"--config", cfg, "--jobs", "8", "sweep", "--n-list", "100,144", "--rates",
                            "sqrt=sqrt(n),lin=n", "--replicates", "2"});
    CHECK(eight.out == one.out);

    const auto js = invoke({"--config", cfg, "--format", "json", "sweep", "--n-list", "16,36,64", "--replicates", "2"});
    REQUIRE(js.code == cli::kExitOk);
    const json j = json::parse(js.out);
    CHECK(j["groups"].size() == 3);
    CHECK(j["fits"].contains("config"));

    const auto out_path = (dir.path() / "rows.csv").string();
    const auto to_file = invoke({"--config", cfg, "--out", out_path, "sweep", "--replicates", "1"});
    CHECK(to_file.code == cli::kExitOk);
    CHECK(to_file.out.empty());
    CHECK(fs::file_size(out_path) > 0);
}

TEST_CASE("cli: ctmc analysis") {
    TempDir dir;
    const auto cfg = dir.file("k.json", R"json({"network": {"n": 10},
        "ctmc": {"states": ["complete", "ring"], "q": ["1", "2"], "p": [[0, 1], [1, 0]]}})json");
    const auto r = invoke({"--config", cfg.string(), "ctmc"});
    REQUIRE(r.code == cli::kExitOk);
    const json j = json::parse(r.out);
    CHECK(j["pi"][0].get<double>() == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(j["pi"][1].get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    CHECK(j["return_moments"][0]["mean"].get<double>() == doctest::Approx(1.5).epsilon(1e-9));
    // both states: hold in one, then the other, 1 + 1/2
    CHECK(j["return_moments"][1]["mean"].get<double>() == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(j["return_moments"][1]["kac_mean"].get<double>() == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(j["return_moments"][0]["kac_mean"].get<double>() == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(j["Q"][0][1].get<double>() == 1.0);

    const auto same = invoke({"--config", cfg.string(), "ctmc", "analyze"});
    CHECK(same.out == r.out);

    const auto mc = invoke({"--config", cfg.string(), "--mc-check", "ctmc", "--mc-horizon", "20000"});
    REQUIRE(mc.code == cli::kExitOk);
    const json m = json::parse(mc.out);
    CHECK(m["mc_check"]["occupancy"][0].get<double>() == doctest::Approx(2.0 / 3.0).epsilon(0.03));
    CHECK(m["mc_check"]["return_moments"][1]["mean"].get<double>() == doctest::Approx(1.5).epsilon(0.05));
}

TEST_CASE("cli: spread") {
    TempDir dir;
    const auto cfg = dir.file("s.json", R"json({"name": "sp", "network": {"n": 50}, "run": {"seed": 2}})json");
    const auto r = invoke({"--config", cfg.string(), "--trials", "40", "spread"});
    REQUIRE(r.code == cli::kExitOk);
    CHECK(r.out.rfind("# gossip-age-sim v1\ntrial,T,N0_count\n0,", 0) == 0);
    CHECK(count_lines(r.out) == 2 + 40 + 4);
    CHECK(r.out.find("\nalpha_log_n,") != std::string::npos);

    const auto js = invoke({"--config", cfg.string(), "--trials", "40", "--format", "json", "spread"});
    const json j = json::parse(js.out);
    CHECK(j["T"].size() == 40);
    CHECK(j["summary"]["complete_graph_expected_T"].get<double>() > 0.0);
    const auto parallel = invoke({"--config", cfg.string(), "--trials", "40", "--jobs", "3", "--format", "json", "spread"});
    CHECK(parallel.out == js.out);
}

TEST_CASE("cli: presets") {
    const auto list = invoke({"presets", "list"});
    REQUIRE(list.code == cli::kExitOk);
    for (const char* id : {"fig3", "fig4", "fig5", "thm1"}) CHECK(list.out.find(id) != std::string::npos);

    const auto run = invoke({"--seed", "4", "presets", "run", "fig4", "--n-list", "20,40,60", "--replicates", "2",
                          "--horizon", "40", "--variants", "sqrt"});
    REQUIRE(run.code == cli::kExitOk);
    CHECK(count_lines(run.out) == 2 + 6);
    CHECK(run.out.find(",linear,") == std::string::npos);

    CHECK(invoke({"presets", "run", "fig9"}).code == cli::kExitConfig);
    CHECK(invoke({"presets", "run", "fig4", "--variants", "cubic"}).code == cli::kExitConfig);
}
