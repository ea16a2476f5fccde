#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

#include "gossip/ctmc.hpp"
#include "gossip/engine.hpp"

namespace gossip {

// JSON config document:
//
//   {
//     "name": "scenario-id",                      (optional)
//     "network": {"n": 100, "lambda_e": 1, "lambda_s": 1, "lambda": 1},
//     "ctmc": {"states": [{"kind": "complete"}, {"kind": "ring"}],
//              "q": ["1", "sqrt(n)"],
//              "p": [[0, 1], [1, 0]]},
//     "run": {"horizon": 2000, "burn_in": 200, "seed": 1, "replicates": 20,
//             "mode": "full", "spread_cap": 1e6}
//   }
//
// Topologies: {"kind": "grid", "wraparound": false},
// {"kind": "custom", "edges_file": "graph.txt"} or
// {"kind": "custom", "edges": [[0, 1], [1, 2, 0.5]], "weighted": true}.
// Relative edge-file paths resolve against the config file's directory.
struct LoadedConfig {
    std::string name = "config";
    SimConfig sim;
    std::uint32_t replicates = 20;
};

nlohmann::json read_config_document(const std::filesystem::path& path);

// "network.n=400" style assignment; the value is parsed as JSON when it
// parses, otherwise taken as a string.
void apply_override(nlohmann::json& document, std::string_view assignment);

LoadedConfig config_from_json(const nlohmann::json& document, const std::filesystem::path& base_dir = {});

TopologySpec topology_from_json(const nlohmann::json& node, const std::filesystem::path& base_dir = {});
CtmcSpec ctmc_from_json(const nlohmann::json& node, const std::filesystem::path& base_dir = {});

nlohmann::json run_result_json(const SimConfig& config, const RunResult& result);
nlohmann::json analysis_json(const CtmcSpec& spec, double n, const CtmcAnalysis& analysis);

}  // namespace gossip
