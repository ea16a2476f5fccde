#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gossip/ctmc.hpp"
#include "gossip/engine.hpp"
#include "gossip/metrics.hpp"
#include "gossip/rate_expr.hpp"

namespace gossip {

// One curve of a sweep: the same leave-rate expression applied to every
// CTMC state.
struct RateVariant {
    std::string label;
    RateExpr rate;
};

struct ScenarioPreset {
    std::string id;
    std::string description;
    std::vector<std::uint32_t> n_list;
    double lambda_e = 1.0;
    double lambda_s = 1.0;
    double lambda = 1.0;
    std::vector<TopologySpec> states;
    std::vector<std::vector<double>> transition_probs;
    std::vector<RateVariant> variants;
    std::uint32_t replicates = 20;
    double horizon = 2000.0;
    double burn_in = 200.0;

    CtmcSpec ctmc_for(const RateVariant& variant) const;
};

std::vector<std::string> preset_ids();
ScenarioPreset preset(std::string_view id);

// A grid of runs: every variant x n x replicate. When `variants` is empty
// the base config's CTMC is used as a single curve labelled `base_label`.
struct SweepPlan {
    std::string scenario;
    SimConfig base;
    std::vector<std::uint32_t> n_list;
    std::vector<RateVariant> variants;
    std::string base_label = "config";
    std::uint32_t replicates = 20;
};

SweepPlan plan_for(const ScenarioPreset& preset);

// Results are independent of `jobs`: every run's seed is derived from
// (seed, n, scenario/variant, replicate) and rows are reduced in a fixed order.
SweepTable run_sweep(const SweepPlan& plan, std::uint64_t seed, unsigned jobs);
SweepTable run_preset(const ScenarioPreset& preset, std::uint64_t seed, unsigned jobs);

// n = (2k)^2 for every even square in [lo, hi].
std::vector<std::uint32_t> even_squares(std::uint32_t lo, std::uint32_t hi);

}  // namespace gossip
