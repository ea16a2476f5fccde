#include "gossip/experiments.hpp"

#include <utility>

#include "gossip/errors.hpp"
#include "gossip/parallel.hpp"
#include "gossip/rng.hpp"

namespace gossip {

namespace {

std::vector<RateVariant> variants_of(std::initializer_list<std::pair<const char*, const char*>> items) {
    std::vector<RateVariant> out;
    for (const auto& [label, text] : items) out.push_back({label, RateExpr::parse(text)});
    return out;
}

std::vector<std::vector<double>> swap_pair() { return {{0.0, 1.0}, {1.0, 0.0}}; }

// p = 1/2 towards each neighbour on a cycle of k states.
std::vector<std::vector<double>> cycle(std::size_t k) {
    std::vector<std::vector<double>> p(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i) {
        p[i][(i + 1) % k] += 0.5;
        p[i][(i + k - 1) % k] += 0.5;
    }
    return p;
}

}  // namespace

std::vector<std::uint32_t> even_squares(std::uint32_t lo, std::uint32_t hi) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t root = 2; root * root <= hi; root += 2) {
        if (root * root >= lo) out.push_back(root * root);
    }
    return out;
}

CtmcSpec ScenarioPreset::ctmc_for(const RateVariant& variant) const {
    CtmcSpec spec;
    spec.states = states;
    spec.leave_rates.assign(states.size(), variant.rate);
    spec.transition_probs = transition_probs;
    return spec;
}

std::vector<std::string> preset_ids() { return {"fig3", "fig4", "fig5", "thm1"}; }

ScenarioPreset preset(std::string_view id) {
    ScenarioPreset p;
    p.id = std::string(id);
    if (id == "fig3") {
        p.description = "ring <-> grid, leave rates sqrt(n) and n^(1/3)";
        p.n_list = even_squares(100, 1024);
        p.states = {TopologySpec::ring(), TopologySpec::grid()};
        p.transition_probs = swap_pair();
        p.variants = variants_of({{"sqrt", "sqrt(n)"}, {"cbrt", "n^(1/3)"}});
    } else if (id == "fig4") {
        p.description = "ring <-> complete, leave rates n, sqrt(n) and log(n)";
        p.n_list = {200, 400, 600, 800, 1000};
        p.states = {TopologySpec::ring(), TopologySpec::complete()};
        p.transition_probs = swap_pair();
        p.variants = variants_of({{"linear", "n"}, {"sqrt", "sqrt(n)"}, {"log", "log(n)"}});
    } else if (id == "fig5") {
        p.description = "4-cycle complete - ring - grid - disconnected, p = 1/2 to each neighbour";
        p.n_list = even_squares(100, 1024);
        p.states = {TopologySpec::complete(), TopologySpec::ring(), TopologySpec::grid(), TopologySpec::disconnected()};
        p.transition_probs = cycle(4);
        p.variants = variants_of({{"linear", "n"}, {"sqrt", "sqrt(n)"}, {"cbrt", "n^(1/3)"}, {"log", "log(n)"}});
    } else if (id == "thm1") {
        p.description = "complete <-> ring, constant leave rates 1";
        p.n_list = {128, 256, 512, 1024};
        p.states = {TopologySpec::complete(), TopologySpec::ring()};
        p.transition_probs = swap_pair();
        p.variants = variants_of({{"const", "1"}});
    } else {
        throw ConfigError("unknown preset '" + std::string(id) + "'");
    }
    return p;
}

SweepPlan plan_for(const ScenarioPreset& preset) {
    SweepPlan plan;
    plan.scenario = preset.id;
    plan.base.lambda_e = preset.lambda_e;
    plan.base.lambda_s = preset.lambda_s;
    plan.base.lambda = preset.lambda;
    plan.base.horizon = preset.horizon;
    plan.base.burn_in = preset.burn_in;
    plan.base.ctmc.states = preset.states;
    plan.base.ctmc.transition_probs = preset.transition_probs;
    plan.base.ctmc.leave_rates.assign(preset.states.size(), RateExpr::constant(1.0));
    plan.n_list = preset.n_list;
    plan.variants = preset.variants;
    plan.replicates = preset.replicates;
    return plan;
}

SweepTable run_sweep(const SweepPlan& plan, std::uint64_t seed, unsigned jobs) {
    if (plan.n_list.empty()) throw ConfigError("sweep needs at least one n");
    if (plan.replicates == 0) throw ConfigError("sweep needs at least one replicate");

    struct Curve {
        std::string label;
        CtmcSpec ctmc;
    };
    std::vector<Curve> curves;
    if (plan.variants.empty()) {
        curves.push_back({plan.base_label, plan.base.ctmc});
    } else {
        for (const auto& v : plan.variants) {
            CtmcSpec spec = plan.base.ctmc;
            spec.leave_rates.assign(spec.state_count(), v.rate);
            curves.push_back({v.label, std::move(spec)});
        }
    }

    struct Cell {
        std::size_t curve;
        std::uint32_t n;
        SimConfig config;
        Network network;
    };
    std::vector<Cell> cells;
    for (std::size_t c = 0; c < curves.size(); ++c) {
        for (std::uint32_t n : plan.n_list) {
            SimConfig cfg = plan.base;
            cfg.n = n;
            cfg.ctmc = curves[c].ctmc;
            cfg.mode = SimMode::FullGossip;
            cells.push_back({c, n, cfg, prepare_network(cfg)});
        }
    }

    const std::size_t total = cells.size() * plan.replicates;
    std::vector<SweepRow> rows(total);
    parallel_for(total, jobs, [&](std::size_t task) {
        const Cell& cell = cells[task / plan.replicates];
        const auto replicate = static_cast<std::uint32_t>(task % plan.replicates);
        const std::string& label = curves[cell.curve].label;
        SimConfig cfg = cell.config;
        cfg.seed = derive_seed(seed, cell.n, plan.scenario + "/" + label, replicate);
        const RunResult result = run(cfg, cell.network);
        rows[task] = {plan.scenario, cell.n, label, replicate, "network_avg_age", result.network_avg_age};
    });
    return aggregate(std::move(rows));
}

SweepTable run_preset(const ScenarioPreset& preset, std::uint64_t seed, unsigned jobs) {
    return run_sweep(plan_for(preset), seed, jobs);
}

}  // namespace gossip
