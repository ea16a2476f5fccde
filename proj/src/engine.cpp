#include "gossip/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "gossip/errors.hpp"
#include "gossip/kernels.hpp"

namespace gossip {

std::string_view to_string(SimMode mode) {
    return mode == SimMode::FullGossip ? "full" : "spread";
}

SimMode parse_sim_mode(std::string_view text) {
    if (text == "full" || text == "full_gossip") return SimMode::FullGossip;
    if (text == "spread" || text == "spread_experiment") return SimMode::SpreadExperiment;
    throw ConfigError("unknown run mode '" + std::string(text) + "' (expected 'full' or 'spread')");
}

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::SourceUpdate: return "source_update";
        case EventKind::Delivery: return "delivery";
        case EventKind::Gossip: return "gossip";
        case EventKind::Switch: return "switch";
    }
    return "unknown";
}

void SimConfig::validate() const {
    if (n < 1) throw ConfigError("n must be at least 1");
    auto check_rate = [](double v, const char* name) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(std::string(name) + " must be finite and >= 0");
    };
    check_rate(lambda_e, "lambda_e");
    check_rate(lambda_s, "lambda_s");
    check_rate(lambda, "lambda");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("horizon must be positive");
    const double b = effective_burn_in();
    if (!(b >= 0.0) || !(b < horizon)) {
        throw ConfigError("burn_in must satisfy 0 <= burn_in < horizon (burn_in=" + std::to_string(b) +
                          ", horizon=" + std::to_string(horizon) + ")");
    }
    if (!(spread_cap > 0.0)) throw ConfigError("spread_cap must be positive");
    ctmc.validate();
}

Network prepare_network(const SimConfig& config) {
    config.validate();
    Network net;
    net.n = config.n;
    net.rates = evaluate_rates(config.ctmc, static_cast<double>(config.n));
    net.stationary = stationary_distribution(generator_matrix(net.rates));
    net.graphs.reserve(config.ctmc.state_count());
    for (const auto& topology : config.ctmc.states) net.graphs.push_back(build_topology(topology, config.n));
    return net;
}

EventObserver csv_event_log(std::ostream& out) {
    out << "t,event_kind,actor,target\n";
    return [&out](const Event& e) {
        out << e.t << ',' << to_string(e.kind) << ',' << e.actor << ',' << e.target << '\n';
    };
}

namespace {

// Integral of a piecewise-constant counter over [start, now], accumulated
// lazily whenever the counter changes.
struct LazyIntegral {
    double value = 0.0;
    double since = 0.0;

    void settle(double level, double now, double start) {
        const double from = std::max(since, start);
        if (now > from) value += level * (now - from);
        since = now;
    }
};

void require_observer_allowed(const SimConfig& config, const EventObserver& observer) {
    if (observer && config.n > kMaxLoggedNodes) {
        throw ConfigError("event logging is limited to n <= " + std::to_string(kMaxLoggedNodes));
    }
}

void finish_averages(RunResult& result, double window) {
    double total = 0.0;
    for (double& a : result.per_node_age) {
        a /= window;
        total += a;
    }
    result.network_avg_age = total / static_cast<double>(result.per_node_age.size());
}

}  // namespace

RunResult run(const SimConfig& config) { return run(config, prepare_network(config)); }

RunResult run(const SimConfig& config, const Network& net, const EventObserver& observer) {
    config.validate();
    if (config.mode != SimMode::FullGossip) throw ConfigError("run() requires full gossip mode");
    if (net.n != config.n) throw ConfigError("network was prepared for a different n");
    require_observer_allowed(config, observer);

    const std::uint32_t n = config.n;
    const double horizon = config.horizon;
    const double start = config.effective_burn_in();
    Rng rng(config.seed);

    std::size_t state = draw_categorical(rng, net.stationary);
    std::int64_t source_version = 0;
    std::vector<std::int64_t> versions(n, 0);
    LazyIntegral source_integral;
    std::vector<LazyIntegral> node_integral(n);

    RunResult result;
    EventCounts& counts = result.counts;

    const Graph* graph = &net.graphs[state];
    double gossip_rate = config.lambda * static_cast<double>(graph->active_nodes().size());
    double switch_rate = net.rates.leave[state];
    double total_rate = config.lambda_e + config.lambda_s + gossip_rate + switch_rate;

    double t = 0.0;
    while (total_rate > 0.0) {
        t += draw_exponential(rng, total_rate);
        if (t >= horizon) break;

        double u = draw_unit(rng) * total_rate;
        if (u < config.lambda_e) {
            source_integral.settle(static_cast<double>(source_version), t, start);
            ++source_version;
            ++counts.source_updates;
            if (observer) observer({t, EventKind::SourceUpdate, -1, -1});
            continue;
        }
        u -= config.lambda_e;
        if (u < config.lambda_s) {
            const NodeId j = draw_index(rng, n);
            if (versions[j] != source_version) {
                node_integral[j].settle(static_cast<double>(versions[j]), t, start);
                versions[j] = source_version;
            }
            ++counts.deliveries;
            if (observer) observer({t, EventKind::Delivery, -1, j});
            continue;
        }
        u -= config.lambda_s;
        if (u < gossip_rate) {
            const auto active = graph->active_nodes();
            const NodeId i = active[draw_index(rng, static_cast<std::uint32_t>(active.size()))];
            const NodeId j = graph->sample_neighbor(i, draw_unit(rng));
            ++counts.gossip;
            if (versions[i] > versions[j]) {
                node_integral[j].settle(static_cast<double>(versions[j]), t, start);
                versions[j] = versions[i];
                ++counts.gossip_accepted;
            }
            if (observer) observer({t, EventKind::Gossip, i, j});
            continue;
        }

        const std::size_t previous = state;
        state = draw_categorical(rng, net.rates.jump.row(static_cast<Eigen::Index>(state)));
        ++counts.switches;
        graph = &net.graphs[state];
        gossip_rate = config.lambda * static_cast<double>(graph->active_nodes().size());
        switch_rate = net.rates.leave[state];
        total_rate = config.lambda_e + config.lambda_s + gossip_rate + switch_rate;
        if (observer) {
            observer({t, EventKind::Switch, static_cast<std::int64_t>(previous), static_cast<std::int64_t>(state)});
        }
    }

    source_integral.settle(static_cast<double>(source_version), horizon, start);
    result.per_node_age.resize(n);
    for (NodeId i = 0; i < n; ++i) {
        node_integral[i].settle(static_cast<double>(versions[i]), horizon, start);
        result.per_node_age[i] = source_integral.value - node_integral[i].value;
    }
    finish_averages(result, horizon - start);
    return result;
}

RunResult run_naive(const SimConfig& config, std::uint32_t max_nodes) {
    config.validate();
    if (config.mode != SimMode::FullGossip) throw ConfigError("run_naive() requires full gossip mode");
    if (config.n > max_nodes) {
        throw ConfigError("run_naive is limited to n <= " + std::to_string(max_nodes));
    }
    const Network net = prepare_network(config);
    const std::uint32_t n = config.n;
    const double horizon = config.horizon;
    const double start = config.effective_burn_in();
    constexpr double kNever = std::numeric_limits<double>::infinity();
    Rng rng(config.seed);

    struct DirectedEdge {
        NodeId from;
        NodeId to;
        double rate;
    };
    std::vector<std::vector<DirectedEdge>> edges_by_state;
    for (const Graph& g : net.graphs) {
        const GossipRateTable table(g, config.lambda);
        std::vector<DirectedEdge> edges;
        for (NodeId i = 0; i < n; ++i) {
            for (std::uint32_t k = 0; k < g.degree(i); ++k) edges.push_back({i, g.neighbor(i, k), table.rate(i, k)});
        }
        edges_by_state.push_back(std::move(edges));
    }

    auto next_time = [&](double now, double rate) { return rate > 0.0 ? now + draw_exponential(rng, rate) : kNever; };

    // Clock layout: [source update, CTMC switch, n source links, directed edges].
    constexpr std::size_t kSourceClock = 0;
    constexpr std::size_t kSwitchClock = 1;
    constexpr std::size_t kLinkBase = 2;
    const std::size_t edge_base = kLinkBase + n;
    const double link_rate = config.lambda_s / static_cast<double>(n);

    std::size_t state = draw_categorical(rng, net.stationary);
    std::vector<double> clocks(edge_base, kNever);
    clocks[kSourceClock] = next_time(0.0, config.lambda_e);
    clocks[kSwitchClock] = next_time(0.0, net.rates.leave[state]);
    for (NodeId j = 0; j < n; ++j) clocks[kLinkBase + j] = next_time(0.0, link_rate);
    auto arm_edges = [&](double now) {
        const auto& edges = edges_by_state[state];
        clocks.resize(edge_base + edges.size());
        for (std::size_t e = 0; e < edges.size(); ++e) clocks[edge_base + e] = next_time(now, edges[e].rate);
    };
    arm_edges(0.0);

    std::vector<double> age(n, 0.0);
    std::vector<double> integral(n, 0.0);
    RunResult result;
    EventCounts& counts = result.counts;
    double t = 0.0;

    auto integrate_to = [&](double until) {
        const double from = std::max(t, start);
        if (until > from) kernels::axpy(integral, age, until - from);
    };

    for (;;) {
        const std::size_t which = kernels::argmin(clocks);
        const double when = clocks[which];
        if (when >= horizon) break;
        integrate_to(when);
        t = when;

        if (which == kSourceClock) {
            kernels::add_scalar(age, 1.0);
            ++counts.source_updates;
            clocks[which] = next_time(t, config.lambda_e);
        } else if (which == kSwitchClock) {
            state = draw_categorical(rng, net.rates.jump.row(static_cast<Eigen::Index>(state)));
            ++counts.switches;
            clocks[which] = next_time(t, net.rates.leave[state]);
            arm_edges(t);
        } else if (which < edge_base) {
            age[which - kLinkBase] = 0.0;
            ++counts.deliveries;
            clocks[which] = next_time(t, link_rate);
        } else {
            const DirectedEdge& e = edges_by_state[state][which - edge_base];
            ++counts.gossip;
            if (age[e.from] < age[e.to]) {
                age[e.to] = age[e.from];
                ++counts.gossip_accepted;
            }
            clocks[which] = next_time(t, e.rate);
        }
    }
    integrate_to(horizon);

    result.per_node_age = std::move(integral);
    finish_averages(result, horizon - start);
    return result;
}

SpreadOutcome spread_experiment(const SimConfig& config) { return spread_experiment(config, prepare_network(config)); }

SpreadOutcome spread_experiment(const SimConfig& config, const Network& net) {
    config.validate();
    if (net.n != config.n) throw ConfigError("network was prepared for a different n");
    const std::uint32_t n = config.n;
    Rng rng(config.seed);

    std::size_t state = draw_categorical(rng, net.stationary);
    std::vector<char> informed(n, 0);
    informed[0] = 1;
    std::uint32_t informed_count = 1;
    SpreadOutcome out;

    const Graph* graph = &net.graphs[state];
    double gossip_rate = config.lambda * static_cast<double>(graph->active_nodes().size());
    double switch_rate = net.rates.leave[state];
    double total_rate = config.lambda_e + gossip_rate + switch_rate;

    double t = 0.0;
    while (informed_count < n) {
        if (!(total_rate > 0.0)) {
            throw RuntimeGuardError("spread experiment cannot progress: every event rate is zero");
        }
        t += draw_exponential(rng, total_rate);
        if (t > config.spread_cap) {
            throw RuntimeGuardError("spread experiment exceeded the time cap of " + std::to_string(config.spread_cap) +
                                    " with " + std::to_string(informed_count) + " of " + std::to_string(n) +
                                    " nodes informed");
        }
        double u = draw_unit(rng) * total_rate;
        if (u < config.lambda_e) {
            ++out.source_updates;
            continue;
        }
        u -= config.lambda_e;
        if (u < gossip_rate) {
            const auto active = graph->active_nodes();
            const NodeId i = active[draw_index(rng, static_cast<std::uint32_t>(active.size()))];
            const NodeId j = graph->sample_neighbor(i, draw_unit(rng));
            if (informed[i] && !informed[j]) {
                informed[j] = 1;
                ++informed_count;
            }
            continue;
        }
        state = draw_categorical(rng, net.rates.jump.row(static_cast<Eigen::Index>(state)));
        graph = &net.graphs[state];
        gossip_rate = config.lambda * static_cast<double>(graph->active_nodes().size());
        switch_rate = net.rates.leave[state];
        total_rate = config.lambda_e + gossip_rate + switch_rate;
    }
    out.spread_time = t;
    return out;
}

std::vector<double> spread_stage_times(std::uint32_t n, double lambda, Rng& rng, std::size_t trials) {
    if (n < 2) throw ConfigError("spread_stage_times requires n >= 2");
    if (!(lambda > 0.0)) throw ConfigError("spread_stage_times requires lambda > 0");
    std::vector<double> samples(trials, 0.0);
    const double links = static_cast<double>(n - 1);
    for (double& s : samples) {
        for (std::uint32_t k = 1; k < n; ++k) {
            const double rate = static_cast<double>(k) * static_cast<double>(n - k) * lambda / links;
            s += draw_exponential(rng, rate);
        }
    }
    return samples;
}

double expected_complete_spread_time(std::uint32_t n, double lambda) {
    double sum = 0.0;
    for (std::uint32_t k = 1; k < n; ++k) sum += 1.0 / (static_cast<double>(k) * static_cast<double>(n - k));
    return static_cast<double>(n - 1) / lambda * sum;
}

double approx_complete_spread_time(std::uint32_t n, double lambda) {
    const double nn = static_cast<double>(n);
    return 2.0 * (nn - 1.0) / (nn * lambda) * (std::log(nn) + std::numbers::egamma);
}

double exact_complete_spread_variance(std::uint32_t n, double lambda) {
    double sum = 0.0;
    for (std::uint32_t k = 1; k < n; ++k) {
        const double mean = static_cast<double>(n - 1) / (static_cast<double>(k) * static_cast<double>(n - k) * lambda);
        sum += mean * mean;
    }
    return sum;
}

double complete_spread_variance_bound(double lambda) {
    return 4.0 * std::numbers::pi * std::numbers::pi / (3.0 * lambda * lambda);
}

}  // namespace gossip
