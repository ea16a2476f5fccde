#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "gossip/ctmc.hpp"
#include "gossip/rng.hpp"
#include "gossip/topology.hpp"

namespace gossip {

enum class SimMode { FullGossip, SpreadExperiment };
// Source-to-node links; only the uniform split lambda_0j = lambda_s / n exists.
enum class SourceDelivery { UniformNode };

std::string_view to_string(SimMode mode);
SimMode parse_sim_mode(std::string_view text);

struct SimConfig {
    std::uint32_t n = 1;
    double lambda_e = 1.0;  // source self-update rate
    double lambda_s = 1.0;  // total source-to-network rate
    double lambda = 1.0;    // per-node total gossip rate
    CtmcSpec ctmc = CtmcSpec::single(TopologySpec::complete());
    double horizon = 2000.0;
    std::optional<double> burn_in;  // defaults to 10% of the horizon
    std::uint64_t seed = 0;
    SimMode mode = SimMode::FullGossip;
    SourceDelivery source_delivery = SourceDelivery::UniformNode;
    double spread_cap = 1e6;  // runaway guard for spread experiments

    double effective_burn_in() const { return burn_in.value_or(0.1 * horizon); }
    void validate() const;
};

// Everything about a configuration that does not depend on the seed: the
// realized graph of every CTMC state and the chain evaluated at n. Immutable,
// shared across replicates and workers.
struct Network {
    std::uint32_t n = 0;
    std::vector<Graph> graphs;
    CtmcRates rates;
    Eigen::VectorXd stationary;
};

Network prepare_network(const SimConfig& config);

struct EventCounts {
    std::uint64_t source_updates = 0;
    std::uint64_t deliveries = 0;
    std::uint64_t gossip = 0;           // gossip firings
    std::uint64_t gossip_accepted = 0;  // firings that changed the receiver
    std::uint64_t switches = 0;
};

struct SpreadOutcome {
    double spread_time = 0.0;           // T: all nodes informed
    std::uint64_t source_updates = 0;   // N_0([0, T])
};

struct RunResult {
    std::vector<double> per_node_age;   // time-averaged over [burn_in, horizon]
    double network_avg_age = 0.0;       // mean of per_node_age
    EventCounts counts;
    std::optional<SpreadOutcome> spread;
};

enum class EventKind { SourceUpdate, Delivery, Gossip, Switch };
std::string_view to_string(EventKind kind);

struct Event {
    double t = 0.0;
    EventKind kind = EventKind::SourceUpdate;
    std::int64_t actor = -1;   // firing node, or previous CTMC state for switches
    std::int64_t target = -1;  // receiving node, or new CTMC state
};

using EventObserver = std::function<void(const Event&)>;

inline constexpr std::uint32_t kMaxLoggedNodes = 64;
inline constexpr std::uint32_t kMaxNaiveNodes = 64;

// Writes "t,event_kind,actor,target" rows. The engine refuses to attach an
// observer for n > kMaxLoggedNodes.
EventObserver csv_event_log(std::ostream& out);

// Event-driven simulation using one competing-exponential clock: every event
// draws the next time from the total rate, picks a category in proportion
// to its rate and then a node uniformly. Versions are kept as counters, so
// each event costs O(1).
RunResult run(const SimConfig& config);
RunResult run(const SimConfig& config, const Network& network, const EventObserver& observer = {});

// Direct transcription with one exponential clock per source link and per
// directed edge, and an explicit age vector. Correctness oracle for run();
// limited to n <= max_nodes.
RunResult run_naive(const SimConfig& config, std::uint32_t max_nodes = kMaxNaiveNodes);

// Node 0 is informed at t = 0, source deliveries are off, and gossip moves
// the informed flag. Stops when every node is informed.
SpreadOutcome spread_experiment(const SimConfig& config);
SpreadOutcome spread_experiment(const SimConfig& config, const Network& network);

// Samples of S_n = sum_{k=1}^{n-1} V_k with V_k ~ Exp(k (n - k) lambda / (n - 1)),
// the complete-graph spread time.
std::vector<double> spread_stage_times(std::uint32_t n, double lambda, Rng& rng, std::size_t trials);

// ((n - 1) / lambda) * sum_{k=1}^{n-1} 1 / (k (n - k))
double expected_complete_spread_time(std::uint32_t n, double lambda);
// (2 (n - 1) / (n lambda)) (log n + gamma)
double approx_complete_spread_time(std::uint32_t n, double lambda);
// sum_{k=1}^{n-1} ((n - 1) / (k (n - k) lambda))^2
double exact_complete_spread_variance(std::uint32_t n, double lambda);
// 4 pi^2 / (3 lambda^2), an n-independent upper bound on the variance above.
double complete_spread_variance_bound(double lambda);

}  // namespace gossip
