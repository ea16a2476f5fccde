#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "gossip/rate_expr.hpp"
#include "gossip/rng.hpp"
#include "gossip/topology.hpp"

namespace gossip {

// Topology-switching chain. Each state carries a graph family; leave rates
// may depend on n and are evaluated once per run.
struct CtmcSpec {
    std::vector<TopologySpec> states;
    std::vector<RateExpr> leave_rates;
    std::vector<std::vector<double>> transition_probs;  // row-stochastic, zero diagonal

    std::size_t state_count() const noexcept { return states.size(); }

    // Single state: switching disabled.
    static CtmcSpec single(TopologySpec topology);

    // Throws ConfigError on malformed specs.
    void validate() const;
};

// Leave rates and jump probabilities at a fixed n.
struct CtmcRates {
    std::vector<double> leave;
    Eigen::MatrixXd jump;  // K x K
};

CtmcRates evaluate_rates(const CtmcSpec& spec, double n);

Eigen::MatrixXd generator_matrix(const CtmcSpec& spec, double n);
Eigen::MatrixXd generator_matrix(const CtmcRates& rates);

// Solves pi Q = 0, sum(pi) = 1. Throws AnalysisError for reducible chains,
// naming the offending states.
Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& generator);

struct ReturnMoments {
    double mean = 0.0;
    double variance = 0.0;
};

// Entry-to-next-entry interval of target_state, as a phase-type distribution.
// The target is split into a start copy (transient, where the interval
// begins) and an absorbing copy (re-entry).
ReturnMoments return_time_moments(const CtmcSpec& spec, double n, std::size_t target_state);
ReturnMoments return_time_moments(const Eigen::MatrixXd& generator, std::size_t target_state);

struct CtmcAnalysis {
    Eigen::MatrixXd generator;
    Eigen::VectorXd stationary;
    std::vector<ReturnMoments> return_moments;  // empty when K == 1
};

CtmcAnalysis analyze(const CtmcSpec& spec, double n);

struct Segment {
    std::size_t state = 0;
    double entry_time = 0.0;
};

// Trajectory covering [0, horizon]; the initial state is drawn from the
// stationary distribution.
std::vector<Segment> sample_trajectory(const CtmcSpec& spec, double n, Rng& rng, double horizon);
std::vector<Segment> sample_trajectory(const CtmcRates& rates, const Eigen::VectorXd& initial, Rng& rng,
                                       double horizon);

// Draws an index from a probability vector (row of a matrix or pi).
template <class Vec>
std::size_t draw_categorical(Rng& rng, const Vec& probs) {
    const double u = draw_unit(rng);
    double running = 0.0;
    const auto size = static_cast<std::size_t>(probs.size());
    std::size_t last_positive = 0;
    for (std::size_t k = 0; k < size; ++k) {
        if (probs[k] <= 0.0) continue;
        last_positive = k;
        running += probs[k];
        if (u < running) return k;
    }
    return last_positive;
}

}  // namespace gossip
