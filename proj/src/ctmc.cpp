#include "gossip/ctmc.hpp"

#include <cmath>
#include <queue>
#include <sstream>
#include <string>

#include "gossip/errors.hpp"

namespace gossip {

namespace {

constexpr double kRowTolerance = 1e-12;

std::vector<bool> reachable(const Eigen::MatrixXd& q, std::size_t from, bool forward) {
    const auto k = static_cast<std::size_t>(q.rows());
    std::vector<bool> seen(k, false);
    std::queue<std::size_t> frontier;
    seen[from] = true;
    frontier.push(from);
    while (!frontier.empty()) {
        const std::size_t v = frontier.front();
        frontier.pop();
        for (std::size_t w = 0; w < k; ++w) {
            const double rate = forward ? q(v, w) : q(w, v);
            if (w != v && rate > 0.0 && !seen[w]) {
                seen[w] = true;
                frontier.push(w);
            }
        }
    }
    return seen;
}

void require_irreducible(const Eigen::MatrixXd& q) {
    const auto fwd = reachable(q, 0, true);
    const auto bwd = reachable(q, 0, false);
    std::ostringstream unreachable, trapped;
    bool bad = false;
    for (std::size_t i = 0; i < fwd.size(); ++i) {
        if (!fwd[i]) {
            unreachable << (unreachable.tellp() > 0 ? ", " : "") << i;
            bad = true;
        } else if (!bwd[i]) {
            trapped << (trapped.tellp() > 0 ? ", " : "") << i;
            bad = true;
        }
    }
    if (!bad) return;
    std::string msg = "CTMC is reducible:";
    if (unreachable.tellp() > 0) msg += " states unreachable from state 0: [" + unreachable.str() + "]";
    if (trapped.tellp() > 0) msg += " states that cannot return to state 0: [" + trapped.str() + "]";
    throw AnalysisError(msg);
}

}  // namespace

CtmcSpec CtmcSpec::single(TopologySpec topology) {
    CtmcSpec spec;
    spec.states.push_back(std::move(topology));
    spec.leave_rates.push_back(RateExpr::constant(1.0));
    spec.transition_probs = {{0.0}};
    return spec;
}

void CtmcSpec::validate() const {
    const std::size_t k = states.size();
    if (k == 0) throw ConfigError("CTMC must have at least one state");
    if (leave_rates.size() != k) {
        throw ConfigError("CTMC has " + std::to_string(k) + " states but " + std::to_string(leave_rates.size()) +
                          " leave rates");
    }
    if (transition_probs.size() != k) throw ConfigError("transition matrix must have one row per state");
    for (std::size_t i = 0; i < k; ++i) {
        const auto& row = transition_probs[i];
        if (row.size() != k) throw ConfigError("transition matrix row " + std::to_string(i) + " has wrong length");
        if (k == 1) continue;  // switching disabled
        if (row[i] != 0.0) throw ConfigError("transition matrix must have zero diagonal (row " + std::to_string(i) + ")");
        double sum = 0.0;
        for (double p : row) {
            if (!(p >= 0.0) || p > 1.0) throw ConfigError("transition probabilities must lie in [0, 1]");
            sum += p;
        }
        if (std::abs(sum - 1.0) > kRowTolerance) {
            throw ConfigError("transition matrix row " + std::to_string(i) + " sums to " + std::to_string(sum));
        }
    }
}

CtmcRates evaluate_rates(const CtmcSpec& spec, double n) {
    spec.validate();
    const auto k = static_cast<Eigen::Index>(spec.state_count());
    CtmcRates rates;
    rates.jump = Eigen::MatrixXd::Zero(k, k);
    rates.leave.resize(static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < k; ++i) {
        const auto row = static_cast<std::size_t>(i);
        rates.leave[row] = k == 1 ? 0.0 : spec.leave_rates[row].evaluate(n);
        for (Eigen::Index j = 0; j < k; ++j) {
            rates.jump(i, j) = k == 1 ? 0.0 : spec.transition_probs[row][static_cast<std::size_t>(j)];
        }
    }
    return rates;
}

Eigen::MatrixXd generator_matrix(const CtmcRates& rates) {
    const auto k = rates.jump.rows();
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const double leave = rates.leave[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < k; ++j) {
            if (j != i) q(i, j) = leave * rates.jump(i, j);
        }
        q(i, i) = leave == 0.0 ? 0.0 : -leave;
    }
    return q;
}

Eigen::MatrixXd generator_matrix(const CtmcSpec& spec, double n) { return generator_matrix(evaluate_rates(spec, n)); }

Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& generator) {
    const auto k = generator.rows();
    if (k == 1) return Eigen::VectorXd::Ones(1);
    require_irreducible(generator);

    // pi Q = 0  <=>  Q^T pi^T = 0; replace the last equation with sum(pi) = 1.
    Eigen::MatrixXd a = generator.transpose();
    a.row(k - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(k);
    b(k - 1) = 1.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) throw AnalysisError("stationary system is numerically singular");
    Eigen::VectorXd pi = lu.solve(b);
    // one refinement step
    pi += lu.solve(b - a * pi);
    return pi;
}

ReturnMoments return_time_moments(const Eigen::MatrixXd& generator, std::size_t target_state) {
    const auto k = generator.rows();
    if (k < 2) throw AnalysisError("return times need at least two states");
    if (target_state >= static_cast<std::size_t>(k)) throw AnalysisError("target state out of range");
    require_irreducible(generator);

    // Transient phases: index 0 is the start copy of the target, followed by
    // every other state in order. Jumps into the target are absorbed.
    const auto target = static_cast<Eigen::Index>(target_state);
    std::vector<Eigen::Index> phase_of_state(static_cast<std::size_t>(k), -1);
    Eigen::Index next = 1;
    for (Eigen::Index s = 0; s < k; ++s) {
        if (s != target) phase_of_state[static_cast<std::size_t>(s)] = next++;
    }
    auto original = [&](Eigen::Index phase) {
        if (phase == 0) return target;
        for (Eigen::Index s = 0; s < k; ++s) {
            if (phase_of_state[static_cast<std::size_t>(s)] == phase) return s;
        }
        return Eigen::Index{-1};
    };

    Eigen::MatrixXd sub = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
        const Eigen::Index from = original(a);
        sub(a, a) = generator(from, from);
        for (Eigen::Index to = 0; to < k; ++to) {
            if (to == from || to == target) continue;
            sub(a, phase_of_state[static_cast<std::size_t>(to)]) = generator(from, to);
        }
    }

    Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
    if (!lu.isInvertible()) throw AnalysisError("phase-type sub-generator is singular");
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(k);
    const Eigen::VectorXd first = lu.solve(ones);   // S^-1 1
    const Eigen::VectorXd second = lu.solve(first);  // S^-2 1

    // Initial vector is the indicator of the start copy (phase 0).
    const double m1 = -first(0);
    const double m2 = 2.0 * second(0);
    return {m1, m2 - m1 * m1};
}

ReturnMoments return_time_moments(const CtmcSpec& spec, double n, std::size_t target_state) {
    return return_time_moments(generator_matrix(spec, n), target_state);
}

CtmcAnalysis analyze(const CtmcSpec& spec, double n) {
    CtmcAnalysis out;
    out.generator = generator_matrix(spec, n);
    out.stationary = stationary_distribution(out.generator);
    if (out.generator.rows() > 1) {
        for (std::size_t s = 0; s < static_cast<std::size_t>(out.generator.rows()); ++s) {
            out.return_moments.push_back(return_time_moments(out.generator, s));
        }
    }
    return out;
}

std::vector<Segment> sample_trajectory(const CtmcRates& rates, const Eigen::VectorXd& initial, Rng& rng,
                                       double horizon) {
    if (!(horizon > 0)) throw ConfigError("trajectory horizon must be positive");
    std::vector<Segment> path;
    std::size_t state = draw_categorical(rng, initial);
    double t = 0.0;
    path.push_back({state, t});
    if (rates.leave.size() == 1) return path;
    for (;;) {
        t += draw_exponential(rng, rates.leave[state]);
        if (t >= horizon) break;
        state = draw_categorical(rng, rates.jump.row(static_cast<Eigen::Index>(state)));
        path.push_back({state, t});
    }
    return path;
}

std::vector<Segment> sample_trajectory(const CtmcSpec& spec, double n, Rng& rng, double horizon) {
    const auto rates = evaluate_rates(spec, n);
    return sample_trajectory(rates, stationary_distribution(generator_matrix(rates)), rng, horizon);
}

}  // namespace gossip
