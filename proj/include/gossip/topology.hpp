#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gossip {

using NodeId = std::uint32_t;

enum class TopologyKind { Complete, Ring, Grid, Disconnected, CustomEdgeList };

std::string to_string(TopologyKind kind);
TopologyKind parse_topology_kind(const std::string& name);

struct WeightedEdge {
    NodeId a = 0;
    NodeId b = 0;
    // Relative weight; the gossip rate out of each endpoint is normalized to lambda.
    double weight = 1.0;
};

struct TopologySpec {
    TopologyKind kind = TopologyKind::Complete;
    bool wraparound = true;            // Grid only
    std::vector<WeightedEdge> edges;   // CustomEdgeList only
    bool weighted = false;             // CustomEdgeList: honour per-edge weights

    static TopologySpec of(TopologyKind kind) {
        TopologySpec s;
        s.kind = kind;
        return s;
    }
    static TopologySpec complete() { return of(TopologyKind::Complete); }
    static TopologySpec ring() { return of(TopologyKind::Ring); }
    static TopologySpec grid(bool wraparound = true) {
        TopologySpec s = of(TopologyKind::Grid);
        s.wraparound = wraparound;
        return s;
    }
    static TopologySpec disconnected() { return of(TopologyKind::Disconnected); }
    static TopologySpec custom(std::vector<WeightedEdge> edges, bool weighted = false);
};

// Reads "i j [w]" lines (0-based, '#' comments allowed).
TopologySpec load_edge_list(const std::filesystem::path& path);
TopologySpec parse_edge_list(std::istream& in, const std::string& origin = "<stream>");

// Undirected connectivity; gossip flows both ways along every edge.
// The complete graph is stored implicitly so n can grow without O(n^2) memory.
class Graph {
public:
    Graph() = default;

    std::uint32_t node_count() const noexcept { return n_; }
    TopologyKind kind() const noexcept { return kind_; }
    std::uint32_t degree(NodeId i) const noexcept {
        return implicit_complete_ ? (n_ - 1) : offsets_[i + 1] - offsets_[i];
    }
    // k-th neighbor of i, 0 <= k < degree(i).
    NodeId neighbor(NodeId i, std::uint32_t k) const noexcept {
        if (implicit_complete_) return k < i ? k : k + 1;
        return targets_[offsets_[i] + k];
    }
    std::vector<NodeId> neighbors(NodeId i) const;
    bool has_edge(NodeId i, NodeId j) const;
    std::uint64_t edge_count() const noexcept { return edge_count_; }
    // Nodes with degree > 0, ascending.
    std::span<const NodeId> active_nodes() const noexcept { return active_; }
    bool is_connected() const;

    // Per-directed-edge relative weights, aligned with neighbor(i, k); empty
    // when every node splits uniformly.
    bool uniform_weights() const noexcept { return weights_.empty(); }
    double weight(NodeId i, std::uint32_t k) const noexcept {
        return weights_.empty() ? 1.0 : weights_[offsets_[i] + k];
    }
    // Picks a neighbor of i (degree(i) > 0) from u in [0, 1), proportionally
    // to the edge weights.
    NodeId sample_neighbor(NodeId i, double u) const noexcept;

private:
    friend Graph build_topology(const TopologySpec& spec, std::uint32_t n);

    std::uint32_t n_ = 0;
    TopologyKind kind_ = TopologyKind::Disconnected;
    bool implicit_complete_ = false;
    std::vector<std::uint32_t> offsets_{0};
    std::vector<NodeId> targets_;
    std::vector<double> weights_;
    std::vector<double> cumulative_;  // per-node normalized running sums of weights_
    std::vector<NodeId> active_;
    std::uint64_t edge_count_ = 0;
};

Graph build_topology(const TopologySpec& spec, std::uint32_t n);

// Per-node, per-neighbor push rates. Each node with at least one neighbor
// sends at total rate lambda; isolated nodes send nothing.
class GossipRateTable {
public:
    GossipRateTable(const Graph& graph, double lambda);

    double rate(NodeId i, std::uint32_t k) const noexcept { return rates_[offsets_[i] + k]; }
    std::span<const double> rates(NodeId i) const noexcept {
        return {rates_.data() + offsets_[i], rates_.data() + offsets_[i + 1]};
    }
    double total(NodeId i) const noexcept { return totals_[i]; }
    std::uint32_t node_count() const noexcept { return static_cast<std::uint32_t>(totals_.size()); }

private:
    std::vector<std::size_t> offsets_;
    std::vector<double> rates_;
    std::vector<double> totals_;
};

inline GossipRateTable gossip_rates(const Graph& graph, double lambda) {
    return GossipRateTable(graph, lambda);
}

}  // namespace gossip
