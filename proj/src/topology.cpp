#include "gossip/topology.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <utility>

#include "gossip/errors.hpp"

namespace gossip {

std::string to_string(TopologyKind kind) {
    switch (kind) {
        case TopologyKind::Complete: return "complete";
        case TopologyKind::Ring: return "ring";
        case TopologyKind::Grid: return "grid";
        case TopologyKind::Disconnected: return "disconnected";
        case TopologyKind::CustomEdgeList: return "custom";
    }
    return "unknown";
}

TopologyKind parse_topology_kind(const std::string& name) {
    if (name == "complete" || name == "fc") return TopologyKind::Complete;
    if (name == "ring") return TopologyKind::Ring;
    if (name == "grid") return TopologyKind::Grid;
    if (name == "disconnected" || name == "dc") return TopologyKind::Disconnected;
    if (name == "custom") return TopologyKind::CustomEdgeList;
    throw ConfigError("unknown topology kind '" + name + "'");
}

TopologySpec TopologySpec::custom(std::vector<WeightedEdge> edges, bool weighted) {
    TopologySpec s = of(TopologyKind::CustomEdgeList);
    s.edges = std::move(edges);
    s.weighted = weighted;
    return s;
}

TopologySpec parse_edge_list(std::istream& in, const std::string& origin) {
    std::vector<WeightedEdge> edges;
    bool weighted = false;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        long long a = 0, b = 0;
        if (!(fields >> a)) continue;  // blank line
        if (!(fields >> b) || a < 0 || b < 0) {
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected 'i j [weight]'");
        }
        WeightedEdge e{static_cast<NodeId>(a), static_cast<NodeId>(b), 1.0};
        if (double w = 0; fields >> w) {
            if (!(w > 0) || !std::isfinite(w)) {
                throw ConfigError(origin + ":" + std::to_string(line_no) + ": edge weight must be positive");
            }
            e.weight = w;
            weighted = true;
        }
        edges.push_back(e);
    }
    return TopologySpec::custom(std::move(edges), weighted);
}

TopologySpec load_edge_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open edge list '" + path.string() + "'");
    return parse_edge_list(in, path.string());
}

namespace {

struct EdgeAccumulator {
    explicit EdgeAccumulator(std::uint32_t n) : adjacency(n), weights(n) {}

    void add(NodeId a, NodeId b, double w = 1.0) {
        adjacency[a].push_back(b);
        adjacency[b].push_back(a);
        weights[a].push_back(w);
        weights[b].push_back(w);
        ++edges;
    }

    std::vector<std::vector<NodeId>> adjacency;
    std::vector<std::vector<double>> weights;
    std::uint64_t edges = 0;
};

std::uint32_t exact_sqrt(std::uint32_t n) {
    auto side = static_cast<std::uint32_t>(std::llround(std::sqrt(static_cast<double>(n))));
    while (static_cast<std::uint64_t>(side) * side > n) --side;
    while (static_cast<std::uint64_t>(side + 1) * (side + 1) <= n) ++side;
    return side;
}

void build_grid(EdgeAccumulator& acc, std::uint32_t n, bool wraparound) {
    const std::uint32_t side = exact_sqrt(n);
    if (static_cast<std::uint64_t>(side) * side != n) {
        throw ConfigError("grid topology requires a perfect-square node count, got n=" + std::to_string(n));
    }
    std::set<std::pair<NodeId, NodeId>> seen;
    auto link = [&](NodeId a, NodeId b) {
        if (a == b) return;
        auto key = std::minmax(a, b);
        if (seen.insert(key).second) acc.add(a, b);
    };
    for (std::uint32_t r = 0; r < side; ++r) {
        for (std::uint32_t c = 0; c < side; ++c) {
            const NodeId here = r * side + c;
            if (c + 1 < side) {
                link(here, here + 1);
            } else if (wraparound) {
                link(here, r * side);
            }
            if (r + 1 < side) {
                link(here, here + side);
            } else if (wraparound) {
                link(here, c);
            }
        }
    }
}

void build_custom(EdgeAccumulator& acc, const TopologySpec& spec, std::uint32_t n) {
    std::set<std::pair<NodeId, NodeId>> seen;
    for (const auto& e : spec.edges) {
        if (e.a >= n || e.b >= n) {
            throw ConfigError("custom edge (" + std::to_string(e.a) + ", " + std::to_string(e.b) +
                              ") references a node >= n=" + std::to_string(n));
        }
        if (e.a == e.b) throw ConfigError("custom edge list contains self-loop on node " + std::to_string(e.a));
        if (!seen.insert(std::minmax(e.a, e.b)).second) {
            throw ConfigError("custom edge list contains duplicate edge (" + std::to_string(e.a) + ", " +
                              std::to_string(e.b) + ")");
        }
        acc.add(e.a, e.b, spec.weighted ? e.weight : 1.0);
    }
}

}  // namespace

Graph build_topology(const TopologySpec& spec, std::uint32_t n) {
    if (n < 1) throw ConfigError("node count must be at least 1");
    Graph g;
    g.n_ = n;
    g.kind_ = spec.kind;

    if (spec.kind == TopologyKind::Complete) {
        g.implicit_complete_ = true;
        g.edge_count_ = static_cast<std::uint64_t>(n) * (n - 1) / 2;
        if (n > 1) {
            g.active_.resize(n);
            std::iota(g.active_.begin(), g.active_.end(), NodeId{0});
        }
        return g;
    }

    EdgeAccumulator acc(n);
    switch (spec.kind) {
        case TopologyKind::Ring:
            if (n < 3) throw ConfigError("ring topology requires n >= 3, got n=" + std::to_string(n));
            for (NodeId i = 0; i < n; ++i) acc.add(i, (i + 1) % n);
            break;
        case TopologyKind::Grid: build_grid(acc, n, spec.wraparound); break;
        case TopologyKind::Disconnected: break;
        case TopologyKind::CustomEdgeList: build_custom(acc, spec, n); break;
        case TopologyKind::Complete: break;
    }

    g.edge_count_ = acc.edges;
    g.offsets_.assign(n + 1, 0);
    for (NodeId i = 0; i < n; ++i) g.offsets_[i + 1] = g.offsets_[i] + static_cast<std::uint32_t>(acc.adjacency[i].size());
    g.targets_.reserve(g.offsets_[n]);
    for (NodeId i = 0; i < n; ++i) {
        g.targets_.insert(g.targets_.end(), acc.adjacency[i].begin(), acc.adjacency[i].end());
        if (!acc.adjacency[i].empty()) g.active_.push_back(i);
    }
    if (spec.kind == TopologyKind::CustomEdgeList && spec.weighted) {
        g.weights_.reserve(g.offsets_[n]);
        g.cumulative_.reserve(g.offsets_[n]);
        for (NodeId i = 0; i < n; ++i) {
            const auto& w = acc.weights[i];
            g.weights_.insert(g.weights_.end(), w.begin(), w.end());
            const double total = std::accumulate(w.begin(), w.end(), 0.0);
            double running = 0.0;
            for (double x : w) {
                running += x;
                g.cumulative_.push_back(running / total);
            }
        }
    }
    return g;
}

std::vector<NodeId> Graph::neighbors(NodeId i) const {
    std::vector<NodeId> out(degree(i));
    for (std::uint32_t k = 0; k < out.size(); ++k) out[k] = neighbor(i, k);
    return out;
}

bool Graph::has_edge(NodeId i, NodeId j) const {
    if (implicit_complete_) return i != j && i < n_ && j < n_;
    const auto first = targets_.begin() + offsets_[i];
    const auto last = targets_.begin() + offsets_[i + 1];
    return std::find(first, last, j) != last;
}

NodeId Graph::sample_neighbor(NodeId i, double u) const noexcept {
    const std::uint32_t d = degree(i);
    if (cumulative_.empty()) {
        auto k = static_cast<std::uint32_t>(u * d);
        return neighbor(i, k < d ? k : d - 1);
    }
    const auto first = cumulative_.begin() + offsets_[i];
    const auto last = cumulative_.begin() + offsets_[i + 1];
    auto it = std::upper_bound(first, last, u);
    if (it == last) --it;
    return targets_[offsets_[i] + static_cast<std::uint32_t>(it - first)];
}

bool Graph::is_connected() const {
    if (n_ <= 1) return true;
    if (implicit_complete_) return true;
    std::vector<char> seen(n_, 0);
    std::queue<NodeId> frontier;
    frontier.push(0);
    seen[0] = 1;
    std::uint32_t reached = 1;
    while (!frontier.empty()) {
        const NodeId v = frontier.front();
        frontier.pop();
        for (std::uint32_t k = 0; k < degree(v); ++k) {
            const NodeId w = neighbor(v, k);
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                frontier.push(w);
            }
        }
    }
    return reached == n_;
}

GossipRateTable::GossipRateTable(const Graph& graph, double lambda) {
    const std::uint32_t n = graph.node_count();
    offsets_.assign(n + 1, 0);
    totals_.assign(n, 0.0);
    for (NodeId i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + graph.degree(i);
    rates_.resize(offsets_[n]);
    for (NodeId i = 0; i < n; ++i) {
        const std::uint32_t d = graph.degree(i);
        if (d == 0) continue;
        double weight_sum = 0.0;
        for (std::uint32_t k = 0; k < d; ++k) weight_sum += graph.weight(i, k);
        double total = 0.0;
        for (std::uint32_t k = 0; k < d; ++k) {
            const double r = graph.uniform_weights() ? lambda / d : lambda * graph.weight(i, k) / weight_sum;
            rates_[offsets_[i] + k] = r;
            total += r;
        }
        totals_[i] = total;
    }
}

}  // namespace gossip
