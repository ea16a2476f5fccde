#include <algorithm>
#include <random>
#include <sstream>

#include "doctest.h"
#include "gossip/errors.hpp"
#include "gossip/topology.hpp"

using namespace gossip;

namespace {

void check_symmetric(const Graph& g) {
    for (NodeId i = 0; i < g.node_count(); ++i) {
        const auto nbrs = g.neighbors(i);
        CHECK(nbrs.size() == g.degree(i));
        for (NodeId j : nbrs) {
            CHECK(j != i);
            CHECK(g.has_edge(j, i));
        }
    }
}

void check_rate_sums(const Graph& g, double lambda) {
    const GossipRateTable table(g, lambda);
    for (NodeId i = 0; i < g.node_count(); ++i) {
        double sum = 0.0;
        for (double r : table.rates(i)) sum += r;
        if (g.degree(i) == 0) {
            CHECK(table.total(i) == 0.0);
        } else {
            CHECK(std::abs(sum - lambda) <= 1e-12 * lambda);
            CHECK(std::abs(table.total(i) - lambda) <= 1e-12 * lambda);
        }
    }
}

}  // namespace

TEST_CASE("complete graph on 4 nodes") {
    const Graph g = build_topology(TopologySpec::complete(), 4);
    CHECK(g.edge_count() == 6);
    for (NodeId i = 0; i < 4; ++i) CHECK(g.degree(i) == 3);
    check_symmetric(g);
    CHECK(g.is_connected());
}

TEST_CASE("wraparound grid on 9 nodes is a torus") {
    const Graph g = build_topology(TopologySpec::grid(), 9);
    CHECK(g.edge_count() == 18);
    for (NodeId i = 0; i < 9; ++i) CHECK(g.degree(i) == 4);
    check_symmetric(g);
    // node 0 = (0,0): right (0,1), down (1,0), wrap-left (0,2), wrap-up (2,0)
    auto n0 = g.neighbors(0);
    std::sort(n0.begin(), n0.end());
    CHECK(n0 == std::vector<NodeId>{1, 2, 3, 6});
}

TEST_CASE("open grid has boundary degrees") {
    const Graph g = build_topology(TopologySpec::grid(false), 16);
    CHECK(g.edge_count() == 24);
    CHECK(g.degree(0) == 2);
    CHECK(g.degree(1) == 3);
    CHECK(g.degree(5) == 4);
}

TEST_CASE("disconnected graph has no edges and no gossip") {
    const Graph g = build_topology(TopologySpec::disconnected(), 100);
    CHECK(g.edge_count() == 0);
    CHECK(g.active_nodes().empty());
    for (NodeId i = 0; i < 100; ++i) CHECK(g.degree(i) == 0);
    const GossipRateTable t(g, 1.0);
    for (NodeId i = 0; i < 100; ++i) CHECK(t.total(i) == 0.0);
}

TEST_CASE("ring edges and rates") {
    const Graph g = build_topology(TopologySpec::ring(), 8);
    CHECK(g.edge_count() == 8);
    check_symmetric(g);
    const GossipRateTable t(g, 2.0);
    for (NodeId i = 0; i < 8; ++i) {
        for (double r : t.rates(i)) CHECK(r == doctest::Approx(1.0));
    }
}

TEST_CASE("complete graph rates are lambda / (n - 1)") {
    const Graph g = build_topology(TopologySpec::complete(), 5);
    const GossipRateTable t(g, 1.0);
    for (NodeId i = 0; i < 5; ++i) {
        CHECK(t.rates(i).size() == 4);
        for (double r : t.rates(i)) CHECK(r == doctest::Approx(0.25));
    }
}

TEST_CASE("configuration errors") {
    CHECK_THROWS_AS(build_topology(TopologySpec::grid(), 10), ConfigError);
    CHECK_THROWS_AS(build_topology(TopologySpec::ring(), 2), ConfigError);
    CHECK_THROWS_AS(build_topology(TopologySpec::custom({{0, 5}}), 5), ConfigError);
    CHECK_THROWS_AS(build_topology(TopologySpec::custom({{1, 1}}), 5), ConfigError);
    CHECK_THROWS_AS(build_topology(TopologySpec::custom({{0, 1}, {1, 0}}), 5), ConfigError);
    CHECK_THROWS_AS(build_topology(TopologySpec::complete(), 0), ConfigError);
}

TEST_CASE("edge-list parsing") {
    std::istringstream in("# triangle plus a weighted spur\n0 1\n1 2\n2 0\n\n2 3 3.0\n");
    const TopologySpec spec = parse_edge_list(in);
    CHECK(spec.weighted);
    CHECK(spec.edges.size() == 4);
    const Graph g = build_topology(spec, 5);
    CHECK(g.degree(4) == 0);
    CHECK(g.active_nodes().size() == 4);
    CHECK_FALSE(g.is_connected());

    const GossipRateTable t(g, 1.0);
    // node 2: neighbours 1, 0 (weight 1) and 3 (weight 3)
    CHECK(t.total(2) == doctest::Approx(1.0));
    const auto rates = t.rates(2);
    CHECK(*std::max_element(rates.begin(), rates.end()) == doctest::Approx(0.6));

    std::istringstream bad("0 x\n");
    CHECK_THROWS_AS(parse_edge_list(bad), ConfigError);
}

TEST_CASE("weighted neighbour sampling follows weights") {
    const Graph g = build_topology(TopologySpec::custom({{0, 1, 1.0}, {0, 2, 3.0}}, true), 3);
    int to2 = 0;
    const int draws = 4000;
    for (int k = 0; k < draws; ++k) {
        const double u = (k + 0.5) / draws;
        to2 += g.sample_neighbor(0, u) == 2;
    }
    CHECK(to2 == 3000);
}

TEST_CASE("property: random custom graphs are symmetric and rates sum to lambda") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const std::uint32_t n = 2 + static_cast<std::uint32_t>(rng() % 30);
        std::vector<WeightedEdge> edges;
        for (NodeId a = 0; a < n; ++a) {
            for (NodeId b = a + 1; b < n; ++b) {
                if (rng() % 4 == 0) edges.push_back({a, b, 0.5 + static_cast<double>(rng() % 5)});
            }
        }
        const bool weighted = trial % 2 == 0;
        const Graph g = build_topology(TopologySpec::custom(edges, weighted), n);
        CHECK(g.edge_count() == edges.size());
        check_symmetric(g);
        check_rate_sums(g, 0.7 + trial);
    }
    for (std::uint32_t side : {3u, 5u, 10u}) check_rate_sums(build_topology(TopologySpec::grid(), side * side), 1.3);
    check_rate_sums(build_topology(TopologySpec::complete(), 57), 2.5);
}

TEST_CASE("construction is deterministic") {
    for (auto spec : {TopologySpec::ring(), TopologySpec::grid(), TopologySpec::grid(false)}) {
        const Graph a = build_topology(spec, 36);
        const Graph b = build_topology(spec, 36);
        for (NodeId i = 0; i < 36; ++i) CHECK(a.neighbors(i) == b.neighbors(i));
    }
}
