#include "doctest.h"
#include "gossip/errors.hpp"
#include "gossip/experiments.hpp"

using namespace gossip;

TEST_CASE("even squares") {
    const auto sq = even_squares(100, 1024);
    REQUIRE(sq.size() == 12);
    CHECK(sq[0] == 100);
    CHECK(sq[1] == 144);
    CHECK(sq[2] == 196);
    CHECK(sq[3] == 256);
    CHECK(sq.back() == 1024);
    CHECK(even_squares(5, 15).empty());
    CHECK(even_squares(4, 16) == std::vector<std::uint32_t>{4, 16});
}

TEST_CASE("preset catalogue") {
    CHECK(preset_ids() == std::vector<std::string>{"fig3", "fig4", "fig5", "thm1"});
    CHECK_THROWS_AS(preset("fig9"), ConfigError);

    const auto f3 = preset("fig3");
    CHECK(f3.n_list == even_squares(100, 1024));
    REQUIRE(f3.states.size() == 2);
    CHECK(f3.states[0].kind == TopologyKind::Ring);
    CHECK(f3.states[1].kind == TopologyKind::Grid);
    REQUIRE(f3.variants.size() == 2);
    CHECK(f3.variants[0].rate.evaluate(400) == doctest::Approx(20.0));
    CHECK(f3.variants[1].rate.evaluate(1000) == doctest::Approx(10.0));

    const auto f4 = preset("fig4");
    CHECK(f4.n_list == std::vector<std::uint32_t>{200, 400, 600, 800, 1000});
    CHECK(f4.states[1].kind == TopologyKind::Complete);
    CHECK(f4.variants.size() == 3);

    const auto f5 = preset("fig5");
    REQUIRE(f5.states.size() == 4);
    CHECK(f5.states[3].kind == TopologyKind::Disconnected);
    // 4-cycle: each state jumps to its two cycle neighbours with probability 1/2
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            const bool adjacent = (j + 1) % 4 == i || (i + 1) % 4 == j;
            CHECK(f5.transition_probs[i][j] == (adjacent ? 0.5 : 0.0));
        }
    }
    CHECK(f5.variants.size() == 4);
}

TEST_CASE("every preset chain is valid and irreducible at every n") {
    for (const auto& id : preset_ids()) {
        const auto p = preset(id);
        for (const auto& v : p.variants) {
            const CtmcSpec spec = p.ctmc_for(v);
            CHECK_NOTHROW(spec.validate());
            for (auto n : p.n_list) {
                const auto pi = stationary_distribution(generator_matrix(spec, n));
                CHECK(pi.sum() == doctest::Approx(1.0));
                for (const auto& s : spec.states) CHECK_NOTHROW(build_topology(s, n));
            }
        }
    }
}

TEST_CASE("sweep shape and job-count independence") {
    auto p = preset("fig3");
    p.n_list = {100, 144};
    p.replicates = 3;
    p.horizon = 60;
    p.burn_in = 6;
    const auto one = run_preset(p, 5, 1);
    CHECK(one.rows.size() == 2 * 2 * 3);
    CHECK(one.groups.size() == 4);
    const auto many = run_preset(p, 5, 4);
    REQUIRE(many.rows.size() == one.rows.size());
    for (std::size_t i = 0; i < one.rows.size(); ++i) {
        CHECK(one.rows[i].value == many.rows[i].value);
        CHECK(one.rows[i].rate_class == many.rows[i].rate_class);
    }
    const auto other = run_preset(p, 6, 1);
    CHECK(other.rows[0].value != one.rows[0].value);
}

TEST_CASE("sweep without variants uses the base chain") {
    SweepPlan plan;
    plan.scenario = "static";
    plan.base.ctmc = CtmcSpec::single(TopologySpec::ring());
    plan.base.horizon = 50;
    plan.n_list = {10, 20, 30};
    plan.replicates = 2;
    const auto t = run_sweep(plan, 1, 2);
    CHECK(t.rows.size() == 6);
    CHECK(t.rate_classes() == std::vector<std::string>{"config"});
    for (const auto& r : t.rows) {
        CHECK(r.metric == "network_avg_age");
        CHECK(r.value > 0.0);
    }
}
