#include <doctest.h>

#include "bcuav/channel.hpp"
#include "bcuav/system.hpp"
#include "helpers.hpp"

using namespace bcuav;

// The OpenMP kernels must be bit-identical to their serial references: work
// is seeded per item and reduced in a fixed order.

TEST_CASE("monte-carlo rate: parallel equals serial bitwise") {
    const Scenario s = testing::table_scenario(2, 10, 9, false);
    const auto gains = cluster_gains(s.clusters[0], s.clusters[0].uav_pos, s.radio);
    const std::vector<double> powers(gains.size(), 0.1);
    const FadingConfig fading{5000, 1234};
    CHECK(monte_carlo_rate(gains, powers, fading, s.radio) ==
          monte_carlo_rate_serial(gains, powers, fading, s.radio));
}

TEST_CASE("cluster evaluation: parallel equals serial bitwise") {
    const Scenario s = testing::table_scenario(4, 6, 10, false);
    const auto positions = s.uav_positions();
    SolverOptions opts;
    opts.leader_grid_step = 1e-2;
    const auto par = evaluate_all_clusters(s, positions, opts);
    const auto ser = evaluate_all_clusters_serial(s, positions, opts);
    REQUIRE(par.size() == ser.size());
    for (size_t j = 0; j < par.size(); ++j) {
        CHECK(par[j].utility == ser[j].utility);
        CHECK(par[j].power.rate == ser[j].power.rate);
        CHECK(par[j].power.omega == ser[j].power.omega);
        CHECK(par[j].incentive.beta == ser[j].incentive.beta);
        REQUIRE(par[j].power.powers.size() == ser[j].power.powers.size());
        for (size_t i = 0; i < par[j].power.powers.size(); ++i)
            CHECK(par[j].power.powers[i] == ser[j].power.powers[i]);
    }
}
