#include <doctest.h>

#include <cmath>

#include "bcuav/channel.hpp"
#include "bcuav/errors.hpp"
#include "bcuav/transmission.hpp"
#include "helpers.hpp"

using namespace bcuav;

TEST_CASE("air-ground distance") {
    CHECK(air_ground_distance({0, 0}, {0, 0}, 90.0) == doctest::Approx(90.0));
    CHECK(air_ground_distance({30, 40}, {0, 0}, 1e-4) == doctest::Approx(50.0).epsilon(1e-6));
    CHECK(air_ground_distance({100, 0}, {0, 0}, 90.0) ==
          doctest::Approx(std::sqrt(100.0 * 100.0 + 90.0 * 90.0)));
    // never below the altitude
    for (double x : {0.0, 1.0, 250.0, 999.0})
        CHECK(air_ground_distance({x, 2 * x}, {3, 4}, 90.0) >= 90.0);
}

TEST_CASE("attenuation at the paper's operating points") {
    const RadioParams radio;
    // overhead: free-space term 38.4625 dB plus ~1.0006 dB excess
    CHECK(attenuation_db(90.0, radio) == doctest::Approx(39.463).epsilon(2e-4));
    // grazing: the LoS excess vanishes, leaving roughly fspl + eta_nlos
    CHECK(attenuation_db(0.001, radio) == doctest::Approx(58.46).epsilon(0.01));
    // monotone decreasing in the elevation angle
    CHECK(attenuation_db(80.0, radio) <= attenuation_db(20.0, radio));
    double prev = attenuation_db(0.5, radio);
    for (double phi = 1.0; phi <= 90.0; phi += 0.5) {
        const double cur = attenuation_db(phi, radio);
        CHECK(cur <= prev + 1e-12);
        prev = cur;
    }
}

TEST_CASE("large-scale gain conventions") {
    CHECK(large_scale_gain(1.0, 0.0) == doctest::Approx(1.0));
    // squared amplitude: (10^-2 * 10^0)^2
    CHECK(large_scale_gain(10.0, 0.0) == doctest::Approx(1e-4).epsilon(1e-12));
    CHECK(large_scale_gain(10.0, 0.0, false) == doctest::Approx(1e-2).epsilon(1e-12));
    CHECK(large_scale_gain(10.0, 10.0) == doctest::Approx(1e-6).epsilon(1e-12));
    for (double d : {1.0, 33.0, 1000.0})
        for (double att : {0.0, 20.0, 60.0}) CHECK(large_scale_gain(d, att) > 0.0);
}

TEST_CASE("air-to-air rate") {
    RadioParams radio;  // K=4, P=0.5 W, sigma^2=1e-14 W, B=1e5 Hz
    const double r100 = air_to_air_rate({0, 0}, {100, 0}, radio);
    CHECK(r100 == doctest::Approx(3.42192809e6).epsilon(1e-6));
    CHECK(air_to_air_rate({0, 0}, {200, 0}, radio) < r100);
    // symmetric in the endpoints
    CHECK(air_to_air_rate({13, 7}, {90, 41}, radio) ==
          air_to_air_rate({90, 41}, {13, 7}, radio));
    RadioParams silent = radio;
    silent.uav_tx_power = 0.0;
    CHECK(air_to_air_rate({0, 0}, {100, 0}, silent) == 0.0);
    CHECK_THROWS_AS(air_to_air_rate({5, 5}, {5, 5}, radio), DomainError);
}

TEST_CASE("monte-carlo rate: zero power and scalar case") {
    RadioParams radio;
    const std::vector<double> gains{1e-9, 2e-9, 3e-9};
    const std::vector<double> zeros(3, 0.0);
    CHECK(monte_carlo_rate(gains, zeros, {100, 1}, radio) == 0.0);

    // K=1, I=1 reduces to E[B log2(1 + |s|^2 g p / sigma^2)] with |s|^2 ~ Exp(1):
    // E = B log2(e) exp(1/x) E1(1/x) at x = g p / sigma^2
    RadioParams scalar = radio;
    scalar.antennas = 1;
    const std::vector<double> g1{1e-10};
    const std::vector<double> p1{0.1};
    const double x = g1[0] * p1[0] / scalar.noise_power;  // 1000
    // E1(1e-3) via the series -gamma - ln z + z - z^2/4
    const double e1 = -0.5772156649015329 - std::log(1.0 / x) + 1.0 / x - 0.25 / (x * x);
    const double expected =
        scalar.bandwidth_ag * std::log2(std::exp(1.0)) * std::exp(1.0 / x) * e1;
    const double mc = monte_carlo_rate(g1, p1, {40000, 11}, scalar);
    CHECK(mc == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("monte-carlo rate is permutation invariant given the sample seed") {
    RadioParams radio;
    radio.squared_path_gain = false;
    const Scenario s = testing::table_scenario(2, 6, 21, false);
    auto gains = cluster_gains(s.clusters[0], s.clusters[0].uav_pos, radio);
    std::vector<double> powers{0.3, 0.2, 0.1, 0.05, 0.2, 0.15};
    const double a = monte_carlo_rate(gains, powers, {4000, 5}, radio);
    std::swap(gains[0], gains[3]);
    std::swap(powers[0], powers[3]);
    const double b = monte_carlo_rate(gains, powers, {4000, 5}, radio);
    CHECK(a == doctest::Approx(b).epsilon(0.02));
}

TEST_CASE("deterministic rate approximation tracks the monte-carlo oracle") {
    // both gain conventions, optimized powers
    for (bool squared : {true, false}) {
        const Scenario s = testing::table_scenario(2, 10, 31, squared);
        const auto gains = cluster_gains(s.clusters[0], s.clusters[0].uav_pos, s.radio);
        const PowerSolution sol = optimize_transmission(gains, s.radio);
        const double mc = monte_carlo_rate(gains, sol.powers, {10000, 13}, s.radio);
        if (mc > 0.0)
            CHECK(std::abs(sol.rate - mc) / mc < 0.05);
    }
}
