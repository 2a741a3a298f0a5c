#pragma once

#include <cmath>
#include <vector>

#include "bcuav/incentive.hpp"
#include "bcuav/rng.hpp"
#include "bcuav/scenario.hpp"

namespace bcuav::testing {

inline Scenario table_scenario(int clusters = 6, int nodes = 10, uint64_t seed = 1,
                               bool squared_gain = true) {
    GenerationConfig gen;
    gen.num_clusters = clusters;
    gen.nodes_per_cluster = nodes;
    RadioParams radio;
    radio.squared_path_gain = squared_gain;
    return generate_scenario(gen, radio, EconomicParams{}, seed);
}

inline StakeGame random_game(Rng& rng, int num_uavs) {
    StakeGame g;
    g.pool = static_cast<int>(rng.uniform_int(num_uavs));
    g.stakes.resize(num_uavs);
    for (double& s : g.stakes) s = rng.uniform(90.0, 100.0);
    EconomicParams econ;
    g.payment = econ.block_payment();
    g.pool_cost = econ.self_cost;
    g.cross_costs.assign(num_uavs - 1, econ.cross_cost);
    return g;
}

// Damped Gauss-Seidel best-response iteration; the independent reference for
// the closed-form lower equilibrium. Starts from full investment so it cannot
// stall on the trivial all-zero profile.
inline std::vector<double> iterate_best_response(double beta, const StakeGame& game,
                                                 double tol = 1e-13, int max_sweeps = 20000,
                                                 double damping = 0.5) {
    const GameConstants constants = game_constants(beta, game);
    std::vector<double> alphas(game.num_followers(), 0.5);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double change = 0.0;
        for (int pos = 0; pos < game.num_followers(); ++pos) {
            const double target = best_response(pos, alphas, constants, game);
            const double next = alphas[pos] + damping * (target - alphas[pos]);
            change = std::max(change, std::abs(next - alphas[pos]));
            alphas[pos] = next;
        }
        if (change < tol) break;
    }
    // land exactly on the undamped responses
    for (int pos = 0; pos < game.num_followers(); ++pos)
        alphas[pos] = best_response(pos, alphas, constants, game);
    return alphas;
}

}  // namespace bcuav::testing
