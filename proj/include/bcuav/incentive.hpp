#pragma once

#include <span>
#include <vector>

#include "bcuav/ledger.hpp"

namespace bcuav {

// Rearranged profit-function constants of the stake game at a fixed share
// beta. follower_coeffs may be negative for large beta; such followers have
// no incentive to stay in the mining competition.
struct GameConstants {
    double leader_coeff = 0.0;            // (stake_j / total) * beta * payment
    std::vector<double> follower_coeffs;  // ((1-beta) payment - cost_k) / total
};

struct IncentiveOutcome {
    double beta = 0.0;             // leader's profit share
    std::vector<double> alphas;    // follower investments, follower order
    MiningDistribution dist;
    ProfitVector profits;
    std::vector<int> active;       // follower positions with positive investment
};

struct EquilibriumReport {
    double max_follower_gain = 0.0;  // best unilateral follower improvement found
    double max_leader_gain = 0.0;    // best leader improvement with re-equilibration
};

GameConstants game_constants(double beta, const StakeGame& game);

// Follower best response to the others' investments: the positive root of the
// first-order condition, clamped to [0, 1]. Zero when the follower coefficient
// is non-positive or when the constant ratio falls below the others' invested
// stake; in particular zero when nobody else invests.
double best_response(int pos, std::span<const double> alphas, const GameConstants& constants,
                     const StakeGame& game);

// Followers' Nash equilibrium for a fixed beta, computed in closed form.
// Followers whose formula value is negative (or whose coefficient is <= 0)
// are dropped one at a time, most negative first, and the reduced system is
// re-solved; investments above 1 are clamped and the rest re-solved with the
// clamped stake held constant. A single follower is handled by direct grid
// maximization of its profit (the generic formula needs >= 2 followers).
std::vector<double> lower_equilibrium(double beta, const StakeGame& game);

// Backward induction: sweeps beta over a uniform grid with followers at
// lower_equilibrium(beta), then refines around the best grid point by
// golden-section search. grid_step must lie in (0, 0.1].
IncentiveOutcome leader_search(const StakeGame& game, double grid_step = 1e-3);

// Grid-deviation check of both equilibrium layers; grid_n >= 100.
EquilibriumReport verify_equilibrium(const IncentiveOutcome& outcome, const StakeGame& game,
                                     int grid_n = 1000);

}  // namespace bcuav
