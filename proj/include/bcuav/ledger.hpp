#pragma once

#include <span>
#include <vector>

#include "bcuav/geometry.hpp"
#include "bcuav/scenario.hpp"

namespace bcuav {

// The four latency components of one blockchain round, seconds.
struct LatencyBreakdown {
    double tx_time = 0.0;       // IoT uplink
    double mine_time = 0.0;     // block construction at the collecting UAV
    double prop_time = 0.0;     // propagation to the slowest peer
    double confirm_time = 0.0;  // confirmation and chaining

    double total() const { return tx_time + mine_time + prop_time + confirm_time; }
};

// Mining probabilities once the pool at `pool` has absorbed the investments.
struct MiningDistribution {
    double pool_prob = 0.0;
    std::vector<double> follower_probs;  // follower order: UAV indices != pool, ascending
};

struct ProfitVector {
    double pool_profit = 0.0;
    std::vector<double> follower_profits;

    double total() const {
        double t = pool_profit;
        for (double f : follower_profits) t += f;
        return t;
    }
};

// Inputs of one active-cluster stake game, extracted from a Scenario.
struct StakeGame {
    std::vector<double> stakes;       // all UAVs
    int pool = 0;                     // active-cluster index j
    double payment = 0.0;             // fixed reward + fee * data size, coins
    double pool_cost = 0.0;           // cost when the pool mines
    std::vector<double> cross_costs;  // cost when follower k mines, follower order

    int num_followers() const { return static_cast<int>(stakes.size()) - 1; }
    double total_stake() const {
        double t = 0.0;
        for (double s : stakes) t += s;
        return t;
    }
    // follower position (0-based) -> UAV index
    int follower_uav(int pos) const { return pos < pool ? pos : pos + 1; }
};

StakeGame make_stake_game(const Scenario& s, int pool);

// tx = data/rate, mine = data * complexity / compute_rate, prop = data over
// the slowest pairwise air-to-air link, confirm = constant.
// Throws DomainError when rate_ag == 0 or fewer than 2 UAVs are present.
LatencyBreakdown latency(double rate_ag, std::span<const Vec2> uav_positions,
                         const EconomicParams& econ, const RadioParams& radio);

// q_pool = (stake_j + sum alpha_k stake_k) / total, q_k = (1-alpha_k) stake_k / total.
MiningDistribution mining_distribution(std::span<const double> stakes,
                                       std::span<const double> alphas, int pool);

// Expected profits under profit share beta and investments alpha. When no
// follower invests, the shared portion is zero by convention.
ProfitVector profits(const MiningDistribution& dist, double beta,
                     std::span<const double> alphas, const StakeGame& game);

// coins per second: total expected profit over total round latency.
double cluster_utility(const ProfitVector& prof, const LatencyBreakdown& lat);

}  // namespace bcuav
