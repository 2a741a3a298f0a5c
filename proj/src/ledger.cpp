#include "bcuav/ledger.hpp"

#include <limits>

#include "bcuav/channel.hpp"
#include "bcuav/errors.hpp"

namespace bcuav {

StakeGame make_stake_game(const Scenario& s, int pool) {
    if (pool < 0 || pool >= s.num_clusters())
        throw DomainError("make_stake_game: pool index out of range");
    StakeGame g;
    g.stakes = s.stakes();
    g.pool = pool;
    g.payment = s.econ.block_payment();
    g.pool_cost = s.econ.self_cost;
    g.cross_costs.assign(g.stakes.size() - 1, s.econ.cross_cost);
    return g;
}

LatencyBreakdown latency(double rate_ag, std::span<const Vec2> uav_positions,
                         const EconomicParams& econ, const RadioParams& radio) {
    if (rate_ag <= 0.0) throw DomainError("latency: zero uplink rate (infinite latency)");
    if (uav_positions.size() < 2)
        throw DomainError("latency: propagation needs at least 2 UAVs");

    LatencyBreakdown lat;
    lat.tx_time = econ.data_size / rate_ag;
    lat.mine_time = econ.data_size * econ.mining_complexity / econ.compute_rate;

    // bottleneck over every ordered pair, not just links touching the miner
    double min_rate = std::numeric_limits<double>::infinity();
    for (size_t a = 0; a < uav_positions.size(); ++a)
        for (size_t b = a + 1; b < uav_positions.size(); ++b)
            min_rate = std::min(min_rate, air_to_air_rate(uav_positions[a], uav_positions[b], radio));
    lat.prop_time = econ.data_size / min_rate;

    lat.confirm_time = econ.confirm_time;
    return lat;
}

MiningDistribution mining_distribution(std::span<const double> stakes,
                                       std::span<const double> alphas, int pool) {
    const int n = static_cast<int>(stakes.size());
    if (pool < 0 || pool >= n) throw DomainError("mining_distribution: pool index out of range");
    if (alphas.size() != stakes.size() - 1)
        throw DomainError("mining_distribution: expected one alpha per follower");

    double total = 0.0;
    for (double s : stakes) total += s;

    MiningDistribution d;
    d.follower_probs.resize(n - 1);
    double pooled = stakes[pool];
    for (int pos = 0; pos < n - 1; ++pos) {
        const int k = pos < pool ? pos : pos + 1;
        pooled += alphas[pos] * stakes[k];
        d.follower_probs[pos] = (1.0 - alphas[pos]) * stakes[k] / total;
    }
    d.pool_prob = pooled / total;
    return d;
}

ProfitVector profits(const MiningDistribution& dist, double beta,
                     std::span<const double> alphas, const StakeGame& game) {
    const double pay = game.payment;
    ProfitVector prof;
    prof.pool_profit = dist.pool_prob * ((1.0 - beta) * pay - game.pool_cost);

    double invested = 0.0;
    for (int pos = 0; pos < game.num_followers(); ++pos)
        invested += alphas[pos] * game.stakes[game.follower_uav(pos)];

    prof.follower_profits.resize(game.num_followers());
    for (int pos = 0; pos < game.num_followers(); ++pos) {
        const double own = dist.follower_probs[pos] * (pay - game.cross_costs[pos]);
        double share = 0.0;
        if (invested > 0.0) {
            const double stake_in = alphas[pos] * game.stakes[game.follower_uav(pos)];
            share = dist.pool_prob * (stake_in / invested) * beta * pay;
        }
        prof.follower_profits[pos] = own + share;
    }
    return prof;
}

double cluster_utility(const ProfitVector& prof, const LatencyBreakdown& lat) {
    const double t = lat.total();
    if (t <= 0.0) throw DomainError("cluster_utility: total latency must be > 0");
    return prof.total() / t;
}

}  // namespace bcuav
