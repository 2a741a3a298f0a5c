#include "bcuav/incentive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bcuav/errors.hpp"

namespace bcuav {

GameConstants game_constants(double beta, const StakeGame& game) {
    if (beta < 0.0 || beta > 1.0) throw DomainError("game_constants: beta must be in [0,1]");
    const double total = game.total_stake();
    GameConstants c;
    c.leader_coeff = game.stakes[game.pool] / total * beta * game.payment;
    c.follower_coeffs.resize(game.num_followers());
    for (int pos = 0; pos < game.num_followers(); ++pos)
        c.follower_coeffs[pos] =
            ((1.0 - beta) * game.payment - game.cross_costs[pos]) / total;
    return c;
}

double best_response(int pos, std::span<const double> alphas, const GameConstants& constants,
                     const StakeGame& game) {
    const double xi = constants.follower_coeffs[pos];
    if (xi <= 0.0) return 0.0;
    const double zeta = constants.leader_coeff;
    double others = 0.0;
    for (int p = 0; p < game.num_followers(); ++p)
        if (p != pos) others += alphas[p] * game.stakes[game.follower_uav(p)];
    if (zeta / xi < others) return 0.0;
    const double invested = std::sqrt(zeta / xi * others) - others;
    return std::clamp(invested / game.stakes[game.follower_uav(pos)], 0.0, 1.0);
}

namespace {

// Profit of follower `pos` when it alone deviates to `alpha`.
double follower_profit_at(int pos, double alpha, std::span<const double> alphas, double beta,
                          const StakeGame& game) {
    std::vector<double> a(alphas.begin(), alphas.end());
    a[pos] = alpha;
    const MiningDistribution dist = mining_distribution(game.stakes, a, game.pool);
    return profits(dist, beta, a, game).follower_profits[pos];
}

double pool_profit_at(double beta, std::span<const double> alphas, const StakeGame& game) {
    const MiningDistribution dist = mining_distribution(game.stakes, alphas, game.pool);
    return profits(dist, beta, alphas, game).pool_profit;
}

// Interior equilibrium over the free followers with the clamped stake held
// constant. The first-order conditions
//     zeta (T - u_k) = xi_k T^2,   T = S_clamped + sum_free u_k
// reduce to one quadratic in the total invested stake T.
struct FreeSolve {
    double total = 0.0;              // T
    std::vector<double> invested;    // u_k, aligned with `free`
};

FreeSolve solve_free(const std::vector<int>& free, double clamped_stake, double zeta,
                     const GameConstants& constants) {
    FreeSolve r;
    const int m = static_cast<int>(free.size());
    double xi_sum = 0.0;
    for (int pos : free) xi_sum += constants.follower_coeffs[pos];
    const double a = xi_sum / zeta;
    const double b = static_cast<double>(m - 1);
    r.total = (b + std::sqrt(b * b + 4.0 * a * clamped_stake)) / (2.0 * a);
    r.invested.resize(m);
    for (int i = 0; i < m; ++i)
        r.invested[i] =
            r.total - constants.follower_coeffs[free[i]] * r.total * r.total / zeta;
    return r;
}

}  // namespace

std::vector<double> lower_equilibrium(double beta, const StakeGame& game) {
    if (beta < 0.0 || beta > 1.0) throw DomainError("lower_equilibrium: beta must be in [0,1]");
    const int n = game.num_followers();
    std::vector<double> alphas(n, 0.0);
    if (n == 0) return alphas;

    const GameConstants constants = game_constants(beta, game);
    const double zeta = constants.leader_coeff;
    if (zeta <= 0.0) return alphas;  // no sharing, no incentive to invest

    if (n == 1) {
        // The generic formula assumes >= 2 followers. The lone follower's
        // profit is linear in alpha on (0, 1] (it owns the whole shared pot),
        // so the 1/1000-grid maximum sits at 0, the first grid point, or 1.
        double best_alpha = 0.0;
        double best = follower_profit_at(0, 0.0, alphas, beta, game);
        for (const double a : {1.0 / 1000.0, 1.0}) {
            const double v = follower_profit_at(0, a, alphas, beta, game);
            if (v > best) {
                best = v;
                best_alpha = a;
            }
        }
        alphas[0] = best_alpha;
        return alphas;
    }

    std::vector<int> active;
    for (int pos = 0; pos < n; ++pos)
        if (constants.follower_coeffs[pos] > 0.0) active.push_back(pos);

    while (!active.empty()) {
        std::vector<int> free = active;
        std::vector<int> clamped;
        double clamped_stake = 0.0;
        bool dropped = false;
        while (!free.empty()) {
            const FreeSolve sol = solve_free(free, clamped_stake, zeta, constants);
            // most negative formula value leaves the competition entirely
            int worst = -1;
            double worst_alpha = 0.0;
            int largest = -1;
            double largest_alpha = 1.0;
            for (size_t i = 0; i < free.size(); ++i) {
                const double a = sol.invested[i] / game.stakes[game.follower_uav(free[i])];
                if (a < worst_alpha) {
                    worst_alpha = a;
                    worst = static_cast<int>(i);
                }
                if (a > largest_alpha) {
                    largest_alpha = a;
                    largest = static_cast<int>(i);
                }
            }
            if (worst >= 0) {
                active.erase(std::find(active.begin(), active.end(), free[worst]));
                dropped = true;
                break;
            }
            if (largest >= 0) {
                const int pos = free[largest];
                alphas[pos] = 1.0;
                clamped_stake += game.stakes[game.follower_uav(pos)];
                clamped.push_back(pos);
                free.erase(free.begin() + largest);
                continue;
            }
            for (size_t i = 0; i < free.size(); ++i)
                alphas[free[i]] = sol.invested[i] / game.stakes[game.follower_uav(free[i])];
            break;
        }
        if (!dropped) return alphas;
        // reset any clamp decisions and re-solve the reduced active set
        std::fill(alphas.begin(), alphas.end(), 0.0);
    }
    return alphas;
}

IncentiveOutcome leader_search(const StakeGame& game, double grid_step) {
    if (!(grid_step > 0.0 && grid_step <= 0.1))
        throw DomainError("leader_search: grid_step must be in (0, 0.1]");

    auto objective = [&](double beta) {
        return pool_profit_at(beta, lower_equilibrium(beta, game), game);
    };

    const auto n_steps = static_cast<size_t>(std::ceil(1.0 / grid_step - 1e-12));
    double best_beta = 0.0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i <= n_steps; ++i) {
        const double beta = i == n_steps ? 1.0 : std::min(1.0, i * grid_step);
        const double v = objective(beta);
        if (v > best_value) {
            best_value = v;
            best_beta = beta;
        }
    }

    // golden-section refinement around the winning grid point
    double lo = std::max(0.0, best_beta - grid_step);
    double hi = std::min(1.0, best_beta + grid_step);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = objective(x1);
    double f2 = objective(x2);
    while (hi - lo > 1e-6) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = objective(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = objective(x1);
        }
    }
    const double refined = 0.5 * (lo + hi);
    const double refined_value = objective(refined);
    const double beta_star = refined_value > best_value ? refined : best_beta;

    IncentiveOutcome out;
    out.beta = beta_star;
    out.alphas = lower_equilibrium(beta_star, game);
    out.dist = mining_distribution(game.stakes, out.alphas, game.pool);
    out.profits = profits(out.dist, beta_star, out.alphas, game);
    for (int pos = 0; pos < game.num_followers(); ++pos)
        if (out.alphas[pos] > 0.0) out.active.push_back(pos);
    return out;
}

EquilibriumReport verify_equilibrium(const IncentiveOutcome& outcome, const StakeGame& game,
                                     int grid_n) {
    if (grid_n < 100) throw DomainError("verify_equilibrium: grid_n must be >= 100");

    EquilibriumReport rep;
    rep.max_follower_gain = -std::numeric_limits<double>::infinity();
    rep.max_leader_gain = -std::numeric_limits<double>::infinity();

    for (int pos = 0; pos < game.num_followers(); ++pos) {
        const double base = outcome.profits.follower_profits[pos];
        for (int g = 0; g <= grid_n; ++g) {
            const double a = static_cast<double>(g) / grid_n;
            const double gain =
                follower_profit_at(pos, a, outcome.alphas, outcome.beta, game) - base;
            rep.max_follower_gain = std::max(rep.max_follower_gain, gain);
        }
    }

    const double pool_base = outcome.profits.pool_profit;
    for (int g = 0; g <= grid_n; ++g) {
        const double beta = static_cast<double>(g) / grid_n;
        const double gain =
            pool_profit_at(beta, lower_equilibrium(beta, game), game) - pool_base;
        rep.max_leader_gain = std::max(rep.max_leader_gain, gain);
    }
    return rep;
}

}  // namespace bcuav
