#include "bcuav/system.hpp"

#include <exception>

#include "bcuav/channel.hpp"
#include "bcuav/errors.hpp"

namespace bcuav {

ClusterEvaluation evaluate_cluster(const Scenario& s, std::span<const Vec2> uav_positions,
                                   int cluster, const SolverOptions& opts) {
    ClusterEvaluation ev;
    const std::vector<double> gains =
        cluster_gains(s.clusters[cluster], uav_positions[cluster], s.radio);
    ev.power = optimize_transmission(gains, s.radio, opts.transmission);
    ev.lat = latency(ev.power.rate, uav_positions, s.econ, s.radio);
    const StakeGame game = make_stake_game(s, cluster);
    ev.incentive = leader_search(game, opts.leader_grid_step);
    ev.utility = cluster_utility(ev.incentive.profits, ev.lat);
    return ev;
}

std::vector<ClusterEvaluation> evaluate_all_clusters(const Scenario& s,
                                                     std::span<const Vec2> uav_positions,
                                                     const SolverOptions& opts) {
    const int n = s.num_clusters();
    std::vector<ClusterEvaluation> evals(n);
    std::exception_ptr failure = nullptr;
#pragma omp parallel for schedule(dynamic)
    for (int j = 0; j < n; ++j) {
        try {
            evals[j] = evaluate_cluster(s, uav_positions, j, opts);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return evals;
}

std::vector<ClusterEvaluation> evaluate_all_clusters_serial(const Scenario& s,
                                                            std::span<const Vec2> uav_positions,
                                                            const SolverOptions& opts) {
    std::vector<ClusterEvaluation> evals(s.num_clusters());
    for (int j = 0; j < s.num_clusters(); ++j)
        evals[j] = evaluate_cluster(s, uav_positions, j, opts);
    return evals;
}

double system_utility(const std::vector<ClusterEvaluation>& evals) {
    double u = 0.0;
    for (const ClusterEvaluation& ev : evals) u += ev.utility;
    return u;
}

}  // namespace bcuav
