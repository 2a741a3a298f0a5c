#pragma once

#include <span>
#include <vector>

#include "bcuav/incentive.hpp"
#include "bcuav/ledger.hpp"
#include "bcuav/scenario.hpp"
#include "bcuav/transmission.hpp"

namespace bcuav {

struct SolverOptions {
    TransmissionOptions transmission{};
    double leader_grid_step = 1e-3;
};

// One active-cluster round at the given deployment: uplink optimization,
// latency, stake game, and the resulting utility.
struct ClusterEvaluation {
    PowerSolution power;
    LatencyBreakdown lat;
    IncentiveOutcome incentive;
    double utility = 0.0;
};

ClusterEvaluation evaluate_cluster(const Scenario& s, std::span<const Vec2> uav_positions,
                                   int cluster, const SolverOptions& opts = {});

// Every cluster treated as active in turn. evaluate_all_clusters runs the
// per-cluster solves in parallel; the _serial variant is the reference
// implementation and produces identical results.
std::vector<ClusterEvaluation> evaluate_all_clusters(const Scenario& s,
                                                     std::span<const Vec2> uav_positions,
                                                     const SolverOptions& opts = {});
std::vector<ClusterEvaluation> evaluate_all_clusters_serial(const Scenario& s,
                                                            std::span<const Vec2> uav_positions,
                                                            const SolverOptions& opts = {});

double system_utility(const std::vector<ClusterEvaluation>& evals);

}  // namespace bcuav
