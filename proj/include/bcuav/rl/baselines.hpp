#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bcuav/scenario.hpp"
#include "bcuav/system.hpp"

namespace bcuav::rl {

enum class BaselineKind {
    Random,            // uniform positions in the area
    Centroid,          // each UAV at its cluster's node centroid
    GridGlobalSearch,  // exhaustive joint grid maximizing the summed utility
};

BaselineKind baseline_kind_from_string(const std::string& name);
std::string to_string(BaselineKind kind);

struct Deployment {
    std::vector<Vec2> positions;
    std::vector<double> utilities;
    double total_utility = 0.0;
};

// The grid search cost grows as grid^(2J); it refuses to run for more than
// 2 UAVs or grids beyond 20x20 per UAV and reports the estimated number of
// inner solves instead. Grid cells are evaluated in parallel; the argmax is
// reduced serially, so results are deterministic.
Deployment baseline_deploy(BaselineKind kind, const Scenario& s,
                           const SolverOptions& opts = {}, uint64_t seed = 0, int grid = 20);

}  // namespace bcuav::rl
