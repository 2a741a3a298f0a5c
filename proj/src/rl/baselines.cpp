#include "bcuav/rl/baselines.hpp"

#include <cmath>
#include <exception>
#include <limits>

#include "bcuav/errors.hpp"
#include "bcuav/rng.hpp"

namespace bcuav::rl {

BaselineKind baseline_kind_from_string(const std::string& name) {
    if (name == "random") return BaselineKind::Random;
    if (name == "centroid") return BaselineKind::Centroid;
    if (name == "grid") return BaselineKind::GridGlobalSearch;
    throw ConfigError("unknown baseline kind: " + name);
}

std::string to_string(BaselineKind kind) {
    switch (kind) {
        case BaselineKind::Random: return "random";
        case BaselineKind::Centroid: return "centroid";
        case BaselineKind::GridGlobalSearch: return "grid";
    }
    return "?";
}

namespace {

Deployment evaluate_deployment(const Scenario& s, std::vector<Vec2> positions,
                               const SolverOptions& opts) {
    Deployment d;
    d.positions = std::move(positions);
    const auto evals = evaluate_all_clusters(s, d.positions, opts);
    d.utilities.resize(evals.size());
    for (size_t j = 0; j < evals.size(); ++j) {
        d.utilities[j] = evals[j].utility;
        d.total_utility += evals[j].utility;
    }
    return d;
}

std::vector<Vec2> random_positions(const Scenario& s, uint64_t seed) {
    Rng rng(seed);
    std::vector<Vec2> pos(s.num_clusters());
    for (int j = 0; j < s.num_clusters(); ++j) {
        bool ok = false;
        for (int attempt = 0; attempt < 1000 && !ok; ++attempt) {
            pos[j] = {rng.uniform(0.0, s.area.width), rng.uniform(0.0, s.area.height)};
            ok = true;
            for (int k = 0; k < j; ++k)
                if (distance(pos[j], pos[k]) < 1.0) ok = false;
        }
        if (!ok) throw ConfigError("baseline_deploy: cannot separate random UAVs");
    }
    return pos;
}

std::vector<Vec2> centroid_positions(const Scenario& s) {
    std::vector<Vec2> pos(s.num_clusters());
    for (int j = 0; j < s.num_clusters(); ++j) pos[j] = s.clusters[j].node_centroid();
    // nudge coincident centroids apart so the air-to-air rate stays finite
    for (int j = 0; j < s.num_clusters(); ++j)
        for (int k = j + 1; k < s.num_clusters(); ++k)
            if (distance(pos[j], pos[k]) < 1.0)
                pos[k].x = std::min(pos[k].x + 1.0, s.area.width);
    return pos;
}

Deployment grid_global_search(const Scenario& s, const SolverOptions& opts, int grid) {
    const int n = s.num_clusters();
    if (n > 2 || grid > 20) {
        const double solves = std::pow(static_cast<double>(grid) * grid, n) * n;
        throw ConfigError("baseline_deploy: grid search limited to J <= 2 and grid <= 20 "
                          "(requested configuration needs ~" +
                          std::to_string(static_cast<long long>(solves)) + " inner solves)");
    }
    if (grid < 2) throw ConfigError("baseline_deploy: grid must be >= 2");

    std::vector<Vec2> points;
    points.reserve(static_cast<size_t>(grid) * grid);
    for (int ix = 0; ix < grid; ++ix)
        for (int iy = 0; iy < grid; ++iy)
            points.push_back({s.area.width * ix / (grid - 1), s.area.height * iy / (grid - 1)});

    const auto cells = static_cast<long long>(points.size());
    const long long total = n == 1 ? cells : cells * cells;
    std::vector<double> value(total, -std::numeric_limits<double>::infinity());

    std::exception_ptr failure = nullptr;
#pragma omp parallel for schedule(dynamic, 8)
    for (long long idx = 0; idx < total; ++idx) {
        try {
            std::vector<Vec2> pos(n);
            pos[0] = points[idx % cells];
            if (n == 2) pos[1] = points[idx / cells];
            bool feasible = true;
            for (int a = 0; a < n && feasible; ++a)
                for (int b = a + 1; b < n; ++b)
                    if (distance(pos[a], pos[b]) < 1.0) feasible = false;
            if (!feasible) continue;
            value[idx] = system_utility(evaluate_all_clusters(s, pos, opts));
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    long long best = 0;
    for (long long idx = 1; idx < total; ++idx)
        if (value[idx] > value[best]) best = idx;
    std::vector<Vec2> pos(n);
    pos[0] = points[best % cells];
    if (n == 2) pos[1] = points[best / cells];
    return evaluate_deployment(s, std::move(pos), opts);
}

}  // namespace

Deployment baseline_deploy(BaselineKind kind, const Scenario& s, const SolverOptions& opts,
                           uint64_t seed, int grid) {
    switch (kind) {
        case BaselineKind::Random:
            return evaluate_deployment(s, random_positions(s, seed), opts);
        case BaselineKind::Centroid:
            return evaluate_deployment(s, centroid_positions(s), opts);
        case BaselineKind::GridGlobalSearch:
            return grid_global_search(s, opts, grid);
    }
    throw ConfigError("baseline_deploy: unknown kind");
}

}  // namespace bcuav::rl
