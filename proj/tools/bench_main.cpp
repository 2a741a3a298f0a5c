// Benchmark comparing the serial reference implementations against the
// OpenMP kernels: Monte-Carlo rate sampling, all-cluster evaluation, and the
// joint grid search.

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bcuav/channel.hpp"
#include "bcuav/rl/baselines.hpp"
#include "bcuav/scenario.hpp"
#include "bcuav/system.hpp"

using namespace bcuav;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename F>
double timed(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return seconds_since(t0);
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (built without OpenMP)\n");
#endif

    GenerationConfig gen;
    gen.num_clusters = 6;
    gen.nodes_per_cluster = 10;
    RadioParams radio;
    radio.squared_path_gain = false;
    EconomicParams econ;
    const Scenario s = generate_scenario(gen, radio, econ, 42);

    std::printf("%-28s %10s %10s %8s\n", "kernel", "serial[s]", "omp[s]", "speedup");

    {
        const auto gains = cluster_gains(s.clusters[0], s.clusters[0].uav_pos, s.radio);
        const std::vector<double> powers(gains.size(), 0.1);
        const FadingConfig fading{20000, 7};
        double serial_v = 0.0, parallel_v = 0.0;
        const double ts =
            timed([&] { serial_v = monte_carlo_rate_serial(gains, powers, fading, s.radio); });
        const double tp =
            timed([&] { parallel_v = monte_carlo_rate(gains, powers, fading, s.radio); });
        std::printf("%-28s %10.3f %10.3f %7.2fx   (identical: %s)\n", "monte_carlo_rate", ts, tp,
                    ts / tp, serial_v == parallel_v ? "yes" : "NO");
    }

    {
        const auto positions = s.uav_positions();
        const int reps = 20;
        const double ts = timed([&] {
            for (int r = 0; r < reps; ++r) evaluate_all_clusters_serial(s, positions);
        });
        const double tp = timed([&] {
            for (int r = 0; r < reps; ++r) evaluate_all_clusters(s, positions);
        });
        std::printf("%-28s %10.3f %10.3f %7.2fx\n", "evaluate_all_clusters x20", ts, tp, ts / tp);
    }

    {
        GenerationConfig toy = gen;
        toy.num_clusters = 2;
        toy.nodes_per_cluster = 5;
        toy.area = {500.0, 500.0};
        const Scenario s2 = generate_scenario(toy, radio, econ, 42);
        SolverOptions opts;
        opts.leader_grid_step = 1e-2;
        // serial path: pin to one thread via the serial cluster evaluator
        double serial_total = 0.0;
        const double ts = timed([&] {
            double best = -1e300;
            std::vector<Vec2> pos(2);
            for (int a = 0; a < 12 * 12; ++a)
                for (int b = 0; b < 12 * 12; ++b) {
                    pos[0] = {s2.area.width * (a / 12) / 11.0, s2.area.height * (a % 12) / 11.0};
                    pos[1] = {s2.area.width * (b / 12) / 11.0, s2.area.height * (b % 12) / 11.0};
                    if (distance(pos[0], pos[1]) < 1.0) continue;
                    const double u = system_utility(evaluate_all_clusters_serial(s2, pos, opts));
                    if (u > best) best = u;
                }
            serial_total = best;
        });
        double parallel_total = 0.0;
        const double tp = timed([&] {
            parallel_total =
                rl::baseline_deploy(rl::BaselineKind::GridGlobalSearch, s2, opts, 0, 12)
                    .total_utility;
        });
        std::printf("%-28s %10.3f %10.3f %7.2fx   (identical: %s)\n", "grid_search 12x12 J=2", ts,
                    tp, ts / tp, serial_total == parallel_total ? "yes" : "NO");
    }

    return 0;
}
