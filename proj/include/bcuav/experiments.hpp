#pragma once

#include <string>
#include <vector>

#include "bcuav/rl/env.hpp"
#include "bcuav/rl/maddpg.hpp"
#include "bcuav/scenario.hpp"

namespace bcuav {

enum class ExperimentKind {
    Convergence,      // reward curves at several learning rates
    DeploymentMap,    // node/UAV/centroid coordinates before and after training
    ProfitHeatmap,    // per-active-cluster equilibrium profit matrix
    AltitudeSweep,    // utility vs UAV altitude per deployment method
    NodeSweep,        // utility vs nodes per cluster per deployment method
    BaselineCompare,  // final utilities of every method on one scenario
};

ExperimentKind experiment_kind_from_string(const std::string& name);
std::string to_string(ExperimentKind kind);

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::BaselineCompare;
    std::string scenario_path;  // generated from the fields below when empty
    GenerationConfig gen{};
    RadioParams radio{};
    EconomicParams econ{};
    rl::EnvConfig env{};
    rl::Hyper hyper{};
    uint64_t seed = 1;
    std::string out_dir = "out";

    std::vector<double> actor_lrs;            // Convergence
    std::vector<double> critic_lrs;           // Convergence
    std::vector<double> altitudes;            // AltitudeSweep
    std::vector<int> node_counts;             // NodeSweep
    std::vector<std::string> methods{"random", "centroid"};
    bool no_pool_variant = false;             // add beta=0 columns to sweeps
    int grid = 20;                            // grid search resolution
    int eval_rollouts = 5;                    // random-baseline averaging
};

struct OutputFile {
    std::string path;  // relative to out_dir
    std::string description;
};

struct ExperimentResult {
    ExperimentSpec spec;
    std::vector<OutputFile> files;
    double wall_seconds = 0.0;
};

// Runs the experiment, writing CSV outputs under spec.out_dir. Outputs are a
// pure function of (spec, seed). Throws ConfigError on kind-specific
// requirements that are not met.
ExperimentResult run_experiment(const ExperimentSpec& spec);

// Writes <out_dir>/manifest.json (file list with hashes, the configuration
// used, wall-clock time) and returns a human-readable summary.
std::string emit_report(const ExperimentResult& result);

// Bundled defaults: "desk" is sized for minutes on a laptop, "paper" matches
// the full simulation setup.
void apply_preset(ExperimentSpec& spec, const std::string& preset);

}  // namespace bcuav
