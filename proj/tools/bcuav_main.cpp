// bcuav -- experiment harness for the blockchain-secured UAV-IoT simulator.
//
// Subcommands map to the experiment kinds plus scenario generation. Exit
// codes: 0 success, 2 usage, 3 configuration/validation, 4 input parsing,
// 5 solver failure, 6 I/O, 1 anything else.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bcuav/errors.hpp"
#include "bcuav/experiments.hpp"

using namespace bcuav;

namespace {

// The preset is applied before parsing so that explicit flags win.
std::string scan_preset(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--preset" && i + 1 < argc) return argv[i + 1];
        if (arg.rfind("--preset=", 0) == 0) return arg.substr(9);
    }
    return {};
}

void add_common(CLI::App* cmd, ExperimentSpec& spec, std::string& preset, bool& clustered) {
    cmd->add_option("--scenario", spec.scenario_path,
                    "scenario JSON file (generated when omitted)");
    cmd->add_option("--seed", spec.seed, "experiment seed");
    cmd->add_option("--out", spec.out_dir,
                    "output directory (env BCUAV_OUT_DIR overrides the default)");
    cmd->add_option("--preset", preset, "desk or paper scale defaults")
        ->check(CLI::IsMember({"desk", "paper"}));
    cmd->add_option("--clusters", spec.gen.num_clusters, "number of clusters");
    cmd->add_option("--nodes", spec.gen.nodes_per_cluster, "nodes per cluster");
    cmd->add_option("--width", spec.gen.area.width, "area width [m]");
    cmd->add_option("--height", spec.gen.area.height, "area height [m]");
    cmd->add_flag("--clustered-nodes", clustered,
                  "group nodes in discs instead of uniform placement");
    cmd->add_option("--cluster-radius", spec.gen.cluster_radius, "disc radius [m]");
    cmd->add_option("--altitude", spec.radio.altitude, "UAV altitude [m]");
    cmd->add_flag("--direct-gain,!--squared-gain",
                  [&spec](int64_t v) { spec.radio.squared_path_gain = v <= 0; },
                  "large-scale gain convention (see docs/formats.md)");
    cmd->add_option("--episodes", spec.hyper.episodes, "training episodes");
    cmd->add_option("--steps", spec.hyper.steps_per_episode, "epochs per episode");
    cmd->add_option("--gamma", spec.hyper.gamma, "discount factor");
    cmd->add_option("--actor-lr", spec.hyper.actor_lr, "actor learning rate");
    cmd->add_option("--critic-lr", spec.hyper.critic_lr, "critic learning rate");
    cmd->add_option("--max-step", spec.env.max_step, "UAV displacement bound per epoch [m]");
    cmd->add_option("--grid", spec.grid, "grid-search resolution per axis");
    cmd->add_option("--eval-rollouts", spec.eval_rollouts, "rollouts averaged per evaluation");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"blockchain-secured UAV-IoT data collection simulator"};
    app.require_subcommand(1);

    ExperimentSpec spec;
    std::string preset = scan_preset(argc, argv);
    try {
        if (!preset.empty()) apply_preset(spec, preset);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 3;
    }
    bool clustered = spec.gen.placement == NodePlacement::Clustered;
    std::string preset_echo;  // consumed by --preset during the real parse

    auto* generate = app.add_subcommand("generate", "generate and save a scenario");
    std::string gen_out = "scenario.json";
    generate->add_option("--out", gen_out, "output path");
    generate->add_option("--seed", spec.seed, "generation seed");
    generate->add_option("--clusters", spec.gen.num_clusters, "number of clusters");
    generate->add_option("--nodes", spec.gen.nodes_per_cluster, "nodes per cluster");
    generate->add_option("--width", spec.gen.area.width, "area width [m]");
    generate->add_option("--height", spec.gen.area.height, "area height [m]");
    generate->add_flag("--clustered-nodes", clustered,
                       "group nodes in discs instead of uniform placement");
    generate->add_option("--cluster-radius", spec.gen.cluster_radius, "disc radius [m]");
    generate->add_option("--preset", preset_echo, "desk or paper scale defaults")
        ->check(CLI::IsMember({"desk", "paper"}));

    auto* convergence =
        app.add_subcommand("convergence", "reward curves at several learning rates");
    convergence->add_option("--actor-lrs", spec.actor_lrs, "actor learning rates to sweep");
    convergence->add_option("--critic-lrs", spec.critic_lrs, "critic learning rates to sweep");

    auto* deployment = app.add_subcommand("deployment-map", "train and dump the deployment map");

    auto* heatmap = app.add_subcommand("profit-heatmap", "equilibrium profit matrix");

    auto* altitude = app.add_subcommand("altitude-sweep", "utility vs altitude per method");
    altitude->add_option("--altitudes", spec.altitudes, "altitudes to sweep [m]");

    auto* nodesweep = app.add_subcommand("node-sweep", "utility vs nodes per cluster");
    nodesweep->add_option("--node-counts", spec.node_counts, "node counts to sweep");

    auto* compare = app.add_subcommand("baseline-compare", "final utilities of every method");

    for (CLI::App* cmd : {altitude, nodesweep, compare}) {
        cmd->add_option("--methods", spec.methods, "deployment methods")->delimiter(',');
        cmd->add_flag("--no-pool-variant", spec.no_pool_variant,
                      "add utility columns without pool construction");
    }
    for (CLI::App* cmd : {convergence, deployment, heatmap, altitude, nodesweep, compare})
        add_common(cmd, spec, preset_echo, clustered);

    CLI11_PARSE(app, argc, argv);

    spec.gen.placement = clustered ? NodePlacement::Clustered : NodePlacement::Uniform;

    try {
        if (generate->parsed()) {
            const Scenario s = generate_scenario(spec.gen, spec.radio, spec.econ, spec.seed);
            save_scenario(s, gen_out);
            std::cout << "wrote " << gen_out << " (" << s.num_clusters() << " clusters, "
                      << spec.gen.nodes_per_cluster << " nodes each)\n";
            return 0;
        }
        if (convergence->parsed()) spec.kind = ExperimentKind::Convergence;
        if (deployment->parsed()) spec.kind = ExperimentKind::DeploymentMap;
        if (heatmap->parsed()) spec.kind = ExperimentKind::ProfitHeatmap;
        if (altitude->parsed()) spec.kind = ExperimentKind::AltitudeSweep;
        if (nodesweep->parsed()) spec.kind = ExperimentKind::NodeSweep;
        if (compare->parsed()) spec.kind = ExperimentKind::BaselineCompare;

        if (const char* env_out = std::getenv("BCUAV_OUT_DIR");
            env_out && spec.out_dir == "out")
            spec.out_dir = env_out;
        spec.hyper.seed = spec.seed;
        const ExperimentResult result = run_experiment(spec);
        std::cout << emit_report(result);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 3;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 4;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return 5;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return 3;
    } catch (const Error& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return 6;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
