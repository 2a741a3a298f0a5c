#include "bcuav/experiments.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bcuav/channel.hpp"
#include "bcuav/errors.hpp"
#include "bcuav/hash.hpp"
#include "bcuav/rl/baselines.hpp"

namespace bcuav {

using nlohmann::json;
namespace fs = std::filesystem;

std::string fnv1a64_hex_of_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot hash missing file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string s = buf.str();
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(s.data(), s.size())));
    return out;
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
    if (name == "convergence") return ExperimentKind::Convergence;
    if (name == "deployment-map") return ExperimentKind::DeploymentMap;
    if (name == "profit-heatmap") return ExperimentKind::ProfitHeatmap;
    if (name == "altitude-sweep") return ExperimentKind::AltitudeSweep;
    if (name == "node-sweep") return ExperimentKind::NodeSweep;
    if (name == "baseline-compare") return ExperimentKind::BaselineCompare;
    throw ConfigError("unknown experiment kind: " + name);
}

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Convergence: return "convergence";
        case ExperimentKind::DeploymentMap: return "deployment-map";
        case ExperimentKind::ProfitHeatmap: return "profit-heatmap";
        case ExperimentKind::AltitudeSweep: return "altitude-sweep";
        case ExperimentKind::NodeSweep: return "node-sweep";
        case ExperimentKind::BaselineCompare: return "baseline-compare";
    }
    return "?";
}

namespace {

// fixed shortest-round-trip formatting keeps reruns byte-identical
std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const fs::path& path) : out_(path) {
        if (!out_) throw Error("cannot open output file " + path.string());
    }
    void row(const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

Scenario resolve_scenario(const ExperimentSpec& spec) {
    if (!spec.scenario_path.empty()) return load_scenario(spec.scenario_path);
    return generate_scenario(spec.gen, spec.radio, spec.econ, spec.seed);
}

double no_pool_utility(const Scenario& s, std::span<const Vec2> positions,
                       const SolverOptions& opts) {
    double total = 0.0;
    const std::vector<double> zeros(s.num_clusters() - 1, 0.0);
    for (int j = 0; j < s.num_clusters(); ++j) {
        const auto gains = cluster_gains(s.clusters[j], positions[j], s.radio);
        const PowerSolution power = optimize_transmission(gains, s.radio, opts.transmission);
        const LatencyBreakdown lat = latency(power.rate, positions, s.econ, s.radio);
        const StakeGame game = make_stake_game(s, j);
        const MiningDistribution dist = mining_distribution(game.stakes, zeros, j);
        total += cluster_utility(profits(dist, 0.0, zeros, game), lat);
    }
    return total;
}

struct MethodResult {
    std::vector<Vec2> positions;
    double utility = 0.0;
};

// Deployment + achieved total utility of one method on one scenario. Random
// averages several draws; maddpg trains on the scenario and evaluates the
// greedy policy.
MethodResult run_method(const std::string& method, const Scenario& s,
                        const ExperimentSpec& spec, uint64_t seed) {
    MethodResult r;
    if (method == "maddpg") {
        rl::Environment train_env(s, spec.env);
        const rl::TrainResult trained = rl::train_maddpg(train_env, spec.hyper);
        rl::EnvConfig eval_cfg = spec.env;
        eval_cfg.resample_nodes = false;
        rl::Environment eval_env(s, eval_cfg);
        double total = 0.0;
        for (int k = 0; k < spec.eval_rollouts; ++k) {
            const rl::Rollout roll = rl::execute_policy(
                trained.params, eval_env, Rng::mix(seed, 0xeu + k), spec.hyper.steps_per_episode);
            total += roll.total_utility;
            r.positions = roll.final_state.uavs;
        }
        r.utility = total / spec.eval_rollouts;
        return r;
    }
    const rl::BaselineKind kind = rl::baseline_kind_from_string(method);
    if (kind == rl::BaselineKind::Random) {
        double total = 0.0;
        for (int k = 0; k < spec.eval_rollouts; ++k) {
            const rl::Deployment d =
                rl::baseline_deploy(kind, s, spec.env.solver, Rng::mix(seed, 0x7au + k));
            total += d.total_utility;
            r.positions = d.positions;
        }
        r.utility = total / spec.eval_rollouts;
        return r;
    }
    const rl::Deployment d = rl::baseline_deploy(kind, s, spec.env.solver, seed, spec.grid);
    r.positions = d.positions;
    r.utility = d.total_utility;
    return r;
}

void write_reward_csv(const fs::path& path, const Eigen::MatrixXd& rewards) {
    CsvWriter csv(path);
    const auto agents = rewards.cols();
    std::vector<std::string> header{"episode"};
    for (Eigen::Index j = 0; j < agents; ++j) header.push_back("reward_" + std::to_string(j));
    for (Eigen::Index j = 0; j < agents; ++j) header.push_back("ma50_" + std::to_string(j));
    csv.row(header);
    const int window = 50;
    for (Eigen::Index e = 0; e < rewards.rows(); ++e) {
        std::vector<std::string> cells{std::to_string(e)};
        for (Eigen::Index j = 0; j < agents; ++j) cells.push_back(num(rewards(e, j)));
        const Eigen::Index lo = std::max<Eigen::Index>(0, e - window + 1);
        for (Eigen::Index j = 0; j < agents; ++j) {
            const double ma = rewards.col(j).segment(lo, e - lo + 1).mean();
            cells.push_back(num(ma));
        }
        csv.row(cells);
    }
}

void run_convergence(const ExperimentSpec& spec, const Scenario& s, ExperimentResult& result) {
    std::vector<double> actor_lrs = spec.actor_lrs;
    if (actor_lrs.empty()) actor_lrs.push_back(spec.hyper.actor_lr);
    rl::Environment env(s, spec.env);
    for (double lr : actor_lrs) {
        rl::Hyper h = spec.hyper;
        h.actor_lr = lr;
        const rl::TrainResult trained = rl::train_maddpg(env, h);
        const std::string name = "convergence_actor-" + num(lr) + ".csv";
        write_reward_csv(fs::path(spec.out_dir) / name, trained.episode_rewards);
        result.files.push_back({name, "per-episode cumulative reward, actor lr " + num(lr)});
    }
    for (double lr : spec.critic_lrs) {
        rl::Hyper h = spec.hyper;
        h.critic_lr = lr;
        const rl::TrainResult trained = rl::train_maddpg(env, h);
        const std::string name = "convergence_critic-" + num(lr) + ".csv";
        write_reward_csv(fs::path(spec.out_dir) / name, trained.episode_rewards);
        result.files.push_back({name, "per-episode cumulative reward, critic lr " + num(lr)});
    }
}

void run_deployment_map(const ExperimentSpec& spec, const Scenario& s,
                        ExperimentResult& result) {
    rl::Environment train_env(s, spec.env);
    const rl::TrainResult trained = rl::train_maddpg(train_env, spec.hyper);

    rl::EnvConfig eval_cfg = spec.env;
    eval_cfg.resample_nodes = false;
    rl::Environment eval_env(s, eval_cfg);
    const rl::Rollout roll = rl::execute_policy(trained.params, eval_env,
                                                Rng::mix(spec.seed, 0xd3bu),
                                                spec.hyper.steps_per_episode);

    const std::string name = "deployment_map.csv";
    CsvWriter csv(fs::path(spec.out_dir) / name);
    csv.row({"kind", "cluster", "x", "y"});
    for (int j = 0; j < s.num_clusters(); ++j) {
        for (const Vec2& w : s.clusters[j].nodes)
            csv.row({"node", std::to_string(j), num(w.x), num(w.y)});
        const Vec2 c = s.clusters[j].node_centroid();
        csv.row({"centroid", std::to_string(j), num(c.x), num(c.y)});
        const Vec2 u0 = roll.trajectory.front()[j];
        csv.row({"uav_initial", std::to_string(j), num(u0.x), num(u0.y)});
        const Vec2 u1 = roll.trajectory.back()[j];
        csv.row({"uav_final", std::to_string(j), num(u1.x), num(u1.y)});
    }
    result.files.push_back({name, "node/centroid/UAV coordinates before and after training"});

    const std::string policy_name = "policy.json";
    rl::save_policy(trained.params, (fs::path(spec.out_dir) / policy_name).string());
    result.files.push_back({policy_name, "trained actor/critic parameters"});
}

void run_profit_heatmap(const ExperimentSpec& spec, const Scenario& s,
                        ExperimentResult& result) {
    const std::string name = "profit_heatmap.csv";
    CsvWriter csv(fs::path(spec.out_dir) / name);
    std::vector<std::string> header{"active_cluster"};
    for (int k = 0; k < s.num_clusters(); ++k) header.push_back("uav_" + std::to_string(k));
    csv.row(header);

    const std::string eq_name = "equilibrium.csv";
    CsvWriter eq(fs::path(spec.out_dir) / eq_name);
    eq.row({"active_cluster", "beta_star", "pool_prob", "total_profit"});

    for (int j = 0; j < s.num_clusters(); ++j) {
        const StakeGame game = make_stake_game(s, j);
        const IncentiveOutcome out = leader_search(game, spec.env.solver.leader_grid_step);
        std::vector<std::string> cells{std::to_string(j)};
        for (int k = 0; k < s.num_clusters(); ++k) {
            if (k == j) {
                cells.push_back(num(out.profits.pool_profit));
            } else {
                const int pos = k < j ? k : k - 1;
                cells.push_back(num(out.profits.follower_profits[pos]));
            }
        }
        csv.row(cells);
        eq.row({std::to_string(j), num(out.beta), num(out.dist.pool_prob),
                num(out.profits.total())});
    }
    result.files.push_back({name, "expected profit of every UAV per active cluster"});
    result.files.push_back({eq_name, "equilibrium share and pool statistics per active cluster"});
}

void run_sweep(const ExperimentSpec& spec, const Scenario& base, ExperimentResult& result,
               bool altitude_sweep) {
    std::vector<double> xs;
    if (altitude_sweep) {
        xs = spec.altitudes;
        if (xs.empty()) throw ConfigError("altitude-sweep: empty altitude range");
    } else {
        if (spec.node_counts.empty()) throw ConfigError("node-sweep: empty node count range");
        for (int n : spec.node_counts) xs.push_back(n);
    }
    if (spec.methods.empty()) throw ConfigError("sweep: no methods given");

    const std::string name = altitude_sweep ? "altitude_sweep.csv" : "node_sweep.csv";
    CsvWriter csv(fs::path(spec.out_dir) / name);
    std::vector<std::string> header{altitude_sweep ? "altitude" : "nodes_per_cluster"};
    for (const std::string& m : spec.methods) header.push_back(m);
    if (spec.no_pool_variant)
        for (const std::string& m : spec.methods) header.push_back(m + "_nopool");
    csv.row(header);

    for (double x : xs) {
        Scenario s = base;
        if (altitude_sweep) {
            s.radio.altitude = x;
        } else {
            GenerationConfig gen = spec.gen;
            gen.nodes_per_cluster = static_cast<int>(x);
            s = generate_scenario(gen, spec.radio, spec.econ, spec.seed);
            s.radio.altitude = spec.radio.altitude;
        }
        std::vector<std::string> cells{num(x)};
        std::vector<MethodResult> got;
        for (const std::string& m : spec.methods) {
            got.push_back(run_method(m, s, spec, spec.seed));
            cells.push_back(num(got.back().utility));
        }
        if (spec.no_pool_variant)
            for (size_t i = 0; i < spec.methods.size(); ++i)
                cells.push_back(num(no_pool_utility(s, got[i].positions, spec.env.solver)));
        csv.row(cells);
    }
    result.files.push_back(
        {name, altitude_sweep ? "total utility vs UAV altitude per deployment method"
                              : "total utility vs nodes per cluster per deployment method"});
}

void run_baseline_compare(const ExperimentSpec& spec, const Scenario& s,
                          ExperimentResult& result) {
    if (spec.methods.empty()) throw ConfigError("baseline-compare: no methods given");
    const std::string name = "baseline_compare.csv";
    CsvWriter csv(fs::path(spec.out_dir) / name);
    std::vector<std::string> header{"method", "total_utility"};
    for (int j = 0; j < s.num_clusters(); ++j) header.push_back("x_" + std::to_string(j));
    for (int j = 0; j < s.num_clusters(); ++j) header.push_back("y_" + std::to_string(j));
    csv.row(header);
    for (const std::string& m : spec.methods) {
        const MethodResult r = run_method(m, s, spec, spec.seed);
        std::vector<std::string> cells{m, num(r.utility)};
        for (const Vec2& p : r.positions) cells.push_back(num(p.x));
        for (const Vec2& p : r.positions) cells.push_back(num(p.y));
        csv.row(cells);
    }
    result.files.push_back({name, "final utility and deployment of every method"});
}

json spec_to_json(const ExperimentSpec& spec) {
    json j;
    j["kind"] = to_string(spec.kind);
    j["scenario_path"] = spec.scenario_path;
    j["seed"] = spec.seed;
    j["out_dir"] = spec.out_dir;
    j["gen"] = {{"num_clusters", spec.gen.num_clusters},
                {"nodes_per_cluster", spec.gen.nodes_per_cluster},
                {"area_width", spec.gen.area.width},
                {"area_height", spec.gen.area.height},
                {"placement",
                 spec.gen.placement == NodePlacement::Uniform ? "uniform" : "clustered"},
                {"cluster_radius", spec.gen.cluster_radius}};
    j["radio"] = {{"altitude", spec.radio.altitude},
                  {"antennas", spec.radio.antennas},
                  {"squared_path_gain", spec.radio.squared_path_gain}};
    j["econ"] = {{"fixed_reward", spec.econ.fixed_reward},
                 {"fee_per_bit", spec.econ.fee_per_bit},
                 {"data_size", spec.econ.data_size}};
    j["hyper"] = {{"actor_lr", spec.hyper.actor_lr},   {"critic_lr", spec.hyper.critic_lr},
                  {"gamma", spec.hyper.gamma},         {"tau", spec.hyper.tau},
                  {"batch", spec.hyper.batch},         {"episodes", spec.hyper.episodes},
                  {"steps", spec.hyper.steps_per_episode},
                  {"buffer_capacity", spec.hyper.buffer_capacity},
                  {"updates_per_step", spec.hyper.updates_per_step},
                  {"seed", spec.hyper.seed}};
    j["env"] = {{"max_step", spec.env.max_step},
                {"resample_nodes", spec.env.resample_nodes},
                {"reward_scale", spec.env.reward_scale},
                {"leader_grid_step", spec.env.solver.leader_grid_step}};
    j["methods"] = spec.methods;
    j["actor_lrs"] = spec.actor_lrs;
    j["critic_lrs"] = spec.critic_lrs;
    j["altitudes"] = spec.altitudes;
    j["node_counts"] = spec.node_counts;
    j["no_pool_variant"] = spec.no_pool_variant;
    j["grid"] = spec.grid;
    j["eval_rollouts"] = spec.eval_rollouts;
    return j;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    const auto start = std::chrono::steady_clock::now();
    fs::create_directories(spec.out_dir);

    ExperimentResult result;
    result.spec = spec;
    const Scenario s = resolve_scenario(spec);

    const std::string scen_name = "scenario.json";
    save_scenario(s, (fs::path(spec.out_dir) / scen_name).string());
    result.files.push_back({scen_name, "scenario the experiment ran on"});

    switch (spec.kind) {
        case ExperimentKind::Convergence: run_convergence(spec, s, result); break;
        case ExperimentKind::DeploymentMap: run_deployment_map(spec, s, result); break;
        case ExperimentKind::ProfitHeatmap: run_profit_heatmap(spec, s, result); break;
        case ExperimentKind::AltitudeSweep: run_sweep(spec, s, result, true); break;
        case ExperimentKind::NodeSweep: run_sweep(spec, s, result, false); break;
        case ExperimentKind::BaselineCompare: run_baseline_compare(spec, s, result); break;
    }

    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

std::string emit_report(const ExperimentResult& result) {
    json manifest;
    manifest["experiment"] = to_string(result.spec.kind);
    manifest["config"] = spec_to_json(result.spec);
    manifest["wall_seconds"] = result.wall_seconds;
    json files = json::array();
    for (const OutputFile& f : result.files) {
        const fs::path p = fs::path(result.spec.out_dir) / f.path;
        files.push_back({{"path", f.path},
                         {"fnv1a64", fnv1a64_hex_of_file(p.string())},
                         {"bytes", fs::file_size(p)},
                         {"description", f.description}});
    }
    manifest["files"] = files;

    const fs::path mpath = fs::path(result.spec.out_dir) / "manifest.json";
    std::ofstream out(mpath);
    if (!out) throw Error("cannot write " + mpath.string());
    out << manifest.dump(2) << '\n';

    std::ostringstream summary;
    summary << to_string(result.spec.kind) << ": " << result.files.size()
            << " output file(s) in " << result.spec.out_dir << " ("
            << num(result.wall_seconds) << " s)\n";
    for (const OutputFile& f : result.files)
        summary << "  " << f.path << "  " << f.description << '\n';
    summary << "  manifest.json  output hashes and configuration\n";
    return summary.str();
}

void apply_preset(ExperimentSpec& spec, const std::string& preset) {
    if (preset == "desk") {
        spec.gen.num_clusters = 2;
        spec.gen.nodes_per_cluster = 5;
        spec.gen.area = {500.0, 500.0};
        spec.gen.placement = NodePlacement::Clustered;
        spec.gen.cluster_radius = 120.0;
        spec.radio.squared_path_gain = false;
        spec.env.solver.leader_grid_step = 1e-2;
        spec.hyper.episodes = 300;
        spec.hyper.steps_per_episode = 50;
    } else if (preset == "paper") {
        spec.gen.num_clusters = 6;
        spec.gen.nodes_per_cluster = 10;
        spec.gen.area = {1000.0, 1000.0};
        spec.gen.placement = NodePlacement::Uniform;
        spec.env.solver.leader_grid_step = 1e-3;
        spec.hyper.episodes = 5000;
        spec.hyper.steps_per_episode = 250;
    } else {
        throw ConfigError("unknown preset: " + preset + " (expected desk or paper)");
    }
}

}  // namespace bcuav
