#include "bcuav/rl/maddpg.hpp"

#include <cmath>
#include <exception>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bcuav/errors.hpp"

namespace bcuav::rl {

using nlohmann::json;

PolicyParams make_policy_params(const EnvLayout& layout, const Hyper& hyper, double max_step) {
    PolicyParams params;
    params.agents.reserve(layout.num_agents);
    for (int j = 0; j < layout.num_agents; ++j) {
        AgentNets nets;
        const std::vector<int> actor_dims{layout.obs_dim(), hyper.actor_hidden,
                                          hyper.actor_hidden, layout.action_dim()};
        const std::vector<int> critic_dims{layout.state_dim() + layout.joint_action_dim(),
                                           hyper.critic_hidden, hyper.critic_hidden, 1};
        nets.actor = Mlp(actor_dims, max_step, Rng::mix(hyper.seed, 2 * j));
        nets.critic = Mlp(critic_dims, 0.0, Rng::mix(hyper.seed, 2 * j + 1));
        nets.actor_target = nets.actor;
        nets.critic_target = nets.critic;
        params.agents.push_back(std::move(nets));
    }
    return params;
}

namespace {

json mlp_to_json(const Mlp& net) {
    json j;
    j["dims"] = net.dims();
    j["output_scale"] = net.output_scale();
    const Eigen::VectorXd theta = net.get_params();
    std::vector<double> flat(theta.data(), theta.data() + theta.size());
    j["params"] = flat;
    return j;
}

Mlp mlp_from_json(const json& j) {
    Mlp net(j.at("dims").get<std::vector<int>>(), j.at("output_scale").get<double>(), 0);
    const auto flat = j.at("params").get<std::vector<double>>();
    if (static_cast<int>(flat.size()) != net.param_count())
        throw ParseError("policy file: parameter count mismatch");
    Eigen::VectorXd theta = Eigen::Map<const Eigen::VectorXd>(flat.data(), flat.size());
    net.set_params(theta);
    return net;
}

}  // namespace

void save_policy(const PolicyParams& params, const std::string& path) {
    json j;
    j["version"] = 1;
    json agents = json::array();
    for (const AgentNets& nets : params.agents) {
        json ja;
        ja["actor"] = mlp_to_json(nets.actor);
        ja["actor_target"] = mlp_to_json(nets.actor_target);
        ja["critic"] = mlp_to_json(nets.critic);
        ja["critic_target"] = mlp_to_json(nets.critic_target);
        agents.push_back(ja);
    }
    j["agents"] = agents;
    std::ofstream out(path);
    if (!out) throw Error("save_policy: cannot open " + path);
    out << j.dump() << '\n';
}

PolicyParams load_policy(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("load_policy: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(std::string("policy file: invalid JSON: ") + e.what());
    }
    if (!j.contains("version") || j["version"].get<int>() != 1)
        throw ParseError("policy file: unsupported version");
    PolicyParams params;
    for (const json& ja : j.at("agents")) {
        AgentNets nets;
        nets.actor = mlp_from_json(ja.at("actor"));
        nets.actor_target = mlp_from_json(ja.at("actor_target"));
        nets.critic = mlp_from_json(ja.at("critic"));
        nets.critic_target = mlp_from_json(ja.at("critic_target"));
        params.agents.push_back(std::move(nets));
    }
    return params;
}

Eigen::RowVectorXd critic_targets(const PolicyParams& params, const EnvLayout& layout,
                                  int agent, const Eigen::MatrixXd& next_states,
                                  const Eigen::RowVectorXd& rewards, double gamma) {
    const auto batch = next_states.cols();
    Eigen::MatrixXd input(layout.state_dim() + layout.joint_action_dim(), batch);
    input.topRows(layout.state_dim()) = next_states;
    for (int k = 0; k < layout.num_agents; ++k) {
        const Eigen::MatrixXd obs = layout.gather_obs(next_states, k);
        input.middleRows(layout.state_dim() + k * layout.action_dim(), layout.action_dim()) =
            params.agents[k].actor_target.forward(obs);
    }
    const Eigen::MatrixXd q = params.agents[agent].critic_target.forward(input);
    return rewards + gamma * q.row(0);
}

MaddpgTrainer::MaddpgTrainer(const Environment& env, Hyper hyper)
    : env_(env),
      hyper_(hyper),
      params_(make_policy_params(env.layout(), hyper, env.config().max_step)),
      buffer_(hyper.buffer_capacity),
      rng_(Rng::mix(hyper.seed, 0x5eedULL)) {
    for (const AgentNets& nets : params_.agents) {
        actor_opt_.emplace_back(nets.actor, hyper_.actor_lr);
        critic_opt_.emplace_back(nets.critic, hyper_.critic_lr);
    }
}

void MaddpgTrainer::update_agent(int agent, const std::vector<size_t>& indices) {
    const EnvLayout& layout = env_.layout();
    const int ds = layout.state_dim();
    const int da = layout.joint_action_dim();
    const auto batch = static_cast<Eigen::Index>(indices.size());

    Eigen::MatrixXd s(ds, batch), s2(ds, batch);
    Eigen::MatrixXd a(da, batch);
    Eigen::RowVectorXd r(batch);
    for (Eigen::Index c = 0; c < batch; ++c) {
        const Transition& t = buffer_[indices[c]];
        s.col(c) = t.state;
        s2.col(c) = t.next_state;
        a.col(c) = t.joint_action;
        r(c) = t.rewards(agent);
    }

    AgentNets& nets = params_.agents[agent];
    const Eigen::RowVectorXd y = critic_targets(params_, layout, agent, s2, r, hyper_.gamma);

    // critic: minimize mean squared target error
    Eigen::MatrixXd critic_in(ds + da, batch);
    critic_in.topRows(ds) = s;
    critic_in.bottomRows(da) = a;
    const Eigen::MatrixXd q = nets.critic.forward_cached(critic_in);
    const Eigen::MatrixXd dq =
        (2.0 / static_cast<double>(batch)) * (q.row(0) - y);
    const double loss = (q.row(0) - y).array().square().mean();
    if (!std::isfinite(loss))
        throw SolverError("maddpg: non-finite critic loss for agent " + std::to_string(agent) +
                              " (|theta|=" +
                              std::to_string(nets.critic.get_params().norm()) + ")",
                          loss);
    nets.critic.zero_grad();
    nets.critic.backward(dq);
    critic_opt_[agent].step(nets.critic);

    // actor: ascend the critic value at the actor's own action
    const Eigen::MatrixXd obs = layout.gather_obs(s, agent);
    const Eigen::MatrixXd my_action = nets.actor.forward_cached(obs);
    Eigen::MatrixXd critic_in2 = critic_in;
    critic_in2.middleRows(ds + agent * layout.action_dim(), layout.action_dim()) = my_action;
    nets.critic.forward_cached(critic_in2);
    nets.critic.zero_grad();
    const Eigen::MatrixXd dinput = nets.critic.backward(
        Eigen::MatrixXd::Constant(1, batch, -1.0 / static_cast<double>(batch)));
    const Eigen::MatrixXd da_j =
        dinput.middleRows(ds + agent * layout.action_dim(), layout.action_dim());
    nets.actor.zero_grad();
    nets.actor.backward(da_j);
    actor_opt_[agent].step(nets.actor);
    nets.critic.zero_grad();
}

void MaddpgTrainer::update_all(const std::vector<std::vector<size_t>>& indices_per_agent) {
    const int n = env_.num_agents();
    std::exception_ptr failure = nullptr;
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) {
        try {
            update_agent(j, indices_per_agent[j]);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    for (int j = 0; j < n; ++j) {
        soft_update(params_.agents[j].actor_target, params_.agents[j].actor, hyper_.tau);
        soft_update(params_.agents[j].critic_target, params_.agents[j].critic, hyper_.tau);
    }
}

TrainResult MaddpgTrainer::train() {
    const int n = env_.num_agents();
    TrainResult result;
    result.episode_rewards = Eigen::MatrixXd::Zero(hyper_.episodes, n);

    const size_t learn_after = std::max<size_t>(hyper_.batch, hyper_.warmup);
    for (int e = 0; e < hyper_.episodes; ++e) {
        const double progress =
            hyper_.episodes > 1 ? static_cast<double>(e) / (hyper_.episodes - 1) : 0.0;
        const double sigma =
            env_.config().max_step * (hyper_.noise_frac_start +
                                      (hyper_.noise_frac_end - hyper_.noise_frac_start) * progress);
        EnvState state = env_.reset(Rng::mix(hyper_.seed, 0xe0000 + e));
        for (int t = 0; t < hyper_.steps_per_episode; ++t) {
            std::vector<Vec2> actions(n);
            for (int j = 0; j < n; ++j) {
                const Eigen::VectorXd obs = env_.observation(state, j);
                const Eigen::MatrixXd a = params_.agents[j].actor.forward(obs);
                actions[j] = {a(0, 0) + sigma * rng_.normal(), a(1, 0) + sigma * rng_.normal()};
            }
            StepResult res = env_.step(state, actions);
            Transition tr;
            tr.state = env_.state_vector(state);
            tr.next_state = env_.state_vector(res.state);
            tr.joint_action.resize(2 * n);
            for (int j = 0; j < n; ++j) {
                tr.joint_action(2 * j) = actions[j].x;
                tr.joint_action(2 * j + 1) = actions[j].y;
            }
            tr.rewards = res.rewards;
            buffer_.push(std::move(tr));
            result.episode_rewards.row(e) += res.rewards.transpose();

            if (buffer_.size() >= learn_after) {
                for (int u = 0; u < hyper_.updates_per_step; ++u) {
                    std::vector<std::vector<size_t>> idx(n);
                    for (int j = 0; j < n; ++j) idx[j] = buffer_.sample(rng_, hyper_.batch);
                    update_all(idx);
                }
            }
            state = std::move(res.state);
        }
    }
    result.params = params_;
    return result;
}

TrainResult train_maddpg(const Environment& env, const Hyper& hyper) {
    MaddpgTrainer trainer(env, hyper);
    return trainer.train();
}

Rollout execute_policy(const PolicyParams& params, const Environment& env, uint64_t reset_seed,
                       int steps) {
    const int n = env.num_agents();
    if (static_cast<int>(params.agents.size()) != n)
        throw ConfigError("execute_policy: policy/agent count mismatch");

    Rollout roll;
    EnvState state = env.reset(reset_seed);
    roll.trajectory.push_back(state.uavs);
    for (int t = 0; t < steps; ++t) {
        std::vector<Vec2> actions(n);
        for (int j = 0; j < n; ++j) {
            const Eigen::MatrixXd a = params.agents[j].actor.forward(env.observation(state, j));
            actions[j] = {a(0, 0), a(1, 0)};
        }
        state = env.step(state, actions).state;
        roll.trajectory.push_back(state.uavs);
    }
    roll.final_utilities = state.utilities;
    for (double u : state.utilities) roll.total_utility += u;
    roll.final_state = std::move(state);
    return roll;
}

}  // namespace bcuav::rl
