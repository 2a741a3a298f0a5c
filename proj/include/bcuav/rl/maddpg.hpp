#pragma once

#include <string>
#include <vector>

#include "bcuav/rl/env.hpp"
#include "bcuav/rl/mlp.hpp"

namespace bcuav::rl {

struct Hyper {
    double actor_lr = 1e-4;
    double critic_lr = 1e-5;
    double gamma = 0.9;
    double tau = 0.01;  // soft-update coefficient, << 1
    int batch = 128;
    size_t buffer_capacity = 1000000;
    int episodes = 300;
    int steps_per_episode = 50;
    int updates_per_step = 1;
    int warmup = 500;  // transitions collected before learning starts
    double noise_frac_start = 0.5;  // exploration stddev, fraction of max_step
    double noise_frac_end = 0.05;   // linearly reached at the last episode
    int actor_hidden = 64;
    int critic_hidden = 128;
    uint64_t seed = 0;
};

// Per-agent networks. Targets start equal to the evaluation networks and are
// only moved by the soft update rule.
struct AgentNets {
    Mlp actor;
    Mlp actor_target;
    Mlp critic;
    Mlp critic_target;
};

struct PolicyParams {
    std::vector<AgentNets> agents;
};

PolicyParams make_policy_params(const EnvLayout& layout, const Hyper& hyper, double max_step);

void save_policy(const PolicyParams& params, const std::string& path);
PolicyParams load_policy(const std::string& path);

// y^d = r^d + gamma * Q'(s'^d, a') with a' from the target actors on the
// agents' next observations. No terminal masking: episodes are fixed-length.
Eigen::RowVectorXd critic_targets(const PolicyParams& params, const EnvLayout& layout,
                                  int agent, const Eigen::MatrixXd& next_states,
                                  const Eigen::RowVectorXd& rewards, double gamma);

struct TrainResult {
    PolicyParams params;
    Eigen::MatrixXd episode_rewards;  // episodes x agents, cumulative per episode
};

class MaddpgTrainer {
public:
    MaddpgTrainer(const Environment& env, Hyper hyper);

    TrainResult train();

    // One gradient step for every agent on the given minibatch indices,
    // followed by the soft target update. Exposed for tests.
    void update_all(const std::vector<std::vector<size_t>>& indices_per_agent);

    ReplayBuffer& buffer() { return buffer_; }
    PolicyParams& params() { return params_; }

private:
    void update_agent(int agent, const std::vector<size_t>& indices);

    const Environment& env_;
    Hyper hyper_;
    PolicyParams params_;
    std::vector<Adam> actor_opt_;
    std::vector<Adam> critic_opt_;
    ReplayBuffer buffer_;
    Rng rng_;
};

TrainResult train_maddpg(const Environment& env, const Hyper& hyper);

struct Rollout {
    std::vector<std::vector<Vec2>> trajectory;  // per epoch, per agent
    EnvState final_state;
    std::vector<double> final_utilities;
    double total_utility = 0.0;
};

// Noise-free greedy rollout of the trained actors.
Rollout execute_policy(const PolicyParams& params, const Environment& env, uint64_t reset_seed,
                       int steps);

}  // namespace bcuav::rl
