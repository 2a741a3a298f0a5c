#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bcuav/rng.hpp"
#include "bcuav/scenario.hpp"
#include "bcuav/system.hpp"

namespace bcuav::rl {

// Index layout of the flattened global state vector:
//   [nodes of cluster 0 (2I), ..., nodes of cluster J-1,
//    uav 0 (2), ..., uav J-1,
//    gains of cluster 0 (I), ..., gains of cluster J-1]
// An agent's observation is the restriction to its own blocks.
struct EnvLayout {
    int num_agents = 0;
    int nodes_per_cluster = 0;

    int state_dim() const { return num_agents * (3 * nodes_per_cluster + 2); }
    int obs_dim() const { return 3 * nodes_per_cluster + 2; }
    int action_dim() const { return 2; }
    int joint_action_dim() const { return 2 * num_agents; }

    int nodes_offset(int j) const { return 2 * nodes_per_cluster * j; }
    int uav_offset(int j) const { return 2 * nodes_per_cluster * num_agents + 2 * j; }
    int gains_offset(int j) const {
        return (2 * nodes_per_cluster + 2) * num_agents + nodes_per_cluster * j;
    }

    // observation columns gathered from state columns
    Eigen::MatrixXd gather_obs(const Eigen::MatrixXd& states, int j) const;
};

struct EnvState {
    std::vector<std::vector<Vec2>> nodes;    // per cluster
    std::vector<Vec2> uavs;
    std::vector<std::vector<double>> gains;  // recomputed on every move
    std::vector<double> utilities;           // U_j at this deployment
    int epoch = 0;
};

struct EnvConfig {
    double max_step = 10.0;        // m, action norm bound
    double min_separation = 1.0;   // m, enforced between UAVs
    bool resample_nodes = true;    // new node layout on every reset
    bool uavs_at_centroid = false; // reset UAVs at node centroids instead of uniform
    double reward_scale = 1.0;     // applied to the utility differences
    SolverOptions solver{};
};

struct StepResult {
    EnvState state;
    Eigen::VectorXd rewards;
};

// The deployment Markov game. Rewards are per-agent utility differences
// between consecutive epochs. step() is a pure function of (state, actions),
// so rollouts are reproducible from the reset seed.
class Environment {
public:
    Environment(Scenario scenario, EnvConfig cfg);

    EnvState reset(uint64_t seed) const;
    StepResult step(const EnvState& state, std::span<const Vec2> actions) const;

    Eigen::VectorXd observation(const EnvState& state, int agent) const;
    Eigen::VectorXd state_vector(const EnvState& state) const;

    const EnvLayout& layout() const { return layout_; }
    const Scenario& scenario() const { return base_; }
    const EnvConfig& config() const { return cfg_; }
    int num_agents() const { return layout_.num_agents; }

private:
    std::vector<double> evaluate_utilities(const EnvState& state) const;
    void refresh_gains(EnvState& state) const;
    void separate(std::vector<Vec2>& uavs) const;
    Scenario materialize(const EnvState& state) const;

    Scenario base_;
    EnvConfig cfg_;
    EnvLayout layout_;
    double gain_log_center_ = 0.0;  // frozen normalization of log10 gains
    double gain_log_scale_ = 1.0;
};

// Fixed-size ring of transitions with uniform minibatch sampling without
// replacement. Overwrites the oldest entry once full.
struct Transition {
    Eigen::VectorXd state;
    Eigen::VectorXd joint_action;
    Eigen::VectorXd rewards;
    Eigen::VectorXd next_state;
};

class ReplayBuffer {
public:
    explicit ReplayBuffer(size_t capacity) : capacity_(capacity) {}

    void push(Transition t) {
        if (data_.size() < capacity_) {
            data_.push_back(std::move(t));
        } else {
            data_[head_] = std::move(t);
            head_ = (head_ + 1) % capacity_;
        }
    }
    size_t size() const { return data_.size(); }
    size_t capacity() const { return capacity_; }
    const Transition& operator[](size_t i) const { return data_[i]; }

    std::vector<size_t> sample(Rng& rng, size_t batch) const {
        return rng.sample_without_replacement(data_.size(), batch);
    }

private:
    size_t capacity_;
    size_t head_ = 0;
    std::vector<Transition> data_;
};

}  // namespace bcuav::rl
