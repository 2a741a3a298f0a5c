#include "bcuav/rl/env.hpp"

#include <algorithm>
#include <cmath>

#include "bcuav/channel.hpp"
#include "bcuav/errors.hpp"

namespace bcuav::rl {

Eigen::MatrixXd EnvLayout::gather_obs(const Eigen::MatrixXd& states, int j) const {
    Eigen::MatrixXd obs(obs_dim(), states.cols());
    const int nb = 2 * nodes_per_cluster;
    obs.middleRows(0, nb) = states.middleRows(nodes_offset(j), nb);
    obs.middleRows(nb, 2) = states.middleRows(uav_offset(j), 2);
    obs.middleRows(nb + 2, nodes_per_cluster) =
        states.middleRows(gains_offset(j), nodes_per_cluster);
    return obs;
}

Environment::Environment(Scenario scenario, EnvConfig cfg)
    : base_(std::move(scenario)), cfg_(cfg) {
    validate(base_);
    layout_.num_agents = base_.num_clusters();
    layout_.nodes_per_cluster = static_cast<int>(base_.clusters[0].nodes.size());
    for (const ClusterSpec& c : base_.clusters)
        if (static_cast<int>(c.nodes.size()) != layout_.nodes_per_cluster)
            throw ConfigError("Environment: clusters must have equal node counts");

    // Freeze the gain normalization from the base scenario so observations do
    // not shift across episodes. Gains span many orders of magnitude, hence
    // the log scale.
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (int j = 0; j < base_.num_clusters(); ++j) {
        const auto gains =
            cluster_gains(base_.clusters[j], base_.clusters[j].uav_pos, base_.radio);
        for (double g : gains) {
            const double lg = std::log10(std::max(g, 1e-300));
            lo = first ? lg : std::min(lo, lg);
            hi = first ? lg : std::max(hi, lg);
            first = false;
        }
    }
    gain_log_center_ = 0.5 * (lo + hi);
    gain_log_scale_ = std::max(1.0, 0.5 * (hi - lo));
}

void Environment::refresh_gains(EnvState& state) const {
    const int n = layout_.num_agents;
    state.gains.resize(n);
    for (int j = 0; j < n; ++j) {
        state.gains[j].resize(state.nodes[j].size());
        for (size_t i = 0; i < state.nodes[j].size(); ++i)
            state.gains[j][i] = link_gain(state.nodes[j][i], state.uavs[j], base_.radio).gain;
    }
}

Scenario Environment::materialize(const EnvState& state) const {
    Scenario s = base_;
    for (int j = 0; j < layout_.num_agents; ++j) {
        s.clusters[j].nodes = state.nodes[j];
        s.clusters[j].uav_pos = state.uavs[j];
    }
    return s;
}

std::vector<double> Environment::evaluate_utilities(const EnvState& state) const {
    const Scenario s = materialize(state);
    const auto evals = evaluate_all_clusters(s, state.uavs, cfg_.solver);
    std::vector<double> u(evals.size());
    for (size_t j = 0; j < evals.size(); ++j) u[j] = evals[j].utility;
    return u;
}

EnvState Environment::reset(uint64_t seed) const {
    Rng rng(seed);
    EnvState state;
    const int n = layout_.num_agents;
    state.nodes.resize(n);
    state.uavs.resize(n);
    state.epoch = 0;

    for (int j = 0; j < n; ++j) {
        if (cfg_.resample_nodes) {
            state.nodes[j].resize(base_.clusters[j].nodes.size());
            for (Vec2& w : state.nodes[j])
                w = {rng.uniform(0.0, base_.area.width), rng.uniform(0.0, base_.area.height)};
        } else {
            state.nodes[j] = base_.clusters[j].nodes;
        }
    }
    for (int j = 0; j < n; ++j) {
        if (cfg_.uavs_at_centroid) {
            ClusterSpec c;
            c.nodes = state.nodes[j];
            state.uavs[j] = c.node_centroid();
        } else {
            state.uavs[j] = {rng.uniform(0.0, base_.area.width),
                             rng.uniform(0.0, base_.area.height)};
        }
    }
    separate(state.uavs);
    refresh_gains(state);
    state.utilities = evaluate_utilities(state);
    return state;
}

namespace {

Vec2 clip_to_area(Vec2 p, const AreaSpec& area) {
    return {std::clamp(p.x, 0.0, area.width), std::clamp(p.y, 0.0, area.height)};
}

}  // namespace

StepResult Environment::step(const EnvState& state, std::span<const Vec2> actions) const {
    if (static_cast<int>(actions.size()) != layout_.num_agents)
        throw DomainError("Environment::step: one action per agent required");

    StepResult res;
    res.state = state;
    res.state.epoch = state.epoch + 1;
    for (int j = 0; j < layout_.num_agents; ++j) {
        Vec2 a = actions[j];
        const double norm = a.norm();
        if (norm > cfg_.max_step) a = a * (cfg_.max_step / norm);
        res.state.uavs[j] = clip_to_area(state.uavs[j] + a, base_.area);
    }
    separate(res.state.uavs);
    refresh_gains(res.state);
    res.state.utilities = evaluate_utilities(res.state);

    res.rewards.resize(layout_.num_agents);
    for (int j = 0; j < layout_.num_agents; ++j)
        res.rewards(j) =
            cfg_.reward_scale * (res.state.utilities[j] - state.utilities[j]);
    return res;
}

void Environment::separate(std::vector<Vec2>& uavs) const {
    // push apart any pair closer than the minimum separation; a few passes
    // suffice since violations are rare
    const double sep = cfg_.min_separation;
    for (int pass = 0; pass < 16; ++pass) {
        bool moved = false;
        for (size_t a = 0; a < uavs.size(); ++a) {
            for (size_t b = a + 1; b < uavs.size(); ++b) {
                const Vec2 d = uavs[b] - uavs[a];
                const double dist = d.norm();
                if (dist >= sep) continue;
                const Vec2 dir = dist < 1e-12 ? Vec2{1.0, 0.0} : d * (1.0 / dist);
                const double need = sep - dist;
                uavs[a] = clip_to_area(uavs[a] - dir * (0.5 * need), base_.area);
                uavs[b] = clip_to_area(uavs[b] + dir * (0.5 * need), base_.area);
                if (distance(uavs[a], uavs[b]) < sep) {
                    // one side is pinned to the boundary; relocate the other
                    for (const Vec2 cand :
                         {uavs[a] + Vec2{sep, 0}, uavs[a] - Vec2{sep, 0},
                          uavs[a] + Vec2{0, sep}, uavs[a] - Vec2{0, sep}}) {
                        const Vec2 clipped = clip_to_area(cand, base_.area);
                        if (distance(uavs[a], clipped) >= sep) {
                            uavs[b] = clipped;
                            break;
                        }
                    }
                }
                moved = true;
            }
        }
        if (!moved) return;
    }
}

Eigen::VectorXd Environment::state_vector(const EnvState& state) const {
    Eigen::VectorXd v(layout_.state_dim());
    const double invw = 1.0 / base_.area.width;
    const double invh = 1.0 / base_.area.height;
    for (int j = 0; j < layout_.num_agents; ++j) {
        int at = layout_.nodes_offset(j);
        for (const Vec2& w : state.nodes[j]) {
            v(at++) = w.x * invw;
            v(at++) = w.y * invh;
        }
        v(layout_.uav_offset(j)) = state.uavs[j].x * invw;
        v(layout_.uav_offset(j) + 1) = state.uavs[j].y * invh;
        at = layout_.gains_offset(j);
        for (double g : state.gains[j])
            v(at++) =
                (std::log10(std::max(g, 1e-300)) - gain_log_center_) / gain_log_scale_;
    }
    return v;
}

Eigen::VectorXd Environment::observation(const EnvState& state, int agent) const {
    const Eigen::VectorXd sv = state_vector(state);
    return layout_.gather_obs(sv, agent);
}

}  // namespace bcuav::rl
