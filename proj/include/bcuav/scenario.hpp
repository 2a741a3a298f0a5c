#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bcuav/geometry.hpp"

namespace bcuav {

struct AreaSpec {
    double width = 1000.0;   // m
    double height = 1000.0;  // m

    bool contains(Vec2 p) const {
        return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
    }
    bool operator==(const AreaSpec&) const = default;
};

// Radio-layer parameters. Defaults are the simulation values used throughout
// the experiments (noise power is stored in watts: -110 dBm = 1e-14 W).
struct RadioParams {
    int antennas = 4;                    // receive antennas per UAV
    double altitude = 90.0;              // m
    double bandwidth_ag = 1e5;           // Hz, IoT uplink
    double bandwidth_aa = 1e5;           // Hz, UAV-to-UAV
    double noise_power = 1e-14;          // W
    double carrier_freq = 2e9;           // Hz
    double light_speed = 3e8;            // m/s
    double env_a = 9.613;                // environment sigmoid factor
    double env_b = 0.158;                // environment sigmoid factor
    double eta_los_db = 1.0;             // dB
    double eta_nlos_db = 20.0;           // dB
    double uav_tx_power = 0.5;           // W
    double per_node_max_power = 0.4;     // W
    double per_cluster_max_power = 1.0;  // W
    // Large-scale gain convention. true: the amplitude expression
    // d^-2 * 10^(-delta/10) is squared to obtain the power gain.
    // false: that expression is used as the power gain directly.
    bool squared_path_gain = true;

    bool operator==(const RadioParams&) const = default;
};

// Blockchain economics. Coins are plain decimals; data sizes are bits.
struct EconomicParams {
    double fixed_reward = 200.0;     // coins per valid block
    double fee_per_bit = 5e-6;       // coins/bit transaction fee
    double data_size = 8e6;          // bits collected per cluster round
    double self_cost = 30.0;         // coins, block built by the collecting UAV
    double cross_cost = 60.0;        // coins, block built by any other UAV
    double stake_low = 90.0;         // coins
    double stake_high = 100.0;       // coins
    double compute_rate = 2e6;       // bit/s mining throughput
    double mining_complexity = 1.0;  // dimensionless
    double confirm_time = 0.5;       // s, confirmation + chaining

    double block_payment() const { return fixed_reward + fee_per_bit * data_size; }
    bool operator==(const EconomicParams&) const = default;
};

struct ClusterSpec {
    std::vector<Vec2> nodes;  // IoT node coordinates
    Vec2 uav_pos;             // horizontal UAV coordinate
    double stake = 0.0;       // coins available at this UAV

    Vec2 node_centroid() const;
    bool operator==(const ClusterSpec&) const = default;
};

struct Scenario {
    AreaSpec area;
    RadioParams radio;
    EconomicParams econ;
    std::vector<ClusterSpec> clusters;
    uint64_t seed = 0;

    int num_clusters() const { return static_cast<int>(clusters.size()); }
    std::vector<Vec2> uav_positions() const;
    std::vector<double> stakes() const;
    bool operator==(const Scenario&) const = default;
};

enum class NodePlacement {
    Uniform,    // nodes i.i.d. uniform over the whole area
    Clustered,  // nodes uniform in a disc around a per-cluster center
};

struct GenerationConfig {
    int num_clusters = 6;
    int nodes_per_cluster = 10;
    AreaSpec area{};
    NodePlacement placement = NodePlacement::Uniform;
    double cluster_radius = 150.0;  // m, disc radius for Clustered placement
};

// Throws ConfigError naming the first violated field.
void validate(const Scenario& s);

// Deterministic for a fixed seed. Requires num_clusters >= 2 (the incentive
// game needs at least one follower) and nodes_per_cluster >= 1.
Scenario generate_scenario(const GenerationConfig& cfg, const RadioParams& radio,
                           const EconomicParams& econ, uint64_t seed);

// JSON persistence; the schema is described in docs/formats.md. Round-trips
// all numeric fields bit-exactly. load_scenario validates after parsing.
void save_scenario(const Scenario& s, const std::string& path);
Scenario load_scenario(const std::string& path);

std::string scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const std::string& text);

}  // namespace bcuav
