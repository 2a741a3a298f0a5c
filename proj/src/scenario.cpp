#include "bcuav/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bcuav/errors.hpp"
#include "bcuav/rng.hpp"

namespace bcuav {

using nlohmann::json;

Vec2 ClusterSpec::node_centroid() const {
    Vec2 c{0.0, 0.0};
    for (const Vec2& w : nodes) c = c + w;
    const double n = static_cast<double>(nodes.size());
    return {c.x / n, c.y / n};
}

std::vector<Vec2> Scenario::uav_positions() const {
    std::vector<Vec2> v;
    v.reserve(clusters.size());
    for (const ClusterSpec& c : clusters) v.push_back(c.uav_pos);
    return v;
}

std::vector<double> Scenario::stakes() const {
    std::vector<double> v;
    v.reserve(clusters.size());
    for (const ClusterSpec& c : clusters) v.push_back(c.stake);
    return v;
}

namespace {

void require(bool ok, const std::string& field, const std::string& why) {
    if (!ok) throw ConfigError("scenario validation failed: " + field + " " + why);
}

}  // namespace

void validate(const Scenario& s) {
    require(s.area.width > 0.0, "area.width", "must be > 0");
    require(s.area.height > 0.0, "area.height", "must be > 0");

    const RadioParams& r = s.radio;
    require(r.antennas > 0, "radio.antennas", "must be > 0");
    require(r.altitude > 0.0, "radio.altitude", "must be > 0");
    require(r.bandwidth_ag > 0.0, "radio.bandwidth_ag", "must be > 0");
    require(r.bandwidth_aa > 0.0, "radio.bandwidth_aa", "must be > 0");
    require(r.noise_power > 0.0, "radio.noise_power", "must be > 0");
    require(r.carrier_freq > 0.0, "radio.carrier_freq", "must be > 0");
    require(r.light_speed > 0.0, "radio.light_speed", "must be > 0");
    require(r.env_a > 0.0, "radio.env_a", "must be > 0");
    require(r.env_b > 0.0, "radio.env_b", "must be > 0");
    require(r.eta_nlos_db >= r.eta_los_db, "radio.eta_nlos_db", "must be >= eta_los_db");
    require(r.uav_tx_power > 0.0, "radio.uav_tx_power", "must be > 0");
    require(r.per_node_max_power > 0.0, "radio.per_node_max_power", "must be > 0");
    require(r.per_node_max_power <= r.per_cluster_max_power, "radio.per_node_max_power",
            "must be <= per_cluster_max_power");

    const EconomicParams& e = s.econ;
    require(e.fixed_reward >= 0.0, "econ.fixed_reward", "must be >= 0");
    require(e.fee_per_bit >= 0.0, "econ.fee_per_bit", "must be >= 0");
    require(e.data_size > 0.0, "econ.data_size", "must be > 0");
    require(e.self_cost >= 0.0, "econ.self_cost", "must be >= 0");
    require(e.self_cost < e.cross_cost, "econ.self_cost", "must be < cross_cost");
    require(e.stake_low >= 0.0, "econ.stake_low", "must be >= 0");
    require(e.stake_low <= e.stake_high, "econ.stake_low", "must be <= stake_high");
    require(e.compute_rate > 0.0, "econ.compute_rate", "must be > 0");
    require(e.mining_complexity > 0.0, "econ.mining_complexity", "must be > 0");
    require(e.confirm_time >= 0.0, "econ.confirm_time", "must be >= 0");

    require(!s.clusters.empty(), "clusters", "must be non-empty");
    for (size_t j = 0; j < s.clusters.size(); ++j) {
        const ClusterSpec& c = s.clusters[j];
        const std::string tag = "clusters[" + std::to_string(j) + "]";
        require(!c.nodes.empty(), tag + ".nodes", "must have >= 1 node");
        require(c.stake > 0.0, tag + ".stake", "must be > 0");
        require(s.area.contains(c.uav_pos), tag + ".uav_pos", "outside area");
        for (size_t i = 0; i < c.nodes.size(); ++i)
            require(s.area.contains(c.nodes[i]),
                    tag + ".nodes[" + std::to_string(i) + "]", "outside area");
    }
}

Scenario generate_scenario(const GenerationConfig& cfg, const RadioParams& radio,
                           const EconomicParams& econ, uint64_t seed) {
    if (cfg.num_clusters < 2)
        throw ConfigError("generate_scenario: num_clusters must be >= 2 "
                          "(the stake game needs at least one follower)");
    if (cfg.nodes_per_cluster < 1)
        throw ConfigError("generate_scenario: nodes_per_cluster must be >= 1");
    if (cfg.placement == NodePlacement::Clustered && cfg.cluster_radius <= 0.0)
        throw ConfigError("generate_scenario: cluster_radius must be > 0");

    Rng rng(seed);
    Scenario s;
    s.area = cfg.area;
    s.radio = radio;
    s.econ = econ;
    s.seed = seed;
    s.clusters.resize(cfg.num_clusters);

    auto uniform_point = [&]() -> Vec2 {
        return {rng.uniform(0.0, cfg.area.width), rng.uniform(0.0, cfg.area.height)};
    };

    for (ClusterSpec& c : s.clusters) {
        c.stake = rng.uniform(econ.stake_low, econ.stake_high);
        c.nodes.resize(cfg.nodes_per_cluster);
        if (cfg.placement == NodePlacement::Uniform) {
            for (Vec2& w : c.nodes) w = uniform_point();
        } else {
            const Vec2 center = uniform_point();
            for (Vec2& w : c.nodes) {
                // uniform in the disc, clipped to the area
                const double r = cfg.cluster_radius * std::sqrt(rng.uniform());
                const double a = rng.uniform(0.0, 2.0 * M_PI);
                w.x = std::clamp(center.x + r * std::cos(a), 0.0, cfg.area.width);
                w.y = std::clamp(center.y + r * std::sin(a), 0.0, cfg.area.height);
            }
        }
    }

    // UAV start positions: uniform with a minimum pairwise separation so the
    // air-to-air rate is finite from the outset.
    const double min_sep = 1.0;
    for (int j = 0; j < cfg.num_clusters; ++j) {
        Vec2 p;
        bool ok = false;
        for (int attempt = 0; attempt < 1000 && !ok; ++attempt) {
            p = uniform_point();
            ok = true;
            for (int k = 0; k < j; ++k)
                if (distance(p, s.clusters[k].uav_pos) < min_sep) ok = false;
        }
        if (!ok) throw ConfigError("generate_scenario: cannot place UAVs with 1 m separation");
        s.clusters[j].uav_pos = p;
    }

    validate(s);
    return s;
}

namespace {

void to_json(json& j, const Vec2& v) { j = json{{"x", v.x}, {"y", v.y}}; }

Vec2 vec2_from(const json& j) { return Vec2{j.at("x").get<double>(), j.at("y").get<double>()}; }

json radio_to_json(const RadioParams& r) {
    return json{
        {"antennas", r.antennas},
        {"altitude", r.altitude},
        {"bandwidth_ag", r.bandwidth_ag},
        {"bandwidth_aa", r.bandwidth_aa},
        {"noise_power", r.noise_power},
        {"carrier_freq", r.carrier_freq},
        {"light_speed", r.light_speed},
        {"env_a", r.env_a},
        {"env_b", r.env_b},
        {"eta_los_db", r.eta_los_db},
        {"eta_nlos_db", r.eta_nlos_db},
        {"uav_tx_power", r.uav_tx_power},
        {"per_node_max_power", r.per_node_max_power},
        {"per_cluster_max_power", r.per_cluster_max_power},
        {"squared_path_gain", r.squared_path_gain},
    };
}

json econ_to_json(const EconomicParams& e) {
    return json{
        {"fixed_reward", e.fixed_reward},
        {"fee_per_bit", e.fee_per_bit},
        {"data_size", e.data_size},
        {"self_cost", e.self_cost},
        {"cross_cost", e.cross_cost},
        {"stake_low", e.stake_low},
        {"stake_high", e.stake_high},
        {"compute_rate", e.compute_rate},
        {"mining_complexity", e.mining_complexity},
        {"confirm_time", e.confirm_time},
    };
}

template <typename T>
T field(const json& j, const char* name) {
    if (!j.contains(name))
        throw ParseError(std::string("scenario file: missing field '") + name + "'");
    try {
        return j.at(name).get<T>();
    } catch (const json::exception&) {
        throw ParseError(std::string("scenario file: field '") + name + "' has wrong type");
    }
}

}  // namespace

std::string scenario_to_json(const Scenario& s) {
    json j;
    j["area"] = {{"width", s.area.width}, {"height", s.area.height}};
    j["radio"] = radio_to_json(s.radio);
    j["econ"] = econ_to_json(s.econ);
    j["seed"] = s.seed;
    json clusters = json::array();
    for (const ClusterSpec& c : s.clusters) {
        json jc;
        jc["stake"] = c.stake;
        to_json(jc["uav_pos"], c.uav_pos);
        json nodes = json::array();
        for (const Vec2& w : c.nodes) {
            json jn;
            to_json(jn, w);
            nodes.push_back(jn);
        }
        jc["nodes"] = nodes;
        clusters.push_back(jc);
    }
    j["clusters"] = clusters;
    return j.dump(2);
}

Scenario scenario_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("scenario file: invalid JSON: ") + e.what());
    }

    Scenario s;
    const json ja = j.contains("area") ? j["area"]
                                       : throw ParseError("scenario file: missing field 'area'");
    s.area.width = field<double>(ja, "width");
    s.area.height = field<double>(ja, "height");

    if (!j.contains("radio")) throw ParseError("scenario file: missing field 'radio'");
    const json& jr = j["radio"];
    s.radio.antennas = field<int>(jr, "antennas");
    s.radio.altitude = field<double>(jr, "altitude");
    s.radio.bandwidth_ag = field<double>(jr, "bandwidth_ag");
    s.radio.bandwidth_aa = field<double>(jr, "bandwidth_aa");
    s.radio.noise_power = field<double>(jr, "noise_power");
    s.radio.carrier_freq = field<double>(jr, "carrier_freq");
    s.radio.light_speed = field<double>(jr, "light_speed");
    s.radio.env_a = field<double>(jr, "env_a");
    s.radio.env_b = field<double>(jr, "env_b");
    s.radio.eta_los_db = field<double>(jr, "eta_los_db");
    s.radio.eta_nlos_db = field<double>(jr, "eta_nlos_db");
    s.radio.uav_tx_power = field<double>(jr, "uav_tx_power");
    s.radio.per_node_max_power = field<double>(jr, "per_node_max_power");
    s.radio.per_cluster_max_power = field<double>(jr, "per_cluster_max_power");
    s.radio.squared_path_gain = field<bool>(jr, "squared_path_gain");

    if (!j.contains("econ")) throw ParseError("scenario file: missing field 'econ'");
    const json& je = j["econ"];
    s.econ.fixed_reward = field<double>(je, "fixed_reward");
    s.econ.fee_per_bit = field<double>(je, "fee_per_bit");
    s.econ.data_size = field<double>(je, "data_size");
    s.econ.self_cost = field<double>(je, "self_cost");
    s.econ.cross_cost = field<double>(je, "cross_cost");
    s.econ.stake_low = field<double>(je, "stake_low");
    s.econ.stake_high = field<double>(je, "stake_high");
    s.econ.compute_rate = field<double>(je, "compute_rate");
    s.econ.mining_complexity = field<double>(je, "mining_complexity");
    s.econ.confirm_time = field<double>(je, "confirm_time");

    s.seed = field<uint64_t>(j, "seed");

    if (!j.contains("clusters")) throw ParseError("scenario file: missing field 'clusters'");
    for (const json& jc : j["clusters"]) {
        ClusterSpec c;
        c.stake = field<double>(jc, "stake");
        if (!jc.contains("uav_pos")) throw ParseError("scenario file: missing field 'uav_pos'");
        c.uav_pos = vec2_from(jc["uav_pos"]);
        if (!jc.contains("nodes")) throw ParseError("scenario file: missing field 'nodes'");
        for (const json& jn : jc["nodes"]) c.nodes.push_back(vec2_from(jn));
        s.clusters.push_back(std::move(c));
    }

    validate(s);
    return s;
}

void save_scenario(const Scenario& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("save_scenario: cannot open " + path);
    out << scenario_to_json(s) << '\n';
    if (!out) throw Error("save_scenario: write failed for " + path);
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("load_scenario: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return scenario_from_json(buf.str());
}

}  // namespace bcuav
