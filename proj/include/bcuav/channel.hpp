#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bcuav/geometry.hpp"
#include "bcuav/scenario.hpp"

namespace bcuav {

// Geometry and large-scale gain of one node -> UAV uplink.
struct LinkGain {
    double distance = 0.0;       // m, slant range
    double elevation_deg = 0.0;  // degrees
    double attenuation_db = 0.0;
    double gain = 0.0;           // dimensionless power gain
};

struct FadingConfig {
    int num_samples = 10000;
    uint64_t seed = 0;
};

// sqrt(|w - v|^2 + H^2); always >= H.
double air_ground_distance(Vec2 node, Vec2 uav, double altitude);

double elevation_angle_deg(double altitude, double slant_distance);

// Excess path loss blending LoS and NLoS components through the
// elevation-angle sigmoid:
//   delta = 20 log10(4 pi f / c) + (eta_los - eta_nlos) / (1 + a exp(-b (phi - a))) + eta_nlos
// Monotone decreasing in phi when eta_los < eta_nlos.
double attenuation_db(double elevation_deg, const RadioParams& radio);

// Power gain from slant distance and excess attenuation. With
// squared = true the amplitude expression d^-2 10^(-delta/10) is squared
// (effective path-loss exponent 4); squared = false uses it directly.
double large_scale_gain(double distance, double attenuation_db, bool squared = true);

LinkGain link_gain(Vec2 node, Vec2 uav, const RadioParams& radio);

// Gains of every node in the cluster towards the given UAV position.
std::vector<double> cluster_gains(const ClusterSpec& cluster, Vec2 uav_pos,
                                  const RadioParams& radio);

// LoS air-to-air link rate B log2(1 + K P / (d^2 sigma^2)), bit/s.
// Throws DomainError when the positions coincide.
double air_to_air_rate(Vec2 a, Vec2 b, const RadioParams& radio);

// Ergodic uplink rate estimated by Monte-Carlo over i.i.d. unit-variance
// circularly-symmetric complex Gaussian fading:
//   mean of B log2 det(I_K + S diag(g p) S^H / sigma^2).
// Serves as the validation oracle for the deterministic rate approximation.
// The _serial variant is the reference implementation; monte_carlo_rate
// evaluates samples in parallel and produces bit-identical results.
double monte_carlo_rate(std::span<const double> gains, std::span<const double> powers,
                        const FadingConfig& fading, const RadioParams& radio);
double monte_carlo_rate_serial(std::span<const double> gains, std::span<const double> powers,
                               const FadingConfig& fading, const RadioParams& radio);

}  // namespace bcuav
