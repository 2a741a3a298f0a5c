#include "bcuav/channel.hpp"

#include <cmath>
#include <complex>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "bcuav/errors.hpp"
#include "bcuav/rng.hpp"

namespace bcuav {

double air_ground_distance(Vec2 node, Vec2 uav, double altitude) {
    if (altitude <= 0.0) throw DomainError("air_ground_distance: altitude must be > 0");
    return std::sqrt((node - uav).norm2() + altitude * altitude);
}

double elevation_angle_deg(double altitude, double slant_distance) {
    return 180.0 / M_PI * std::asin(altitude / slant_distance);
}

double attenuation_db(double elevation_deg, const RadioParams& radio) {
    const double fspl = 20.0 * std::log10(4.0 * M_PI * radio.carrier_freq / radio.light_speed);
    const double sigmoid =
        1.0 + radio.env_a * std::exp(-radio.env_b * (elevation_deg - radio.env_a));
    return fspl + (radio.eta_los_db - radio.eta_nlos_db) / sigmoid + radio.eta_nlos_db;
}

double large_scale_gain(double distance, double attenuation_db, bool squared) {
    if (distance <= 0.0) throw DomainError("large_scale_gain: distance must be > 0");
    const double amplitude = std::pow(distance, -2.0) * std::pow(10.0, -attenuation_db / 10.0);
    return squared ? amplitude * amplitude : amplitude;
}

LinkGain link_gain(Vec2 node, Vec2 uav, const RadioParams& radio) {
    LinkGain g;
    g.distance = air_ground_distance(node, uav, radio.altitude);
    g.elevation_deg = elevation_angle_deg(radio.altitude, g.distance);
    g.attenuation_db = attenuation_db(g.elevation_deg, radio);
    g.gain = large_scale_gain(g.distance, g.attenuation_db, radio.squared_path_gain);
    return g;
}

std::vector<double> cluster_gains(const ClusterSpec& cluster, Vec2 uav_pos,
                                  const RadioParams& radio) {
    std::vector<double> gains;
    gains.reserve(cluster.nodes.size());
    for (const Vec2& w : cluster.nodes) gains.push_back(link_gain(w, uav_pos, radio).gain);
    return gains;
}

double air_to_air_rate(Vec2 a, Vec2 b, const RadioParams& radio) {
    const double d2 = (a - b).norm2();
    if (d2 == 0.0)
        throw DomainError("air_to_air_rate: coincident UAV positions (infinite gain)");
    const double snr =
        radio.antennas * radio.uav_tx_power / (d2 * radio.noise_power);
    return radio.bandwidth_aa * std::log2(1.0 + snr);
}

namespace {

// One fading draw: B log2 det(I_K + S diag(g p) S^H / sigma^2), with the
// K x K Gram matrix accumulated column by column. Hermitian PD, so the
// log-determinant comes from a Cholesky factor.
double rate_sample(std::span<const double> gains, std::span<const double> powers,
                   const RadioParams& radio, Rng& rng) {
    const int k = radio.antennas;
    const int n = static_cast<int>(gains.size());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(k, k);
    Eigen::VectorXcd s(k);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < n; ++i) {
        for (int r = 0; r < k; ++r)
            s(r) = std::complex<double>(rng.normal() * inv_sqrt2, rng.normal() * inv_sqrt2);
        const double w = gains[i] * powers[i] / radio.noise_power;
        if (w > 0.0) m.noalias() += w * (s * s.adjoint());
    }
    const Eigen::LLT<Eigen::MatrixXcd> llt(m);
    double log2det = 0.0;
    for (int r = 0; r < k; ++r) log2det += 2.0 * std::log2(std::abs(llt.matrixLLT()(r, r)));
    return radio.bandwidth_ag * log2det;
}

std::vector<double> draw_samples(std::span<const double> gains, std::span<const double> powers,
                                 const FadingConfig& fading, const RadioParams& radio,
                                 bool parallel) {
    if (fading.num_samples < 1)
        throw DomainError("monte_carlo_rate: num_samples must be >= 1");
    if (gains.size() != powers.size())
        throw DomainError("monte_carlo_rate: gains/powers size mismatch");
    std::vector<double> samples(fading.num_samples);
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < fading.num_samples; ++i) {
            Rng rng(Rng::mix(fading.seed, static_cast<uint64_t>(i)));
            samples[i] = rate_sample(gains, powers, radio, rng);
        }
    } else {
        for (int i = 0; i < fading.num_samples; ++i) {
            Rng rng(Rng::mix(fading.seed, static_cast<uint64_t>(i)));
            samples[i] = rate_sample(gains, powers, radio, rng);
        }
    }
    return samples;
}

double mean_of(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

}  // namespace

double monte_carlo_rate(std::span<const double> gains, std::span<const double> powers,
                        const FadingConfig& fading, const RadioParams& radio) {
    // per-sample seeding + serial reduction keeps the result independent of
    // the thread schedule
    return mean_of(draw_samples(gains, powers, fading, radio, true));
}

double monte_carlo_rate_serial(std::span<const double> gains, std::span<const double> powers,
                               const FadingConfig& fading, const RadioParams& radio) {
    return mean_of(draw_samples(gains, powers, fading, radio, false));
}

}  // namespace bcuav
