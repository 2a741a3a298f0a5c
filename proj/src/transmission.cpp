#include "bcuav/transmission.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bcuav/errors.hpp"

namespace bcuav {

double approx_rate(std::span<const double> gains, std::span<const double> powers, double omega,
                   const RadioParams& radio) {
    if (omega < 1.0) throw DomainError("approx_rate: omega must be >= 1");
    if (gains.size() != powers.size())
        throw DomainError("approx_rate: gains/powers size mismatch");
    const double k = radio.antennas;
    const double sigma2 = radio.noise_power;
    double sum = 0.0;
    for (size_t i = 0; i < gains.size(); ++i)
        sum += std::log2(1.0 + k * gains[i] * powers[i] / (sigma2 * omega));
    sum += k * std::log2(omega) - k * std::log2(std::exp(1.0)) * (1.0 - 1.0 / omega);
    return radio.bandwidth_ag * sum;
}

double solve_omega(std::span<const double> gains, std::span<const double> powers,
                   const RadioParams& radio, double tol, int max_iter) {
    if (tol <= 0.0) throw DomainError("solve_omega: tol must be > 0");
    const double k = radio.antennas;
    const double sigma2 = radio.noise_power;
    auto rhs = [&](double w) {
        double s = 1.0;
        for (size_t i = 0; i < gains.size(); ++i) {
            const double gp = gains[i] * powers[i];
            if (gp > 0.0) s += gp / (sigma2 + k * gp / w);
        }
        return s;
    };

    double snr_sum = 0.0;
    for (size_t i = 0; i < gains.size(); ++i) snr_sum += gains[i] * powers[i] / sigma2;
    if (snr_sum == 0.0) return 1.0;

    // The plain update w <- rhs(w) stalls when many strong links make the map
    // slope approach 1, so bracket the unique root of w - rhs(w) instead:
    // negative at w = 1, nonnegative at 1 + total SNR, and w * d/dw of the
    // rate expression is strictly increasing in between.
    double lo = 1.0;
    double hi = 1.0 + snr_sum;
    double w = hi;
    double residual = std::abs(rhs(w) - w);
    for (int it = 0; it < max_iter; ++it) {
        w = 0.5 * (lo + hi);
        const double r = rhs(w);
        residual = std::abs(r - w);
        if (residual <= tol * std::max(1.0, w)) return w;
        (w < r ? lo : hi) = w;
    }
    throw SolverError("solve_omega: no convergence after " + std::to_string(max_iter) +
                          " iterations (residual " + std::to_string(residual) + ")",
                      residual);
}

std::vector<double> waterfill(std::span<const double> gains, double omega, double p_node,
                              double p_cluster, const RadioParams& radio, double* multiplier,
                              int bisect_iter) {
    if (p_cluster <= 0.0) throw DomainError("waterfill: p_cluster must be > 0");
    if (p_node <= 0.0) throw DomainError("waterfill: p_node must be > 0");
    const size_t n = gains.size();
    const double k = radio.antennas;
    const double sigma2 = radio.noise_power;

    // inverse-gain floors; zero-gain nodes never receive power
    std::vector<double> floor(n, std::numeric_limits<double>::infinity());
    double max_floor = 0.0;
    bool any_active = false;
    for (size_t i = 0; i < n; ++i) {
        if (gains[i] > 0.0) {
            floor[i] = omega * sigma2 / (k * gains[i]);
            max_floor = std::max(max_floor, floor[i]);
            any_active = true;
        }
    }
    std::vector<double> p(n, 0.0);
    if (!any_active) {
        if (multiplier) *multiplier = 0.0;
        return p;
    }

    auto fill = [&](double mu) {
        double total = 0.0;
        for (size_t i = 0; i < n; ++i) {
            p[i] = std::isinf(floor[i]) ? 0.0 : std::clamp(mu - floor[i], 0.0, p_node);
            total += p[i];
        }
        return total;
    };

    double hi = max_floor + p_node;
    if (fill(hi) <= p_cluster) {
        // sum constraint slack: every active node at its per-node cap
        if (multiplier) *multiplier = hi;
        return p;
    }
    double lo = 0.0;
    for (int it = 0; it < bisect_iter; ++it) {
        const double mid = 0.5 * (lo + hi);
        (fill(mid) > p_cluster ? hi : lo) = mid;
    }
    fill(lo);
    // place the residual exactly on the sum constraint
    double total = 0.0;
    for (double v : p) total += v;
    if (total < p_cluster) {
        double deficit = p_cluster - total;
        for (size_t i = 0; i < n && deficit > 0.0; ++i) {
            if (std::isinf(floor[i])) continue;
            const double room = p_node - p[i];
            const double add = std::min(room, deficit);
            p[i] += add;
            deficit -= add;
        }
    }
    if (multiplier) *multiplier = lo;
    return p;
}

PowerSolution optimize_transmission(std::span<const double> gains, const RadioParams& radio,
                                    const TransmissionOptions& opts,
                                    std::vector<double>* rate_history) {
    PowerSolution best;
    best.powers.assign(gains.size(), 0.0);
    best.omega = 1.0;
    best.rate = 0.0;

    double omega = 1.0;
    double prev_rate = -std::numeric_limits<double>::infinity();
    for (int it = 1; it <= opts.max_outer; ++it) {
        double mu = 0.0;
        std::vector<double> p = waterfill(gains, omega, radio.per_node_max_power,
                                          radio.per_cluster_max_power, radio, &mu,
                                          opts.bisect_iter);
        omega = solve_omega(gains, p, radio, opts.omega_tol, opts.omega_max_iter);
        const double rate = approx_rate(gains, p, omega, radio);
        if (rate < best.rate) break;  // probe rejected; keep the best iterate
        if (rate_history) rate_history->push_back(rate);
        best.powers = std::move(p);
        best.omega = omega;
        best.rate = rate;
        best.multiplier = mu;
        best.iterations = it;
        if (std::abs(rate - prev_rate) <= opts.rate_tol * std::max(1.0, std::abs(rate))) break;
        prev_rate = rate;
    }
    return best;
}

}  // namespace bcuav
