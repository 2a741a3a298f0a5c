#pragma once

#include <span>
#include <vector>

#include "bcuav/scenario.hpp"

namespace bcuav {

// Optimized uplink for one cluster.
struct PowerSolution {
    std::vector<double> powers;  // W, per node
    double omega = 1.0;          // auxiliary variable, >= 1
    double rate = 0.0;           // bit/s
    double multiplier = 0.0;     // W, water level
    int iterations = 0;          // outer alternation count
};

struct TransmissionOptions {
    double omega_tol = 1e-9;  // relative residual for the fixed point
    int omega_max_iter = 500;
    double rate_tol = 1e-6;   // relative rate change stopping the alternation
    int max_outer = 1000;
    int bisect_iter = 200;
};

// Deterministic-equivalent uplink rate, bit/s:
//   B [ sum_i log2(1 + K g_i p_i / (sigma^2 w)) + K log2 w - K log2(e) (1 - 1/w) ]
// Throws DomainError for omega < 1.
double approx_rate(std::span<const double> gains, std::span<const double> powers, double omega,
                   const RadioParams& radio);

// Fixed point of w = 1 + sum_i g_i p_i / (sigma^2 + K g_i p_i / w), iterated
// from w = 1. Returns a value whose residual is below tol (relative); throws
// SolverError with the last residual on non-convergence.
double solve_omega(std::span<const double> gains, std::span<const double> powers,
                   const RadioParams& radio, double tol = 1e-9, int max_iter = 500);

// Water-filling p_i = clamp(mu - w sigma^2 / (K g_i), 0, p_node) with mu
// bisected so that sum p = p_cluster when that constraint binds; otherwise
// every node sits at p_node. Zero-gain nodes receive zero power.
std::vector<double> waterfill(std::span<const double> gains, double omega, double p_node,
                              double p_cluster, const RadioParams& radio,
                              double* multiplier = nullptr, int bisect_iter = 200);

// Alternates waterfill and the omega fixed point until the rate change drops
// below tol (relative). The recorded rate sequence is nondecreasing; if a step
// fails to improve, the best iterate seen is returned. rate_history, when
// given, receives the rate after every outer iteration.
PowerSolution optimize_transmission(std::span<const double> gains, const RadioParams& radio,
                                    const TransmissionOptions& opts = {},
                                    std::vector<double>* rate_history = nullptr);

}  // namespace bcuav
