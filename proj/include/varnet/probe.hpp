#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "varnet/data.hpp"
#include "varnet/network.hpp"

namespace varnet {

/// Setup for the single-layer Rademacher estimate: n sample points in the
/// unit box, m sign vectors, and a multi-start projected-ascent budget for
/// the inner maximization over the l1 ball of radius V.
struct RademacherConfig {
    double V = 1.0;
    int d = 1;
    int n = 1;
    int sign_draws = 32;    // m
    int starts = 32;        // random restarts per sign vector
    int ascent_steps = 200;
    double ascent_lr = 0.1;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Best |n^-1 sum_i xi_i sigma(w . z_i)| over ||w||_1 <= V found by
/// multi-start projected gradient ascent for one fixed sign vector xi.
/// z is n x d row-major. The start set contains w = 0, the scaled
/// coordinate vertices +-V e_j, and `starts` random points whose
/// directions come from start_seed independently of V.
double sup_correlation_estimate(std::span<const double> z, std::span<const double> xi, int d,
                                double V, int starts, int ascent_steps, double ascent_lr,
                                std::uint64_t start_seed);

/// Mean over sign vectors of the best |n^-1 sum_i xi_i sigma(w . z_i)|
/// found over ||w||_1 <= V. The inner problem is non-convex, so this is a
/// lower estimate of the true expected supremum.
///
/// All randomness (points, signs, start directions) is derived
/// independently of V, so estimates at growing V on a fixed seed explore
/// nested feasible sets with identical draws.
double rademacher_estimate(const RademacherConfig& cfg);

/// Explicit-constant envelope for |df/dx_j|: (1/4)^(L-1) V^L.
double first_derivative_envelope(int depth, double V);

/// Explicit-constant envelope for |d^2 f / dx_j dx_k|, from the layerwise
/// recursion D1(l) = s1 V D1(l-1), D2(l) = s2 (V D1(l-1))^2 + s1 V D2(l-1)
/// with s1 = 1/4, s2 = 1/(6 sqrt 3), D1(0) = 1, D2(0) = 0, and a final
/// linear layer contributing V D2(L-1). Closed forms at small depth:
/// 0 for L = 1, s2 V^3 for L = 2, s2 (V^5/16 + V^4/4) for L = 3.
double second_derivative_envelope(int depth, double V);

struct DerivativeBoundReport {
    int points = 0;
    int max_order = 1;
    double max_grad = 0.0;         // measured max |df/dx_j| over the grid
    double grad_envelope = 0.0;
    double max_second = 0.0;       // measured max |d^2 f|, when max_order >= 2
    double second_envelope = 0.0;
    double fd_noise_tolerance = 1e-6;
    bool first_ok = true;
    bool second_ok = true;
};

/// Finite-difference partial derivatives of forward() up to max_order
/// (1 or 2) on the grid, checked against the explicit-constant envelopes.
/// Every grid point must lie in the box ||x||_inf <= box_halfwidth.
DerivativeBoundReport derivative_bound_check(const Network& net, const InputSample& grid,
                                             int max_order, double box_halfwidth = 1.0);

/// Toy-scale empirical covering probe; only d = 1 with a single hidden
/// neuron is supported.
struct CoveringConfig {
    double V = 1.0;
    int d = 1;
    std::vector<int> widths{1, 1, 1};
    double eps = 0.1;
    double weight_grid_step = 0.25;
    std::vector<double> x_grid;

    void validate() const;
};

/// Greedy L_inf cover size of the weight-grid discretization of the class,
/// measured on the supplied x grid.
int covering_estimate(const CoveringConfig& cfg);

/// (eps, cover size) pairs over an eps list, ready for a log-log plot.
std::vector<std::pair<double, int>> covering_curve(const CoveringConfig& base,
                                                   std::span<const double> eps_list);

}  // namespace varnet
