#pragma once

#include <span>
#include <vector>

namespace varnet {

/// Sum of absolute values. Throws std::invalid_argument on non-finite input.
double l1_norm(std::span<const double> w);

/// Euclidean projection of w onto the l1 ball of the given radius, in place.
///
/// Sort-based soft thresholding: if ||w||_1 <= radius the vector is returned
/// unchanged (the boundary case is a no-op), otherwise the unique threshold
/// theta >= 0 with sum_j max(|w_j| - theta, 0) = radius is located from the
/// sorted magnitudes and applied as sign(w_j) * max(|w_j| - theta, 0).
void project_l1_ball_inplace(std::span<double> w, double radius);

/// Copying variant of project_l1_ball_inplace.
std::vector<double> project_l1_ball(std::span<const double> w, double radius);

}  // namespace varnet
