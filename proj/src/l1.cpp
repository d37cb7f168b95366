#include "varnet/l1.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace varnet {

double l1_norm(std::span<const double> w) {
    double s = 0.0;
    for (double x : w) {
        if (!std::isfinite(x)) throw std::invalid_argument("l1_norm: non-finite entry");
        s += std::abs(x);
    }
    return s;
}

void project_l1_ball_inplace(std::span<double> w, double radius) {
    if (!(radius >= 0.0)) throw std::invalid_argument("project_l1_ball: negative radius");
    if (l1_norm(w) <= radius) return;
    if (radius == 0.0) {
        std::fill(w.begin(), w.end(), 0.0);
        return;
    }

    std::vector<double> mag(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) mag[j] = std::abs(w[j]);
    std::stable_sort(mag.begin(), mag.end(), std::greater<double>());

    // Largest k with mag[k-1] > (cumsum_k - radius)/k fixes the threshold.
    double cumsum = 0.0;
    double theta = 0.0;
    for (std::size_t k = 0; k < mag.size(); ++k) {
        cumsum += mag[k];
        const double t = (cumsum - radius) / static_cast<double>(k + 1);
        if (mag[k] > t) {
            theta = t;
        } else {
            break;
        }
    }

    for (double& x : w) {
        const double shrunk = std::abs(x) - theta;
        x = shrunk > 0.0 ? std::copysign(shrunk, x) : 0.0;
    }
}

std::vector<double> project_l1_ball(std::span<const double> w, double radius) {
    std::vector<double> out(w.begin(), w.end());
    project_l1_ball_inplace(out, radius);
    return out;
}

}  // namespace varnet
