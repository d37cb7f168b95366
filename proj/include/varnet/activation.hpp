#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace varnet {

/// Available activations. Only the logistic function ships: it is bounded
/// with bounded derivatives of every order, which the rest of the library
/// relies on (rectifiers do not qualify).
enum class ActivationKind { Logistic };

inline std::string to_string(ActivationKind k) {
    switch (k) {
        case ActivationKind::Logistic: return "logistic";
    }
    throw std::invalid_argument("unknown activation kind");
}

inline ActivationKind activation_from_string(const std::string& s) {
    if (s == "logistic") return ActivationKind::Logistic;
    throw std::invalid_argument("unknown activation: " + s);
}

/// logistic(z) = 1 / (1 + exp(-z)), evaluated in the numerically stable
/// branch so that large |z| saturates cleanly instead of overflowing.
inline double logistic(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

/// First derivative s(1-s); maximum 1/4 at z = 0.
inline double logistic_d1(double z) {
    const double s = logistic(z);
    return s * (1.0 - s);
}

/// Second derivative s(1-s)(1-2s); |value| peaks at 1/(6*sqrt(3)).
inline double logistic_d2(double z) {
    const double s = logistic(z);
    return s * (1.0 - s) * (1.0 - 2.0 * s);
}

inline constexpr double kLogisticSup1 = 0.25;                  // sup |sigma'|
inline constexpr double kLogisticSup2 = 0.09622504486493763;   // 1/(6*sqrt(3))

}  // namespace varnet
