#pragma once

#include <span>
#include <utility>
#include <vector>

#include "varnet/data.hpp"
#include "varnet/network.hpp"

namespace varnet {

/// Monte-Carlo risk estimate. For the l2 risk, squared_value is the mean
/// squared gap and value its square root; for the l1 risk only value is
/// meaningful (and may dip slightly below zero from Monte-Carlo error).
struct RiskEstimate {
    double value = 0.0;
    double squared_value = 0.0;
    int test_size = 0;
    double std_error = 0.0;
};

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    int points_used = 0;
};

/// sqrt of mean (f(x) - f_*(x))^2 over the test inputs; the standard error
/// is that of the squared gap.
RiskEstimate risk_l2(const Network& model, const Teacher& teacher, const InputSample& test_inputs);

/// mean |f(x) - f_*(x) - eps| - mean |eps| over the test inputs and the
/// supplied fresh noise draws. Only symmetric noise kinds are accepted.
RiskEstimate risk_l1(const Network& model, const Teacher& teacher, const NoiseLaw& noise,
                     const InputSample& test_inputs, std::span<const double> noise_draws);

/// OLS of log(risk) on log(n). Requires >= 2 points, all positive.
SlopeFit fit_loglog_slope(std::span<const std::pair<double, double>> points);

}  // namespace varnet
