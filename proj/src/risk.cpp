#include "varnet/risk.hpp"

#include <cmath>
#include <stdexcept>

namespace varnet {

namespace {

/// Mean and standard error of the mean (sample variance, n-1 denominator).
std::pair<double, double> mean_and_se(std::span<const double> v) {
    const double n = static_cast<double>(v.size());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    if (v.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

}  // namespace

RiskEstimate risk_l2(const Network& model, const Teacher& teacher, const InputSample& test_inputs) {
    if (test_inputs.n < 1) throw std::invalid_argument("risk_l2: empty test set");
    if (test_inputs.d != model.input_dim() || test_inputs.d != teacher.input_dim()) {
        throw std::invalid_argument("risk_l2: dimension mismatch");
    }

    Workspace ws;
    std::vector<double> sq(test_inputs.n);
    for (int i = 0; i < test_inputs.n; ++i) {
        const auto x = test_inputs.row(i);
        const double gap = forward(model, x, ws) - teacher.eval(x);
        sq[i] = gap * gap;
    }
    const auto [mean, se] = mean_and_se(sq);

    RiskEstimate est;
    est.squared_value = mean;
    est.value = std::sqrt(std::max(0.0, mean));
    est.test_size = test_inputs.n;
    est.std_error = se;
    return est;
}

RiskEstimate risk_l1(const Network& model, const Teacher& teacher, const NoiseLaw& noise,
                     const InputSample& test_inputs, std::span<const double> noise_draws) {
    if (test_inputs.n < 1) throw std::invalid_argument("risk_l1: empty test set");
    if (test_inputs.d != model.input_dim() || test_inputs.d != teacher.input_dim()) {
        throw std::invalid_argument("risk_l1: dimension mismatch");
    }
    if (noise_draws.size() != static_cast<std::size_t>(test_inputs.n)) {
        throw std::invalid_argument("risk_l1: need one noise draw per test input");
    }
    if (!noise.symmetric()) {
        throw std::invalid_argument("risk_l1: noise must be symmetric");
    }

    Workspace ws;
    std::vector<double> terms(test_inputs.n);
    for (int i = 0; i < test_inputs.n; ++i) {
        const auto x = test_inputs.row(i);
        const double gap = forward(model, x, ws) - teacher.eval(x);
        terms[i] = std::abs(gap - noise_draws[i]) - std::abs(noise_draws[i]);
    }
    const auto [mean, se] = mean_and_se(terms);

    RiskEstimate est;
    est.value = mean;
    est.squared_value = mean * mean;
    est.test_size = test_inputs.n;
    est.std_error = se;
    return est;
}

SlopeFit fit_loglog_slope(std::span<const std::pair<double, double>> points) {
    if (points.size() < 2) throw std::invalid_argument("fit_loglog_slope: need at least 2 points");

    std::vector<double> lx(points.size()), ly(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto [n, risk] = points[i];
        if (!(n > 0.0)) throw std::invalid_argument("fit_loglog_slope: n must be positive");
        if (!(risk > 0.0)) throw std::invalid_argument("fit_loglog_slope: risk must be positive");
        lx[i] = std::log(n);
        ly[i] = std::log(risk);
    }

    const double m = static_cast<double>(points.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= m;
    my /= m;

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_loglog_slope: all n equal");

    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.points_used = static_cast<int>(points.size());
    if (syy == 0.0) {
        fit.r_squared = 1.0;  // constant risks: the zero-slope line is exact
    } else {
        double ss_res = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
            ss_res += r * r;
        }
        fit.r_squared = 1.0 - ss_res / syy;
    }
    return fit;
}

}  // namespace varnet
