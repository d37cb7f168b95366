#include "varnet/probe.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "varnet/l1.hpp"
#include "varnet/rng.hpp"

namespace varnet {

void RademacherConfig::validate() const {
    if (!(V > 0.0)) throw std::invalid_argument("rademacher: V must be positive");
    if (d < 1 || n < 1 || sign_draws < 1 || starts < 1 || ascent_steps < 1) {
        throw std::invalid_argument("rademacher: sizes must be positive");
    }
    if (!(ascent_lr > 0.0)) throw std::invalid_argument("rademacher: ascent_lr must be positive");
}

namespace {

/// Objective F(w) = n^-1 sum_i xi_i sigma(w . z_i) and its gradient.
struct Correlation {
    const std::vector<double>& z;  // n x d
    const std::vector<double>& xi;
    int n;
    int d;

    double value_and_grad(const std::vector<double>& w, std::vector<double>& grad) const {
        std::fill(grad.begin(), grad.end(), 0.0);
        double f = 0.0;
        for (int i = 0; i < n; ++i) {
            const double* zi = z.data() + static_cast<std::size_t>(i) * d;
            double dot = 0.0;
            for (int j = 0; j < d; ++j) dot += w[j] * zi[j];
            const double s = logistic(dot);
            f += xi[i] * s;
            const double g = xi[i] * s * (1.0 - s);
            for (int j = 0; j < d; ++j) grad[j] += g * zi[j];
        }
        const double inv = 1.0 / n;
        for (int j = 0; j < d; ++j) grad[j] *= inv;
        return f * inv;
    }
};

double ascend(const Correlation& obj, std::vector<double> w, double V, int steps, double lr,
              std::vector<double>& grad) {
    double dir = 0.0;
    double best = 0.0;
    for (int t = 0; t < steps; ++t) {
        const double f = obj.value_and_grad(w, grad);
        if (std::abs(f) > best) best = std::abs(f);
        if (dir == 0.0) dir = f >= 0.0 ? 1.0 : -1.0;
        for (int j = 0; j < obj.d; ++j) w[j] += lr * dir * grad[j];
        project_l1_ball_inplace(w, V);
    }
    std::fill(grad.begin(), grad.end(), 0.0);
    const double f = obj.value_and_grad(w, grad);
    return std::max(best, std::abs(f));
}

}  // namespace

double sup_correlation_estimate(std::span<const double> z, std::span<const double> xi, int d,
                                double V, int starts, int ascent_steps, double ascent_lr,
                                std::uint64_t start_seed) {
    const int n = static_cast<int>(xi.size());
    if (n < 1 || d < 1 || z.size() != static_cast<std::size_t>(n) * d) {
        throw std::invalid_argument("sup_correlation_estimate: inconsistent shapes");
    }
    const std::vector<double> zv(z.begin(), z.end());
    const std::vector<double> xv(xi.begin(), xi.end());
    const Correlation obj{zv, xv, n, d};

    std::vector<double> w(d), grad(d);

    // Start at the center: its value is a hard floor for the estimate.
    std::fill(w.begin(), w.end(), 0.0);
    double best = ascend(obj, w, V, ascent_steps, ascent_lr, grad);

    // Scaled coordinate vertices, a deterministic boundary probe.
    for (int j = 0; j < std::min(d, 5); ++j) {
        for (double s : {1.0, -1.0}) {
            std::fill(w.begin(), w.end(), 0.0);
            w[j] = s * V;
            best = std::max(best, ascend(obj, w, V, ascent_steps, ascent_lr, grad));
        }
    }

    Rng start_rng(start_seed);
    for (int r = 0; r < starts; ++r) {
        double norm = 0.0;
        for (double& v : w) {
            v = -std::log(start_rng.uniform01_open());
            norm += v;
        }
        const double radius = V * start_rng.uniform01();
        for (double& v : w) v = start_rng.sign() * (v / norm) * radius;
        best = std::max(best, ascend(obj, w, V, ascent_steps, ascent_lr, grad));
    }
    return best;
}

double rademacher_estimate(const RademacherConfig& cfg) {
    cfg.validate();
    const int n = cfg.n;
    const int d = cfg.d;

    // Points, signs and start directions are all drawn independently of V.
    Rng data_rng(derive_seed(cfg.seed, "rademacher-points", n, d));
    std::vector<double> z(static_cast<std::size_t>(n) * d);
    for (double& v : z) v = data_rng.uniform(-1.0, 1.0);

    Rng sign_rng(derive_seed(cfg.seed, "rademacher-signs", n, d));

    std::vector<double> xi(n);
    double total = 0.0;
    for (int t = 0; t < cfg.sign_draws; ++t) {
        for (double& s : xi) s = sign_rng.sign();
        total += sup_correlation_estimate(z, xi, d, cfg.V, cfg.starts, cfg.ascent_steps,
                                          cfg.ascent_lr,
                                          derive_seed(cfg.seed, "rademacher-starts", n, t));
    }
    return total / cfg.sign_draws;
}

double first_derivative_envelope(int depth, double V) {
    if (depth < 1) throw std::invalid_argument("envelope: depth must be >= 1");
    return std::pow(kLogisticSup1, depth - 1) * std::pow(V, depth);
}

double second_derivative_envelope(int depth, double V) {
    if (depth < 1) throw std::invalid_argument("envelope: depth must be >= 1");
    if (depth == 1) return 0.0;  // the output layer is linear in x
    double d1 = 1.0, d2 = 0.0;
    for (int l = 1; l < depth; ++l) {
        const double lin1 = V * d1;  // bound on the first derivative of w . y~
        d2 = kLogisticSup2 * lin1 * lin1 + kLogisticSup1 * V * d2;
        d1 = kLogisticSup1 * lin1;
    }
    return V * d2;
}

DerivativeBoundReport derivative_bound_check(const Network& net, const InputSample& grid,
                                             int max_order, double box_halfwidth) {
    net.validate();
    if (max_order < 1 || max_order > 2) {
        throw std::invalid_argument("derivative_bound_check: max_order must be 1 or 2");
    }
    if (grid.d != net.input_dim()) {
        throw std::invalid_argument("derivative_bound_check: grid dimension mismatch");
    }
    for (double v : grid.inputs) {
        // 1e-9 slack: accumulated grids land a few ulps past the edge.
        if (std::abs(v) > box_halfwidth + 1e-9) {
            throw std::invalid_argument("derivative_bound_check: grid point outside the box");
        }
    }

    const double V = variation(net).max_norm;
    const int L = net.depth();
    const int d = grid.d;
    const double h1 = 1e-5;
    const double h2 = 1e-4;

    DerivativeBoundReport rep;
    rep.points = grid.n;
    rep.max_order = max_order;
    rep.grad_envelope = first_derivative_envelope(L, V);
    rep.second_envelope = second_derivative_envelope(L, V);

    Workspace ws;
    std::vector<double> x(d);
    for (int p = 0; p < grid.n; ++p) {
        const auto row = grid.row(p);
        std::copy(row.begin(), row.end(), x.begin());

        for (int j = 0; j < d; ++j) {
            const double saved = x[j];
            x[j] = saved + h1;
            const double up = forward(net, x, ws);
            x[j] = saved - h1;
            const double down = forward(net, x, ws);
            x[j] = saved;
            rep.max_grad = std::max(rep.max_grad, std::abs((up - down) / (2.0 * h1)));
        }

        if (max_order >= 2) {
            const double f0 = forward(net, x, ws);
            for (int j = 0; j < d; ++j) {
                for (int k = j; k < d; ++k) {
                    double val;
                    if (j == k) {
                        const double saved = x[j];
                        x[j] = saved + h2;
                        const double up = forward(net, x, ws);
                        x[j] = saved - h2;
                        const double down = forward(net, x, ws);
                        x[j] = saved;
                        val = (up - 2.0 * f0 + down) / (h2 * h2);
                    } else {
                        const double sj = x[j], sk = x[k];
                        x[j] = sj + h2; x[k] = sk + h2;
                        const double pp = forward(net, x, ws);
                        x[k] = sk - h2;
                        const double pm = forward(net, x, ws);
                        x[j] = sj - h2;
                        const double mm = forward(net, x, ws);
                        x[k] = sk + h2;
                        const double mp = forward(net, x, ws);
                        x[j] = sj; x[k] = sk;
                        val = (pp - pm - mp + mm) / (4.0 * h2 * h2);
                    }
                    rep.max_second = std::max(rep.max_second, std::abs(val));
                }
            }
        }
    }

    rep.first_ok = rep.max_grad <= rep.grad_envelope + rep.fd_noise_tolerance;
    rep.second_ok = max_order < 2 ||
                    rep.max_second <= rep.second_envelope + 1e-2 * std::max(1.0, rep.second_envelope);
    return rep;
}

void CoveringConfig::validate() const {
    if (d != 1 || widths != std::vector<int>{1, 1, 1}) {
        throw std::invalid_argument("covering_estimate: only the d=1 single-hidden-neuron toy scale is supported");
    }
    if (!(V > 0.0)) throw std::invalid_argument("covering_estimate: V must be positive");
    if (!(eps > 0.0)) throw std::invalid_argument("covering_estimate: eps must be positive");
    if (!(weight_grid_step > 0.0)) throw std::invalid_argument("covering_estimate: step must be positive");
    if (x_grid.empty()) throw std::invalid_argument("covering_estimate: empty x grid");
}

int covering_estimate(const CoveringConfig& cfg) {
    cfg.validate();

    // Feasible (weight, bias) rows on the grid: |w| + |b| <= V.
    std::vector<std::pair<double, double>> rows;
    const int steps = static_cast<int>(std::floor(2.0 * cfg.V / cfg.weight_grid_step + 1e-9));
    for (int a = 0; a <= steps; ++a) {
        const double w = -cfg.V + a * cfg.weight_grid_step;
        for (int b = 0; b <= steps; ++b) {
            const double bias = -cfg.V + b * cfg.weight_grid_step;
            if (std::abs(w) + std::abs(bias) <= cfg.V + 1e-12) rows.emplace_back(w, bias);
        }
    }

    // f(x) = u sigma(w x + b) + 0.5 c over the x grid, for every grid net.
    const std::size_t g = cfg.x_grid.size();
    std::vector<std::vector<double>> table;
    table.reserve(rows.size() * rows.size());
    for (const auto& [w, b] : rows) {
        std::vector<double> hidden(g);
        for (std::size_t i = 0; i < g; ++i) hidden[i] = logistic(w * cfg.x_grid[i] + b);
        for (const auto& [u, c] : rows) {
            std::vector<double> f(g);
            for (std::size_t i = 0; i < g; ++i) f[i] = u * hidden[i] + 0.5 * c;
            table.push_back(std::move(f));
        }
    }

    std::vector<const std::vector<double>*> centers;
    for (const auto& f : table) {
        bool covered = false;
        for (const auto* c : centers) {
            double dist = 0.0;
            for (std::size_t i = 0; i < g; ++i) dist = std::max(dist, std::abs(f[i] - (*c)[i]));
            if (dist <= cfg.eps) {
                covered = true;
                break;
            }
        }
        if (!covered) centers.push_back(&f);
    }
    return static_cast<int>(centers.size());
}

std::vector<std::pair<double, int>> covering_curve(const CoveringConfig& base,
                                                   std::span<const double> eps_list) {
    std::vector<std::pair<double, int>> out;
    out.reserve(eps_list.size());
    for (double eps : eps_list) {
        CoveringConfig cfg = base;
        cfg.eps = eps;
        out.emplace_back(eps, covering_estimate(cfg));
    }
    return out;
}

}  // namespace varnet
