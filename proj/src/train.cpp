#include "varnet/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "varnet/l1.hpp"

namespace varnet {

std::string to_string(LossKind k) {
    return k == LossKind::SquareL2 ? "square_l2" : "absolute_l1";
}

LossKind loss_kind_from_string(const std::string& s) {
    if (s == "square_l2") return LossKind::SquareL2;
    if (s == "absolute_l1") return LossKind::AbsoluteL1;
    throw std::invalid_argument("unknown loss kind: " + s);
}

void ConstraintMode::validate() const {
    if (kind == Kind::Projection) {
        if (!(radius > 0.0)) throw std::invalid_argument("constraint: projection radius must be positive");
    } else {
        if (!(lambda >= 0.0)) throw std::invalid_argument("constraint: penalty lambda must be non-negative");
    }
}

void TrainConfig::validate() const {
    mode.validate();
    if (epochs < 1) throw std::invalid_argument("train: epochs must be >= 1");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("train: learning rate must be positive");
    if (batch_size < 0) throw std::invalid_argument("train: batch size must be >= 1 (0 selects the default)");
}

std::string TrainTrace::to_csv() const {
    std::ostringstream out;
    out.precision(17);
    out << "epoch,loss,variation\n";
    for (std::size_t e = 0; e < epoch_loss.size(); ++e) {
        out << (e + 1) << "," << epoch_loss[e] << "," << epoch_variation[e] << "\n";
    }
    return out.str();
}

GradStack zero_like(const Network& net) {
    GradStack g;
    g.reserve(net.weights.size());
    for (const auto& m : net.weights) g.emplace_back(m.rows(), m.cols());
    return g;
}

namespace {

inline double sign0(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

inline double dot(std::span<const double> w, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * y[j];
    return s;
}

struct BackpropScratch {
    Workspace ws;
    std::vector<std::vector<double>> delta;  // delta[l]: hidden layer l+1, raw width
};

void check_batch(const Network& net, const Batch& batch) {
    if (batch.size() < 1) throw std::invalid_argument("gradient: empty batch");
    if (batch.dim != net.input_dim()) throw std::invalid_argument("gradient: input dimension mismatch");
    if (batch.inputs.size() != static_cast<std::size_t>(batch.size()) * batch.dim) {
        throw std::invalid_argument("gradient: inconsistent batch shape");
    }
}

void zero(GradStack& g) {
    for (auto& m : g) std::fill(m.flat().begin(), m.flat().end(), 0.0);
}

/// Accumulates the batch gradient into `grad` (raw sums, caller scales) and
/// returns the summed loss over the batch.
double accumulate_gradient(const Network& net, const Batch& batch, LossKind loss,
                           GradStack& grad, BackpropScratch& scr) {
    const int L = net.depth();
    scr.delta.resize(L > 0 ? L - 1 : 0);

    double loss_sum = 0.0;
    for (int s = 0; s < batch.size(); ++s) {
        const double f = forward(net, batch.input_row(s), scr.ws);
        const double resid = f - batch.targets[s];

        double g_out;
        if (loss == LossKind::SquareL2) {
            loss_sum += resid * resid;
            g_out = 2.0 * resid;
        } else {
            loss_sum += std::abs(resid);
            g_out = sign0(resid);
        }
        if (g_out == 0.0) continue;

        // Output row.
        {
            auto gr = grad[L - 1].row(0);
            const auto& a = scr.ws.acts[L - 1];
            for (std::size_t j = 0; j < gr.size(); ++j) gr[j] += g_out * a[j];
        }

        if (L == 1) continue;

        // Seed deltas at the last hidden layer.
        {
            auto& d = scr.delta[L - 2];
            const auto wL = net.weights[L - 1].row(0);
            const auto& z = scr.ws.pre[L - 2];
            d.resize(z.size());
            for (std::size_t i = 0; i < z.size(); ++i) {
                d[i] = g_out * wL[i] * logistic_d1(z[i]);
            }
        }

        for (int l = L - 2; l >= 0; --l) {
            const auto& d = scr.delta[l];
            const auto& a = scr.ws.acts[l];
            Matrix& gm = grad[l];
            for (std::size_t i = 0; i < d.size(); ++i) {
                if (d[i] == 0.0) continue;
                auto gr = gm.row(static_cast<int>(i));
                for (std::size_t j = 0; j < gr.size(); ++j) gr[j] += d[i] * a[j];
            }
            if (l == 0) break;

            auto& dprev = scr.delta[l - 1];
            const auto& zprev = scr.ws.pre[l - 1];
            dprev.assign(zprev.size(), 0.0);
            const Matrix& w = net.weights[l];
            for (std::size_t i = 0; i < d.size(); ++i) {
                if (d[i] == 0.0) continue;
                const auto wr = w.row(static_cast<int>(i));
                for (std::size_t k = 0; k < dprev.size(); ++k) dprev[k] += d[i] * wr[k];
            }
            for (std::size_t k = 0; k < dprev.size(); ++k) dprev[k] *= logistic_d1(zprev[k]);
        }
    }
    return loss_sum;
}

void scale(GradStack& g, double c) {
    for (auto& m : g) {
        for (double& v : m.flat()) v *= c;
    }
}

void apply_projected_step(Network& net, const GradStack& grad, double lr, double V) {
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        Matrix& w = net.weights[l];
        const Matrix& g = grad[l];
        for (int i = 0; i < w.rows(); ++i) {
            auto wr = w.row(i);
            const auto gr = g.row(i);
            for (std::size_t j = 0; j < wr.size(); ++j) wr[j] -= lr * gr[j];
            project_l1_ball_inplace(wr, V);
        }
    }
}

void apply_penalized_step(Network& net, const GradStack& grad, double lr, double lambda,
                          ConstraintMode::PenaltyStyle style) {
    if (style == ConstraintMode::PenaltyStyle::SumRows) {
        for (std::size_t l = 0; l < net.weights.size(); ++l) {
            auto wf = net.weights[l].flat();
            const auto gf = grad[l].flat();
            for (std::size_t j = 0; j < wf.size(); ++j) {
                wf[j] -= lr * (gf[j] + lambda * sign0(wf[j]));
            }
        }
        return;
    }

    // MaxRow: the penalty acts only on the row(s) attaining the max norm.
    const int L = net.depth();
    double vmax = 0.0;
    for (const auto& m : net.weights) {
        for (int i = 0; i < m.rows(); ++i) {
            double s = 0.0;
            for (double v : m.row(i)) s += std::abs(v);
            if (s > vmax) vmax = s;
        }
    }
    const double coef = lambda * L * std::pow(vmax, L - 1);
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        Matrix& w = net.weights[l];
        const Matrix& g = grad[l];
        for (int i = 0; i < w.rows(); ++i) {
            auto wr = w.row(i);
            const auto gr = g.row(i);
            double s = 0.0;
            for (double v : wr) s += std::abs(v);
            const bool at_max = (s == vmax);
            for (std::size_t j = 0; j < wr.size(); ++j) {
                const double pen = at_max ? coef * sign0(wr[j]) : 0.0;
                wr[j] -= lr * (gr[j] + pen);
            }
        }
    }
}

}  // namespace

double empirical_loss(const Network& net, const Batch& batch, LossKind loss) {
    check_batch(net, batch);
    Workspace ws;
    double sum = 0.0;
    for (int s = 0; s < batch.size(); ++s) {
        const double resid = forward(net, batch.input_row(s), ws) - batch.targets[s];
        sum += loss == LossKind::SquareL2 ? resid * resid : std::abs(resid);
    }
    return sum / batch.size();
}

GradStack gradient(const Network& net, const Batch& batch, LossKind loss) {
    check_batch(net, batch);
    GradStack g = zero_like(net);
    BackpropScratch scr;
    accumulate_gradient(net, batch, loss, g, scr);
    scale(g, 1.0 / batch.size());
    return g;
}

GradStack finite_diff_gradient(const Network& net, const Batch& batch, LossKind loss, double h) {
    check_batch(net, batch);
    if (!(h > 0.0)) throw std::invalid_argument("finite_diff_gradient: h must be positive");

    Network probe = net;
    GradStack g = zero_like(net);
    for (std::size_t l = 0; l < probe.weights.size(); ++l) {
        auto wf = probe.weights[l].flat();
        auto gf = g[l].flat();
        for (std::size_t j = 0; j < wf.size(); ++j) {
            const double saved = wf[j];
            wf[j] = saved + h;
            const double up = empirical_loss(probe, batch, loss);
            wf[j] = saved - h;
            const double down = empirical_loss(probe, batch, loss);
            wf[j] = saved;
            gf[j] = (up - down) / (2.0 * h);
        }
    }
    return g;
}

Network step_projected(const Network& net, const GradStack& grad, double lr, double V) {
    if (!(lr > 0.0)) throw std::invalid_argument("step_projected: lr must be positive");
    if (!(V > 0.0)) throw std::invalid_argument("step_projected: V must be positive");
    if (grad.size() != net.weights.size()) throw std::invalid_argument("step_projected: shape mismatch");
    Network out = net;
    apply_projected_step(out, grad, lr, V);
    return out;
}

Network step_penalized(const Network& net, const GradStack& grad, double lr, double lambda,
                       ConstraintMode::PenaltyStyle style) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("step_penalized: lambda must be non-negative");
    if (grad.size() != net.weights.size()) throw std::invalid_argument("step_penalized: shape mismatch");
    Network out = net;
    apply_penalized_step(out, grad, lr, lambda, style);
    return out;
}

std::pair<Network, TrainTrace> train(const Network& net, const Dataset& dataset,
                                     const TrainConfig& config) {
    config.validate();
    net.validate();
    if (dataset.n < 1) throw std::invalid_argument("train: empty dataset");
    if (dataset.d != net.input_dim()) throw std::invalid_argument("train: dataset dimension mismatch");

    const auto t0 = std::chrono::steady_clock::now();
    const int n = dataset.n;
    const int d = dataset.d;
    const int bs = config.batch_size > 0 ? std::min(config.batch_size, n)
                                         : (n <= 1024 ? n : 256);

    Network cur = net;
    Rng rng(config.seed);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);

    GradStack grad = zero_like(cur);
    BackpropScratch scr;
    std::vector<double> xb(static_cast<std::size_t>(bs) * d);
    std::vector<double> yb(bs);

    TrainTrace trace;
    trace.epoch_loss.reserve(config.epochs);
    trace.epoch_variation.reserve(config.epochs);

    const bool projecting = config.mode.kind == ConstraintMode::Kind::Projection;

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        // Fisher-Yates from the run's own stream.
        for (int i = n - 1; i > 0; --i) {
            const int j = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(i) + 1));
            std::swap(order[i], order[j]);
        }

        const double lr = config.lr_decay == TrainConfig::LrDecay::InverseSqrt
                              ? config.learning_rate / std::sqrt(static_cast<double>(epoch))
                              : config.learning_rate;

        double epoch_loss_sum = 0.0;
        int steps = 0;
        for (int start = 0; start < n; start += bs) {
            const int count = std::min(bs, n - start);
            for (int i = 0; i < count; ++i) {
                const auto src = dataset.input_row(order[start + i]);
                std::copy(src.begin(), src.end(), xb.begin() + static_cast<std::size_t>(i) * d);
                yb[i] = dataset.responses[order[start + i]];
            }
            const Batch batch{{xb.data(), static_cast<std::size_t>(count) * d},
                              {yb.data(), static_cast<std::size_t>(count)},
                              d};

            zero(grad);
            const double loss_sum = accumulate_gradient(cur, batch, config.loss, grad, scr);
            scale(grad, 1.0 / count);
            epoch_loss_sum += loss_sum / count;
            ++steps;

            if (projecting) {
                apply_projected_step(cur, grad, lr, config.mode.radius);
                const double excess = max_row_norm(cur) - config.mode.radius;
                if (excess > trace.max_constraint_violation) trace.max_constraint_violation = excess;
            } else {
                apply_penalized_step(cur, grad, lr, config.mode.lambda, config.mode.style);
            }
        }

        trace.epoch_loss.push_back(epoch_loss_sum / steps);
        trace.epoch_variation.push_back(max_row_norm(cur));
    }

    trace.epochs_run = config.epochs;
    trace.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {std::move(cur), std::move(trace)};
}

}  // namespace varnet
