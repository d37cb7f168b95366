#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "varnet/data.hpp"
#include "varnet/network.hpp"

namespace varnet {

enum class LossKind { SquareL2, AbsoluteL1 };

std::string to_string(LossKind k);
LossKind loss_kind_from_string(const std::string& s);

/// How the variation budget is enforced: Euclidean projection of every
/// neuron row onto the l1 ball of radius V after each step, or an additive
/// l1 penalty folded into the gradient.
struct ConstraintMode {
    enum class Kind { Projection, Penalty };
    enum class PenaltyStyle { SumRows, MaxRow };

    Kind kind = Kind::Projection;
    double radius = 1.0;   // V, projection only
    double lambda = 0.0;   // penalty only
    PenaltyStyle style = PenaltyStyle::SumRows;

    void validate() const;

    static ConstraintMode projection(double V) {
        return {Kind::Projection, V, 0.0, PenaltyStyle::SumRows};
    }
    static ConstraintMode penalty(double lambda, PenaltyStyle style = PenaltyStyle::SumRows) {
        return {Kind::Penalty, 0.0, lambda, style};
    }
};

struct TrainConfig {
    LossKind loss = LossKind::SquareL2;
    ConstraintMode mode = ConstraintMode::projection(1.0);
    int epochs = 100;
    int batch_size = 0;  // 0: full batch for n <= 1024, minibatches of 256 beyond
    double learning_rate = 0.05;
    enum class LrDecay { None, InverseSqrt } lr_decay = LrDecay::None;
    std::uint64_t seed = 0;

    void validate() const;
};

struct TrainTrace {
    std::vector<double> epoch_loss;       // mean minibatch loss within each epoch
    std::vector<double> epoch_variation;  // max row norm at the end of each epoch
    int epochs_run = 0;
    double wall_seconds = 0.0;
    /// Projection mode: worst post-step excess of the max row norm over V,
    /// checked after every step, not just at epoch ends.
    double max_constraint_violation = 0.0;

    /// Rows epoch,loss,variation with header.
    std::string to_csv() const;
};

/// Gradient matrices, one per layer, same shapes as Network::weights.
using GradStack = std::vector<Matrix>;

GradStack zero_like(const Network& net);

/// Mean loss of the network over the batch.
double empirical_loss(const Network& net, const Batch& batch, LossKind loss);

/// Reverse-mode gradient of the mean batch loss with respect to every
/// weight. For the absolute loss the subgradient sign(residual) is used
/// with sign(0) = 0.
GradStack gradient(const Network& net, const Batch& batch, LossKind loss);

/// Central differences (loss(w + h e_j) - loss(w - h e_j)) / 2h per
/// coordinate; the independent oracle the analytic gradient is tested
/// against.
GradStack finite_diff_gradient(const Network& net, const Batch& batch, LossKind loss, double h);

/// One projected step: each row moves along -lr * grad, then is projected
/// back onto the l1 ball of radius V.
Network step_projected(const Network& net, const GradStack& grad, double lr, double V);

/// One penalized step: the l1 penalty subgradient is added to grad before a
/// plain (unprojected) step. SumRows adds lambda * sign(w) everywhere;
/// MaxRow adds lambda * L * V^(L-1) * sign(w) on the row(s) attaining the
/// max norm, every tied row included.
Network step_penalized(const Network& net, const GradStack& grad, double lr, double lambda,
                       ConstraintMode::PenaltyStyle style);

/// Full (sub)gradient-descent run: epochs of minibatch steps with the
/// configured constraint mode, minibatch order reshuffled each epoch from
/// the seeded stream. Pure function of (net, dataset, config).
std::pair<Network, TrainTrace> train(const Network& net, const Dataset& dataset,
                                     const TrainConfig& config);

}  // namespace varnet
