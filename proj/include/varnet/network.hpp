#pragma once

#include <span>
#include <vector>

#include "varnet/activation.hpp"
#include "varnet/rng.hpp"

namespace varnet {

/// Dense row-major matrix; one instance holds the weights of one layer,
/// one row per neuron. The trailing column of each row is the absorbed
/// bias coordinate.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0.0) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

    std::span<double> row(int i) { return {data_.data() + static_cast<std::size_t>(i) * cols_, static_cast<std::size_t>(cols_)}; }
    std::span<const double> row(int i) const { return {data_.data() + static_cast<std::size_t>(i) * cols_, static_cast<std::size_t>(cols_)}; }

    std::span<double> flat() { return data_; }
    std::span<const double> flat() const { return data_; }

    bool operator==(const Matrix&) const = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

/// Layer widths [r_0 = input dim, r_1, ..., r_L = 1] plus the activation.
struct ArchitectureSpec {
    std::vector<int> layer_widths;
    ActivationKind activation = ActivationKind::Logistic;

    int input_dim() const { return layer_widths.front(); }
    int depth() const { return static_cast<int>(layer_widths.size()) - 1; }  // L

    /// Throws std::invalid_argument unless there are >= 2 widths, all
    /// positive, with the last exactly 1.
    void validate() const;

    bool operator==(const ArchitectureSpec&) const = default;
};

/// A feedforward network: immutable-by-convention value type. weights[l]
/// holds layer l+1, shaped r_{l+1} x (r_l + 1); the +1 column multiplies the
/// constant coordinate appended to the previous layer's output (1.0 at the
/// input, sigma(0) = 0.5 after each hidden layer).
struct Network {
    ArchitectureSpec spec;
    std::vector<Matrix> weights;

    int input_dim() const { return spec.input_dim(); }
    int depth() const { return spec.depth(); }
    int total_rows() const;
    int total_params() const;

    /// Shape consistency with the architecture plus finiteness of every entry.
    void validate() const;

    bool operator==(const Network&) const = default;
};

/// l1 norms of every neuron row (bias column included), their maximum, and
/// the compounded budget max^L.
struct VariationReport {
    std::vector<double> per_neuron_norms;  // layer-major, row order
    double max_norm = 0.0;
    double total_variation = 0.0;  // max_norm^L
    double sum_norms = 0.0;        // total l1 norm of all parameters
};

/// Builds a network whose every neuron row lies exactly on the l1 sphere of
/// radius init_radius: magnitudes from normalized exponential spacings,
/// signs independent fair coins. Deterministic given the rng state.
Network build_network(const ArchitectureSpec& spec, double init_radius, Rng& rng);

/// Scratch buffers reused across forward/backward evaluations so the hot
/// loops stay allocation-free.
struct Workspace {
    std::vector<std::vector<double>> acts;  // acts[l]: augmented output of layer l
    std::vector<std::vector<double>> pre;   // pre[l]: pre-activations of layer l+1 (hidden only)
};

/// Evaluates the network at x (length must equal the input dimension).
/// Output is w_L . y~_{L-1} with hidden activations sigma(w . y~).
double forward(const Network& net, std::span<const double> x);
double forward(const Network& net, std::span<const double> x, Workspace& ws);

/// Per-layer outputs y_0 ... y_{L-1}: element 0 is x with the constant 1.0
/// appended, later elements are the raw hidden activations (no constant).
std::vector<std::vector<double>> hidden_states(const Network& net, std::span<const double> x);

/// Row norms, their max, and max^L.
VariationReport variation(const Network& net);

/// Max row norm only; cheap form used inside training loops.
double max_row_norm(const Network& net);

}  // namespace varnet
