#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "varnet/network.hpp"
#include "varnet/rng.hpp"

namespace varnet {

enum class InputLaw { GaussianStandard, UniformBox };
enum class NoiseKind { Gaussian, Laplace, None };

std::string to_string(InputLaw law);
std::string to_string(NoiseKind kind);
InputLaw input_law_from_string(const std::string& s);
NoiseKind noise_kind_from_string(const std::string& s);

/// Zero-mean noise with second moment at most tau^2. Gaussian uses standard
/// deviation tau; Laplace uses scale tau/sqrt(2) so the variance is tau^2
/// exactly. All shipped kinds are symmetric about zero.
struct NoiseLaw {
    NoiseKind kind = NoiseKind::Gaussian;
    double tau = 1.0;

    void validate() const;
    double sample(Rng& rng) const;
    bool symmetric() const { return true; }
    /// E|eps| in closed form (tau*sqrt(2/pi) Gaussian, tau/sqrt(2) Laplace).
    double mean_abs() const;

    static NoiseLaw gaussian(double tau) { return {NoiseKind::Gaussian, tau}; }
    static NoiseLaw laplace(double tau) { return {NoiseKind::Laplace, tau}; }
    static NoiseLaw none() { return {NoiseKind::None, 0.0}; }
};

/// Ground-truth regression function paired with an input distribution.
/// Either a fixed linear map beta . x or a frozen constrained network.
struct Teacher {
    enum class Kind { Linear, Net };

    Kind kind = Kind::Linear;
    std::vector<double> beta;          // Linear
    Network net;                       // Net
    InputLaw input_law = InputLaw::GaussianStandard;
    double box_halfwidth = 1.0;        // UniformBox: coordinates uniform in [-M, M]
    std::string id = "teacher";

    int input_dim() const;
    double eval(std::span<const double> x) const;
    void sample_input(Rng& rng, std::span<double> out) const;

    static Teacher linear(std::vector<double> beta, InputLaw law = InputLaw::GaussianStandard,
                          double box_halfwidth = 1.0);
    /// beta drawn once from the stream, one standard normal per coordinate.
    static Teacher linear_random(int dim, Rng& rng, InputLaw law = InputLaw::GaussianStandard,
                                 double box_halfwidth = 1.0);
    static Teacher from_net(Network net, InputLaw law = InputLaw::UniformBox,
                            double box_halfwidth = 1.0);
};

/// Non-owning view over a contiguous block of samples.
struct Batch {
    std::span<const double> inputs;   // size() * dim, row-major
    std::span<const double> targets;  // size()
    int dim = 0;

    int size() const { return static_cast<int>(targets.size()); }
    std::span<const double> input_row(int i) const {
        return inputs.subspan(static_cast<std::size_t>(i) * dim, dim);
    }
};

/// Provenance travels with every dataset so a result row can be regenerated
/// from its seed alone.
struct Provenance {
    std::string teacher_id;
    NoiseKind noise = NoiseKind::None;
    double tau = 0.0;
    std::uint64_t seed = 0;
    int n = 0;
    int d = 0;
};

struct Dataset {
    int n = 0;
    int d = 0;
    std::vector<double> inputs;     // n * d, row-major
    std::vector<double> responses;  // n
    Provenance prov;

    Batch full_batch() const { return {inputs, responses, d}; }
    std::span<const double> input_row(int i) const {
        return {inputs.data() + static_cast<std::size_t>(i) * d, static_cast<std::size_t>(d)};
    }

    /// CSV with header x_1..x_d,y plus a .provenance.json sidecar.
    void dump_csv(const std::filesystem::path& path) const;
};

/// Inputs only; used for test grids and risk evaluation.
struct InputSample {
    int n = 0;
    int d = 0;
    std::vector<double> inputs;  // n * d, row-major

    std::span<const double> row(int i) const {
        return {inputs.data() + static_cast<std::size_t>(i) * d, static_cast<std::size_t>(d)};
    }
};

/// y_i = f_*(x_i) + eps_i with x_i iid from the teacher's input law.
Dataset sample_dataset(const Teacher& teacher, int n, const NoiseLaw& noise, Rng& rng);

/// n fresh inputs from the teacher's input law.
InputSample sample_inputs(const Teacher& teacher, int n, Rng& rng);

}  // namespace varnet
