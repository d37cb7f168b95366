#include "varnet/data.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace varnet {

std::string to_string(InputLaw law) {
    switch (law) {
        case InputLaw::GaussianStandard: return "gaussian";
        case InputLaw::UniformBox: return "uniform_box";
    }
    throw std::invalid_argument("unknown input law");
}

std::string to_string(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::Gaussian: return "gaussian";
        case NoiseKind::Laplace: return "laplace";
        case NoiseKind::None: return "none";
    }
    throw std::invalid_argument("unknown noise kind");
}

InputLaw input_law_from_string(const std::string& s) {
    if (s == "gaussian") return InputLaw::GaussianStandard;
    if (s == "uniform_box") return InputLaw::UniformBox;
    throw std::invalid_argument("unknown input law: " + s);
}

NoiseKind noise_kind_from_string(const std::string& s) {
    if (s == "gaussian") return NoiseKind::Gaussian;
    if (s == "laplace") return NoiseKind::Laplace;
    if (s == "none") return NoiseKind::None;
    throw std::invalid_argument("unknown noise kind: " + s);
}

void NoiseLaw::validate() const {
    if (!(tau >= 0.0) || !std::isfinite(tau)) {
        throw std::invalid_argument("noise: tau must be finite and non-negative");
    }
}

double NoiseLaw::sample(Rng& rng) const {
    switch (kind) {
        case NoiseKind::Gaussian: return tau * rng.gaussian();
        case NoiseKind::Laplace: return rng.laplace(tau / std::sqrt(2.0));
        case NoiseKind::None: return 0.0;
    }
    throw std::invalid_argument("unknown noise kind");
}

double NoiseLaw::mean_abs() const {
    switch (kind) {
        case NoiseKind::Gaussian: return tau * std::sqrt(2.0 / 3.14159265358979323846);
        case NoiseKind::Laplace: return tau / std::sqrt(2.0);
        case NoiseKind::None: return 0.0;
    }
    throw std::invalid_argument("unknown noise kind");
}

int Teacher::input_dim() const {
    return kind == Kind::Linear ? static_cast<int>(beta.size()) : net.input_dim();
}

double Teacher::eval(std::span<const double> x) const {
    if (kind == Kind::Linear) {
        if (x.size() != beta.size()) throw std::invalid_argument("teacher: input dimension mismatch");
        double s = 0.0;
        for (std::size_t j = 0; j < beta.size(); ++j) s += beta[j] * x[j];
        return s;
    }
    return forward(net, x);
}

void Teacher::sample_input(Rng& rng, std::span<double> out) const {
    if (input_law == InputLaw::GaussianStandard) {
        for (double& v : out) v = rng.gaussian();
    } else {
        for (double& v : out) v = rng.uniform(-box_halfwidth, box_halfwidth);
    }
}

Teacher Teacher::linear(std::vector<double> beta, InputLaw law, double box_halfwidth) {
    for (double b : beta) {
        if (!std::isfinite(b)) throw std::invalid_argument("teacher: non-finite beta");
    }
    if (beta.empty()) throw std::invalid_argument("teacher: beta must be non-empty");
    Teacher t;
    t.kind = Kind::Linear;
    t.beta = std::move(beta);
    t.input_law = law;
    t.box_halfwidth = box_halfwidth;
    t.id = "linear-d" + std::to_string(t.beta.size());
    return t;
}

Teacher Teacher::linear_random(int dim, Rng& rng, InputLaw law, double box_halfwidth) {
    if (dim < 1) throw std::invalid_argument("teacher: dimension must be positive");
    std::vector<double> beta(dim);
    for (double& b : beta) b = rng.gaussian();
    return linear(std::move(beta), law, box_halfwidth);
}

Teacher Teacher::from_net(Network net, InputLaw law, double box_halfwidth) {
    net.validate();
    Teacher t;
    t.kind = Kind::Net;
    t.net = std::move(net);
    t.input_law = law;
    t.box_halfwidth = box_halfwidth;
    t.id = "net-d" + std::to_string(t.net.input_dim()) + "-L" + std::to_string(t.net.depth());
    return t;
}

Dataset sample_dataset(const Teacher& teacher, int n, const NoiseLaw& noise, Rng& rng) {
    if (n < 1) throw std::invalid_argument("sample_dataset: n must be >= 1");
    noise.validate();

    const int d = teacher.input_dim();
    Dataset ds;
    ds.n = n;
    ds.d = d;
    ds.inputs.resize(static_cast<std::size_t>(n) * d);
    ds.responses.resize(n);
    for (int i = 0; i < n; ++i) {
        std::span<double> row{ds.inputs.data() + static_cast<std::size_t>(i) * d,
                              static_cast<std::size_t>(d)};
        teacher.sample_input(rng, row);
        ds.responses[i] = teacher.eval(row) + noise.sample(rng);
    }
    ds.prov = Provenance{teacher.id, noise.kind, noise.tau, 0, n, d};
    return ds;
}

InputSample sample_inputs(const Teacher& teacher, int n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("sample_inputs: n must be >= 1");
    const int d = teacher.input_dim();
    InputSample s;
    s.n = n;
    s.d = d;
    s.inputs.resize(static_cast<std::size_t>(n) * d);
    for (int i = 0; i < n; ++i) {
        teacher.sample_input(rng, {s.inputs.data() + static_cast<std::size_t>(i) * d,
                                   static_cast<std::size_t>(d)});
    }
    return s;
}

void Dataset::dump_csv(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("dump_csv: cannot open " + path.string());
    for (int j = 0; j < d; ++j) out << "x_" << (j + 1) << ",";
    out << "y\n";
    out.precision(17);
    for (int i = 0; i < n; ++i) {
        auto row = input_row(i);
        for (double v : row) out << v << ",";
        out << responses[i] << "\n";
    }

    nlohmann::json prov_json{{"teacher_id", prov.teacher_id},
                             {"noise", to_string(prov.noise)},
                             {"tau", prov.tau},
                             {"seed", prov.seed},
                             {"n", prov.n},
                             {"d", prov.d}};
    std::filesystem::path side = path;
    side += ".provenance.json";
    std::ofstream sout(side);
    sout << prov_json.dump(2) << "\n";
}

}  // namespace varnet
