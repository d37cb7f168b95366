#include "varnet/network.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "varnet/l1.hpp"

namespace varnet {

void ArchitectureSpec::validate() const {
    if (layer_widths.size() < 2) {
        throw std::invalid_argument("architecture: need at least input and output widths");
    }
    for (int w : layer_widths) {
        if (w < 1) throw std::invalid_argument("architecture: widths must be positive");
    }
    if (layer_widths.back() != 1) {
        throw std::invalid_argument("architecture: output width must be 1");
    }
}

int Network::total_rows() const {
    int r = 0;
    for (const auto& m : weights) r += m.rows();
    return r;
}

int Network::total_params() const {
    int p = 0;
    for (const auto& m : weights) p += m.rows() * m.cols();
    return p;
}

void Network::validate() const {
    spec.validate();
    const int L = spec.depth();
    if (static_cast<int>(weights.size()) != L) {
        throw std::invalid_argument("network: expected " + std::to_string(L) + " weight matrices");
    }
    for (int l = 0; l < L; ++l) {
        if (weights[l].rows() != spec.layer_widths[l + 1] ||
            weights[l].cols() != spec.layer_widths[l] + 1) {
            throw std::invalid_argument("network: layer " + std::to_string(l + 1) + " has inconsistent shape");
        }
        for (double v : weights[l].flat()) {
            if (!std::isfinite(v)) throw std::invalid_argument("network: non-finite weight");
        }
    }
}

Network build_network(const ArchitectureSpec& spec, double init_radius, Rng& rng) {
    spec.validate();
    if (!(init_radius > 0.0)) {
        throw std::invalid_argument("build_network: init_radius must be positive");
    }

    Network net;
    net.spec = spec;
    net.weights.reserve(spec.depth());
    for (int l = 0; l < spec.depth(); ++l) {
        Matrix m(spec.layer_widths[l + 1], spec.layer_widths[l] + 1);
        for (int i = 0; i < m.rows(); ++i) {
            auto row = m.row(i);
            // Normalized exponential spacings put the magnitudes uniformly
            // on the simplex; random signs spread them over the sphere.
            double total = 0.0;
            for (double& v : row) {
                v = -std::log(rng.uniform01_open());
                total += v;
            }
            for (double& v : row) {
                v = rng.sign() * (v / total) * init_radius;
            }
        }
        net.weights.push_back(std::move(m));
    }
    return net;
}

namespace {

void check_input(const Network& net, std::span<const double> x) {
    if (static_cast<int>(x.size()) != net.input_dim()) {
        throw std::invalid_argument("forward: input has length " + std::to_string(x.size()) +
                                    ", network expects " + std::to_string(net.input_dim()));
    }
    for (double v : x) {
        if (!std::isfinite(v)) throw std::invalid_argument("forward: non-finite input");
    }
}

inline double dot(std::span<const double> w, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * y[j];
    return s;
}

}  // namespace

double forward(const Network& net, std::span<const double> x, Workspace& ws) {
    check_input(net, x);
    const int L = net.depth();

    ws.acts.resize(L);
    ws.pre.resize(L > 0 ? L - 1 : 0);

    auto& in = ws.acts[0];
    in.assign(x.begin(), x.end());
    in.push_back(1.0);

    for (int l = 0; l + 1 < L; ++l) {
        const Matrix& m = net.weights[l];
        auto& z = ws.pre[l];
        auto& out = ws.acts[l + 1];
        z.resize(m.rows());
        out.resize(m.rows() + 1);
        for (int i = 0; i < m.rows(); ++i) {
            z[i] = dot(m.row(i), ws.acts[l]);
            out[i] = logistic(z[i]);
        }
        out[m.rows()] = 0.5;  // sigma(0), the absorbed-bias coordinate
    }

    return dot(net.weights[L - 1].row(0), ws.acts[L - 1]);
}

double forward(const Network& net, std::span<const double> x) {
    Workspace ws;
    return forward(net, x, ws);
}

std::vector<std::vector<double>> hidden_states(const Network& net, std::span<const double> x) {
    Workspace ws;
    forward(net, x, ws);
    std::vector<std::vector<double>> states;
    states.reserve(ws.acts.size());
    for (std::size_t l = 0; l < ws.acts.size(); ++l) {
        auto y = ws.acts[l];
        if (l > 0) y.pop_back();  // states beyond y_0 are reported without the constant
        states.push_back(std::move(y));
    }
    return states;
}

VariationReport variation(const Network& net) {
    VariationReport rep;
    rep.per_neuron_norms.reserve(net.total_rows());
    for (const auto& m : net.weights) {
        for (int i = 0; i < m.rows(); ++i) {
            const double nrm = l1_norm(m.row(i));
            rep.per_neuron_norms.push_back(nrm);
            rep.sum_norms += nrm;
            if (nrm > rep.max_norm) rep.max_norm = nrm;
        }
    }
    rep.total_variation = std::pow(rep.max_norm, net.depth());
    return rep;
}

double max_row_norm(const Network& net) {
    double best = 0.0;
    for (const auto& m : net.weights) {
        for (int i = 0; i < m.rows(); ++i) {
            double s = 0.0;
            for (double v : m.row(i)) s += std::abs(v);
            if (s > best) best = s;
        }
    }
    return best;
}

}  // namespace varnet
