// Python bindings for the varnet core: network construction and evaluation,
// l1 projection, training, risk estimation, and the sweep runner.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "varnet/checkpoint.hpp"
#include "varnet/l1.hpp"
#include "varnet/probe.hpp"
#include "varnet/sweep.hpp"

namespace py = pybind11;
using namespace varnet;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const DoubleArray& a) {
    if (a.ndim() != 1) throw std::invalid_argument("expected a 1-d array");
    return {a.data(), a.data() + a.shape(0)};
}

Batch make_batch(const DoubleArray& X, const DoubleArray& y) {
    if (X.ndim() != 2 || y.ndim() != 1) throw std::invalid_argument("expected X (n,d) and y (n,)");
    if (X.shape(0) != y.shape(0)) throw std::invalid_argument("X and y row counts differ");
    return Batch{{X.data(), static_cast<std::size_t>(X.size())},
                 {y.data(), static_cast<std::size_t>(y.size())},
                 static_cast<int>(X.shape(1))};
}

InputSample make_input_sample(const DoubleArray& X) {
    if (X.ndim() != 2) throw std::invalid_argument("expected X with shape (n, d)");
    InputSample s;
    s.n = static_cast<int>(X.shape(0));
    s.d = static_cast<int>(X.shape(1));
    s.inputs.assign(X.data(), X.data() + X.size());
    return s;
}

LossKind parse_loss(const std::string& s) { return loss_kind_from_string(s); }

ConstraintMode parse_mode(const std::string& mode, double V, double lambda, const std::string& style) {
    if (mode == "projection") return ConstraintMode::projection(V);
    if (mode == "penalty") {
        if (style == "sum_rows") return ConstraintMode::penalty(lambda, ConstraintMode::PenaltyStyle::SumRows);
        if (style == "max_row") return ConstraintMode::penalty(lambda, ConstraintMode::PenaltyStyle::MaxRow);
        throw std::invalid_argument("unknown penalty style: " + style);
    }
    throw std::invalid_argument("unknown constraint mode: " + mode);
}

NoiseLaw parse_noise(const std::string& kind, double tau) {
    NoiseLaw n{noise_kind_from_string(kind), tau};
    n.validate();
    return n;
}

py::list weights_as_arrays(const Network& net) {
    py::list out;
    for (const auto& m : net.weights) {
        py::array_t<double> a({m.rows(), m.cols()});
        std::copy(m.flat().begin(), m.flat().end(), a.mutable_data());
        out.append(std::move(a));
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_varnet, m) {
    m.doc() = "Variation-constrained feedforward networks: l1-projected training and risk experiments";

    py::class_<VariationReport>(m, "VariationReport")
        .def_readonly("per_neuron_norms", &VariationReport::per_neuron_norms)
        .def_readonly("max_norm", &VariationReport::max_norm)
        .def_readonly("total_variation", &VariationReport::total_variation)
        .def_readonly("sum_norms", &VariationReport::sum_norms)
        .def("__repr__", [](const VariationReport& r) {
            return "VariationReport(max_norm=" + std::to_string(r.max_norm) +
                   ", total_variation=" + std::to_string(r.total_variation) + ")";
        });

    py::class_<Network>(m, "Network")
        .def_property_readonly("layer_widths",
                               [](const Network& n) { return n.spec.layer_widths; })
        .def_property_readonly("depth", &Network::depth)
        .def_property_readonly("input_dim", &Network::input_dim)
        .def_property_readonly("weights", &weights_as_arrays,
                               "per-layer weight matrices (copies); the last column is the bias")
        .def("__repr__", [](const Network& n) {
            std::string s = "Network([";
            for (std::size_t i = 0; i < n.spec.layer_widths.size(); ++i) {
                if (i) s += ", ";
                s += std::to_string(n.spec.layer_widths[i]);
            }
            return s + "])";
        });

    py::class_<RiskEstimate>(m, "RiskEstimate")
        .def_readonly("value", &RiskEstimate::value)
        .def_readonly("squared_value", &RiskEstimate::squared_value)
        .def_readonly("test_size", &RiskEstimate::test_size)
        .def_readonly("std_error", &RiskEstimate::std_error);

    py::class_<SlopeFit>(m, "SlopeFit")
        .def_readonly("slope", &SlopeFit::slope)
        .def_readonly("intercept", &SlopeFit::intercept)
        .def_readonly("r_squared", &SlopeFit::r_squared)
        .def_readonly("points_used", &SlopeFit::points_used);

    py::class_<Teacher>(m, "Teacher")
        .def_property_readonly("input_dim", &Teacher::input_dim)
        .def_property_readonly("id", [](const Teacher& t) { return t.id; })
        .def("eval", [](const Teacher& t, const DoubleArray& x) {
            const auto v = to_vector(x);
            return t.eval(v);
        });

    m.def("linear_teacher",
          [](const DoubleArray& beta, const std::string& input_law, double box_halfwidth) {
              return Teacher::linear(to_vector(beta), input_law_from_string(input_law), box_halfwidth);
          },
          py::arg("beta"), py::arg("input_law") = "gaussian", py::arg("box_halfwidth") = 1.0);

    m.def("net_teacher",
          [](const Network& net, const std::string& input_law, double box_halfwidth) {
              return Teacher::from_net(net, input_law_from_string(input_law), box_halfwidth);
          },
          py::arg("net"), py::arg("input_law") = "uniform_box", py::arg("box_halfwidth") = 1.0);

    m.def("build_network",
          [](const std::vector<int>& widths, double init_radius, std::uint64_t seed) {
              Rng rng(seed);
              return build_network(ArchitectureSpec{widths}, init_radius, rng);
          },
          py::arg("layer_widths"), py::arg("init_radius"), py::arg("seed"),
          "Network with every neuron row exactly on the l1 sphere of radius init_radius");

    m.def("forward", [](const Network& net, const DoubleArray& x) {
        const auto v = to_vector(x);
        return forward(net, v);
    });

    m.def("forward_batch", [](const Network& net, const DoubleArray& X) {
        const InputSample s = make_input_sample(X);
        py::array_t<double> out(s.n);
        Workspace ws;
        for (int i = 0; i < s.n; ++i) out.mutable_data()[i] = forward(net, s.row(i), ws);
        return out;
    });

    m.def("hidden_states", [](const Network& net, const DoubleArray& x) {
        const auto v = to_vector(x);
        return hidden_states(net, v);
    });

    m.def("variation", &variation);

    m.def("l1_norm", [](const DoubleArray& w) { return l1_norm(to_vector(w)); });

    m.def("project_l1_ball",
          [](const DoubleArray& w, double radius) {
              auto v = to_vector(w);
              project_l1_ball_inplace(v, radius);
              py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
              std::copy(v.begin(), v.end(), out.mutable_data());
              return out;
          },
          py::arg("w"), py::arg("radius"));

    m.def("sample_dataset",
          [](const Teacher& teacher, int n, const std::string& noise_kind, double tau,
             std::uint64_t seed) {
              Rng rng(seed);
              const Dataset ds = sample_dataset(teacher, n, parse_noise(noise_kind, tau), rng);
              py::array_t<double> X({ds.n, ds.d});
              std::copy(ds.inputs.begin(), ds.inputs.end(), X.mutable_data());
              py::array_t<double> y(ds.n);
              std::copy(ds.responses.begin(), ds.responses.end(), y.mutable_data());
              return py::make_tuple(std::move(X), std::move(y));
          },
          py::arg("teacher"), py::arg("n"), py::arg("noise") = "gaussian", py::arg("tau") = 1.0,
          py::arg("seed") = 0);

    m.def("empirical_loss",
          [](const Network& net, const DoubleArray& X, const DoubleArray& y, const std::string& loss) {
              return empirical_loss(net, make_batch(X, y), parse_loss(loss));
          },
          py::arg("net"), py::arg("X"), py::arg("y"), py::arg("loss") = "square_l2");

    m.def("gradient",
          [](const Network& net, const DoubleArray& X, const DoubleArray& y, const std::string& loss) {
              const GradStack g = gradient(net, make_batch(X, y), parse_loss(loss));
              py::list out;
              for (const auto& mtx : g) {
                  py::array_t<double> a({mtx.rows(), mtx.cols()});
                  std::copy(mtx.flat().begin(), mtx.flat().end(), a.mutable_data());
                  out.append(std::move(a));
              }
              return out;
          },
          py::arg("net"), py::arg("X"), py::arg("y"), py::arg("loss") = "square_l2");

    m.def("train",
          [](const Network& net, const DoubleArray& X, const DoubleArray& y, const std::string& loss,
             const std::string& mode, double V, double lambda, const std::string& penalty_style,
             int epochs, int batch_size, double learning_rate, const std::string& lr_decay,
             std::uint64_t seed) {
              const Batch b = make_batch(X, y);
              Dataset ds;
              ds.n = b.size();
              ds.d = b.dim;
              ds.inputs.assign(b.inputs.begin(), b.inputs.end());
              ds.responses.assign(b.targets.begin(), b.targets.end());

              TrainConfig cfg;
              cfg.loss = parse_loss(loss);
              cfg.mode = parse_mode(mode, V, lambda, penalty_style);
              cfg.epochs = epochs;
              cfg.batch_size = batch_size;
              cfg.learning_rate = learning_rate;
              if (lr_decay == "none") {
                  cfg.lr_decay = TrainConfig::LrDecay::None;
              } else if (lr_decay == "inverse_sqrt") {
                  cfg.lr_decay = TrainConfig::LrDecay::InverseSqrt;
              } else {
                  throw std::invalid_argument("unknown lr_decay: " + lr_decay);
              }
              cfg.seed = seed;

              auto [model, trace] = train(net, ds, cfg);
              py::dict tr;
              tr["epoch_loss"] = trace.epoch_loss;
              tr["epoch_variation"] = trace.epoch_variation;
              tr["epochs_run"] = trace.epochs_run;
              tr["wall_seconds"] = trace.wall_seconds;
              tr["max_constraint_violation"] = trace.max_constraint_violation;
              return py::make_tuple(std::move(model), std::move(tr));
          },
          py::arg("net"), py::arg("X"), py::arg("y"), py::arg("loss") = "square_l2",
          py::arg("mode") = "projection", py::arg("V") = 1.0, py::arg("lam") = 0.0,
          py::arg("penalty_style") = "sum_rows", py::arg("epochs") = 100, py::arg("batch_size") = 0,
          py::arg("learning_rate") = 0.05, py::arg("lr_decay") = "none", py::arg("seed") = 0);

    m.def("risk_l2", [](const Network& model, const Teacher& teacher, const DoubleArray& X_test) {
        return risk_l2(model, teacher, make_input_sample(X_test));
    });

    m.def("risk_l1",
          [](const Network& model, const Teacher& teacher, const std::string& noise_kind, double tau,
             const DoubleArray& X_test, const DoubleArray& noise_draws) {
              return risk_l1(model, teacher, parse_noise(noise_kind, tau), make_input_sample(X_test),
                             to_vector(noise_draws));
          });

    m.def("fit_loglog_slope", [](const std::vector<std::pair<double, double>>& points) {
        return fit_loglog_slope(points);
    });

    m.def("rademacher_estimate",
          [](double V, int d, int n, int sign_draws, int starts, int ascent_steps, double ascent_lr,
             std::uint64_t seed) {
              return rademacher_estimate(
                  RademacherConfig{V, d, n, sign_draws, starts, ascent_steps, ascent_lr, seed});
          },
          py::arg("V"), py::arg("d"), py::arg("n"), py::arg("sign_draws") = 32, py::arg("starts") = 32,
          py::arg("ascent_steps") = 200, py::arg("ascent_lr") = 0.1, py::arg("seed") = 0);

    m.def("network_to_json", &network_to_json);
    m.def("network_from_json", &network_from_json);
    m.def("save_network",
          [](const Network& net, const std::string& path) { save_network(net, path); });
    m.def("load_network", [](const std::string& path) { return load_network(path); });

    m.def("preset", [](const std::string& name) { return SweepConfig::preset(name).to_json().dump(); });

    m.def("run_sweep",
          [](const std::string& config_json) {
              const SweepConfig cfg = SweepConfig::from_json(nlohmann::json::parse(config_json));
              const SweepResult res = run_sweep(cfg);
              return py::make_tuple(res.csv(), res.summary_json().dump());
          },
          py::arg("config_json"),
          "Runs the sweep described by a JSON config string; returns (csv, summary_json)");

    py::register_exception<CheckpointError>(m, "CheckpointError", PyExc_RuntimeError);
}
