#include <cmath>
#include <vector>

#include "doctest.h"
#include "varnet/data.hpp"
#include "varnet/l1.hpp"
#include "varnet/train.hpp"

using namespace varnet;

namespace {

double rel_err(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-6});
}

double max_rel_err(const GradStack& a, const GradStack& b) {
    double worst = 0.0;
    for (std::size_t l = 0; l < a.size(); ++l) {
        const auto af = a[l].flat();
        const auto bf = b[l].flat();
        for (std::size_t j = 0; j < af.size(); ++j) worst = std::max(worst, rel_err(af[j], bf[j]));
    }
    return worst;
}

Batch make_batch(const std::vector<double>& xs, const std::vector<double>& ys, int d) {
    return Batch{xs, ys, d};
}

Dataset self_teacher_dataset(const Network& net, int n, std::uint64_t seed) {
    Teacher t = Teacher::from_net(net, InputLaw::GaussianStandard);
    Rng rng(seed);
    return sample_dataset(t, n, NoiseLaw::none(), rng);
}

}  // namespace

TEST_CASE("gradient vanishes on perfectly fitted batches") {
    Rng rng(10);
    const Network net = build_network(ArchitectureSpec{{2, 3, 1}}, 1.5, rng);
    std::vector<double> xs{0.5, -1.0, 2.0, 0.25, -0.5, 0.75};
    std::vector<double> ys(3);
    for (int i = 0; i < 3; ++i) ys[i] = forward(net, std::span(xs).subspan(2 * i, 2));

    for (LossKind loss : {LossKind::SquareL2, LossKind::AbsoluteL1}) {
        const GradStack g = gradient(net, make_batch(xs, ys, 2), loss);
        for (const auto& m : g) {
            for (double v : m.flat()) CHECK(v == 0.0);
        }
    }
}

TEST_CASE("gradient rejects bad batches") {
    Rng rng(10);
    const Network net = build_network(ArchitectureSpec{{2, 3, 1}}, 1.5, rng);
    CHECK_THROWS_AS(gradient(net, Batch{{}, {}, 2}, LossKind::SquareL2), std::invalid_argument);
    std::vector<double> xs{1.0, 2.0, 3.0};
    std::vector<double> ys{0.0};
    CHECK_THROWS_AS(gradient(net, Batch{xs, ys, 3}, LossKind::SquareL2), std::invalid_argument);
}

TEST_CASE("backprop matches central finite differences") {
    Rng rng(2025);
    for (const auto& widths : {std::vector<int>{1, 1, 1}, {2, 3, 1}, {3, 1}}) {
        for (int trial = 0; trial < 5; ++trial) {
            const Network net = build_network(ArchitectureSpec{widths}, 0.5 + rng.uniform01(), rng);
            const int d = net.input_dim();
            const int b = 1 + static_cast<int>(rng.uniform_index(4));
            std::vector<double> xs(static_cast<std::size_t>(b) * d), ys(b);
            for (double& v : xs) v = rng.gaussian();
            for (double& v : ys) v = rng.gaussian();

            const Batch batch = make_batch(xs, ys, d);
            const GradStack analytic = gradient(net, batch, LossKind::SquareL2);
            const GradStack numeric = finite_diff_gradient(net, batch, LossKind::SquareL2, 1e-5);
            CHECK(max_rel_err(analytic, numeric) < 1e-4);
        }
    }
}

TEST_CASE("single-sample [1,1,1] gradient agrees coordinatewise at 1e-5") {
    Rng rng(77);
    const Network net = build_network(ArchitectureSpec{{1, 1, 1}}, 1.2, rng);
    std::vector<double> xs{0.8}, ys{-0.3};
    const Batch batch = make_batch(xs, ys, 1);
    const GradStack analytic = gradient(net, batch, LossKind::SquareL2);
    const GradStack numeric = finite_diff_gradient(net, batch, LossKind::SquareL2, 1e-6);
    CHECK(max_rel_err(analytic, numeric) < 1e-5);
}

TEST_CASE("absolute loss keeps the sign(0) = 0 convention") {
    Rng rng(12);
    const Network net = build_network(ArchitectureSpec{{1, 2, 1}}, 1.0, rng);
    std::vector<double> xs{0.4, -0.9};
    std::vector<double> ys{forward(net, std::span(xs).subspan(0, 1)),
                           forward(net, std::span(xs).subspan(1, 1))};
    const GradStack g = gradient(net, make_batch(xs, ys, 1), LossKind::AbsoluteL1);
    for (const auto& m : g) {
        for (double v : m.flat()) CHECK(v == 0.0);
    }
}

TEST_CASE("finite differences on a one-parameter quadratic slice") {
    // Linear net f = w0 x + w1, one sample (x=c, y=0): loss = (w0 c + w1)^2,
    // so dloss/dw0 = 2 (w0 c + w1) c.
    Network net;
    net.spec = ArchitectureSpec{{1, 1}};
    net.weights.emplace_back(1, 2);
    net.weights[0](0, 0) = 0.7;
    net.weights[0](0, 1) = 0.1;

    const double c = 1.3;
    std::vector<double> xs{c}, ys{0.0};
    const Batch batch = make_batch(xs, ys, 1);

    const GradStack fd = finite_diff_gradient(net, batch, LossKind::SquareL2, 1e-6);
    const double analytic = 2.0 * (0.7 * c + 0.1) * c;
    CHECK(std::abs(fd[0](0, 0) - analytic) < 1e-6);

    // Zero-residual batch: every finite difference is O(h)-small.
    ys[0] = 0.7 * c + 0.1;
    const GradStack fd0 = finite_diff_gradient(net, make_batch(xs, ys, 1), LossKind::SquareL2, 1e-6);
    for (double v : fd0[0].flat()) CHECK(std::abs(v) < 1e-8);

    CHECK_THROWS_AS(finite_diff_gradient(net, batch, LossKind::SquareL2, 0.0), std::invalid_argument);
}

TEST_CASE("projected step: feasible fixed point and hand case") {
    Rng rng(3);
    const Network net = build_network(ArchitectureSpec{{2, 2, 1}}, 1.0, rng);
    const GradStack zero = zero_like(net);
    CHECK(step_projected(net, zero, 0.1, 2.0) == net);

    // One-row net landing at (3, 1) with V = 2 projects to (2, 0).
    Network row;
    row.spec = ArchitectureSpec{{1, 1}};
    row.weights.emplace_back(1, 2);
    row.weights[0](0, 0) = 3.0;
    row.weights[0](0, 1) = 1.0;
    const Network stepped = step_projected(row, zero_like(row), 0.5, 2.0);
    CHECK(stepped.weights[0](0, 0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(stepped.weights[0](0, 1) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("projected step keeps every row inside the ball") {
    Rng rng(44);
    const Network net = build_network(ArchitectureSpec{{2, 4, 1}}, 3.0, rng);
    for (int t = 0; t < 50; ++t) {
        GradStack g = zero_like(net);
        for (auto& m : g) {
            for (double& v : m.flat()) v = rng.gaussian();
        }
        const double V = rng.uniform(0.2, 3.0);
        const Network out = step_projected(net, g, rng.uniform(0.01, 1.0), V);
        CHECK(variation(out).max_norm <= V + 1e-12);
    }
}

TEST_CASE("penalized step: lambda = 0 is a plain gradient step") {
    Rng rng(8);
    const Network net = build_network(ArchitectureSpec{{2, 3, 1}}, 1.0, rng);
    GradStack g = zero_like(net);
    for (auto& m : g) {
        for (double& v : m.flat()) v = rng.gaussian();
    }
    const double lr = 0.05;
    const Network pen = step_penalized(net, g, lr, 0.0, ConstraintMode::PenaltyStyle::SumRows);
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        const auto wf = net.weights[l].flat();
        const auto gf = g[l].flat();
        const auto pf = pen.weights[l].flat();
        for (std::size_t j = 0; j < wf.size(); ++j) CHECK(pf[j] == wf[j] - lr * gf[j]);
    }
}

TEST_CASE("penalized step: pure sign shrinkage under sum_rows") {
    Network net;
    net.spec = ArchitectureSpec{{1, 1}};
    net.weights.emplace_back(1, 2);
    net.weights[0](0, 0) = 1.0;
    net.weights[0](0, 1) = -1.0;
    const Network out =
        step_penalized(net, zero_like(net), 0.1, 0.5, ConstraintMode::PenaltyStyle::SumRows);
    CHECK(out.weights[0](0, 0) == doctest::Approx(0.95));
    CHECK(out.weights[0](0, 1) == doctest::Approx(-0.95));
}

TEST_CASE("penalized step: max_row touches only the argmax row") {
    Network net;
    net.spec = ArchitectureSpec{{1, 1, 1}};
    net.weights.emplace_back(1, 2);
    net.weights.emplace_back(1, 2);
    net.weights[0](0, 0) = 1.0;
    net.weights[0](0, 1) = 0.5;   // norm 1.5, the unique max
    net.weights[1](0, 0) = 0.25;
    net.weights[1](0, 1) = 0.25;  // norm 0.5

    const double lr = 0.1, lambda = 0.2;
    const Network out = step_penalized(net, zero_like(net), lr, lambda,
                                       ConstraintMode::PenaltyStyle::MaxRow);
    // coef = lambda * L * vmax^(L-1) with L = 2, vmax = 1.5.
    const double coef = lambda * 2.0 * 1.5;
    CHECK(out.weights[0](0, 0) == doctest::Approx(1.0 - lr * coef));
    CHECK(out.weights[0](0, 1) == doctest::Approx(0.5 - lr * coef));
    CHECK(out.weights[1](0, 0) == 0.25);
    CHECK(out.weights[1](0, 1) == 0.25);
}

TEST_CASE("train validates its contract") {
    Rng rng(5);
    const Network net = build_network(ArchitectureSpec{{1, 1, 1}}, 1.0, rng);
    const Dataset ds = self_teacher_dataset(net, 8, 99);

    TrainConfig cfg;
    cfg.mode = ConstraintMode::projection(1.0);
    cfg.epochs = 0;
    CHECK_THROWS_AS(train(net, ds, cfg), std::invalid_argument);

    cfg.epochs = 1;
    const auto [model, trace] = train(net, ds, cfg);
    CHECK(trace.epochs_run == 1);
    CHECK(trace.epoch_loss.size() == 1);
    CHECK(trace.epoch_variation.size() == 1);
}

TEST_CASE("train is deterministic given (net, dataset, config)") {
    Rng rng(17);
    const Network net = build_network(ArchitectureSpec{{2, 3, 1}}, 1.5, rng);
    const Dataset ds = self_teacher_dataset(net, 40, 4242);

    TrainConfig cfg;
    cfg.mode = ConstraintMode::projection(2.0);
    cfg.epochs = 25;
    cfg.learning_rate = 0.05;
    cfg.seed = 31337;

    const auto [m1, t1] = train(net, ds, cfg);
    const auto [m2, t2] = train(net, ds, cfg);
    CHECK(m1 == m2);
    CHECK(t1.epoch_loss == t2.epoch_loss);
}

TEST_CASE("projection mode maintains the constraint after every step") {
    Rng rng(21);
    const Network net = build_network(ArchitectureSpec{{3, 6, 1}}, 2.0, rng);
    Teacher teacher = Teacher::linear({1.0, -0.5, 0.25});
    Rng data_rng(88);
    const Dataset ds = sample_dataset(teacher, 64, NoiseLaw::gaussian(0.5), data_rng);

    TrainConfig cfg;
    cfg.mode = ConstraintMode::projection(1.5);
    cfg.epochs = 40;
    cfg.batch_size = 16;
    cfg.learning_rate = 0.1;
    cfg.seed = 5;

    const auto [model, trace] = train(net, ds, cfg);
    CHECK(trace.max_constraint_violation <= 1e-9);
    for (double v : trace.epoch_variation) CHECK(v <= 1.5 + 1e-9);
    CHECK(variation(model).max_norm <= 1.5 + 1e-9);
}

TEST_CASE("training its own zero-noise teacher never degrades the loss") {
    Rng rng(300);
    const Network teacher_net = build_network(ArchitectureSpec{{2, 4, 1}}, 2.0, rng);
    const Dataset ds = self_teacher_dataset(teacher_net, 128, 1001);

    Rng rng2(301);
    const Network net0 = build_network(ArchitectureSpec{{2, 4, 1}}, 2.0, rng2);

    TrainConfig cfg;
    cfg.mode = ConstraintMode::projection(2.0);
    cfg.epochs = 120;
    cfg.learning_rate = 0.05;  // below the stability threshold for this scale
    cfg.seed = 9;

    const auto [model, trace] = train(net0, ds, cfg);
    for (double loss : trace.epoch_loss) CHECK(loss <= trace.epoch_loss.front() + 1e-9);
}

TEST_CASE("sum_rows penalty shrinks total norm monotonically over a lambda grid") {
    Rng rng(60);
    const Network net0 = build_network(ArchitectureSpec{{2, 4, 1}}, 2.0, rng);
    Teacher teacher = Teacher::linear({0.8, -0.3});
    Rng data_rng(61);
    const Dataset ds = sample_dataset(teacher, 64, NoiseLaw::gaussian(0.5), data_rng);

    double previous = -1.0;
    bool first = true;
    for (double lambda : {0.0, 0.01, 0.1, 1.0}) {
        TrainConfig cfg;
        cfg.mode = ConstraintMode::penalty(lambda, ConstraintMode::PenaltyStyle::SumRows);
        cfg.epochs = 150;
        cfg.learning_rate = 0.05;
        cfg.seed = 71;
        const auto [model, trace] = train(net0, ds, cfg);
        const double total = variation(model).sum_norms;
        if (!first) CHECK(total <= previous + 1e-9);
        previous = total;
        first = false;
    }
}

TEST_CASE("risk drops by an order of magnitude from n=32 to n=2048") {
    // Scaled-down qualitative check of the rate experiment: same teacher and
    // architecture, two sample sizes, squared risk must separate by > 10x.
    Rng trng(1234);
    Teacher teacher = Teacher::linear_random(5, trng);

    auto run_once = [&](int n) {
        const std::uint64_t seed = derive_seed(2026, "train-gap", n, 0);
        Rng data_rng(derive_seed(seed, "data"));
        const Dataset ds = sample_dataset(teacher, n, NoiseLaw::gaussian(1.0), data_rng);
        Rng init_rng(derive_seed(seed, "init"));
        const Network net0 = build_network(ArchitectureSpec{{5, 50, 10, 1}}, 250.0 / 61.0, init_rng);

        TrainConfig cfg;
        cfg.mode = ConstraintMode::penalty(2e-4, ConstraintMode::PenaltyStyle::SumRows);
        cfg.epochs = 600;
        cfg.learning_rate = 0.03;
        cfg.seed = derive_seed(seed, "train");
        const auto [model, trace] = train(net0, ds, cfg);

        Rng test_rng(derive_seed(seed, "test"));
        std::vector<double> sq;
        Workspace ws;
        double total = 0.0;
        std::vector<double> x(5);
        for (int i = 0; i < 4000; ++i) {
            for (double& v : x) v = test_rng.gaussian();
            const double gap = forward(model, x, ws) - teacher.eval(x);
            total += gap * gap;
        }
        return total / 4000.0;
    };

    const double risk_small = run_once(32);
    const double risk_large = run_once(2048);
    CHECK(risk_large * 10.0 < risk_small);
}
