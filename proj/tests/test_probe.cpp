#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "varnet/probe.hpp"

using namespace varnet;

TEST_CASE("single-sample estimate is floored by w = 0") {
    RademacherConfig cfg;
    cfg.V = 1.0;
    cfg.d = 3;
    cfg.n = 1;
    cfg.sign_draws = 4;
    cfg.starts = 2;
    cfg.ascent_steps = 20;
    cfg.seed = 11;
    // At w = 0 the objective is |xi_1| * sigma(0) = 0.5 regardless of signs.
    CHECK(rademacher_estimate(cfg) >= 0.5);
}

TEST_CASE("ascent matches the exhaustive grid at d = 1") {
    const std::vector<double> z{0.7, -0.4};
    const double V = 1.0;

    for (double s1 : {1.0, -1.0}) {
        for (double s2 : {1.0, -1.0}) {
            const std::vector<double> xi{s1, s2};

            double grid_best = 0.0;
            for (double w = -V; w <= V + 1e-12; w += 1e-3) {
                const double f = 0.5 * (xi[0] * logistic(w * z[0]) + xi[1] * logistic(w * z[1]));
                grid_best = std::max(grid_best, std::abs(f));
            }

            const double ascent = sup_correlation_estimate(z, xi, 1, V, 8, 300, 0.1, 99);
            CHECK(ascent == doctest::Approx(grid_best).epsilon(1e-3));
            CHECK(ascent <= grid_best + 1e-3);
        }
    }
}

TEST_CASE("estimates stay in [0, 1] and grow with the budget V") {
    RademacherConfig cfg;
    cfg.d = 5;
    cfg.n = 128;
    cfg.sign_draws = 8;
    cfg.starts = 6;
    cfg.ascent_steps = 80;
    cfg.seed = 17;

    double previous = -1.0;
    for (double V : {0.5, 1.0, 2.0, 4.0}) {
        cfg.V = V;
        const double est = rademacher_estimate(cfg);
        CHECK(est >= 0.0);
        CHECK(est <= 1.0);
        CHECK(est >= previous);
        previous = est;
    }
}

TEST_CASE("estimates shrink as n grows") {
    RademacherConfig cfg;
    cfg.V = 2.0;
    cfg.d = 5;
    cfg.sign_draws = 16;
    cfg.starts = 6;
    cfg.ascent_steps = 80;
    cfg.seed = 23;

    double previous = 2.0;
    for (int n : {64, 256, 1024}) {
        cfg.n = n;
        const double est = rademacher_estimate(cfg);
        CHECK(est < previous);
        previous = est;
    }
}

TEST_CASE("rademacher config validation") {
    RademacherConfig cfg;
    cfg.V = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.V = 1.0;
    cfg.n = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("derivative envelopes: closed forms at small depth") {
    CHECK(first_derivative_envelope(1, 3.0) == doctest::Approx(3.0));
    CHECK(first_derivative_envelope(2, 3.0) == doctest::Approx(0.25 * 9.0));
    CHECK(first_derivative_envelope(3, 2.0) == doctest::Approx(std::pow(0.25, 2) * 8.0));

    CHECK(second_derivative_envelope(1, 2.0) == 0.0);
    CHECK(second_derivative_envelope(2, 2.0) == doctest::Approx(kLogisticSup2 * 8.0));
    const double V = 2.0;
    CHECK(second_derivative_envelope(3, V) ==
          doctest::Approx(kLogisticSup2 * (std::pow(V, 5) / 16.0 + std::pow(V, 4) / 4.0)));

    // The envelope scales like V^L: doubling the budget never shrinks it.
    for (int L : {1, 2, 3}) {
        CHECK(first_derivative_envelope(L, 2.0) >= first_derivative_envelope(L, 1.0));
        CHECK(second_derivative_envelope(L, 2.0) >= second_derivative_envelope(L, 1.0));
    }
}

TEST_CASE("derivative check on a tiny net matches the hand chain rule") {
    // [1,1,1] net: f(x) = u sigma(a x + b) + 0.5 c, f'(x) = u a sigma'(a x + b).
    Network net;
    net.spec = ArchitectureSpec{{1, 1, 1}};
    net.weights.emplace_back(1, 2);
    net.weights.emplace_back(1, 2);
    const double a = 0.03, b = 0.01, u = 0.05, c = 0.02;
    net.weights[0](0, 0) = a;
    net.weights[0](0, 1) = b;
    net.weights[1](0, 0) = u;
    net.weights[1](0, 1) = c;

    InputSample grid;
    grid.d = 1;
    for (double x = -1.0; x <= 1.0 + 1e-12; x += 0.05) grid.inputs.push_back(x);
    grid.n = static_cast<int>(grid.inputs.size());

    const DerivativeBoundReport rep = derivative_bound_check(net, grid, 2);
    double analytic = 0.0;
    for (double x : grid.inputs) analytic = std::max(analytic, std::abs(u * a * logistic_d1(a * x + b)));
    CHECK(rep.max_grad == doctest::Approx(analytic).epsilon(1e-4));
    CHECK(rep.first_ok);
    CHECK(rep.second_ok);
    CHECK(rep.points == grid.n);
}

TEST_CASE("derivative check: zero nets and random nets stay inside the envelope") {
    Rng rng(404);

    Network zero;
    zero.spec = ArchitectureSpec{{2, 3, 1}};
    zero.weights.emplace_back(3, 3);
    zero.weights.emplace_back(1, 4);
    InputSample grid = [] {
        InputSample g;
        g.d = 2;
        Rng r(7);
        g.n = 64;
        g.inputs.resize(128);
        for (double& v : g.inputs) v = r.uniform(-1.0, 1.0);
        return g;
    }();

    const DerivativeBoundReport zrep = derivative_bound_check(zero, grid, 1);
    CHECK(zrep.max_grad < 1e-8);

    for (const auto& widths : {std::vector<int>{2, 3, 1}, {2, 4, 3, 1}}) {
        const Network net = build_network(ArchitectureSpec{widths}, rng.uniform(0.5, 2.5), rng);
        const DerivativeBoundReport rep = derivative_bound_check(net, grid, 2);
        CHECK(rep.first_ok);
        CHECK(rep.second_ok);
        CHECK(rep.max_grad <= rep.grad_envelope + 1e-6);
    }

    // Grid points outside the box are rejected.
    InputSample outside = grid;
    outside.inputs[0] = 2.0;
    Rng rng2(405);
    const Network net = build_network(ArchitectureSpec{{2, 3, 1}}, 1.0, rng2);
    CHECK_THROWS_AS(derivative_bound_check(net, outside, 1), std::invalid_argument);
}

namespace {

CoveringConfig toy_covering(double eps, double step = 0.25) {
    CoveringConfig cfg;
    cfg.V = 1.0;
    cfg.eps = eps;
    cfg.weight_grid_step = step;
    for (double x = -1.0; x <= 1.0 + 1e-12; x += 0.25) cfg.x_grid.push_back(x);
    return cfg;
}

}  // namespace

TEST_CASE("covering: one ball suffices beyond the class diameter") {
    // |f| <= V = 1, so the L_inf diameter is at most 2.
    CHECK(covering_estimate(toy_covering(3.0)) == 1);
}

TEST_CASE("covering size never shrinks as eps halves") {
    int previous = 0;
    for (double eps : {0.4, 0.2, 0.1}) {
        const int size = covering_estimate(toy_covering(eps));
        CHECK(size >= previous);
        previous = size;
        MESSAGE("eps=", eps, " greedy cover size=", size);
    }
}

TEST_CASE("covering curve emits one pair per eps") {
    const std::vector<double> eps_list{0.4, 0.2, 0.1};
    const auto curve = covering_curve(toy_covering(0.4), eps_list);
    REQUIRE(curve.size() == 3);
    for (std::size_t i = 0; i < curve.size(); ++i) {
        CHECK(curve[i].first == eps_list[i]);
        CHECK(curve[i].second >= 1);
        if (i > 0) CHECK(curve[i].second >= curve[i - 1].second);
        MESSAGE("eps=", curve[i].first, ",size=", curve[i].second);
    }
}

TEST_CASE("covering rejects anything beyond the toy scale") {
    CoveringConfig cfg = toy_covering(0.2);
    cfg.d = 2;
    CHECK_THROWS_AS(covering_estimate(cfg), std::invalid_argument);
    cfg.d = 1;
    cfg.widths = {1, 2, 1};
    CHECK_THROWS_AS(covering_estimate(cfg), std::invalid_argument);
}

TEST_CASE("greedy cover vs brute-force minimum cover at the smallest scale") {
    // Coarse grid: weight values {-1, 0, 1}, rows with |w| + |b| <= 1.
    CoveringConfig cfg = toy_covering(0.3, 1.0);
    const int greedy = covering_estimate(cfg);

    // Enumerate the same function table the probe sees.
    std::vector<std::pair<double, double>> rows{{0, 0}, {0, 1}, {0, -1}, {1, 0}, {-1, 0}};
    std::vector<std::vector<double>> table;
    for (const auto& [w, b] : rows) {
        for (const auto& [u, c] : rows) {
            std::vector<double> f;
            for (double x : cfg.x_grid) f.push_back(u * logistic(w * x + b) + 0.5 * c);
            table.push_back(std::move(f));
        }
    }
    auto within = [&](const std::vector<double>& a, const std::vector<double>& b) {
        double dist = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) dist = std::max(dist, std::abs(a[i] - b[i]));
        return dist <= cfg.eps;
    };

    // Exact minimum cover by exhaustive subset search over center choices.
    const int m = static_cast<int>(table.size());
    int optimal = greedy;
    for (int k = 1; k < greedy && optimal == greedy; ++k) {
        std::vector<int> pick(k);
        std::function<bool(int, int)> search = [&](int idx, int from) {
            if (idx == k) {
                for (const auto& f : table) {
                    bool covered = false;
                    for (int p : pick) {
                        if (within(f, table[p])) {
                            covered = true;
                            break;
                        }
                    }
                    if (!covered) return false;
                }
                return true;
            }
            for (int i = from; i < m; ++i) {
                pick[idx] = i;
                if (search(idx + 1, i + 1)) return true;
            }
            return false;
        };
        if (search(0, 0)) optimal = k;
    }

    CHECK(greedy >= optimal);
    MESSAGE("greedy=", greedy, " optimal=", optimal);  // ratio inspected, not asserted
}
