#include <cmath>

#include "doctest.h"
#include "varnet/sweep.hpp"

using namespace varnet;

namespace {

SweepConfig tiny_rate() {
    SweepConfig cfg;
    cfg.experiment = "rate";
    cfg.n_list = {32, 64};
    cfg.replications = 2;
    cfg.teacher_kind = "linear";
    cfg.teacher_dim = 3;
    cfg.noise = NoiseLaw::gaussian(0.5);
    cfg.architecture = {3, 4, 1};
    cfg.init_radius = 1.5;
    cfg.train.mode = ConstraintMode::projection(1.5);
    cfg.train.epochs = 30;
    cfg.train.learning_rate = 0.05;
    cfg.test_size = 500;
    cfg.base_seed = 777;
    cfg.threads = 1;
    return cfg;
}

bool rows_equal_ignoring_wall(const SweepRow& a, const SweepRow& b) {
    return a.experiment == b.experiment && a.n == b.n && a.rep == b.rep && a.seed == b.seed &&
           a.v_budget == b.v_budget && a.lambda == b.lambda &&
           a.train_loss_final == b.train_loss_final &&
           a.variation_max_row == b.variation_max_row && a.total_l1_norm == b.total_l1_norm &&
           a.risk_l2_sq == b.risk_l2_sq && a.risk_l2 == b.risk_l2 && a.risk_l1 == b.risk_l1 &&
           a.estimate == b.estimate;
}

}  // namespace

TEST_CASE("a 1x1 rate sweep emits exactly one row") {
    SweepConfig cfg = tiny_rate();
    cfg.n_list = {32};
    cfg.replications = 1;
    cfg.train.epochs = 5;
    const SweepResult res = run_rate_sweep(cfg);
    CHECK(res.rows.size() == 1);
    CHECK(res.rows[0].n == 32);
    CHECK(res.rows[0].rep == 0);
    CHECK(res.has_slope == false);  // one n: nothing to fit
}

TEST_CASE("rate sweeps are bit-deterministic and thread-invariant") {
    SweepConfig cfg = tiny_rate();
    const SweepResult a = run_rate_sweep(cfg);
    const SweepResult b = run_rate_sweep(cfg);
    CHECK(a.csv(false) == b.csv(false));

    cfg.threads = 2;
    const SweepResult c = run_rate_sweep(cfg);
    CHECK(a.csv(false) == c.csv(false));
}

TEST_CASE("cells can be regenerated in isolation") {
    SweepConfig full_cfg = tiny_rate();
    const SweepResult full = run_rate_sweep(full_cfg);

    SweepConfig single = full_cfg;
    single.n_list = {64};
    const SweepResult part = run_rate_sweep(single);

    REQUIRE(part.rows.size() == 2);
    int matched = 0;
    for (const auto& row : full.rows) {
        if (row.n != 64) continue;
        CHECK(rows_equal_ignoring_wall(row, part.rows[row.rep]));
        ++matched;
    }
    CHECK(matched == 2);
}

TEST_CASE("csv headers are pinned") {
    SweepConfig cfg = tiny_rate();
    cfg.n_list = {32};
    cfg.replications = 1;
    cfg.train.epochs = 2;
    const SweepResult res = run_rate_sweep(cfg);
    const std::string csv = res.csv();
    CHECK(csv.substr(0, csv.find('\n')) ==
          "experiment,n,replication,seed,v_budget,lambda,train_loss_final,variation_max_row,"
          "total_l1_norm,risk_l2_sq,risk_l2,risk_l1,wall_ms");

    const std::string no_wall = res.csv(false);
    CHECK(no_wall.substr(0, no_wall.find('\n')) ==
          "experiment,n,replication,seed,v_budget,lambda,train_loss_final,variation_max_row,"
          "total_l1_norm,risk_l2_sq,risk_l2,risk_l1");
}

TEST_CASE("summary json carries the documented fields") {
    SweepConfig cfg = tiny_rate();
    cfg.train.epochs = 5;
    const SweepResult res = run_rate_sweep(cfg);
    const auto doc = res.summary_json();
    CHECK(doc.contains("experiment"));
    CHECK(doc.contains("slope"));
    CHECK(doc.contains("intercept"));
    CHECK(doc.contains("r_squared"));
    REQUIRE(doc.contains("per_n"));
    REQUIRE(doc["per_n"].size() == 2);
    CHECK(doc["per_n"][0].contains("mean_sq_risk"));
    CHECK(doc["per_n"][0].contains("median_sq_risk"));
    CHECK(doc["per_n"][0].contains("std"));
}

TEST_CASE("variation sweep: one V degenerates to plain training runs") {
    SweepConfig cfg = tiny_rate();
    cfg.experiment = "variation";
    cfg.n_list = {64};
    cfg.replications = 2;
    cfg.teacher_kind = "net";
    cfg.teacher_arch = {3, 4, 1};
    cfg.teacher_variation = 2.0;
    cfg.V_list = {2.0};
    cfg.init_radius = 2.0;
    cfg.train.epochs = 200;
    cfg.train.learning_rate = 0.1;

    const SweepResult res = run_variation_sweep(cfg);
    REQUIRE(res.rows.size() == 2);
    for (const auto& row : res.rows) CHECK(row.v_budget == 2.0);

    // A budget matching the teacher must beat the constant-zero model.
    const Teacher teacher = make_sweep_teacher(cfg);
    Network zero;
    zero.spec = ArchitectureSpec{{3, 4, 1}};
    zero.weights.emplace_back(4, 4);
    zero.weights.emplace_back(1, 5);
    Rng rng(5150);
    const InputSample test = sample_inputs(teacher, 2000, rng);
    const double zero_risk = risk_l2(zero, teacher, test).squared_value;
    for (const auto& row : res.rows) CHECK(row.risk_l2_sq < zero_risk);
}

TEST_CASE("variation sweep: starving the budget costs risk") {
    SweepConfig cfg = tiny_rate();
    cfg.experiment = "variation";
    cfg.n_list = {96};
    cfg.replications = 2;
    cfg.teacher_kind = "net";
    cfg.teacher_arch = {3, 4, 1};
    cfg.teacher_variation = 2.0;
    cfg.V_list = {0.25, 2.0};
    cfg.init_radius = 2.0;
    cfg.train.epochs = 250;
    cfg.train.learning_rate = 0.1;
    cfg.noise = NoiseLaw::gaussian(0.1);

    const SweepResult res = run_variation_sweep(cfg);
    REQUIRE(res.groups.size() == 2);
    CHECK(res.groups[0].key == 0.25);
    CHECK(res.groups[1].key == 2.0);
    CHECK(res.groups[0].mean_sq_risk > res.groups[1].mean_sq_risk);

    // Projection mode: recorded variation never exceeds the budget.
    for (const auto& row : res.rows) CHECK(row.variation_max_row <= row.v_budget + 1e-9);
}

TEST_CASE("variation sweep requires a single fixed n") {
    SweepConfig cfg = tiny_rate();
    cfg.experiment = "variation";
    cfg.V_list = {1.0};
    CHECK_THROWS_AS(run_variation_sweep(cfg), std::invalid_argument);
}

TEST_CASE("rademacher sweep rows and slope") {
    SweepConfig cfg;
    cfg.experiment = "rademacher";
    cfg.n_list = {64};
    cfg.rad_V = 1.0;
    cfg.rad_d = 3;
    cfg.rad_sign_draws = 6;
    cfg.rad_starts = 4;
    cfg.rad_ascent_steps = 40;
    cfg.base_seed = 99;
    cfg.threads = 1;

    const SweepResult single = run_rademacher_sweep(cfg);
    CHECK(single.rows.size() == 1);
    CHECK(single.has_slope == false);  // a slope needs at least two points

    cfg.n_list = {64, 256};
    const SweepResult two = run_rademacher_sweep(cfg);
    CHECK(two.has_slope);
    for (const auto& row : two.rows) {
        CHECK(row.estimate >= 0.0);
        CHECK(row.estimate <= 1.0);
    }
    const std::string csv = two.csv();
    CHECK(csv.substr(0, csv.find('\n')) == "experiment,n,replication,seed,estimate,wall_ms");
}

TEST_CASE("grad_check sweep stays under the oracle tolerance") {
    SweepConfig cfg;
    cfg.experiment = "grad_check";
    cfg.grad_architectures = {{1, 1, 1}, {2, 3, 1}};
    cfg.grad_pairs = 5;
    cfg.grad_batch = 4;
    cfg.grad_h = 1e-5;
    cfg.base_seed = 12;
    cfg.threads = 1;

    const SweepResult res = run_grad_check(cfg);
    CHECK(res.rows.size() == 10);
    for (const auto& row : res.rows) CHECK(row.estimate < 1e-4);
}

TEST_CASE("config json round trip") {
    const SweepConfig cfg = SweepConfig::fig2_default();
    const auto doc = cfg.to_json();
    const SweepConfig back = SweepConfig::from_json(doc);
    CHECK(back.to_json().dump() == doc.dump());
    CHECK(back.n_list == std::vector<int>{32, 64, 128, 256, 512, 1024, 2048});
    CHECK(back.architecture == std::vector<int>{5, 50, 10, 1});
    CHECK(back.replications == 20);
    CHECK(back.test_size == 10000);
    // Initial total l1 norm: 61 rows at 250/61 each.
    CHECK(back.init_radius * 61.0 == doctest::Approx(250.0));
}

TEST_CASE("config validation rejects malformed sweeps") {
    CHECK_THROWS_AS(SweepConfig::from_json(nlohmann::json{{"experiment", "nope"}}),
                    std::invalid_argument);

    SweepConfig cfg = tiny_rate();
    cfg.n_list = {64, 32};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    CHECK_THROWS_AS(SweepConfig::preset("unknown"), std::invalid_argument);
}
