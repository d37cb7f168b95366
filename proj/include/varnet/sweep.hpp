#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "varnet/data.hpp"
#include "varnet/risk.hpp"
#include "varnet/train.hpp"

namespace varnet {

/// Everything a sweep needs, read from a single JSON document with every
/// field explicit. The only override outside the document is the output
/// directory (CLI flag).
struct SweepConfig {
    std::string experiment;  // rate | variation | rademacher | grad_check
    std::vector<int> n_list;
    int replications = 20;

    // Teacher.
    std::string teacher_kind = "linear";  // linear | net
    std::vector<double> beta;             // explicit linear coefficients; empty = draw from seed
    int teacher_dim = 5;
    InputLaw input_law = InputLaw::GaussianStandard;
    double box_halfwidth = 1.0;
    std::vector<int> teacher_arch;        // net teacher
    double teacher_variation = 2.0;       // net teacher build radius

    NoiseLaw noise = NoiseLaw::gaussian(1.0);

    // Model and training template (the per-cell seed is derived, not read).
    std::vector<int> architecture;
    double init_radius = 1.0;
    TrainConfig train;
    /// Penalty strength per cell: "fixed" uses train.lambda as-is;
    /// "sqrt_log_n_over_n" uses train.lambda * sqrt(log(n)/n), the order the
    /// theory prescribes, so one coefficient serves every sample size.
    std::string lambda_scale = "fixed";

    std::vector<double> V_list;  // variation sweep only

    // Rademacher sweep.
    double rad_V = 2.0;
    int rad_d = 5;
    int rad_sign_draws = 64;
    int rad_starts = 32;
    int rad_ascent_steps = 200;
    double rad_ascent_lr = 0.1;

    // Gradient check.
    std::vector<std::vector<int>> grad_architectures;
    int grad_pairs = 20;
    int grad_batch = 8;
    double grad_h = 1e-5;

    int test_size = 10000;
    std::uint64_t base_seed = 1;
    int threads = 0;  // 0 = all hardware threads
    std::string out_dir = "results";

    void validate() const;

    static SweepConfig from_json(const nlohmann::json& doc);
    static SweepConfig from_json_file(const std::filesystem::path& path);
    nlohmann::json to_json() const;

    /// The pinned rate-sweep preset: d=5 linear teacher with standard
    /// Gaussian inputs and noise, a [5,50,10,1] network initialized at
    /// total l1 norm 250, sum-rows l1 penalty, n = 2^5..2^11, 20
    /// replications, test size 10^4.
    static SweepConfig fig2_default();

    /// Presets by name ("fig2-default", ...); throws on unknown names.
    static SweepConfig preset(const std::string& name);
};

struct SweepRow {
    std::string experiment;
    int n = 0;
    int rep = 0;
    std::uint64_t seed = 0;
    double v_budget = 0.0;  // projection radius (0 under penalty mode)
    double lambda = 0.0;    // penalty strength (0 under projection mode)
    double train_loss_final = 0.0;
    double variation_max_row = 0.0;
    double total_l1_norm = 0.0;
    double risk_l2_sq = 0.0;
    double risk_l2 = 0.0;
    double risk_l1 = 0.0;
    double estimate = 0.0;  // rademacher / grad-check value
    double wall_ms = 0.0;
};

struct GroupSummary {
    double key = 0.0;  // n (rate, rademacher) or V (variation sweep)
    double mean_sq_risk = 0.0;
    double median_sq_risk = 0.0;
    double std_dev = 0.0;
    double mean_estimate = 0.0;  // rademacher only
};

struct SweepResult {
    enum class Schema { Training, Estimate };

    std::string experiment;
    Schema schema = Schema::Training;
    std::vector<SweepRow> rows;
    std::vector<GroupSummary> groups;
    std::string group_key = "n";
    SlopeFit slope;
    bool has_slope = false;
    std::string note;  // estimator caveats, carried into the summary

    /// Flat CSV; rows are sorted by cell id so the bytes are independent of
    /// scheduling. wall_ms is the last column and can be dropped for
    /// byte-level comparisons.
    std::string csv(bool include_wall = true) const;
    nlohmann::json summary_json() const;

    /// results.csv + summary.json under out_dir (created if needed).
    void write(const std::filesystem::path& out_dir) const;
};

SweepResult run_rate_sweep(const SweepConfig& cfg);
SweepResult run_variation_sweep(const SweepConfig& cfg);
SweepResult run_rademacher_sweep(const SweepConfig& cfg);
SweepResult run_grad_check(const SweepConfig& cfg);

/// Dispatch on cfg.experiment.
SweepResult run_sweep(const SweepConfig& cfg);

/// Builds the teacher a sweep config describes, drawing any unspecified
/// coefficients from the config's base seed.
Teacher make_sweep_teacher(const SweepConfig& cfg);

}  // namespace varnet
