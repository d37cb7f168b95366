// varnet: variation-constrained network training and risk experiments.
//
// Subcommands run a sweep described by a JSON config and write results.csv
// plus summary.json to the output directory. Failures exit nonzero with a
// single machine-readable JSON error line on stderr.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "varnet/checkpoint.hpp"
#include "varnet/sweep.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string preset;
    std::string out_dir;
    int threads = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool allow_preset) {
    auto* cfg = cmd->add_option("--config", args.config_path, "JSON sweep config");
    if (allow_preset) {
        auto* preset = cmd->add_option("--preset", args.preset, "named built-in preset (fig2-default)");
        cfg->excludes(preset);
    } else {
        cfg->required();
    }
    cmd->add_option("--out", args.out_dir, "output directory (overrides the config)");
    cmd->add_option("--threads", args.threads, "worker threads (0 = all cores)");
}

varnet::SweepConfig load_config(const CommonArgs& args, const std::string& expected_experiment) {
    varnet::SweepConfig cfg;
    if (!args.preset.empty()) {
        cfg = varnet::SweepConfig::preset(args.preset);
    } else if (!args.config_path.empty()) {
        cfg = varnet::SweepConfig::from_json_file(args.config_path);
    } else {
        throw std::invalid_argument("either --config or --preset is required");
    }
    if (cfg.experiment != expected_experiment) {
        throw std::invalid_argument("config experiment is '" + cfg.experiment + "', subcommand expects '" +
                                    expected_experiment + "'");
    }
    if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
    if (args.threads >= 0) cfg.threads = args.threads;
    return cfg;
}

int run_and_write(const varnet::SweepConfig& cfg) {
    const varnet::SweepResult res = varnet::run_sweep(cfg);
    res.write(cfg.out_dir);
    std::cout << res.summary_json().dump(2) << "\n";
    std::cout << "wrote " << (std::filesystem::path(cfg.out_dir) / "results.csv").string() << "\n";
    return 0;
}

// Single training run: builds the teacher, dataset and network from the
// same config schema, trains once, and writes checkpoint + trace.
int run_single_train(const varnet::SweepConfig& cfg) {
    using namespace varnet;
    const Teacher teacher = make_sweep_teacher(cfg);
    const int n = cfg.n_list.front();
    const std::uint64_t cell_seed = derive_seed(cfg.base_seed, "train-once", n, 0);

    Rng data_rng(derive_seed(cell_seed, "data"));
    Dataset ds = sample_dataset(teacher, n, cfg.noise, data_rng);
    ds.prov.seed = cell_seed;

    Rng init_rng(derive_seed(cell_seed, "init"));
    Network net0 = build_network(ArchitectureSpec{cfg.architecture}, cfg.init_radius, init_rng);

    TrainConfig tc = cfg.train;
    tc.seed = derive_seed(cell_seed, "train");
    auto [model, trace] = train(net0, ds, tc);

    Rng test_rng(derive_seed(cell_seed, "test"));
    const InputSample test = sample_inputs(teacher, cfg.test_size, test_rng);
    const RiskEstimate r2 = risk_l2(model, teacher, test);
    const VariationReport var = variation(model);

    std::filesystem::create_directories(cfg.out_dir);
    save_network(model, std::filesystem::path(cfg.out_dir) / "checkpoint.json");
    {
        std::ofstream out(std::filesystem::path(cfg.out_dir) / "trace.csv");
        out << trace.to_csv();
    }
    nlohmann::json summary{{"n", n},
                           {"seed", cell_seed},
                           {"train_loss_final", trace.epoch_loss.back()},
                           {"variation_max_row", var.max_norm},
                           {"total_l1_norm", var.sum_norms},
                           {"risk_l2_sq", r2.squared_value},
                           {"risk_l2", r2.value},
                           {"wall_seconds", trace.wall_seconds}};
    {
        std::ofstream out(std::filesystem::path(cfg.out_dir) / "summary.json");
        out << summary.dump(2) << "\n";
    }
    std::cout << summary.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"variation-constrained network experiments"};
    app.require_subcommand(1);

    CommonArgs rate_args, var_args, rad_args, grad_args, train_args;
    std::string preset_name;

    auto* rate = app.add_subcommand("rate-sweep", "risk decay vs sample size");
    add_common(rate, rate_args, true);
    auto* variation = app.add_subcommand("variation-sweep", "risk vs constraint radius at fixed n");
    add_common(variation, var_args, false);
    auto* rademacher = app.add_subcommand("rademacher", "single-layer complexity estimate vs n");
    add_common(rademacher, rad_args, false);
    auto* grad = app.add_subcommand("grad-check", "backprop vs finite differences");
    add_common(grad, grad_args, false);
    auto* train_cmd = app.add_subcommand("train", "single training run with checkpoint and trace");
    add_common(train_cmd, train_args, false);
    auto* preset_cmd = app.add_subcommand("preset", "print a named config preset as JSON");
    preset_cmd->add_option("name", preset_name, "preset name")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (rate->parsed()) return run_and_write(load_config(rate_args, "rate"));
        if (variation->parsed()) return run_and_write(load_config(var_args, "variation"));
        if (rademacher->parsed()) return run_and_write(load_config(rad_args, "rademacher"));
        if (grad->parsed()) return run_and_write(load_config(grad_args, "grad_check"));
        if (train_cmd->parsed()) return run_single_train(load_config(train_args, "rate"));
        if (preset_cmd->parsed()) {
            std::cout << varnet::SweepConfig::preset(preset_name).to_json().dump(2) << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << nlohmann::json{{"error", e.what()}}.dump() << "\n";
        return 1;
    }
    return 0;
}
