#include "varnet/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "varnet/checkpoint.hpp"
#include "varnet/probe.hpp"

namespace varnet {

namespace {

template <typename T>
T get_or(const nlohmann::json& doc, const char* key, T fallback) {
    if (!doc.contains(key) || doc[key].is_null()) return fallback;
    return doc[key].get<T>();
}

std::string arch_tag(const std::vector<int>& widths) {
    std::string s;
    for (std::size_t i = 0; i < widths.size(); ++i) {
        if (i) s += "x";
        s += std::to_string(widths[i]);
    }
    return s;
}

/// Index-sharded parallel map; each cell writes only its own slot, so the
/// result is independent of scheduling and thread count.
void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }

    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

double wall_ms_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<GroupSummary> summarize_groups(const std::vector<SweepRow>& rows,
                                           const std::function<double(const SweepRow&)>& key_of,
                                           const std::function<double(const SweepRow&)>& value_of) {
    std::vector<GroupSummary> out;
    std::vector<double> keys;
    for (const auto& r : rows) {
        if (std::find(keys.begin(), keys.end(), key_of(r)) == keys.end()) keys.push_back(key_of(r));
    }
    std::sort(keys.begin(), keys.end());
    for (double k : keys) {
        std::vector<double> vals;
        for (const auto& r : rows) {
            if (key_of(r) == k) vals.push_back(value_of(r));
        }
        GroupSummary g;
        g.key = k;
        double mean = 0.0;
        for (double v : vals) mean += v;
        mean /= vals.size();
        g.mean_sq_risk = mean;
        g.mean_estimate = mean;
        std::sort(vals.begin(), vals.end());
        g.median_sq_risk = vals.size() % 2 ? vals[vals.size() / 2]
                                           : 0.5 * (vals[vals.size() / 2 - 1] + vals[vals.size() / 2]);
        double ss = 0.0;
        for (double v : vals) ss += (v - mean) * (v - mean);
        g.std_dev = vals.size() > 1 ? std::sqrt(ss / (vals.size() - 1)) : 0.0;
        out.push_back(g);
    }
    return out;
}

double relative_error(double a, double b) {
    return std::abs(a - b) / std::max({1e-6, std::abs(a), std::abs(b)});
}

}  // namespace

void SweepConfig::validate() const {
    if (experiment != "rate" && experiment != "variation" && experiment != "rademacher" &&
        experiment != "grad_check") {
        throw std::invalid_argument("sweep: unknown experiment '" + experiment + "'");
    }
    if (experiment != "grad_check") {
        if (n_list.empty()) throw std::invalid_argument("sweep: n_list must be non-empty");
        if (!std::is_sorted(n_list.begin(), n_list.end())) {
            throw std::invalid_argument("sweep: n_list must be sorted ascending");
        }
        for (int n : n_list) {
            if (n < 1) throw std::invalid_argument("sweep: n must be positive");
        }
    }
    if (replications < 1) throw std::invalid_argument("sweep: replications must be >= 1");
    if (experiment == "rate" || experiment == "variation") {
        if (architecture.empty()) throw std::invalid_argument("sweep: architecture required");
        ArchitectureSpec{architecture}.validate();
        if (!(init_radius > 0.0)) throw std::invalid_argument("sweep: init_radius must be positive");
        train.validate();
        noise.validate();
        if (test_size < 1) throw std::invalid_argument("sweep: test_size must be positive");
        if (lambda_scale != "fixed" && lambda_scale != "sqrt_log_n_over_n") {
            throw std::invalid_argument("sweep: unknown lambda_scale '" + lambda_scale + "'");
        }
    }
    if (experiment == "variation") {
        if (V_list.empty()) throw std::invalid_argument("sweep: V_list must be non-empty");
        if (n_list.size() != 1) {
            throw std::invalid_argument("sweep: the variation sweep runs at a single fixed n");
        }
        for (double v : V_list) {
            if (!(v > 0.0)) throw std::invalid_argument("sweep: V_list entries must be positive");
        }
    }
    if (experiment == "rademacher") {
        RademacherConfig probe{rad_V, rad_d, n_list.front(), rad_sign_draws, rad_starts,
                               rad_ascent_steps, rad_ascent_lr, base_seed};
        probe.validate();
    }
    if (experiment == "grad_check") {
        if (grad_architectures.empty()) {
            throw std::invalid_argument("sweep: grad_check needs at least one architecture");
        }
        for (const auto& a : grad_architectures) ArchitectureSpec{a}.validate();
        if (grad_pairs < 1 || grad_batch < 1) {
            throw std::invalid_argument("sweep: grad_check pairs and batch must be positive");
        }
        if (!(grad_h > 0.0)) throw std::invalid_argument("sweep: grad_check h must be positive");
    }
}

SweepConfig SweepConfig::from_json(const nlohmann::json& doc) {
    SweepConfig cfg;
    cfg.experiment = get_or<std::string>(doc, "experiment", "");
    cfg.n_list = get_or<std::vector<int>>(doc, "n_list", {});
    cfg.replications = get_or<int>(doc, "replications", cfg.replications);

    if (doc.contains("teacher")) {
        const auto& t = doc["teacher"];
        cfg.teacher_kind = get_or<std::string>(t, "kind", cfg.teacher_kind);
        cfg.beta = get_or<std::vector<double>>(t, "beta", {});
        cfg.teacher_dim = get_or<int>(t, "dim", cfg.teacher_dim);
        cfg.input_law = input_law_from_string(get_or<std::string>(t, "input_law", "gaussian"));
        cfg.box_halfwidth = get_or<double>(t, "box_halfwidth", cfg.box_halfwidth);
        cfg.teacher_arch = get_or<std::vector<int>>(t, "arch", {});
        cfg.teacher_variation = get_or<double>(t, "variation", cfg.teacher_variation);
    }
    if (doc.contains("noise")) {
        const auto& n = doc["noise"];
        cfg.noise.kind = noise_kind_from_string(get_or<std::string>(n, "kind", "gaussian"));
        cfg.noise.tau = get_or<double>(n, "tau", 1.0);
    }

    cfg.architecture = get_or<std::vector<int>>(doc, "architecture", {});
    cfg.init_radius = get_or<double>(doc, "init_radius", cfg.init_radius);

    if (doc.contains("train")) {
        const auto& t = doc["train"];
        cfg.train.loss = loss_kind_from_string(get_or<std::string>(t, "loss", "square_l2"));
        const std::string mode = get_or<std::string>(t, "mode", "projection");
        if (mode == "projection") {
            cfg.train.mode = ConstraintMode::projection(get_or<double>(t, "V", 1.0));
        } else if (mode == "penalty") {
            const std::string style = get_or<std::string>(t, "penalty_style", "sum_rows");
            if (style != "sum_rows" && style != "max_row") {
                throw std::invalid_argument("sweep: unknown penalty_style '" + style + "'");
            }
            cfg.train.mode = ConstraintMode::penalty(
                get_or<double>(t, "lambda", 0.0),
                style == "sum_rows" ? ConstraintMode::PenaltyStyle::SumRows
                                    : ConstraintMode::PenaltyStyle::MaxRow);
        } else {
            throw std::invalid_argument("sweep: unknown constraint mode '" + mode + "'");
        }
        cfg.train.epochs = get_or<int>(t, "epochs", cfg.train.epochs);
        cfg.train.batch_size = get_or<int>(t, "batch_size", cfg.train.batch_size);
        cfg.train.learning_rate = get_or<double>(t, "learning_rate", cfg.train.learning_rate);
        const std::string decay = get_or<std::string>(t, "lr_decay", "none");
        if (decay == "none") {
            cfg.train.lr_decay = TrainConfig::LrDecay::None;
        } else if (decay == "inverse_sqrt") {
            cfg.train.lr_decay = TrainConfig::LrDecay::InverseSqrt;
        } else {
            throw std::invalid_argument("sweep: unknown lr_decay '" + decay + "'");
        }
    }

    cfg.lambda_scale = get_or<std::string>(doc, "lambda_scale", cfg.lambda_scale);
    cfg.V_list = get_or<std::vector<double>>(doc, "V_list", {});

    if (doc.contains("rademacher")) {
        const auto& r = doc["rademacher"];
        cfg.rad_V = get_or<double>(r, "V", cfg.rad_V);
        cfg.rad_d = get_or<int>(r, "d", cfg.rad_d);
        cfg.rad_sign_draws = get_or<int>(r, "sign_draws", cfg.rad_sign_draws);
        cfg.rad_starts = get_or<int>(r, "starts", cfg.rad_starts);
        cfg.rad_ascent_steps = get_or<int>(r, "ascent_steps", cfg.rad_ascent_steps);
        cfg.rad_ascent_lr = get_or<double>(r, "ascent_lr", cfg.rad_ascent_lr);
    }
    if (doc.contains("grad_check")) {
        const auto& g = doc["grad_check"];
        cfg.grad_architectures = get_or<std::vector<std::vector<int>>>(g, "architectures", {});
        cfg.grad_pairs = get_or<int>(g, "pairs", cfg.grad_pairs);
        cfg.grad_batch = get_or<int>(g, "batch", cfg.grad_batch);
        cfg.grad_h = get_or<double>(g, "h", cfg.grad_h);
    }

    cfg.test_size = get_or<int>(doc, "test_size", cfg.test_size);
    cfg.base_seed = get_or<std::uint64_t>(doc, "base_seed", cfg.base_seed);
    cfg.threads = get_or<int>(doc, "threads", cfg.threads);
    cfg.out_dir = get_or<std::string>(doc, "out_dir", cfg.out_dir);

    cfg.validate();
    return cfg;
}

SweepConfig SweepConfig::from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("config: unparseable JSON in " + path.string() + ": " + e.what());
    }
    return from_json(doc);
}

nlohmann::json SweepConfig::to_json() const {
    nlohmann::json t{{"kind", teacher_kind},
                     {"dim", teacher_dim},
                     {"input_law", to_string(input_law)},
                     {"box_halfwidth", box_halfwidth},
                     {"variation", teacher_variation}};
    if (!beta.empty()) t["beta"] = beta;
    if (!teacher_arch.empty()) t["arch"] = teacher_arch;

    nlohmann::json tr{{"loss", to_string(train.loss)},
                      {"epochs", train.epochs},
                      {"batch_size", train.batch_size},
                      {"learning_rate", train.learning_rate},
                      {"lr_decay", train.lr_decay == TrainConfig::LrDecay::None ? "none" : "inverse_sqrt"}};
    if (train.mode.kind == ConstraintMode::Kind::Projection) {
        tr["mode"] = "projection";
        tr["V"] = train.mode.radius;
    } else {
        tr["mode"] = "penalty";
        tr["lambda"] = train.mode.lambda;
        tr["penalty_style"] =
            train.mode.style == ConstraintMode::PenaltyStyle::SumRows ? "sum_rows" : "max_row";
    }

    nlohmann::json doc{{"experiment", experiment},
                       {"n_list", n_list},
                       {"replications", replications},
                       {"teacher", t},
                       {"noise", nlohmann::json{{"kind", to_string(noise.kind)}, {"tau", noise.tau}}},
                       {"architecture", architecture},
                       {"init_radius", init_radius},
                       {"train", tr},
                       {"lambda_scale", lambda_scale},
                       {"test_size", test_size},
                       {"base_seed", base_seed},
                       {"threads", threads},
                       {"out_dir", out_dir}};
    if (!V_list.empty()) doc["V_list"] = V_list;
    if (experiment == "rademacher") {
        doc["rademacher"] = {{"V", rad_V},          {"d", rad_d},
                             {"sign_draws", rad_sign_draws}, {"starts", rad_starts},
                             {"ascent_steps", rad_ascent_steps}, {"ascent_lr", rad_ascent_lr}};
    }
    if (experiment == "grad_check") {
        doc["grad_check"] = {{"architectures", grad_architectures},
                             {"pairs", grad_pairs},
                             {"batch", grad_batch},
                             {"h", grad_h}};
    }
    return doc;
}

SweepConfig SweepConfig::fig2_default() {
    SweepConfig cfg;
    cfg.experiment = "rate";
    cfg.n_list = {32, 64, 128, 256, 512, 1024, 2048};
    cfg.replications = 20;
    cfg.teacher_kind = "linear";
    cfg.teacher_dim = 5;
    cfg.input_law = InputLaw::GaussianStandard;
    cfg.noise = NoiseLaw::gaussian(1.0);
    cfg.architecture = {5, 50, 10, 1};
    // 61 neuron rows initialized at 250/61 each: total l1 norm 250 at start.
    cfg.init_radius = 250.0 / 61.0;
    cfg.train.loss = LossKind::SquareL2;
    // Coefficient for lambda(n) = coef * sqrt(log(n)/n); holds the realized
    // total l1 norm near 250 across the whole n range.
    cfg.train.mode = ConstraintMode::penalty(4.5e-3, ConstraintMode::PenaltyStyle::SumRows);
    cfg.lambda_scale = "sqrt_log_n_over_n";
    cfg.train.epochs = 3000;
    cfg.train.batch_size = 4096;  // >= max n: every run is full-batch
    cfg.train.learning_rate = 0.06;
    cfg.train.lr_decay = TrainConfig::LrDecay::None;
    cfg.test_size = 10000;
    cfg.base_seed = 20250801;
    cfg.out_dir = "results";
    return cfg;
}

SweepConfig SweepConfig::preset(const std::string& name) {
    if (name == "fig2-default") return fig2_default();
    throw std::invalid_argument("unknown preset '" + name + "'");
}

Teacher make_sweep_teacher(const SweepConfig& cfg) {
    Rng rng(derive_seed(cfg.base_seed, "teacher"));
    if (cfg.teacher_kind == "linear") {
        if (!cfg.beta.empty()) return Teacher::linear(cfg.beta, cfg.input_law, cfg.box_halfwidth);
        return Teacher::linear_random(cfg.teacher_dim, rng, cfg.input_law, cfg.box_halfwidth);
    }
    if (cfg.teacher_kind == "net") {
        if (cfg.teacher_arch.empty()) {
            throw std::invalid_argument("sweep: net teacher needs teacher.arch");
        }
        Network net = build_network(ArchitectureSpec{cfg.teacher_arch}, cfg.teacher_variation, rng);
        return Teacher::from_net(std::move(net), cfg.input_law, cfg.box_halfwidth);
    }
    throw std::invalid_argument("sweep: unknown teacher kind '" + cfg.teacher_kind + "'");
}

std::string SweepResult::csv(bool include_wall) const {
    std::ostringstream out;
    out.precision(17);
    if (schema == Schema::Training) {
        out << "experiment,n,replication,seed,v_budget,lambda,train_loss_final,"
               "variation_max_row,total_l1_norm,risk_l2_sq,risk_l2,risk_l1";
    } else {
        out << "experiment,n,replication,seed,estimate";
    }
    if (include_wall) out << ",wall_ms";
    out << "\n";
    for (const auto& r : rows) {
        out << r.experiment << "," << r.n << "," << r.rep << "," << r.seed;
        if (schema == Schema::Training) {
            out << "," << r.v_budget << "," << r.lambda << "," << r.train_loss_final << ","
                << r.variation_max_row << "," << r.total_l1_norm << "," << r.risk_l2_sq << ","
                << r.risk_l2 << "," << r.risk_l1;
        } else {
            out << "," << r.estimate;
        }
        if (include_wall) out << "," << r.wall_ms;
        out << "\n";
    }
    return out.str();
}

nlohmann::json SweepResult::summary_json() const {
    nlohmann::json per_group = nlohmann::json::array();
    for (const auto& g : groups) {
        if (schema == Schema::Training) {
            per_group.push_back({{group_key, g.key},
                                 {"mean_sq_risk", g.mean_sq_risk},
                                 {"median_sq_risk", g.median_sq_risk},
                                 {"std", g.std_dev}});
        } else {
            per_group.push_back({{group_key, g.key}, {"estimate", g.mean_estimate}});
        }
    }
    nlohmann::json doc{{"experiment", experiment},
                       {"slope", has_slope ? nlohmann::json(slope.slope) : nlohmann::json()},
                       {"intercept", has_slope ? nlohmann::json(slope.intercept) : nlohmann::json()},
                       {"r_squared", has_slope ? nlohmann::json(slope.r_squared) : nlohmann::json()},
                       {"per_n", per_group}};
    if (!note.empty()) doc["note"] = note;
    return doc;
}

void SweepResult::write(const std::filesystem::path& out_dir) const {
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream out(out_dir / "results.csv");
        if (!out) throw std::runtime_error("sweep: cannot write " + (out_dir / "results.csv").string());
        out << csv();
    }
    {
        std::ofstream out(out_dir / "summary.json");
        if (!out) throw std::runtime_error("sweep: cannot write " + (out_dir / "summary.json").string());
        out << summary_json().dump(2) << "\n";
    }
}

namespace {

/// One trained cell shared by the rate and variation sweeps. The dataset
/// seed is passed separately so the variation sweep can train every V on
/// the same replication data.
SweepRow run_training_cell(const SweepConfig& cfg, const Teacher& teacher, const std::string& tag,
                           int n, int rep, std::uint64_t cell_seed, std::uint64_t data_seed,
                           const TrainConfig& tmpl, double init_radius) {
    const auto t0 = std::chrono::steady_clock::now();

    Rng data_rng(data_seed);
    Dataset ds = sample_dataset(teacher, n, cfg.noise, data_rng);
    ds.prov.seed = cell_seed;

    Rng init_rng(derive_seed(cell_seed, "init"));
    Network net0 = build_network(ArchitectureSpec{cfg.architecture}, init_radius, init_rng);

    TrainConfig tc = tmpl;
    tc.seed = derive_seed(cell_seed, "train");
    if (tc.mode.kind == ConstraintMode::Kind::Penalty && cfg.lambda_scale == "sqrt_log_n_over_n") {
        tc.mode.lambda *= std::sqrt(std::log(static_cast<double>(n)) / n);
    }
    auto [model, trace] = train(net0, ds, tc);

    Rng test_rng(derive_seed(cell_seed, "test"));
    const InputSample test = sample_inputs(teacher, cfg.test_size, test_rng);
    const RiskEstimate r2 = risk_l2(model, teacher, test);

    Rng noise_rng(derive_seed(cell_seed, "test-noise"));
    std::vector<double> draws(cfg.test_size);
    for (double& e : draws) e = cfg.noise.sample(noise_rng);
    const RiskEstimate r1 = risk_l1(model, teacher, cfg.noise, test, draws);

    const VariationReport var = variation(model);

    SweepRow row;
    row.experiment = tag;
    row.n = n;
    row.rep = rep;
    row.seed = cell_seed;
    row.v_budget = tc.mode.kind == ConstraintMode::Kind::Projection ? tc.mode.radius : 0.0;
    row.lambda = tc.mode.kind == ConstraintMode::Kind::Penalty ? tc.mode.lambda : 0.0;
    row.train_loss_final = trace.epoch_loss.back();
    row.variation_max_row = var.max_norm;
    row.total_l1_norm = var.sum_norms;
    row.risk_l2_sq = r2.squared_value;
    row.risk_l2 = r2.value;
    row.risk_l1 = r1.value;
    row.wall_ms = wall_ms_since(t0);
    return row;
}

}  // namespace

SweepResult run_rate_sweep(const SweepConfig& cfg) {
    cfg.validate();
    if (cfg.experiment != "rate") throw std::invalid_argument("run_rate_sweep: experiment must be 'rate'");
    const Teacher teacher = make_sweep_teacher(cfg);

    struct Cell {
        int n;
        int rep;
    };
    std::vector<Cell> cells;
    for (int n : cfg.n_list) {
        for (int rep = 0; rep < cfg.replications; ++rep) cells.push_back({n, rep});
    }

    SweepResult res;
    res.experiment = "rate";
    res.schema = SweepResult::Schema::Training;
    res.rows.resize(cells.size());
    parallel_for(static_cast<int>(cells.size()), cfg.threads, [&](int i) {
        const auto [n, rep] = cells[i];
        const std::uint64_t cell_seed = derive_seed(cfg.base_seed, "rate", n, rep);
        res.rows[i] = run_training_cell(cfg, teacher, "rate", n, rep, cell_seed,
                                        derive_seed(cell_seed, "data"), cfg.train, cfg.init_radius);
    });

    res.groups = summarize_groups(
        res.rows, [](const SweepRow& r) { return static_cast<double>(r.n); },
        [](const SweepRow& r) { return r.risk_l2_sq; });
    res.group_key = "n";
    std::vector<std::pair<double, double>> pts;
    for (const auto& g : res.groups) pts.emplace_back(g.key, g.mean_sq_risk);
    if (pts.size() >= 2) {
        res.slope = fit_loglog_slope(pts);
        res.has_slope = true;
    }
    return res;
}

SweepResult run_variation_sweep(const SweepConfig& cfg) {
    cfg.validate();
    if (cfg.experiment != "variation") {
        throw std::invalid_argument("run_variation_sweep: experiment must be 'variation'");
    }
    const Teacher teacher = make_sweep_teacher(cfg);
    const int n = cfg.n_list.front();

    struct Cell {
        int v_idx;
        int rep;
    };
    std::vector<Cell> cells;
    for (std::size_t v = 0; v < cfg.V_list.size(); ++v) {
        for (int rep = 0; rep < cfg.replications; ++rep) cells.push_back({static_cast<int>(v), rep});
    }

    SweepResult res;
    res.experiment = "variation";
    res.schema = SweepResult::Schema::Training;
    res.rows.resize(cells.size());
    parallel_for(static_cast<int>(cells.size()), cfg.threads, [&](int i) {
        const auto [v_idx, rep] = cells[i];
        const double V = cfg.V_list[v_idx];
        const std::uint64_t cell_seed = derive_seed(cfg.base_seed, "variation", n, rep, v_idx);
        // Dataset seed omits the V index: every budget trains on the same
        // replication data, so the U-shape is a clean comparison.
        const std::uint64_t data_seed = derive_seed(cfg.base_seed, "variation-data", n, rep);
        TrainConfig tc = cfg.train;
        tc.mode = ConstraintMode::projection(V);
        SweepRow row = run_training_cell(cfg, teacher, "variation", n, rep, cell_seed, data_seed, tc,
                                         std::min(cfg.init_radius, V));
        row.v_budget = V;
        res.rows[i] = row;
    });

    res.groups = summarize_groups(
        res.rows, [](const SweepRow& r) { return r.v_budget; },
        [](const SweepRow& r) { return r.risk_l2_sq; });
    res.group_key = "v";
    return res;
}

SweepResult run_rademacher_sweep(const SweepConfig& cfg) {
    cfg.validate();
    if (cfg.experiment != "rademacher") {
        throw std::invalid_argument("run_rademacher_sweep: experiment must be 'rademacher'");
    }

    SweepResult res;
    res.experiment = "rademacher";
    res.schema = SweepResult::Schema::Estimate;
    res.note = "multi-start ascent lower estimate of the expected supremum";
    res.rows.resize(cfg.n_list.size());
    parallel_for(static_cast<int>(cfg.n_list.size()), cfg.threads, [&](int i) {
        const auto t0 = std::chrono::steady_clock::now();
        const int n = cfg.n_list[i];
        RademacherConfig probe{cfg.rad_V,
                               cfg.rad_d,
                               n,
                               cfg.rad_sign_draws,
                               cfg.rad_starts,
                               cfg.rad_ascent_steps,
                               cfg.rad_ascent_lr,
                               derive_seed(cfg.base_seed, "rademacher", n)};
        SweepRow row;
        row.experiment = "rademacher";
        row.n = n;
        row.rep = 0;
        row.seed = probe.seed;
        row.estimate = rademacher_estimate(probe);
        row.wall_ms = wall_ms_since(t0);
        res.rows[i] = row;
    });

    res.groups = summarize_groups(
        res.rows, [](const SweepRow& r) { return static_cast<double>(r.n); },
        [](const SweepRow& r) { return r.estimate; });
    res.group_key = "n";
    if (res.rows.size() >= 2) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& r : res.rows) pts.emplace_back(r.n, r.estimate);
        res.slope = fit_loglog_slope(pts);
        res.has_slope = true;
    }
    return res;
}

SweepResult run_grad_check(const SweepConfig& cfg) {
    cfg.validate();
    if (cfg.experiment != "grad_check") {
        throw std::invalid_argument("run_grad_check: experiment must be 'grad_check'");
    }

    struct Cell {
        int arch_idx;
        int pair;
    };
    std::vector<Cell> cells;
    for (std::size_t a = 0; a < cfg.grad_architectures.size(); ++a) {
        for (int p = 0; p < cfg.grad_pairs; ++p) cells.push_back({static_cast<int>(a), p});
    }

    SweepResult res;
    res.experiment = "grad_check";
    res.schema = SweepResult::Schema::Estimate;
    res.rows.resize(cells.size());
    parallel_for(static_cast<int>(cells.size()), cfg.threads, [&](int i) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto [arch_idx, pair] = cells[i];
        const auto& widths = cfg.grad_architectures[arch_idx];
        const std::uint64_t cell_seed = derive_seed(cfg.base_seed, "grad-check", arch_idx, pair);

        Rng rng(cell_seed);
        const Network net = build_network(ArchitectureSpec{widths}, 0.5 + 2.0 * rng.uniform01(), rng);
        const int d = net.input_dim();
        std::vector<double> xs(static_cast<std::size_t>(cfg.grad_batch) * d), ys(cfg.grad_batch);
        for (double& v : xs) v = rng.gaussian();
        for (double& v : ys) v = rng.gaussian();
        const Batch batch{xs, ys, d};

        const GradStack analytic = gradient(net, batch, cfg.train.loss);
        const GradStack numeric = finite_diff_gradient(net, batch, cfg.train.loss, cfg.grad_h);
        double worst = 0.0;
        for (std::size_t l = 0; l < analytic.size(); ++l) {
            const auto af = analytic[l].flat();
            const auto nf = numeric[l].flat();
            for (std::size_t j = 0; j < af.size(); ++j) {
                worst = std::max(worst, relative_error(af[j], nf[j]));
            }
        }

        SweepRow row;
        row.experiment = "grad_check:" + arch_tag(widths);
        row.n = cfg.grad_batch;
        row.rep = pair;
        row.seed = cell_seed;
        row.estimate = worst;
        row.wall_ms = wall_ms_since(t0);
        res.rows[i] = row;
    });

    res.groups = summarize_groups(
        res.rows, [](const SweepRow&) { return 0.0; },
        [](const SweepRow& r) { return r.estimate; });
    res.group_key = "all";
    return res;
}

SweepResult run_sweep(const SweepConfig& cfg) {
    if (cfg.experiment == "rate") return run_rate_sweep(cfg);
    if (cfg.experiment == "variation") return run_variation_sweep(cfg);
    if (cfg.experiment == "rademacher") return run_rademacher_sweep(cfg);
    if (cfg.experiment == "grad_check") return run_grad_check(cfg);
    throw std::invalid_argument("sweep: unknown experiment '" + cfg.experiment + "'");
}

}  // namespace varnet
