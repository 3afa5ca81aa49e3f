// Command-line driver: greedy center selection, surrogate fitting, LOOCV shape-parameter
// search, and the condition/error benchmark sweeps, all configured by a flat key = value
// file with flag overrides. Exit codes: 0 success, 2 configuration error, 1 runtime error.
#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "kipt/greedy_select.hpp"
#include "kipt/harness.hpp"
#include "kipt/sampler.hpp"
#include "kipt/surrogate.hpp"

using namespace kipt;

namespace {

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;  // key=value
    std::string seed;
    std::string out;
    int threads = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "key = value configuration file");
    cmd->add_option("-D,--define", args.overrides, "override a config key (key=value)")
        ->type_name("KEY=VALUE");
    cmd->add_option("--seed", args.seed, "base seed (overrides config)");
    cmd->add_option("--out", args.out, "output CSV path (overrides config)");
    cmd->add_option("--threads", args.threads, "worker thread count (0 = default)");
}

ExperimentConfig load_config(const CommonArgs& args) {
    ExperimentConfig cfg;
    if (!args.config_path.empty()) cfg = parse_config_file(args.config_path);
    for (const auto& entry : args.overrides) {
        const auto eq = entry.find('=');
        if (eq == std::string::npos) throw ConfigError("override must be key=value: " + entry);
        apply_config_entry(cfg, entry.substr(0, eq), entry.substr(eq + 1));
    }
    if (!args.seed.empty()) apply_config_entry(cfg, "seed", args.seed);
    if (!args.out.empty()) apply_config_entry(cfg, "out", args.out);
    if (args.threads >= 0) cfg.threads = args.threads;
    return cfg;
}

std::string require_out(const ExperimentConfig& cfg) {
    if (cfg.out_path.empty()) throw ConfigError("an output path is required (--out or out=)");
    return cfg.out_path;
}

PointSet centers_from_config(const ExperimentConfig& cfg, const KernelSpec& spec,
                             const Box& box, int n, const std::string& method,
                             bool* complete = nullptr) {
    if (method == "cholesky") {
        const PointSet cloud = draw_points(cfg.candidate_method, cfg.m_candidates, box,
                                           derive_seed(cfg.base_seed, method, 0));
        const SelectionResult sel = greedy_select(spec, cloud, n, cfg.mode);
        if (complete) *complete = !sel.terminated_early;
        return cloud.subset(sel.indices);
    }
    if (complete) *complete = true;
    return draw_points(method, n, box, derive_seed(cfg.base_seed, method, 0));
}

int cmd_select(const ExperimentConfig& cfg) {
    cfg.validate();
    // selection is data-independent; only dim and box matter, not the test function
    const Box box = resolve_box(cfg, cfg.dim);
    const KernelSpec spec(cfg.family, cfg.epsilons.front(), cfg.dim);
    const int n = cfg.n_values.front();

    const PointSet cloud = draw_points(cfg.candidate_method, cfg.m_candidates, box,
                                       derive_seed(cfg.base_seed, "cholesky", 0));
    const SelectionResult sel = greedy_select(spec, cloud, n, cfg.mode);
    const PointSet centers = cloud.subset(sel.indices);
    emit_points_csv(centers, require_out(cfg));

    double logdet = 0.0;
    for (double g : sel.gains) logdet += g;
    std::printf("selected %zu/%d centers (mode %s, kernel %s, eps %s), logdet %s%s\n",
                sel.indices.size(), n, mode_name(cfg.mode).c_str(),
                family_name(cfg.family).c_str(), format_double(spec.epsilon()).c_str(),
                format_double(logdet).c_str(),
                sel.terminated_early ? ", terminated early" : "");
    return 0;
}

int cmd_fit(const ExperimentConfig& cfg, const std::string& method) {
    cfg.validate();
    const TestFunction fn = resolve_function(cfg);
    const KernelSpec spec(cfg.family, cfg.epsilons.front(), fn.dim);
    const int n = cfg.n_values.front();
    if (cfg.mode == Mode::Hermite && !fn.gradient)
        throw ConfigError("function " + fn.name + " provides no gradient for hermite mode");

    bool complete = true;
    const PointSet centers = centers_from_config(cfg, spec, fn.box, n, method, &complete);
    if (!complete) throw std::runtime_error("selection terminated early; fewer centers");

    Eigen::VectorXd values(centers.size());
    for (int i = 0; i < centers.size(); ++i) values[i] = fn.value(centers.point(i));

    Surrogate s = [&] {
        if (cfg.mode == Mode::Lagrange) return fit_lagrange(spec, centers, values);
        Eigen::MatrixXd grads(centers.size(), fn.dim);
        for (int i = 0; i < centers.size(); ++i)
            grads.row(i) = fn.gradient(centers.point(i)).transpose();
        return fit_hermite(spec, centers, values, grads);
    }();

    double residual = 0.0;
    for (int i = 0; i < centers.size(); ++i)
        residual = std::max(residual, std::abs(evaluate(s, centers.point(i)) - values[i]));

    const PointSet test =
        random_box(cfg.test_points, fn.box, derive_seed(cfg.base_seed, "testset", 0));
    double sq = 0.0;
    for (int q = 0; q < test.size(); ++q) {
        const double diff = evaluate(s, test.point(q)) - fn.value(test.point(q));
        sq += diff * diff;
    }
    const double cond = condition_number(
        cfg.mode == Mode::Hermite ? assemble_hermite(spec, centers, Ordering::PointMajor)
                                  : assemble_lagrange(spec, centers));

    std::printf("fit %s: N=%d cond=%s max_residual=%s rmse=%s\n", fn.name.c_str(),
                centers.size(), format_double(cond).c_str(), format_double(residual).c_str(),
                format_double(std::sqrt(sq / test.size())).c_str());
    if (!cfg.out_path.empty()) emit_points_csv(centers, cfg.out_path);
    return 0;
}

int cmd_loocv(const ExperimentConfig& cfg, const std::string& method, double grid_lo,
              double grid_hi, int grid_count) {
    cfg.validate();
    const TestFunction fn = resolve_function(cfg);
    const KernelSpec spec(cfg.family, cfg.epsilons.front(), fn.dim);
    const int n = cfg.n_values.front();

    const PointSet centers = centers_from_config(cfg, spec, fn.box, n, method);
    Eigen::VectorXd values(centers.size());
    for (int i = 0; i < centers.size(); ++i) values[i] = fn.value(centers.point(i));

    const LoocvReport report =
        select_epsilon(cfg.family, centers, values, eps_log_grid(grid_lo, grid_hi, grid_count));

    if (!cfg.out_path.empty()) {
        std::string csv = "epsilon,loocv_norm\n";
        for (std::size_t i = 0; i < report.eps_grid.size(); ++i)
            csv += format_double(report.eps_grid[i]) + "," + format_double(report.norms[i]) +
                   "\n";
        std::ofstream out(cfg.out_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open for writing: " + cfg.out_path);
        out << csv;
    }
    std::printf("loocv %s: N=%d best_eps=%s best_norm=%s\n", fn.name.c_str(), centers.size(),
                format_double(report.best_eps).c_str(),
                format_double(report.best_norm).c_str());
    return 0;
}

int cmd_sweep(const ExperimentConfig& cfg, bool error_sweep, const std::string& summary_out) {
    cfg.validate();
    const auto records = error_sweep ? run_error_sweep(cfg) : run_condition_sweep(cfg);
    emit_csv(records, require_out(cfg));
    if (!summary_out.empty())
        emit_summary_csv(aggregate(records, {"method", "kernel", "epsilon", "N"}),
                         {"method", "kernel", "epsilon", "N"}, summary_out);
    std::printf("%s: %zu records -> %s\n", error_sweep ? "sweep-error" : "sweep-cond",
                records.size(), cfg.out_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kernel interpolation toolkit: quasi-optimal centers, gradient-enhanced "
                 "surrogates, benchmark sweeps"};
    app.require_subcommand(1);

    CommonArgs select_args, fit_args, loocv_args, cond_args, err_args;
    std::string fit_method = "cholesky", loocv_method = "cholesky";
    std::string cond_summary, err_summary;
    double grid_lo = 0.1, grid_hi = 10.0;
    int grid_count = 25;

    CLI::App* select = app.add_subcommand("select", "greedy center selection to CSV");
    add_common(select, select_args);

    CLI::App* fit = app.add_subcommand("fit", "fit a surrogate and report residual/RMSE");
    add_common(fit, fit_args);
    fit->add_option("--method", fit_method, "center source (cholesky|random|sobol|halton|uniform)");

    CLI::App* loocv = app.add_subcommand("loocv", "LOOCV shape-parameter search");
    add_common(loocv, loocv_args);
    loocv->add_option("--method", loocv_method, "center source");
    loocv->add_option("--grid-lo", grid_lo, "lowest epsilon in the log-spaced grid");
    loocv->add_option("--grid-hi", grid_hi, "highest epsilon in the log-spaced grid");
    loocv->add_option("--grid-count", grid_count, "grid size");

    CLI::App* sweep_cond = app.add_subcommand("sweep-cond", "condition-number sweep to CSV");
    add_common(sweep_cond, cond_args);
    sweep_cond->add_option("--summary-out", cond_summary, "also write aggregated quantiles");

    CLI::App* sweep_error = app.add_subcommand("sweep-error", "RMSE sweep to CSV");
    add_common(sweep_error, err_args);
    sweep_error->add_option("--summary-out", err_summary, "also write aggregated quantiles");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (select->parsed()) return cmd_select(load_config(select_args));
        if (fit->parsed()) return cmd_fit(load_config(fit_args), fit_method);
        if (loocv->parsed())
            return cmd_loocv(load_config(loocv_args), loocv_method, grid_lo, grid_hi,
                             grid_count);
        if (sweep_cond->parsed()) return cmd_sweep(load_config(cond_args), false, cond_summary);
        if (sweep_error->parsed()) return cmd_sweep(load_config(err_args), true, err_summary);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
