#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "kipt/design_matrix.hpp"
#include "kipt/point_set.hpp"
#include "kipt/test_functions.hpp"

namespace kipt {

/// Benchmark-sweep configuration. Field names mirror the config-file keys.
struct ExperimentConfig {
    Family family = Family::Gaussian;
    std::vector<double> epsilons = {3.0};
    Mode mode = Mode::Lagrange;
    std::vector<std::string> methods = {"cholesky", "random", "sobol", "halton"};
    std::vector<int> n_values = {100};
    int m_candidates = 10000;
    int trials = 50;
    std::uint64_t base_seed = 1;
    std::string function = "franke";
    int test_points = 1000;  ///< Q
    /// Optional box override; empty means the test function's natural domain. A single
    /// entry is broadcast across dimensions.
    std::vector<double> box_lower, box_upper;
    std::string out_path;

    int dim = 2;             ///< for corner_peak / elliptic
    double sigma = 1.0;      ///< elliptic amplitude
    int quad_panels = 1024;  ///< elliptic quadrature resolution
    std::string candidate_method = "random";  ///< cloud fed to the greedy selector
    bool timing = false;     ///< wall_s is 0 unless enabled, keeping CSV bytes stable
    int threads = 0;         ///< 0 = library default

    void validate() const;
};

/// One sweep observation. cond/rmse may hold infinity sentinels; failed marks trials
/// whose selection or fit did not complete.
struct ResultRecord {
    std::string method;
    std::string kernel;
    double epsilon = 0.0;
    int n = 0;
    int trial = 0;
    std::uint64_t seed = 0;
    double cond = 0.0;
    double rmse = std::numeric_limits<double>::quiet_NaN();
    bool failed = false;
    double wall_s = 0.0;
};

/// Aggregated statistics for one group of records. Quantiles use linear interpolation
/// on the order statistics at index (n-1)p; failed records are excluded from the
/// statistics and counted separately.
struct SummaryRow {
    std::string method;
    std::string kernel;
    double epsilon = 0.0;
    int n = 0;
    int count = 0;
    int failures = 0;
    double cond_mean, cond_q20, cond_q80;
    double rmse_mean, rmse_q20, rmse_q80;
};

/// A named scalar field with optional analytic gradient, plus its natural domain.
struct TestFunction {
    std::string name;
    int dim = 1;
    Box box = Box::cube(0.0, 1.0, 1);
    std::function<double(Eigen::Ref<const Eigen::VectorXd>)> value;
    std::function<Eigen::VectorXd(Eigen::Ref<const Eigen::VectorXd>)> gradient;  // may be empty
};

/// Registry lookup: franke, corner_peak, rastrigin2, friedman5, elliptic. Configurable
/// dimensions and the elliptic parameters come from the config.
TestFunction resolve_function(const ExperimentConfig& cfg);

/// The box implied by the config at the given dimension: explicit bounds win (scalars
/// broadcast), then the fallback, then the unit cube.
Box resolve_box(const ExperimentConfig& cfg, int dim, const Box* fallback = nullptr);

/// Draw `count` points by a named direct method: random | sobol | halton | uniform.
/// uniform takes the first `count` points of the smallest tensor grid of that size.
PointSet draw_points(const std::string& method, int count, const Box& box,
                     std::uint64_t seed);

/// Stable seed for (base, tag, trial): FNV-1a over the tag mixed with the trial index.
/// Method draws use tag = method name; the shared test set uses tag = "testset".
std::uint64_t derive_seed(std::uint64_t base, std::string_view tag, int trial);

/// Condition numbers of the design matrix per (method, epsilon, N, trial).
std::vector<ResultRecord> run_condition_sweep(const ExperimentConfig& cfg);

/// Fit-and-test RMSE sweep; also records the condition number of each design matrix.
std::vector<ResultRecord> run_error_sweep(const ExperimentConfig& cfg);
std::vector<ResultRecord> run_error_sweep(const ExperimentConfig& cfg, const TestFunction& fn);

/// Group records by the named keys (subset of {method, kernel, epsilon, N}).
std::vector<SummaryRow> aggregate(const std::vector<ResultRecord>& records,
                                  const std::vector<std::string>& group_keys);

/// Linear-interpolation quantile at index (n-1)p over a sorted copy of the values.
double quantile(std::vector<double> values, double p);

/// Shortest round-trip decimal for a double; infinities and NaN become "inf"/"nan".
std::string format_double(double x);

/// RFC-4180-style CSV with the fixed sweep schema:
///   method,kernel,epsilon,N,trial,seed,cond,rmse,failed,wall_s
void emit_csv(const std::vector<ResultRecord>& rows, const std::string& path);
std::string to_csv(const std::vector<ResultRecord>& rows);
std::vector<ResultRecord> parse_result_csv(std::istream& in);

void emit_summary_csv(const std::vector<SummaryRow>& rows,
                      const std::vector<std::string>& group_keys, const std::string& path);

/// Serialize a point set (header x1..xd, one row per point).
void emit_points_csv(const PointSet& points, const std::string& path);

/// Flat key = value configuration file; '#' starts a comment, unknown keys are errors.
ExperimentConfig parse_config_file(const std::string& path);
void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value);

}  // namespace kipt
