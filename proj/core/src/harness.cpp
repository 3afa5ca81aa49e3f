#include "kipt/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "kipt/greedy_select.hpp"
#include "kipt/sampler.hpp"
#include "kipt/surrogate.hpp"

namespace kipt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::set<std::string>& known_methods() {
    static const std::set<std::string> methods = {"cholesky", "random", "sobol", "halton",
                                                  "uniform"};
    return methods;
}

const std::set<std::string>& known_functions() {
    static const std::set<std::string> fns = {"franke", "corner_peak", "rastrigin2",
                                              "friedman5", "elliptic"};
    return fns;
}

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

void apply_threads(int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

}  // namespace

void ExperimentConfig::validate() const {
    if (trials < 1) throw ConfigError("trials must be at least 1");
    if (test_points < 1) throw ConfigError("Q must be at least 1");
    if (epsilons.empty()) throw ConfigError("epsilon list must be nonempty");
    for (double e : epsilons)
        if (!(e > 0.0)) throw ConfigError("epsilon values must be positive");
    if (n_values.empty()) throw ConfigError("N list must be nonempty");
    for (int n : n_values)
        if (n < 1) throw ConfigError("N values must be positive");
    const int n_max = *std::max_element(n_values.begin(), n_values.end());
    if (m_candidates < n_max) throw ConfigError("M must be at least max(N)");
    if (methods.empty()) throw ConfigError("method list must be nonempty");
    for (const auto& m : methods)
        if (!known_methods().count(m)) throw ConfigError("unknown method: " + m);
    if (!known_methods().count(candidate_method) || candidate_method == "cholesky")
        throw ConfigError("unknown candidate sampler: " + candidate_method);
    if (!known_functions().count(function)) throw ConfigError("unknown function: " + function);
    if (dim < 1) throw ConfigError("dim must be positive");
    if (box_lower.size() != box_upper.size())
        throw ConfigError("box_lower and box_upper must have matching lengths");
}

Box resolve_box(const ExperimentConfig& cfg, int dim, const Box* fallback) {
    if (!cfg.box_lower.empty()) {
        auto expand = [dim](const std::vector<double>& v, const char* what) {
            if (v.size() == 1) return Eigen::VectorXd::Constant(dim, v[0]).eval();
            if (static_cast<int>(v.size()) != dim)
                throw ConfigError(std::string(what) + " must have 1 or dim entries");
            return Eigen::Map<const Eigen::VectorXd>(v.data(), dim).eval();
        };
        return Box(expand(cfg.box_lower, "box_lower"), expand(cfg.box_upper, "box_upper"));
    }
    if (fallback) return *fallback;
    return Box::cube(0.0, 1.0, dim);
}

TestFunction resolve_function(const ExperimentConfig& cfg) {
    TestFunction fn;
    fn.name = cfg.function;
    if (cfg.function == "franke") {
        fn.dim = 2;
        fn.box = Box::cube(0.0, 1.0, 2);
        fn.value = [](Eigen::Ref<const Eigen::VectorXd> z) { return franke(z); };
    } else if (cfg.function == "corner_peak") {
        const Eigen::VectorXd w = corner_peak_weights(cfg.dim);
        fn.dim = cfg.dim;
        fn.box = Box::cube(0.0, 1.0, cfg.dim);
        fn.value = [w](Eigen::Ref<const Eigen::VectorXd> z) { return corner_peak(z, w); };
        fn.gradient = [w](Eigen::Ref<const Eigen::VectorXd> z) {
            Eigen::VectorXd g;
            corner_peak(z, w, &g);
            return g;
        };
    } else if (cfg.function == "rastrigin2") {
        fn.dim = 2;
        fn.box = Box::cube(-4.0, 4.0, 2);
        fn.value = [](Eigen::Ref<const Eigen::VectorXd> z) { return rastrigin2(z); };
        fn.gradient = [](Eigen::Ref<const Eigen::VectorXd> z) {
            Eigen::VectorXd g;
            rastrigin2(z, &g);
            return g;
        };
    } else if (cfg.function == "friedman5") {
        fn.dim = 5;
        fn.box = Box::cube(0.0, 1.0, 5);
        fn.value = [](Eigen::Ref<const Eigen::VectorXd> z) { return friedman5(z); };
        fn.gradient = [](Eigen::Ref<const Eigen::VectorXd> z) {
            Eigen::VectorXd g;
            friedman5(z, &g);
            return g;
        };
    } else if (cfg.function == "elliptic") {
        EllipticConfig ec{cfg.dim, cfg.sigma, cfg.quad_panels};
        ec.validate();
        fn.dim = cfg.dim;
        fn.box = Box::cube(-1.0, 1.0, cfg.dim);
        fn.value = [ec](Eigen::Ref<const Eigen::VectorXd> z) { return elliptic_qoi(z, ec); };
    } else {
        throw ConfigError("unknown function: " + cfg.function);
    }
    fn.box = resolve_box(cfg, fn.dim, &fn.box);
    return fn;
}

std::uint64_t derive_seed(std::uint64_t base, std::string_view tag, int trial) {
    std::uint64_t h = 14695981039346656037ull;  // FNV-1a 64-bit offset basis
    for (const char ch : tag) {
        h ^= static_cast<unsigned char>(ch);
        h *= 1099511628211ull;
    }
    h ^= static_cast<std::uint64_t>(trial) + 0x9E3779B97F4A7C15ull;
    h *= 1099511628211ull;
    return h ^ base;
}

PointSet draw_points(const std::string& method, int count, const Box& box,
                     std::uint64_t seed) {
    if (method == "random") return random_box(count, box, seed);
    if (method == "sobol") return sobol(count, box);
    if (method == "halton") return halton(count, box);
    if (method == "uniform") {
        int per_dim = 2;
        auto total = [&](int p) {
            double t = 1.0;
            for (int r = 0; r < box.dim(); ++r) t *= p;
            return t;
        };
        while (total(per_dim) < count) ++per_dim;
        const PointSet grid = grid_points(per_dim, box);
        std::vector<int> head(count);
        for (int i = 0; i < count; ++i) head[i] = i;
        return grid.subset(head);
    }
    throw ConfigError("unknown method: " + method);
}

namespace {

struct TrialOutcome {
    PointSet centers;
    bool complete;  // selection produced the requested count
};

// Centers used by `method` at size n for this trial. The greedy method selects from a
// candidate cloud drawn with the same trial seed; direct methods draw n points.
TrialOutcome centers_for(const ExperimentConfig& cfg, const std::string& method,
                         const KernelSpec& spec, const Box& box, int n, std::uint64_t seed) {
    if (method != "cholesky") return {draw_points(method, n, box, seed), true};
    const PointSet cloud = draw_points(cfg.candidate_method, cfg.m_candidates, box, seed);
    const SelectionResult sel = greedy_select(spec, cloud, n, cfg.mode);
    return {cloud.subset(sel.indices), !sel.terminated_early};
}

DesignMatrix assemble(const KernelSpec& spec, const PointSet& centers, Mode mode) {
    return mode == Mode::Hermite ? assemble_hermite(spec, centers, Ordering::PointMajor)
                                 : assemble_lagrange(spec, centers);
}

// Shared sweep skeleton: fills one record per (method, epsilon, N, trial), emitting rows
// ordered method -> epsilon -> N -> trial. `measure` computes cond/rmse/failed for given
// centers. Where prefixing is exact (greedy selections nest; random/sobol/halton draws
// nest), one selection per (epsilon, trial) serves every N; the uniform grid and timed
// runs compute each record standalone. Numerical outputs are identical either way.
template <typename Measure>
std::vector<ResultRecord> run_sweep(const ExperimentConfig& cfg, const Box& box, int dim,
                                    const Measure& measure) {
    std::vector<ResultRecord> records;
    const int n_max = *std::max_element(cfg.n_values.begin(), cfg.n_values.end());

    for (const std::string& method : cfg.methods) {
        const bool share = !cfg.timing && method != "uniform";
        for (const double eps : cfg.epsilons) {
            const KernelSpec spec(cfg.family, eps, dim);
            // grid[n_index][trial]
            std::vector<std::vector<ResultRecord>> grid(
                cfg.n_values.size(), std::vector<ResultRecord>(cfg.trials));
            for (int trial = 0; trial < cfg.trials; ++trial) {
                const std::uint64_t seed = derive_seed(cfg.base_seed, method, trial);
                TrialOutcome shared{PointSet(Eigen::MatrixXd(dim, 0), box), false};
                if (share) shared = centers_for(cfg, method, spec, box, n_max, seed);
                for (std::size_t ni = 0; ni < cfg.n_values.size(); ++ni) {
                    const int n = cfg.n_values[ni];
                    ResultRecord rec;
                    rec.method = method;
                    rec.kernel = family_name(cfg.family);
                    rec.epsilon = eps;
                    rec.n = n;
                    rec.trial = trial;
                    rec.seed = seed;
                    const double t0 = cfg.timing ? now_seconds() : 0.0;
                    bool complete = true;
                    PointSet centers(Eigen::MatrixXd(dim, 0), box);
                    if (share) {
                        const int have = std::min(n, shared.centers.size());
                        std::vector<int> head(have);
                        for (int i = 0; i < have; ++i) head[i] = i;
                        centers = shared.centers.subset(head);
                        complete = have == n;
                    } else {
                        TrialOutcome out = centers_for(cfg, method, spec, box, n, seed);
                        centers = std::move(out.centers);
                        complete = out.complete && centers.size() == n;
                    }
                    measure(spec, centers, trial, complete, rec);
                    if (cfg.timing) rec.wall_s = now_seconds() - t0;
                    grid[ni][trial] = std::move(rec);
                }
            }
            for (std::size_t ni = 0; ni < cfg.n_values.size(); ++ni)
                for (int trial = 0; trial < cfg.trials; ++trial)
                    records.push_back(std::move(grid[ni][trial]));
        }
    }
    return records;
}

}  // namespace

std::vector<ResultRecord> run_condition_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    apply_threads(cfg.threads);
    const auto measure = [&cfg](const KernelSpec& spec, const PointSet& centers, int /*trial*/,
                                bool complete, ResultRecord& rec) {
        if (centers.size() == 0) {
            rec.failed = true;
            rec.cond = kInf;
            return;
        }
        rec.cond = condition_number(assemble(spec, centers, cfg.mode));
        rec.failed = !complete;
    };
    const TestFunction fn = resolve_function(cfg);
    return run_sweep(cfg, fn.box, fn.dim, measure);
}

std::vector<ResultRecord> run_error_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    return run_error_sweep(cfg, resolve_function(cfg));
}

std::vector<ResultRecord> run_error_sweep(const ExperimentConfig& cfg, const TestFunction& fn) {
    cfg.validate();
    apply_threads(cfg.threads);
    if (cfg.mode == Mode::Hermite && !fn.gradient)
        throw ConfigError("function " + fn.name + " provides no gradient for hermite mode");

    const auto measure = [&cfg, &fn](const KernelSpec& spec, const PointSet& centers, int trial,
                                     bool complete, ResultRecord& rec) {
        rec.rmse = kInf;
        if (centers.size() == 0) {
            rec.failed = true;
            rec.cond = kInf;
            return;
        }
        rec.cond = condition_number(assemble(spec, centers, cfg.mode));
        if (!complete) {
            rec.failed = true;
            return;
        }
        const int n = centers.size();
        Eigen::VectorXd values(n);
        for (int i = 0; i < n; ++i) values[i] = fn.value(centers.point(i));
        try {
            Surrogate s = cfg.mode == Mode::Hermite
                              ? [&] {
                                    Eigen::MatrixXd grads(n, fn.dim);
                                    for (int i = 0; i < n; ++i)
                                        grads.row(i) = fn.gradient(centers.point(i)).transpose();
                                    return fit_hermite(spec, centers, values, grads);
                                }()
                              : fit_lagrange(spec, centers, values);
            const PointSet test = random_box(cfg.test_points,
                                             centers.box(),
                                             derive_seed(cfg.base_seed, "testset", trial));
            double sq = 0.0;
            for (int q = 0; q < test.size(); ++q) {
                const double diff = evaluate(s, test.point(q)) - fn.value(test.point(q));
                sq += diff * diff;
            }
            rec.rmse = std::sqrt(sq / test.size());
            rec.failed = false;
        } catch (const SingularExtension&) {
            rec.failed = true;
        }
    };
    return run_sweep(cfg, fn.box, fn.dim, measure);
}

double quantile(std::vector<double> values, double p) {
    if (values.empty()) throw UsageError("quantile: empty sample");
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * p;
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= values.size()) return values.back();
    const double frac = h - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

std::vector<SummaryRow> aggregate(const std::vector<ResultRecord>& records,
                                  const std::vector<std::string>& group_keys) {
    if (records.empty()) throw UsageError("aggregate: no records");
    for (const auto& k : group_keys)
        if (k != "method" && k != "kernel" && k != "epsilon" && k != "N")
            throw UsageError("aggregate: unknown group key " + k);

    const auto key_of = [&group_keys](const ResultRecord& r) {
        std::string key;
        for (const auto& k : group_keys) {
            if (k == "method") key += r.method;
            else if (k == "kernel") key += r.kernel;
            else if (k == "epsilon") key += format_double(r.epsilon);
            else key += std::to_string(r.n);
            key += '\x1f';
        }
        return key;
    };

    std::vector<std::string> order;
    std::map<std::string, std::vector<const ResultRecord*>> groups;
    for (const auto& r : records) {
        const std::string key = key_of(r);
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted) order.push_back(key);
        it->second.push_back(&r);
    }

    const auto stats = [](const std::vector<double>& v, double& mean, double& q20, double& q80) {
        if (v.empty()) {
            mean = q20 = q80 = std::numeric_limits<double>::quiet_NaN();
            return;
        }
        double sum = 0.0;
        for (double x : v) sum += x;
        mean = sum / static_cast<double>(v.size());
        q20 = quantile(v, 0.2);
        q80 = quantile(v, 0.8);
    };

    std::vector<SummaryRow> rows;
    rows.reserve(order.size());
    for (const auto& key : order) {
        const auto& members = groups[key];
        SummaryRow row;
        row.method = members.front()->method;
        row.kernel = members.front()->kernel;
        row.epsilon = members.front()->epsilon;
        row.n = members.front()->n;
        row.count = static_cast<int>(members.size());
        std::vector<double> conds, rmses;
        for (const ResultRecord* r : members) {
            if (r->failed) {
                ++row.failures;
                continue;
            }
            if (std::isfinite(r->cond)) conds.push_back(r->cond);
            if (std::isfinite(r->rmse)) rmses.push_back(r->rmse);
        }
        stats(conds, row.cond_mean, row.cond_q20, row.cond_q80);
        stats(rmses, row.rmse_mean, row.rmse_q20, row.rmse_q80);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

namespace {

std::string record_line(const ResultRecord& r) {
    std::string line;
    line += r.method;
    line += ',';
    line += r.kernel;
    line += ',';
    line += format_double(r.epsilon);
    line += ',';
    line += std::to_string(r.n);
    line += ',';
    line += std::to_string(r.trial);
    line += ',';
    line += std::to_string(r.seed);
    line += ',';
    line += format_double(r.cond);
    line += ',';
    line += format_double(r.rmse);
    line += ',';
    line += r.failed ? '1' : '0';
    line += ',';
    line += format_double(r.wall_s);
    line += '\n';
    return line;
}

constexpr const char* kCsvHeader = "method,kernel,epsilon,N,trial,seed,cond,rmse,failed,wall_s";

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << contents;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

std::string to_csv(const std::vector<ResultRecord>& rows) {
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto& r : rows) out += record_line(r);
    return out;
}

void emit_csv(const std::vector<ResultRecord>& rows, const std::string& path) {
    write_file(path, to_csv(rows));
}

std::vector<ResultRecord> parse_result_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw std::runtime_error("parse_result_csv: missing or unexpected header");

    const auto to_double = [](const std::string& s) {
        double v;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
            throw std::runtime_error("parse_result_csv: bad number: " + s);
        return v;
    };

    std::vector<ResultRecord> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i)
            if (i == line.size() || line[i] == ',') {
                fields.push_back(line.substr(start, i - start));
                start = i + 1;
            }
        if (fields.size() != 10)
            throw std::runtime_error("parse_result_csv: expected 10 fields");
        ResultRecord r;
        r.method = fields[0];
        r.kernel = fields[1];
        r.epsilon = to_double(fields[2]);
        r.n = std::stoi(fields[3]);
        r.trial = std::stoi(fields[4]);
        r.seed = std::stoull(fields[5]);
        r.cond = to_double(fields[6]);
        r.rmse = to_double(fields[7]);
        r.failed = fields[8] == "1";
        r.wall_s = to_double(fields[9]);
        rows.push_back(std::move(r));
    }
    return rows;
}

void emit_summary_csv(const std::vector<SummaryRow>& rows,
                      const std::vector<std::string>& group_keys, const std::string& path) {
    std::string out;
    for (const auto& k : group_keys) {
        out += k;
        out += ',';
    }
    out += "count,failed,cond_mean,cond_q20,cond_q80,rmse_mean,rmse_q20,rmse_q80\n";
    for (const auto& row : rows) {
        for (const auto& k : group_keys) {
            if (k == "method") out += row.method;
            else if (k == "kernel") out += row.kernel;
            else if (k == "epsilon") out += format_double(row.epsilon);
            else out += std::to_string(row.n);
            out += ',';
        }
        out += std::to_string(row.count);
        out += ',';
        out += std::to_string(row.failures);
        for (double v : {row.cond_mean, row.cond_q20, row.cond_q80, row.rmse_mean, row.rmse_q20,
                         row.rmse_q80}) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    write_file(path, out);
}

void emit_points_csv(const PointSet& points, const std::string& path) {
    std::string out;
    for (int r = 0; r < points.dim(); ++r) {
        if (r) out += ',';
        out += "x" + std::to_string(r + 1);
    }
    out += '\n';
    for (int c = 0; c < points.size(); ++c) {
        for (int r = 0; r < points.dim(); ++r) {
            if (r) out += ',';
            out += format_double(points.points()(r, c));
        }
        out += '\n';
    }
    write_file(path, out);
}

namespace {

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i)
        if (i == s.size() || s[i] == ',') {
            std::string part = s.substr(start, i - start);
            const auto a = part.find_first_not_of(" \t");
            const auto b = part.find_last_not_of(" \t");
            parts.push_back(a == std::string::npos ? "" : part.substr(a, b - a + 1));
            start = i + 1;
        }
    return parts;
}

double parse_double(const std::string& key, const std::string& s) {
    try {
        std::size_t pos;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for " + key + ": " + s);
    }
}

int parse_int(const std::string& key, const std::string& s) {
    try {
        std::size_t pos;
        const long v = std::stol(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return static_cast<int>(v);
    } catch (const std::exception&) {
        throw ConfigError("bad integer value for " + key + ": " + s);
    }
}

}  // namespace

void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value) {
    if (key == "kernel") {
        try {
            cfg.family = family_from_name(value);
        } catch (const UsageError& e) {
            throw ConfigError(e.what());
        }
    } else if (key == "epsilon") {
        cfg.epsilons.clear();
        for (const auto& p : split_list(value)) cfg.epsilons.push_back(parse_double(key, p));
    } else if (key == "mode") {
        try {
            cfg.mode = mode_from_name(value);
        } catch (const UsageError& e) {
            throw ConfigError(e.what());
        }
    } else if (key == "methods") {
        cfg.methods = split_list(value);
    } else if (key == "N") {
        cfg.n_values.clear();
        for (const auto& p : split_list(value)) cfg.n_values.push_back(parse_int(key, p));
    } else if (key == "M") {
        cfg.m_candidates = parse_int(key, value);
    } else if (key == "trials") {
        cfg.trials = parse_int(key, value);
    } else if (key == "Q") {
        cfg.test_points = parse_int(key, value);
    } else if (key == "seed") {
        try {
            cfg.base_seed = std::stoull(value);
        } catch (const std::exception&) {
            throw ConfigError("bad seed: " + value);
        }
    } else if (key == "function") {
        cfg.function = value;
    } else if (key == "dim") {
        cfg.dim = parse_int(key, value);
    } else if (key == "sigma") {
        cfg.sigma = parse_double(key, value);
    } else if (key == "quad_panels") {
        cfg.quad_panels = parse_int(key, value);
    } else if (key == "box_lower") {
        cfg.box_lower.clear();
        for (const auto& p : split_list(value)) cfg.box_lower.push_back(parse_double(key, p));
    } else if (key == "box_upper") {
        cfg.box_upper.clear();
        for (const auto& p : split_list(value)) cfg.box_upper.push_back(parse_double(key, p));
    } else if (key == "out") {
        cfg.out_path = value;
    } else if (key == "candidates") {
        cfg.candidate_method = value;
    } else if (key == "timing") {
        if (value == "on") cfg.timing = true;
        else if (value == "off") cfg.timing = false;
        else throw ConfigError("timing must be on or off");
    } else if (key == "threads") {
        cfg.threads = parse_int(key, value);
    } else {
        throw ConfigError("unknown config key: " + key);
    }
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    ExperimentConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos) return std::string();
            const auto b = s.find_last_not_of(" \t\r");
            return s.substr(a, b - a + 1);
        };
        apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

}  // namespace kipt
