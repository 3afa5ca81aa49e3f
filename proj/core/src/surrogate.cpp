#include "kipt/surrogate.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>

namespace kipt {

namespace {

GrowingCholesky factor_centers(const KernelSpec& spec, const PointSet& centers, Mode mode) {
    const int b = mode == Mode::Hermite ? spec.dim() + 1 : 1;
    GrowingCholesky state(b, centers.size());
    const Eigen::MatrixXd& pts = centers.points();
    for (int j = 0; j < centers.size(); ++j)
        state.append(cross_block(spec, pts.leftCols(j), pts.col(j), mode));
    return state;
}

}  // namespace

Surrogate fit_lagrange(const KernelSpec& spec, const PointSet& centers,
                       const Eigen::VectorXd& values) {
    if (centers.size() == 0) throw UsageError("fit_lagrange: empty center set");
    if (values.size() != centers.size())
        throw UsageError("fit_lagrange: one value per center required");
    GrowingCholesky state = factor_centers(spec, centers, Mode::Lagrange);
    return Surrogate{Mode::Lagrange, spec, centers, state.solve(values)};
}

Surrogate fit_hermite(const KernelSpec& spec, const PointSet& centers,
                      const Eigen::VectorXd& values, const Eigen::MatrixXd& grads) {
    const int n = centers.size();
    const int d = spec.dim();
    if (n == 0) throw UsageError("fit_hermite: empty center set");
    if (values.size() != n || grads.rows() != n || grads.cols() != d)
        throw UsageError("fit_hermite: values must be length N and grads N x d");

    Eigen::VectorXd rhs((d + 1) * n);
    for (int i = 0; i < n; ++i) {
        rhs[i * (d + 1)] = values[i];
        for (int m = 0; m < d; ++m) rhs[i * (d + 1) + 1 + m] = grads(i, m);
    }
    GrowingCholesky state = factor_centers(spec, centers, Mode::Hermite);
    return Surrogate{Mode::Hermite, spec, centers, state.solve(rhs)};
}

double evaluate(const Surrogate& s, Eigen::Ref<const Eigen::VectorXd> z) {
    if (z.size() != s.spec.dim()) throw UsageError("evaluate: dimension mismatch");
    const Eigen::MatrixXd& pts = s.centers.points();
    const int n = s.centers.size();
    const int d = s.spec.dim();
    double acc = 0.0;
    if (s.mode == Mode::Lagrange) {
        for (int j = 0; j < n; ++j) acc += s.coeffs[j] * kernel_eval(s.spec, z, pts.col(j));
        return acc;
    }
    for (int j = 0; j < n; ++j) {
        const auto coef = s.coeffs.segment(j * (d + 1), d + 1);
        acc += coef[0] * kernel_eval(s.spec, z, pts.col(j));
        for (int m = 0; m < d; ++m)
            acc -= coef[1 + m] * kernel_grad1(s.spec, z, pts.col(j), m);
    }
    return acc;
}

double evaluate_partial(const Surrogate& s, Eigen::Ref<const Eigen::VectorXd> z, int m) {
    const int d = s.spec.dim();
    if (z.size() != d) throw UsageError("evaluate_partial: dimension mismatch");
    if (m < 0 || m >= d) throw UsageError("evaluate_partial: coordinate index out of range");
    const Eigen::MatrixXd& pts = s.centers.points();
    const int n = s.centers.size();
    double acc = 0.0;
    if (s.mode == Mode::Lagrange) {
        for (int j = 0; j < n; ++j) acc += s.coeffs[j] * kernel_grad1(s.spec, z, pts.col(j), m);
        return acc;
    }
    for (int j = 0; j < n; ++j) {
        const auto coef = s.coeffs.segment(j * (d + 1), d + 1);
        acc += coef[0] * kernel_grad1(s.spec, z, pts.col(j), m);
        // -beta * d/dz^(m) Phi'_n reduces to +beta * hess12 under the library convention.
        for (int nn = 0; nn < d; ++nn)
            acc += coef[1 + nn] * kernel_hess12(s.spec, z, pts.col(j), m, nn);
    }
    return acc;
}

Eigen::VectorXd loocv_error_vector(const KernelSpec& spec, const PointSet& centers,
                                   const Eigen::VectorXd& values) {
    if (centers.size() == 0) throw UsageError("loocv_error_vector: empty center set");
    if (values.size() != centers.size())
        throw UsageError("loocv_error_vector: one value per center required");
    GrowingCholesky state = factor_centers(spec, centers, Mode::Lagrange);
    const Eigen::VectorXd coeffs = state.solve(values);
    // (A^{-1})_{ii} = || column i of L^{-1} ||^2.
    const auto linv = state.inverse_factor();
    Eigen::VectorXd e(centers.size());
    for (int i = 0; i < centers.size(); ++i)
        e[i] = coeffs[i] / linv.col(i).squaredNorm();
    return e;
}

double loocv_error_norm(const KernelSpec& spec, const PointSet& centers,
                        const Eigen::VectorXd& values) {
    return loocv_error_vector(spec, centers, values).norm();
}

LoocvReport select_epsilon(Family family, const PointSet& centers,
                           const Eigen::VectorXd& values, const std::vector<double>& eps_grid) {
    if (eps_grid.empty()) throw UsageError("select_epsilon: empty shape-parameter grid");
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
        if (!(eps_grid[i] > 0.0)) throw UsageError("select_epsilon: grid must be positive");
        if (i > 0 && eps_grid[i] <= eps_grid[i - 1])
            throw UsageError("select_epsilon: grid must be strictly increasing");
    }

    LoocvReport report;
    report.eps_grid = eps_grid;
    report.norms.reserve(eps_grid.size());
    report.best_eps = 0.0;
    report.best_norm = std::numeric_limits<double>::infinity();
    for (const double eps : eps_grid) {
        double norm;
        try {
            norm = loocv_error_norm(KernelSpec(family, eps, centers.dim()), centers, values);
        } catch (const SingularExtension&) {
            norm = std::numeric_limits<double>::infinity();
        }
        report.norms.push_back(norm);
        if (norm < report.best_norm) {
            report.best_norm = norm;
            report.best_eps = eps;
        }
    }
    if (!std::isfinite(report.best_norm))
        throw std::runtime_error("select_epsilon: no viable shape parameter in grid");
    return report;
}

std::vector<double> eps_log_grid(double lo, double hi, int count) {
    if (!(lo > 0.0) || !(hi > lo) || count < 2)
        throw UsageError("eps_log_grid: need 0 < lo < hi and count >= 2");
    std::vector<double> grid(count);
    const double step = (std::log(hi) - std::log(lo)) / (count - 1);
    for (int i = 0; i < count; ++i) grid[i] = std::exp(std::log(lo) + i * step);
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

double kriging_predict(const KernelSpec& spec, const PointSet& centers,
                       const Eigen::VectorXd& values, Eigen::Ref<const Eigen::VectorXd> z) {
    if (centers.size() == 0) throw UsageError("kriging_predict: empty center set");
    if (values.size() != centers.size())
        throw UsageError("kriging_predict: one value per center required");
    if (z.size() != spec.dim()) throw UsageError("kriging_predict: dimension mismatch");

    const DesignMatrix gram = assemble_lagrange(spec, centers);
    Eigen::LLT<Eigen::MatrixXd> llt(gram.data);
    if (llt.info() != Eigen::Success)
        throw SingularExtension(centers.size() - 1, 0, 0.0);

    Eigen::VectorXd kz(centers.size());
    for (int j = 0; j < centers.size(); ++j)
        kz[j] = kernel_eval(spec, z, centers.point(j));
    const Eigen::VectorXd weights = llt.solve(kz);
    return weights.dot(values);
}

}  // namespace kipt
