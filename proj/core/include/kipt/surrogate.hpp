#pragma once

#include <vector>

#include "kipt/growing_cholesky.hpp"
#include "kipt/point_set.hpp"

namespace kipt {

/// Fitted kernel interpolant. Lagrange coefficients have length N; Hermite coefficients
/// are point-major of length (d+1)N: per center, the value coefficient followed by the
/// d gradient coefficients.
struct Surrogate {
    Mode mode;
    KernelSpec spec;
    PointSet centers;
    Eigen::VectorXd coeffs;
};

struct LoocvReport {
    std::vector<double> eps_grid;
    std::vector<double> norms;  ///< +infinity sentinel where the fit failed
    double best_eps;
    double best_norm;
};

/// Value-matching interpolant: solves A c = u through the incremental Cholesky engine.
Surrogate fit_lagrange(const KernelSpec& spec, const PointSet& centers,
                       const Eigen::VectorXd& values);

/// Gradient-enhanced interpolant matching values and all first partials at every center.
/// grads is N x d (row i = gradient at center i).
Surrogate fit_hermite(const KernelSpec& spec, const PointSet& centers,
                      const Eigen::VectorXd& values, const Eigen::MatrixXd& grads);

double evaluate(const Surrogate& s, Eigen::Ref<const Eigen::VectorXd> z);

/// Analytic partial derivative of the expansion with respect to z^(m) (0-based).
double evaluate_partial(const Surrogate& s, Eigen::Ref<const Eigen::VectorXd> z, int m);

/// Leave-one-out error vector in closed form, e_i = c_i / (A^{-1})_{ii}; equals the
/// brute-force residual u_i - s_{-i}(z_i) of the fit without center i.
Eigen::VectorXd loocv_error_vector(const KernelSpec& spec, const PointSet& centers,
                                   const Eigen::VectorXd& values);

double loocv_error_norm(const KernelSpec& spec, const PointSet& centers,
                        const Eigen::VectorXd& values);

/// Evaluate the LOOCV norm across a shape-parameter grid and pick the finite minimizer
/// (lowest epsilon on ties). Grid entries whose fit fails are recorded with a sentinel.
LoocvReport select_epsilon(Family family, const PointSet& centers,
                           const Eigen::VectorXd& values, const std::vector<double>& eps_grid);

/// 25 log-spaced points on [lo, hi]; the default LOOCV grid is eps_log_grid(0.1, 10, 25).
std::vector<double> eps_log_grid(double lo, double hi, int count);

/// Simple-kriging prediction: solves K(Xi,Xi) w(z) = K(z,Xi)^T per query and returns
/// w(z) . u. Deliberately a separate code path from fit_lagrange/evaluate.
double kriging_predict(const KernelSpec& spec, const PointSet& centers,
                       const Eigen::VectorXd& values, Eigen::Ref<const Eigen::VectorXd> z);

}  // namespace kipt
