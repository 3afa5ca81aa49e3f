#pragma once

#include <Eigen/Core>
#include <string>

#include "kipt/kernel.hpp"
#include "kipt/point_set.hpp"

namespace kipt {

enum class Mode { Lagrange, Hermite };
enum class Ordering { PointMajor, DerivativeMajor };

Mode mode_from_name(const std::string& name);
std::string mode_name(Mode mode);

/// Symmetric kernel design matrix: N x N (Lagrange) or (d+1)N x (d+1)N (Hermite).
/// Only the lower triangle is computed during assembly; the upper is mirrored.
struct DesignMatrix {
    Mode mode;
    Ordering ordering;
    int n_points;
    int dim;
    Eigen::MatrixXd data;

    int size() const { return static_cast<int>(data.rows()); }
    int block_size() const { return mode == Mode::Hermite ? dim + 1 : 1; }
};

/// Border of the design matrix for one trial point z: W is (b*N) x b with rows in the
/// point-major order of the existing centers, Bz is the symmetric b x b self block.
struct CrossBlock {
    Eigen::MatrixXd w;
    Eigen::MatrixXd bz;

    int block_size() const { return static_cast<int>(bz.rows()); }
};

/// Covariance between the functional pair (value / partial derivative) attached to two
/// points. Functional index 0 is point evaluation; f in [1, d] is d/dz^(f-1). This single
/// scalar definition fixes the sign convention for every Hermite block in the library.
double covariance_entry(const KernelSpec& spec, Eigen::Ref<const Eigen::VectorXd> zp, int fp,
                        Eigen::Ref<const Eigen::VectorXd> zq, int fq);

/// All (d+1)^2 functional covariances of a point pair in one pass (row functionals of zp,
/// column functionals of zq). Entries are bit-identical to covariance_entry.
void pair_block(const KernelSpec& spec, Eigen::Ref<const Eigen::VectorXd> zp,
                Eigen::Ref<const Eigen::VectorXd> zq, Eigen::Ref<Eigen::MatrixXd> out);

DesignMatrix assemble_lagrange(const KernelSpec& spec, const PointSet& centers);

DesignMatrix assemble_hermite(const KernelSpec& spec, const PointSet& centers,
                              Ordering ordering);

CrossBlock cross_block(const KernelSpec& spec, const PointSet& centers,
                       Eigen::Ref<const Eigen::VectorXd> z, Mode mode);

/// Same as above for a bare center matrix (columns are points); used on hot paths.
CrossBlock cross_block(const KernelSpec& spec, Eigen::Ref<const Eigen::MatrixXd> centers,
                       Eigen::Ref<const Eigen::VectorXd> z, Mode mode);

/// Symmetric permutation into the target ordering; a value copy for Lagrange matrices.
DesignMatrix reorder(const DesignMatrix& mat, Ordering target);

/// sigma_max / sigma_min via a full symmetric eigendecomposition. Returns +infinity
/// when the smallest singular value underflows to zero.
double condition_number(const Eigen::MatrixXd& mat);
double condition_number(const DesignMatrix& mat);

}  // namespace kipt
