#include "kipt/design_matrix.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

namespace kipt {

Mode mode_from_name(const std::string& name) {
    if (name == "lagrange") return Mode::Lagrange;
    if (name == "hermite") return Mode::Hermite;
    throw UsageError("unknown interpolation mode: " + name);
}

std::string mode_name(Mode mode) {
    return mode == Mode::Lagrange ? "lagrange" : "hermite";
}

double covariance_entry(const KernelSpec& spec, Eigen::Ref<const Eigen::VectorXd> zp, int fp,
                        Eigen::Ref<const Eigen::VectorXd> zq, int fq) {
    const int d = spec.dim();
    if (fp < 0 || fp > d || fq < 0 || fq > d)
        throw UsageError("covariance_entry: functional index out of range");
    if (fp == 0 && fq == 0) return kernel_eval(spec, zp, zq);
    if (fq == 0) return kernel_grad1(spec, zp, zq, fp - 1);
    if (fp == 0) return kernel_grad1(spec, zq, zp, fq - 1);
    return kernel_hess12(spec, zp, zq, fp - 1, fq - 1);
}

void pair_block(const KernelSpec& spec, Eigen::Ref<const Eigen::VectorXd> zp,
                Eigen::Ref<const Eigen::VectorXd> zq, Eigen::Ref<Eigen::MatrixXd> out) {
    const int d = spec.dim();
    if (out.rows() != d + 1 || out.cols() != d + 1)
        throw UsageError("pair_block: output must be (d+1) x (d+1)");
    const double s = detail::squared_distance(zp, zq);
    const double g0 = profile_eval(spec, s, 0);
    const double g1 = profile_eval(spec, s, 1);
    const double g2 = profile_eval(spec, s, 2);

    out(0, 0) = g0;
    for (int m = 0; m < d; ++m) {
        out(m + 1, 0) = detail::grad_component(g1, zp[m] - zq[m]);
        out(0, m + 1) = detail::grad_component(g1, zq[m] - zp[m]);
    }
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
            out(m + 1, n + 1) =
                detail::hess_component(g1, g2, zp[m] - zq[m], zp[n] - zq[n], m == n);
}

namespace {

// Global index of (point j, functional f) under the given ordering.
inline int flat_index(Ordering ordering, int n_points, int block, int j, int f) {
    return ordering == Ordering::PointMajor ? j * block + f : f * n_points + j;
}

}  // namespace

DesignMatrix assemble_lagrange(const KernelSpec& spec, const PointSet& centers) {
    const int n = centers.size();
    if (n == 0) throw UsageError("assemble_lagrange: empty center set");
    if (centers.dim() != spec.dim())
        throw UsageError("assemble_lagrange: dimension mismatch");

    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            a(i, j) = kernel_eval(spec, centers.point(i), centers.point(j));
            a(j, i) = a(i, j);
        }
    return DesignMatrix{Mode::Lagrange, Ordering::PointMajor, n, spec.dim(), std::move(a)};
}

DesignMatrix assemble_hermite(const KernelSpec& spec, const PointSet& centers,
                              Ordering ordering) {
    const int n = centers.size();
    if (n == 0) throw UsageError("assemble_hermite: empty center set");
    if (centers.dim() != spec.dim())
        throw UsageError("assemble_hermite: dimension mismatch");

    const int d = spec.dim();
    const int b = d + 1;
    Eigen::MatrixXd mat(b * n, b * n);
    Eigen::MatrixXd blk(b, b);
    // One pair block per unordered point pair; the opposite triangle is mirrored.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            pair_block(spec, centers.point(i), centers.point(j), blk);
            for (int fi = 0; fi < b; ++fi)
                for (int fj = 0; fj < b; ++fj) {
                    const int r = flat_index(ordering, n, b, i, fi);
                    const int c = flat_index(ordering, n, b, j, fj);
                    mat(r, c) = blk(fi, fj);
                    mat(c, r) = blk(fi, fj);
                }
        }
    return DesignMatrix{Mode::Hermite, ordering, n, d, std::move(mat)};
}

CrossBlock cross_block(const KernelSpec& spec, Eigen::Ref<const Eigen::MatrixXd> centers,
                       Eigen::Ref<const Eigen::VectorXd> z, Mode mode) {
    if (z.size() != spec.dim() || centers.rows() != spec.dim())
        throw UsageError("cross_block: dimension mismatch");
    const int n = static_cast<int>(centers.cols());
    const int d = spec.dim();
    const int b = mode == Mode::Hermite ? d + 1 : 1;

    CrossBlock cb;
    cb.w.resize(b * n, b);
    cb.bz.resize(b, b);
    if (mode == Mode::Lagrange) {
        for (int j = 0; j < n; ++j) cb.w(j, 0) = kernel_eval(spec, centers.col(j), z);
        cb.bz(0, 0) = kernel_eval(spec, z, z);
        return cb;
    }
    Eigen::MatrixXd blk(b, b);
    for (int j = 0; j < n; ++j) {
        pair_block(spec, centers.col(j), z, blk);
        cb.w.block(j * b, 0, b, b) = blk;
    }
    pair_block(spec, z, z, blk);
    cb.bz = blk;
    return cb;
}

CrossBlock cross_block(const KernelSpec& spec, const PointSet& centers,
                       Eigen::Ref<const Eigen::VectorXd> z, Mode mode) {
    return cross_block(spec, Eigen::Ref<const Eigen::MatrixXd>(centers.points()), z, mode);
}

DesignMatrix reorder(const DesignMatrix& mat, Ordering target) {
    if (mat.mode == Mode::Lagrange || mat.ordering == target) {
        DesignMatrix out = mat;
        out.ordering = target;
        return out;
    }
    const int n = mat.n_points;
    const int b = mat.block_size();
    const int size = mat.size();

    // perm[new index] = old index
    std::vector<int> perm(size);
    for (int j = 0; j < n; ++j)
        for (int f = 0; f < b; ++f)
            perm[flat_index(target, n, b, j, f)] = flat_index(mat.ordering, n, b, j, f);

    Eigen::MatrixXd out(size, size);
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) out(r, c) = mat.data(perm[r], perm[c]);
    return DesignMatrix{mat.mode, target, n, mat.dim, std::move(out)};
}

double condition_number(const Eigen::MatrixXd& mat) {
    if (mat.rows() != mat.cols() || mat.rows() == 0)
        throw UsageError("condition_number: matrix must be square and nonempty");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(mat, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd sv = eig.eigenvalues().cwiseAbs();
    const double lo = sv.minCoeff();
    const double hi = sv.maxCoeff();
    if (lo == 0.0) return std::numeric_limits<double>::infinity();
    return hi / lo;
}

double condition_number(const DesignMatrix& mat) { return condition_number(mat.data); }

}  // namespace kipt
