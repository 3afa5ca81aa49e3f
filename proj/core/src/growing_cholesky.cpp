#include "kipt/growing_cholesky.hpp"

#include <cmath>
#include <limits>

namespace kipt {

bool cholesky_lower(const Eigen::MatrixXd& s, Eigen::MatrixXd& factor, double& min_pivot,
                    double& log_det, int& pivot_index) {
    const int b = static_cast<int>(s.rows());
    factor.setZero(b, b);
    min_pivot = std::numeric_limits<double>::infinity();
    log_det = 0.0;
    pivot_index = -1;
    for (int i = 0; i < b; ++i) {
        double pivot = s(i, i);
        for (int j = 0; j < i; ++j) pivot -= factor(i, j) * factor(i, j);
        if (pivot < min_pivot) {
            min_pivot = pivot;
            pivot_index = i;
        }
        if (pivot <= 0.0) {
            log_det = -std::numeric_limits<double>::infinity();
            return false;
        }
        const double diag = std::sqrt(pivot);
        factor(i, i) = diag;
        log_det += 2.0 * std::log(diag);
        for (int r = i + 1; r < b; ++r) {
            double v = s(r, i);
            for (int j = 0; j < i; ++j) v -= factor(r, j) * factor(i, j);
            factor(r, i) = v / diag;
        }
    }
    return true;
}

GrowingCholesky::GrowingCholesky(int block_size, int reserve_blocks, double tau_pd)
    : block_(block_size), tau_pd_(tau_pd) {
    if (block_size < 1) throw UsageError("GrowingCholesky: block size must be positive");
    const int cap = block_ * std::max(reserve_blocks, 1);
    l_.setZero(cap, cap);
    linv_.setZero(cap, cap);
}

void GrowingCholesky::require_shape(const CrossBlock& cb) const {
    if (cb.block_size() != block_ || cb.w.rows() != size() || cb.w.cols() != block_)
        throw UsageError("GrowingCholesky: cross block shaped for a different state");
}

void GrowingCholesky::schur_pieces(const CrossBlock& cb, Eigen::MatrixXd& v,
                                   Eigen::MatrixXd& s) const {
    const int n = size();
    v = linv_.topLeftCorner(n, n).triangularView<Eigen::Lower>() * cb.w;
    s.resize(block_, block_);
    for (int i = 0; i < block_; ++i)
        for (int j = 0; j <= i; ++j) {
            const double x = cb.bz(i, j) - v.col(i).dot(v.col(j));
            s(i, j) = x;
            s(j, i) = x;
        }
}

AppendInfo GrowingCholesky::append(const CrossBlock& cb) {
    require_shape(cb);
    Eigen::MatrixXd v, s, ltilde;
    schur_pieces(cb, v, s);
    double min_pivot, step_logdet;
    int pivot_index;
    cholesky_lower(s, ltilde, min_pivot, step_logdet, pivot_index);
    if (min_pivot <= tau_pd_) throw SingularExtension(k_, pivot_index, min_pivot);

    const int n = size();
    const int cap = static_cast<int>(l_.rows());
    if (n + block_ > cap) {
        const int grown = std::max(2 * cap, n + block_);
        Eigen::MatrixXd l2 = Eigen::MatrixXd::Zero(grown, grown);
        Eigen::MatrixXd li2 = Eigen::MatrixXd::Zero(grown, grown);
        l2.topLeftCorner(n, n) = l_.topLeftCorner(n, n);
        li2.topLeftCorner(n, n) = linv_.topLeftCorner(n, n);
        l_.swap(l2);
        linv_.swap(li2);
    }

    Eigen::MatrixXd ltilde_inv = ltilde.triangularView<Eigen::Lower>().solve(
        Eigen::MatrixXd::Identity(block_, block_));

    l_.block(n, 0, block_, n) = v.transpose();
    l_.block(n, n, block_, block_) = ltilde;
    linv_.block(n, 0, block_, n) =
        -ltilde_inv * (v.transpose() * linv_.topLeftCorner(n, n));
    linv_.block(n, n, block_, block_) = ltilde_inv;

    ++k_;
    logdet_ += step_logdet;
    return AppendInfo{std::move(v), std::move(ltilde_inv), step_logdet};
}

SchurInfo GrowingCholesky::schur(const CrossBlock& cb) const {
    require_shape(cb);
    Eigen::MatrixXd v, s, ltilde;
    schur_pieces(cb, v, s);
    double min_pivot, log_det;
    int pivot_index;
    cholesky_lower(s, ltilde, min_pivot, log_det, pivot_index);
    return SchurInfo{log_det, min_pivot};
}

double GrowingCholesky::schur_logdet(const CrossBlock& cb) const { return schur(cb).log_det; }

Eigen::MatrixXd GrowingCholesky::solve(const Eigen::MatrixXd& rhs) const {
    const int n = size();
    if (rhs.rows() != n) throw UsageError("GrowingCholesky::solve: rhs row count mismatch");
    const auto lower = l_.topLeftCorner(n, n).triangularView<Eigen::Lower>();
    Eigen::MatrixXd x = lower.solve(rhs);
    lower.transpose().solveInPlace(x);
    return x;
}

double GrowingCholesky::log_det() const {
    if (k_ == 0) throw UsageError("GrowingCholesky::log_det: no blocks appended");
    return logdet_;
}

}  // namespace kipt
