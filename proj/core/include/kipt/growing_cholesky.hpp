#pragma once

#include <Eigen/Core>

#include "kipt/design_matrix.hpp"
#include "kipt/errors.hpp"

namespace kipt {

/// Pivot/log-determinant summary of a symmetric candidate block. log_det is the
/// -infinity sentinel whenever a Cholesky pivot of the block is nonpositive.
struct SchurInfo {
    double log_det;
    double min_pivot;
};

/// What an accepted append contributed; exactly the pieces an incremental candidate
/// cache needs to extend itself (see greedy_select).
struct AppendInfo {
    Eigen::MatrixXd v;               ///< V = L^{-1} W of the appended block, (b*k_old) x b
    Eigen::MatrixXd ltilde_inverse;  ///< inverse of the b x b Schur factor
    double step_log_det;             ///< log det of the Schur complement
};

/// Lower-triangular Cholesky factor of a symmetric block S, computed pivot by pivot.
/// Returns false as soon as a pivot is nonpositive; min_pivot reports the smallest
/// pivot seen (including the offending one). On success log_det = 2 sum log diag(L).
bool cholesky_lower(const Eigen::MatrixXd& s, Eigen::MatrixXd& factor, double& min_pivot,
                    double& log_det, int& pivot_index);

/// Incremental block Cholesky factorization of the point-major design matrix of an
/// ordered set of centers. Appending the cross block of a new point extends the factor,
/// its maintained inverse, and the log-determinant in O((bk)^2 b) work; scoring a
/// candidate's Schur complement costs the same and leaves the state untouched.
class GrowingCholesky {
public:
    explicit GrowingCholesky(int block_size, int reserve_blocks = 8, double tau_pd = 1e-13);

    int block_size() const { return block_; }
    int blocks() const { return k_; }
    int size() const { return block_ * k_; }
    double tau_pd() const { return tau_pd_; }

    /// Extend the factorization by one point's cross block. Throws SingularExtension
    /// (state unchanged) when a Schur pivot falls at or below tau_pd.
    AppendInfo append(const CrossBlock& cb);

    /// log det(Bz - W^T B^{-1} W) of a candidate block, with the smallest pivot of its
    /// Schur complement. Read-only; safe to call concurrently on a frozen state.
    SchurInfo schur(const CrossBlock& cb) const;
    double schur_logdet(const CrossBlock& cb) const;

    /// Solve (L L^T) X = rhs by forward/backward substitution.
    Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;

    /// Maintained log-determinant of the factored matrix (usage error while empty).
    double log_det() const;

    auto factor() const { return l_.topLeftCorner(size(), size()); }
    auto inverse_factor() const { return linv_.topLeftCorner(size(), size()); }

private:
    void require_shape(const CrossBlock& cb) const;
    // V = L^{-1} W and the mirrored Schur complement S = Bz - V^T V.
    void schur_pieces(const CrossBlock& cb, Eigen::MatrixXd& v, Eigen::MatrixXd& s) const;

    int block_;
    int k_ = 0;
    double tau_pd_;
    double logdet_ = 0.0;
    Eigen::MatrixXd l_, linv_;  // preallocated storage; active part is size() x size()
};

}  // namespace kipt
