#include "kipt/greedy_select.hpp"

#include <cmath>
#include <limits>

namespace kipt {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// One candidate's Schur complement from its cached V rows: S = Bz - V^T V.
void schur_from_cache(const Eigen::MatrixXd& bz, const Eigen::Ref<const Eigen::MatrixXd>& v,
                      Eigen::MatrixXd& s) {
    const int b = static_cast<int>(bz.rows());
    s.resize(b, b);
    for (int i = 0; i < b; ++i)
        for (int j = 0; j <= i; ++j) {
            const double x = bz(i, j) - v.col(i).dot(v.col(j));
            s(i, j) = x;
            s(j, i) = x;
        }
}

}  // namespace

SelectionResult greedy_select(const KernelSpec& spec, const PointSet& candidates, int n,
                              Mode mode, const GreedyOptions& options) {
    const int m = candidates.size();
    if (m == 0) throw UsageError("greedy_select: empty candidate set");
    if (n < 1 || n > m) throw UsageError("greedy_select: need 1 <= n <= candidate count");
    if (candidates.dim() != spec.dim()) throw UsageError("greedy_select: dimension mismatch");

    const int d = spec.dim();
    const int b = mode == Mode::Hermite ? d + 1 : 1;
    const Eigen::MatrixXd& pts = candidates.points();
    const bool cached = options.scoring == Scoring::Cached;

    GrowingCholesky state(b, n, options.tau_pd);

    // Self block Bz of each candidate. For stationary kernels this is one matrix, but
    // computing per candidate keeps the code honest about the general contract.
    std::vector<Eigen::MatrixXd> self(m);
    {
        Eigen::MatrixXd blk(b, b);
        for (int c = 0; c < m; ++c) {
            if (b == 1) {
                blk(0, 0) = kernel_eval(spec, pts.col(c), pts.col(c));
            } else {
                pair_block(spec, pts.col(c), pts.col(c), blk);
            }
            self[c] = blk;
        }
    }

    // Cached V rows per candidate; candidate c owns columns [c*b, (c+1)*b).
    Eigen::MatrixXd cache;
    if (cached) cache.setZero(b * n, b * m);

    std::vector<char> alive(m, 1);
    std::vector<double> score(m);

    SelectionResult result;
    result.requested = n;

    Eigen::MatrixXd selected(d, n);

    while (static_cast<int>(result.indices.size()) < n) {
        const int k = state.blocks();
        const int rows = b * k;

#pragma omp parallel for schedule(static)
        for (int c = 0; c < m; ++c) {
            if (!alive[c]) {
                score[c] = kNegInf;
                continue;
            }
            SchurInfo info;
            if (cached) {
                Eigen::MatrixXd s, factor;
                schur_from_cache(self[c], cache.block(0, c * b, rows, b), s);
                int pivot_index;
                cholesky_lower(s, factor, info.min_pivot, info.log_det, pivot_index);
            } else {
                info = state.schur(cross_block(spec, selected.leftCols(k), pts.col(c), mode));
            }
            if (info.min_pivot <= options.tau_pd) {
                alive[c] = 0;
                score[c] = kNegInf;
            } else {
                score[c] = info.log_det;
            }
        }

        // Deterministic argmax: strict improvement keeps the lowest index on ties.
        int best = -1;
        double best_score = kNegInf;
        for (int c = 0; c < m; ++c)
            if (alive[c] && score[c] > best_score) {
                best = c;
                best_score = score[c];
            }
        if (best < 0) {
            result.terminated_early = true;
            break;
        }

        AppendInfo info;
        try {
            info = state.append(cross_block(spec, selected.leftCols(k), pts.col(best), mode));
        } catch (const SingularExtension&) {
            // Cached score can disagree with the exact pivot in the last bits; drop the
            // candidate and rescore.
            alive[best] = 0;
            continue;
        }
        alive[best] = 0;
        selected.col(k) = pts.col(best);
        result.indices.push_back(best);
        result.gains.push_back(best_score);

        if (cached && static_cast<int>(result.indices.size()) < n) {
            Eigen::MatrixXd blk(b, b);
#pragma omp parallel for schedule(static) private(blk)
            for (int c = 0; c < m; ++c) {
                if (!alive[c]) continue;
                if (b == 1) {
                    blk.resize(1, 1);
                    blk(0, 0) = kernel_eval(spec, pts.col(best), pts.col(c));
                } else {
                    blk.resize(b, b);
                    pair_block(spec, pts.col(best), pts.col(c), blk);
                }
                // New V rows: Ltilde^{-1} (w_new - V_sel^T V_c).
                cache.block(rows, c * b, b, b) = info.ltilde_inverse.triangularView<Eigen::Lower>() *
                    (blk - info.v.transpose() * cache.block(0, c * b, rows, b));
            }
        }
    }
    return result;
}

double lebesgue_estimate(const KernelSpec& spec, const PointSet& centers,
                         const PointSet& grid) {
    if (centers.dim() != spec.dim() || grid.dim() != spec.dim())
        throw UsageError("lebesgue_estimate: dimension mismatch");
    if (centers.size() == 0 || grid.size() == 0)
        throw UsageError("lebesgue_estimate: empty centers or grid");

    GrowingCholesky state(1, centers.size());
    const Eigen::MatrixXd& pts = centers.points();
    for (int j = 0; j < centers.size(); ++j)
        state.append(cross_block(spec, pts.leftCols(j), pts.col(j), Mode::Lagrange));

    double worst = 0.0;
    for (int q = 0; q < grid.size(); ++q) {
        const CrossBlock cb = cross_block(spec, pts, grid.point(q), Mode::Lagrange);
        const Eigen::MatrixXd cardinal = state.solve(cb.w);
        worst = std::max(worst, cardinal.cwiseAbs().sum());
    }
    return worst;
}

}  // namespace kipt
