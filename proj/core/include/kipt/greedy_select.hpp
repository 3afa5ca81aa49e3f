#pragma once

#include <vector>

#include "kipt/growing_cholesky.hpp"
#include "kipt/point_set.hpp"

namespace kipt {

/// How candidate Schur scores are produced at each greedy step.
///  - Cached: per-candidate V blocks grow by b rows per step (O(M b^2 (bk)) per step).
///  - Recompute: V = L^{-1} W from scratch per candidate; the slow reference path.
enum class Scoring { Cached, Recompute };

struct GreedyOptions {
    double tau_pd = 1e-13;
    Scoring scoring = Scoring::Cached;
};

struct SelectionResult {
    std::vector<int> indices;   ///< selected candidate indices, in selection order
    std::vector<double> gains;  ///< schur log-determinant realized at each step
    bool terminated_early = false;
    int requested = 0;
};

/// Greedy determinant-maximizing selection of n centers from a discrete candidate set.
/// Each step scores every live candidate's Schur log-determinant against the current
/// factorization and takes the argmax (ties broken toward the lowest candidate index).
/// Candidates whose Schur pivot falls at or below tau_pd are discarded for good; the
/// result reports early termination when no viable candidate remains.
SelectionResult greedy_select(const KernelSpec& spec, const PointSet& candidates, int n,
                              Mode mode, const GreedyOptions& options = {});

/// max over the grid of sum_j |l_j(Z)|, with cardinal values solved from the Lagrange
/// design matrix of the centers. Large values flag unstable interpolation.
double lebesgue_estimate(const KernelSpec& spec, const PointSet& centers,
                         const PointSet& grid);

}  // namespace kipt
