#pragma once

#include "ggmdir/graph.hpp"
#include "ggmdir/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ggmdir {

/// Sufficient statistics of an n x q Gaussian sample.
///
/// s_sat is the saturated ML covariance y'y/n - ybar ybar'; u is the
/// half-vector n/(n-1) vech(s_sat), i.e. the unbiased sample covariance,
/// and is the object every fit and test statistic is computed from.
struct SuffStats {
    int n = 0;
    int q = 0;
    SymMatrix s_sat;
    HalfVec u;
    Vector ybar;

    /// unvech(u)
    SymMatrix u_matrix() const { return unvech(u); }
};

/// Throws ValidationError when there are fewer than two rows or
/// non-finite entries. Rank deficiency is not checked here.
SuffStats suff_stats(const Matrix& data);

/// Statistics from a saturated covariance estimate, e.g. a Wishart draw.
SuffStats stats_from_covariance(int n, const SymMatrix& s_sat, Vector ybar = {});

struct ExistenceVerdict {
    bool ok = false;
    std::size_t max_clique = 0;
    std::string reason;
};

/// The MLE exists with probability one when n exceeds the largest clique.
/// For non-chordal graphs the cliques of the graph as given are used, which
/// is necessary but not sufficient.
ExistenceVerdict existence_check(const Graph& g, int n);

struct FitOptions {
    double tol = 1e-10;
    int max_sweeps = 5000;
};

struct GgmFit {
    Graph graph;
    SymMatrix omega_hat;
    SymMatrix sigma_hat;
    double loglik = 0.0;
    int iterations = 0;
    double max_residual = 0.0;
};

/// Constrained ML fit of the concentration matrix with zeros on the
/// complement of g. Chordal graphs start from the closed-form decomposable
/// estimate; otherwise iterative proportional scaling over maximal cliques.
/// Throws NotPositiveDefiniteError when a clique block of unvech(u) is not
/// positive definite and ConvergenceError after max_sweeps.
GgmFit fit_ggm(const SuffStats& stats, const Graph& g, const FitOptions& opts = {});

/// ((n-1)/2) ln|omega| - ((n-1)/2) omega' J u over the support of omega.
double reml_loglik(const SymMatrix& omega, const SuffStats& stats);

/// Concentration/covariance pair matching `target` on the edges of a graph.
struct MomentFit {
    Matrix omega;
    Matrix sigma;
    int iterations = 0;
    double max_residual = 0.0;
};

/// Closed form for a decomposable graph:
///   omega = sum_C [target_CC^-1]^0 - sum_S [target_SS^-1]^0.
/// Only entries of `target` inside cliques are read.
Matrix decomposable_omega(const Matrix& target, const ChordalDecomposition& dec);

/// Iterative proportional scaling; `start` must be positive definite and
/// zero off the graph. Only entries of `target` on the graph's edges are read.
MomentFit ips_fit(const Matrix& target, const Graph& g, const std::vector<std::vector<int>>& cliques,
                  const Matrix& start, const FitOptions& opts);

/// max over edges (i,j) of |sigma_ij - target_ij| / scale_ij where
/// scale_ij = min(max(1, |target_ij|), sqrt(target_ii target_jj)).
double moment_residual(const Matrix& sigma, const Matrix& target, const Graph& g);

}  // namespace ggmdir
