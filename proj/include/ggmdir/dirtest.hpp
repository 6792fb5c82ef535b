#pragma once

// Tests of a null graph against a larger alternative graph: the likelihood
// ratio w, Skovgaard's w* and w**, and the directional p-value obtained by
// integrating the exact saddlepoint density along the line joining the
// null-expected statistic and the observed one.

#include "ggmdir/completion.hpp"
#include "ggmdir/graph.hpp"
#include "ggmdir/mle.hpp"
#include "ggmdir/quadrature.hpp"

#include <optional>

namespace ggmdir {

/// w = (n-1) (ln|omega_alt| - ln|omega_null|). Throws NotNestedError when the
/// null fit's graph is not contained in the alternative's.
double lrt_statistic(const GgmFit& fit_alt, const GgmFit& fit_null, int n);

/// Upper tail of the chi-squared distribution with d degrees of freedom.
double chisq_sf(double x, int d);

/// ln gamma for Skovgaard's adjustment, assembled in the log domain from
///  - Q  = (s0 - s)' Iss(Sigma0)_kk^-1 (s0 - s)
///  - IP = (omega - omega0)' J_kk (s0 - s)
///  - L  = w / (n-1)
///  - the Isserlis log-determinants at Sigma0 and Sigma,
/// as ln 2 + (d/2) ln Q - (d/2 - 1) ln L - ln IP + (ln|Iss0| - ln|Iss|)/2,
/// with s = sigma_k of the alternative fit and s0 that of the null fit.
/// Throws DegenerateTestError when w == 0 and DomainError when IP <= 0.
double skovgaard_log_gamma(const GgmFit& fit_alt, const GgmFit& fit_null, const SuffStats& stats, int d);

struct SkovgaardStatistics {
    double w_star = 0.0;   // w (1 - ln gamma / w)^2
    double w_star2 = 0.0;  // w - 2 ln gamma
};

SkovgaardStatistics skovgaard_statistics(double w, double log_gamma);

/// Largest t with t sigma_alt + (1 - t) sigma_null positive definite:
/// doubling from t = 1, then bisection to 1e-10 relative width. Throws
/// DomainError if positive definiteness persists up to t = 1e8.
double find_tmax(const SymMatrix& sigma_alt, const SymMatrix& sigma_null);

/// Largest t for which the alternative model's ML estimate exists at the
/// tilted statistic, i.e. the edge entries of t sigma_alt + (1 - t) sigma_null
/// have a positive definite completion on `graph_alt`. For chordal graphs
/// this is positive definiteness of every clique block.
double find_tmax(const SymMatrix& sigma_alt, const SymMatrix& sigma_null, const Graph& graph_alt,
                 const std::optional<ChordalDecomposition>& decomp);

struct DirectionalPath {
    SymMatrix sigma_alt;
    SymMatrix sigma_null;
    double t_max = 1.0;
    int n = 0;
    Graph graph_alt;
    std::optional<ChordalDecomposition> decomp;

    /// t sigma_alt + (1 - t) sigma_null. On the edges of graph_alt this is the
    /// fitted covariance at s(t); off the graph the fitted covariance is its
    /// maximum-determinant completion.
    Matrix sigma_at(double t) const;
};

DirectionalPath make_path(const GgmFit& fit_alt, const GgmFit& fit_null, int n);

/// Evaluates ln h(t) along one path. Holds the last completion as a warm
/// start for non-chordal graphs, so an instance must not be shared between
/// threads.
class PathKernel {
public:
    explicit PathKernel(const DirectionalPath& path);

    /// ((n-1)/2) ln|Sigma(t)| - (1/2) ln|Iss(Sigma(t))_kk|, up to a constant.
    double operator()(double t);

    /// Fitted alternative model at s(t).
    Completion fitted(double t);

private:
    void check_domain(double t) const;

    const DirectionalPath& path_;
    Matrix warm_;
};

double log_h(double t, const DirectionalPath& path);

struct DirectionalResult {
    double p_value = 1.0;
    QuadratureDiagnostics quadrature;
    bool degenerate = false;
};

/// Ratio of int_1^tmax t^(d-1) h dt to int_0^tmax t^(d-1) h dt. Returns
/// p = 1 with the degenerate flag when both fits coincide.
DirectionalResult directional_pvalue(const DirectionalPath& path, int d, const QuadratureConfig& quad = {});

/// f(t) = (omega_k(t) - omega_k0)' J_kk sigma_k(t), identically zero in t.
double appendix_residual(const DirectionalPath& path, const GgmFit& fit_null, double t);

struct TestReport {
    int n = 0;
    int q = 0;
    int d = 0;
    double w = 0.0;
    double log_gamma = 0.0;
    double w_star = 0.0;
    double w_star2 = 0.0;
    double p_lr = 1.0;
    double p_star = 1.0;
    double p_star2 = 1.0;
    double p_dir = 1.0;
    double t_max = 1.0;
    QuadratureDiagnostics quadrature;
    /// Null and alternative fits coincide (including d = 0); all p-values 1.
    bool degenerate = false;
    /// d = 1: the directional p-value is one-sided along the ray.
    bool one_sided = false;
    int null_iterations = 0;
    int alt_iterations = 0;

    friend bool operator==(const TestReport&, const TestReport&) = default;
};

inline bool operator==(const QuadratureDiagnostics& a, const QuadratureDiagnostics& b) {
    return a.nodes == b.nodes && a.panels == b.panels && a.max_level == b.max_level && a.rel_error == b.rel_error &&
           a.tail_fraction == b.tail_fraction;
}

/// Fits both graphs and assembles every statistic. Errors are rethrown with
/// the failing stage named in the message.
TestReport test_nested(const SuffStats& stats, const NestedPair& pair, const QuadratureConfig& quad = {},
                       const FitOptions& fit_opts = {});

}  // namespace ggmdir
