#include "ggmdir/mle.hpp"

#include "ggmdir/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ggmdir {

SuffStats suff_stats(const Matrix& data) {
    const auto n = static_cast<int>(data.rows());
    const auto q = static_cast<int>(data.cols());
    if (n < 2) throw ValidationError("suff_stats: need at least 2 observations, got " + std::to_string(n));
    if (q < 1) throw ValidationError("suff_stats: data has no columns");
    if (!data.allFinite()) throw ValidationError("suff_stats: data contains missing or non-finite values");
    Vector ybar = data.colwise().mean().transpose();
    // centred cross-product; algebraically y'y/n - ybar ybar'
    const Matrix centred = data.rowwise() - ybar.transpose();
    const Matrix s = (centred.transpose() * centred) / static_cast<double>(n);
    return stats_from_covariance(n, SymMatrix::symmetrized(s), std::move(ybar));
}

SuffStats stats_from_covariance(int n, const SymMatrix& s_sat, Vector ybar) {
    if (n < 2) throw ValidationError("sufficient statistics need n >= 2");
    SuffStats out;
    out.n = n;
    out.q = s_sat.order();
    out.s_sat = s_sat;
    const double scale = static_cast<double>(n) / static_cast<double>(n - 1);
    out.u = HalfVec(scale * vech(s_sat).values());
    out.ybar = ybar.size() ? std::move(ybar) : Vector::Zero(out.q);
    return out;
}

ExistenceVerdict existence_check(const Graph& g, int n) {
    ExistenceVerdict v;
    v.max_clique = max_clique_size(g);
    v.ok = static_cast<std::size_t>(n) > v.max_clique;
    if (!v.ok)
        v.reason = "sample size " + std::to_string(n) + " does not exceed the maximal clique size " +
                   std::to_string(v.max_clique);
    return v;
}

double moment_residual(const Matrix& sigma, const Matrix& target, const Graph& g) {
    double worst = 0.0;
    for (const auto& [i, j] : g.edges()) {
        const double scale =
            std::min(std::max(1.0, std::abs(target(i, j))), std::sqrt(std::abs(target(i, i) * target(j, j))));
        const double r = std::abs(sigma(i, j) - target(i, j)) / (scale > 0.0 ? scale : 1.0);
        if (!(r <= worst)) worst = r;  // NaN propagates as failure
    }
    return worst;
}

Matrix decomposable_omega(const Matrix& target, const ChordalDecomposition& dec) {
    const auto q = target.rows();
    Matrix omega = Matrix::Zero(q, q);
    auto scatter = [&](const std::vector<int>& idx, double sign) {
        if (idx.empty()) return;
        const Matrix inv = inverse_pd(principal(target, idx)).matrix();
        for (std::size_t c = 0; c < idx.size(); ++c)
            for (std::size_t r = 0; r < idx.size(); ++r) omega(idx[r], idx[c]) += sign * inv(r, c);
    };
    for (const auto& c : dec.cliques) scatter(c, 1.0);
    for (const auto& s : dec.separators) scatter(s, -1.0);
    return omega;
}

MomentFit ips_fit(const Matrix& target, const Graph& g, const std::vector<std::vector<int>>& cliques,
                  const Matrix& start, const FitOptions& opts) {
    MomentFit fit;
    fit.omega = start;
    fit.sigma = inverse_pd(fit.omega).matrix();
    fit.max_residual = moment_residual(fit.sigma, target, g);
    std::vector<Matrix> target_inv;
    target_inv.reserve(cliques.size());
    for (const auto& c : cliques) target_inv.push_back(inverse_pd(principal(target, c)).matrix());

    while (!(fit.max_residual <= opts.tol)) {
        if (fit.iterations >= opts.max_sweeps)
            throw ConvergenceError("IPS did not converge after " + std::to_string(opts.max_sweeps) +
                                       " sweeps (residual " + std::to_string(fit.max_residual) + ")",
                                   fit.max_residual);
        for (std::size_t ci = 0; ci < cliques.size(); ++ci) {
            const auto& c = cliques[ci];
            const auto m = static_cast<Eigen::Index>(c.size());
            const Matrix sig_cc = principal(fit.sigma, c);
            const auto llt = cholesky(sig_cc);
            const Matrix sig_cc_inv = inverse_pd(sig_cc).matrix();
            // omega_CC += target_CC^-1 - sigma_CC^-1
            for (Eigen::Index b = 0; b < m; ++b)
                for (Eigen::Index a = 0; a < m; ++a)
                    fit.omega(c[a], c[b]) += target_inv[ci](a, b) - sig_cc_inv(a, b);
            // sigma += B (target_CC - sigma_CC) B',  B = sigma_.C sigma_CC^-1
            Matrix sig_col(fit.sigma.rows(), m);
            for (Eigen::Index b = 0; b < m; ++b) sig_col.col(b) = fit.sigma.col(c[b]);
            const Matrix b_mat = llt.solve(sig_col.transpose()).transpose();
            const Matrix delta = principal(target, c) - sig_cc;
            fit.sigma += b_mat * delta * b_mat.transpose();
            fit.sigma = 0.5 * (fit.sigma + fit.sigma.transpose()).eval();
        }
        fit.omega = 0.5 * (fit.omega + fit.omega.transpose()).eval();
        fit.sigma = inverse_pd(fit.omega).matrix();
        fit.max_residual = moment_residual(fit.sigma, target, g);
        ++fit.iterations;
    }
    return fit;
}

double reml_loglik(const SymMatrix& omega, const SuffStats& stats) {
    if (omega.order() != stats.q) throw ShapeError("reml_loglik: order mismatch");
    const double half = 0.5 * (stats.n - 1);
    const double trace = (omega.matrix().cwiseProduct(stats.u_matrix().matrix())).sum();
    return half * logdet_pd(omega) - half * trace;
}

GgmFit fit_ggm(const SuffStats& stats, const Graph& g, const FitOptions& opts) {
    if (g.order() != stats.q)
        throw ShapeError("fit_ggm: graph has " + std::to_string(g.order()) + " vertices, data has " +
                         std::to_string(stats.q) + " variables");
    const Matrix target = stats.u_matrix().matrix();
    GgmFit out;
    out.graph = g;

    if (g.saturated()) {
        out.sigma_hat = stats.u_matrix();
        out.omega_hat = inverse_pd(target);
        out.max_residual = 0.0;
    } else {
        MomentFit fit;
        if (auto dec = try_clique_decomposition(g)) {
            fit.omega = decomposable_omega(target, *dec);
            fit.sigma = inverse_pd(fit.omega).matrix();
            fit.max_residual = moment_residual(fit.sigma, target, g);
            if (!(fit.max_residual <= opts.tol)) fit = ips_fit(target, g, dec->cliques, fit.omega, opts);
        } else {
            Matrix start = Matrix::Zero(stats.q, stats.q);
            for (int i = 0; i < stats.q; ++i) {
                if (!(target(i, i) > 0.0))
                    throw NotPositiveDefiniteError(
                        "fit_ggm: variance of variable " + std::to_string(i + 1) + " is not positive", i);
                start(i, i) = 1.0 / target(i, i);
            }
            fit = ips_fit(target, g, maximal_cliques(g), start, opts);
        }
        // updates only ever touch clique blocks, so entries on h stay exactly 0
        out.omega_hat = SymMatrix::symmetrized(fit.omega);
        out.sigma_hat = SymMatrix::symmetrized(fit.sigma);
        out.iterations = fit.iterations;
        out.max_residual = fit.max_residual;
    }
    out.loglik = reml_loglik(out.omega_hat, stats);
    return out;
}

}  // namespace ggmdir
