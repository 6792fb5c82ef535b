#include "ggmdir/completion.hpp"

#include "ggmdir/isserlis.hpp"
#include "ggmdir/mle.hpp"

#include <cmath>

namespace ggmdir {

namespace {

// ln|omega| - sum_k J_e omega_e target_e, or -inf outside the PD cone
double objective(const Matrix& omega, const Matrix& target, const Graph& g) {
    Eigen::LLT<Matrix> llt(omega);
    if (llt.info() != Eigen::Success) return -INFINITY;
    const auto diag = llt.matrixLLT().diagonal();
    if (!(diag.minCoeff() > 0.0)) return -INFINITY;
    double lin = 0.0;
    for (const auto& [i, j] : g.edges()) lin += (i == j ? 1.0 : 2.0) * omega(i, j) * target(i, j);
    return 2.0 * diag.array().log().sum() - lin;
}

}  // namespace

std::optional<Completion> newton_completion(const Matrix& target, const Graph& g, const Matrix& start,
                                            const CompletionOptions& opts) {
    const auto& edges = g.edges();
    const auto p = static_cast<Eigen::Index>(edges.size());
    Completion c;
    c.omega = start;
    double f = objective(c.omega, target, g);
    if (!std::isfinite(f)) return std::nullopt;

    for (;;) {
        Eigen::LLT<Matrix> llt(c.omega);
        c.sigma = llt.solve(Matrix::Identity(c.omega.rows(), c.omega.cols()));
        c.sigma = 0.5 * (c.sigma + c.sigma.transpose()).eval();
        const double residual = moment_residual(c.sigma, target, g);
        const Matrix iss = isserlis_block(c.sigma, edges).matrix;
        Eigen::LLT<Matrix> iss_llt(iss);
        if (iss_llt.info() != Eigen::Success) return std::nullopt;
        if (residual <= opts.tol) {
            c.iss_logdet = 2.0 * iss_llt.matrixLLT().diagonal().array().log().sum();
            return c;
        }
        if (c.iterations >= opts.max_iterations) return std::nullopt;

        Vector r(p);
        for (Eigen::Index e = 0; e < p; ++e) r[e] = c.sigma(edges[e].i, edges[e].j) - target(edges[e].i, edges[e].j);
        // Newton step 2 J^-1 Iss^-1 r; the gradient is J r, so g'step = 2 r' Iss^-1 r
        const Vector iss_r = iss_llt.solve(r);
        const double decrement = 2.0 * r.dot(iss_r);
        Matrix step = Matrix::Zero(c.omega.rows(), c.omega.cols());
        for (Eigen::Index e = 0; e < p; ++e) {
            const auto [i, j] = edges[e];
            const double v = (i == j ? 2.0 : 1.0) * iss_r[e];
            step(i, j) = v;
            step(j, i) = v;
        }
        double alpha = 1.0;
        if (decrement < 0.1) {
            // inside the quadratic-convergence region of the self-concordant
            // objective a full step stays feasible; comparing objective values
            // here would only measure rounding
            const Matrix trial = c.omega + step;
            const double ft = objective(trial, target, g);
            if (std::isfinite(ft)) {
                c.omega = trial;
                f = ft;
                ++c.iterations;
                continue;
            }
        }
        for (;;) {
            const Matrix trial = c.omega + alpha * step;
            const double ft = objective(trial, target, g);
            if (ft >= f + 0.25 * alpha * decrement) {
                c.omega = trial;
                f = ft;
                break;
            }
            alpha *= 0.5;
            if (alpha < 1e-14) return std::nullopt;
        }
        ++c.iterations;
    }
}

}  // namespace ggmdir
