#include "ggmdir/dirtest.hpp"

#include "ggmdir/errors.hpp"
#include "ggmdir/isserlis.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <functional>
#include <numbers>
#include <string>

namespace ggmdir {

namespace {

constexpr double kTmaxCap = 1e8;
constexpr double kTmaxRelWidth = 1e-10;
// tighter than the default: kernel values scale with (n-1)/2, so completion
// error feeds straight into the p-value
const CompletionOptions kKernelCompletion{1e-12, 200};

Matrix combine(const Matrix& alt, const Matrix& null, double t) { return t * alt + (1.0 - t) * null; }

// inverse of a fitted covariance, with the rounding noise off the graph removed
Matrix concentration_on(const Matrix& sigma, const Graph& g) {
    Matrix omega = inverse_pd(sigma).matrix();
    for (const auto& [i, j] : g.complement()) omega(i, j) = omega(j, i) = 0.0;
    return omega;
}

bool cliques_pd(const Matrix& a, const std::vector<std::vector<int>>& cliques) {
    for (const auto& c : cliques)
        if (!is_positive_definite(principal(a, c))) return false;
    return true;
}

double bracket_tmax(const std::function<bool(double)>& feasible) {
    double lo = 1.0;
    double hi = 2.0;
    while (feasible(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > kTmaxCap) throw DomainError("t_max unbounded: positive definite beyond t = 1e8");
    }
    while (hi - lo > kTmaxRelWidth * hi) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? lo : hi) = mid;
    }
    return lo;
}

[[noreturn]] void rethrow_in_stage(const std::string& stage) {
    const std::string prefix = stage + ": ";
    try {
        throw;
    } catch (const NotChordalError& e) {
        throw NotChordalError(prefix + e.what(), e.certificate());
    } catch (const NotNestedError& e) {
        throw NotNestedError(prefix + e.what());
    } catch (const ShapeError& e) {
        throw ShapeError(prefix + e.what());
    } catch (const IndexError& e) {
        throw IndexError(prefix + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(prefix + e.what());
    } catch (const NotPositiveDefiniteError& e) {
        throw NotPositiveDefiniteError(prefix + e.what(), e.pivot());
    } catch (const ConvergenceError& e) {
        throw ConvergenceError(prefix + e.what(), e.residual());
    } catch (const DegenerateTestError& e) {
        throw DegenerateTestError(prefix + e.what());
    } catch (const DomainError& e) {
        throw DomainError(prefix + e.what());
    } catch (const QuadratureError& e) {
        throw QuadratureError(prefix + e.what(), e.achieved_tolerance());
    } catch (const NumericalError& e) {
        throw NumericalError(prefix + e.what());
    }
}

template <class F>
auto in_stage(const std::string& stage, F&& f) {
    try {
        return f();
    } catch (const ValidationError&) {
        rethrow_in_stage(stage);
    } catch (const NumericalError&) {
        rethrow_in_stage(stage);
    }
}

}  // namespace

double lrt_statistic(const GgmFit& fit_alt, const GgmFit& fit_null, int n) {
    if (!fit_alt.graph.contains(fit_null.graph))
        throw NotNestedError("lrt_statistic: null graph is not contained in the alternative");
    return (n - 1) * (logdet_pd(fit_alt.omega_hat) - logdet_pd(fit_null.omega_hat));
}

double chisq_sf(double x, int d) {
    if (d < 1) throw DomainError("chisq_sf: degrees of freedom must be positive");
    if (std::isnan(x)) throw DomainError("chisq_sf: NaN statistic");
    if (x <= 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    return boost::math::gamma_q(0.5 * d, 0.5 * x);
}

double skovgaard_log_gamma(const GgmFit& fit_alt, const GgmFit& fit_null, const SuffStats& stats, int d) {
    if (d < 1) throw DomainError("skovgaard_log_gamma: d must be positive");
    const double L = lrt_statistic(fit_alt, fit_null, stats.n) / (stats.n - 1);
    if (!(L > 0.0)) throw DegenerateTestError("skovgaard_log_gamma: w is zero, the fits coincide");

    const auto& k = fit_alt.graph.edges();
    const auto p = static_cast<Eigen::Index>(k.size());
    Vector ds(p);
    double ip = 0.0;
    for (Eigen::Index e = 0; e < p; ++e) {
        const auto [i, j] = k[e];
        ds[e] = fit_null.sigma_hat(i, j) - fit_alt.sigma_hat(i, j);
        ip += (i == j ? 1.0 : 2.0) * (fit_alt.omega_hat(i, j) - fit_null.omega_hat(i, j)) * ds[e];
    }
    if (!(ip > 0.0))
        throw DomainError("skovgaard_log_gamma: non-positive inner product " + std::to_string(ip));

    const auto iss0 = cholesky(isserlis_block(fit_null.sigma_hat, k).matrix);
    const double q_form = ds.dot(iss0.solve(ds));
    if (!(q_form > 0.0)) throw DegenerateTestError("skovgaard_log_gamma: zero quadratic form");
    const double ld_iss0 = 2.0 * iss0.matrixLLT().diagonal().array().log().sum();
    const double ld_iss = isserlis_logdet(fit_alt.sigma_hat, fit_alt.graph, try_clique_decomposition(fit_alt.graph));

    const double half_d = 0.5 * d;
    return std::numbers::ln2 + half_d * std::log(q_form) - (half_d - 1.0) * std::log(L) - std::log(ip) +
           0.5 * (ld_iss0 - ld_iss);
}

SkovgaardStatistics skovgaard_statistics(double w, double log_gamma) {
    if (!(w > 0.0)) throw DegenerateTestError("skovgaard_statistics: w must be positive");
    const double shrink = 1.0 - log_gamma / w;
    return {w * shrink * shrink, w - 2.0 * log_gamma};
}

double find_tmax(const SymMatrix& sigma_alt, const SymMatrix& sigma_null) {
    if (sigma_alt.order() != sigma_null.order()) throw ShapeError("find_tmax: order mismatch");
    const Matrix& a = sigma_alt.matrix();
    const Matrix& b = sigma_null.matrix();
    return bracket_tmax([&](double t) { return is_positive_definite(combine(a, b, t)); });
}

double find_tmax(const SymMatrix& sigma_alt, const SymMatrix& sigma_null, const Graph& graph_alt,
                 const std::optional<ChordalDecomposition>& decomp) {
    if (sigma_alt.order() != sigma_null.order() || sigma_alt.order() != graph_alt.order())
        throw ShapeError("find_tmax: order mismatch");
    const Matrix& a = sigma_alt.matrix();
    const Matrix& b = sigma_null.matrix();
    if (decomp) return bracket_tmax([&](double t) { return cliques_pd(combine(a, b, t), decomp->cliques); });

    // The full matrix being PD is sufficient, every clique block being PD is
    // necessary; Newton decides the cases in between.
    const auto cliques = maximal_cliques(graph_alt);
    const Matrix start = concentration_on(a, graph_alt);
    return bracket_tmax([&](double t) {
        const Matrix target = combine(a, b, t);
        if (is_positive_definite(target)) return true;
        if (!cliques_pd(target, cliques)) return false;
        return newton_completion(target, graph_alt, start).has_value();
    });
}

Matrix DirectionalPath::sigma_at(double t) const { return combine(sigma_alt.matrix(), sigma_null.matrix(), t); }

DirectionalPath make_path(const GgmFit& fit_alt, const GgmFit& fit_null, int n) {
    if (!fit_alt.graph.contains(fit_null.graph))
        throw NotNestedError("make_path: null graph is not contained in the alternative");
    DirectionalPath path{fit_alt.sigma_hat, fit_null.sigma_hat, 1.0, n, fit_alt.graph,
                         try_clique_decomposition(fit_alt.graph)};
    path.t_max = find_tmax(path.sigma_alt, path.sigma_null, path.graph_alt, path.decomp);
    return path;
}

PathKernel::PathKernel(const DirectionalPath& path) : path_(path) {
    if (!path.decomp) warm_ = concentration_on(path.sigma_null.matrix(), path.graph_alt);
}

void PathKernel::check_domain(double t) const {
    if (!(t >= 0.0 && t < path_.t_max))
        throw DomainError("log_h: t=" + std::to_string(t) + " outside [0, " + std::to_string(path_.t_max) + ")");
}

Completion PathKernel::fitted(double t) {
    check_domain(t);
    const Matrix target = path_.sigma_at(t);
    if (path_.decomp) {
        Completion c;
        c.omega = decomposable_omega(target, *path_.decomp);
        c.sigma = inverse_pd(c.omega).matrix();
        c.iss_logdet = isserlis_logdet(target, path_.graph_alt, path_.decomp);
        return c;
    }
    const Matrix cold = concentration_on(path_.sigma_alt.matrix(), path_.graph_alt);
    auto c = newton_completion(target, path_.graph_alt, warm_, kKernelCompletion);
    if (!c) c = newton_completion(target, path_.graph_alt, cold, kKernelCompletion);
    // near t_max the tight tolerance may be out of reach in floating point
    if (!c) c = newton_completion(target, path_.graph_alt, warm_);
    if (!c) c = newton_completion(target, path_.graph_alt, cold);
    if (!c) {
        // close to t_max the completion degenerates and the kernel vanishes
        if (t > path_.t_max * (1.0 - 1e-6)) throw NotPositiveDefiniteError("log_h: completion lost at t_max", -1);
        throw ConvergenceError("log_h: completion failed at t=" + std::to_string(t), NAN);
    }
    warm_ = c->omega;
    return *c;
}

double PathKernel::operator()(double t) {
    const double half_df = 0.5 * (path_.n - 1);
    if (path_.decomp) {
        check_domain(t);
        const Matrix target = path_.sigma_at(t);
        // ln|Sigma| and ln|Iss| share the clique/separator log-determinants
        double acc = -0.5 * path_.graph_alt.order() * std::numbers::ln2;
        for (const auto& c : path_.decomp->cliques)
            acc += (half_df - 0.5 * (c.size() + 1.0)) * logdet_pd(principal(target, c));
        for (const auto& s : path_.decomp->separators)
            if (!s.empty()) acc -= (half_df - 0.5 * (s.size() + 1.0)) * logdet_pd(principal(target, s));
        return acc;
    }
    const Completion c = fitted(t);
    return -half_df * logdet_pd(c.omega) - 0.5 * c.iss_logdet;
}

double log_h(double t, const DirectionalPath& path) {
    PathKernel kernel(path);
    return kernel(t);
}

DirectionalResult directional_pvalue(const DirectionalPath& path, int d, const QuadratureConfig& quad) {
    DirectionalResult out;
    const Matrix diff = path.sigma_alt.matrix() - path.sigma_null.matrix();
    const double scale = path.sigma_null.matrix().cwiseAbs().maxCoeff();
    if (d == 0 || diff.cwiseAbs().maxCoeff() <= 1e-14 * scale) {
        out.degenerate = true;
        return out;
    }
    PathKernel kernel(path);
    const auto integral = integrate_directional([&kernel](double t) { return kernel(t); }, path.t_max, d, quad);
    out.p_value = integral.p_value;
    out.quadrature = integral.diagnostics;
    return out;
}

double appendix_residual(const DirectionalPath& path, const GgmFit& fit_null, double t) {
    PathKernel kernel(path);
    const Completion c = kernel.fitted(t);
    const Matrix target = path.sigma_at(t);
    double f = 0.0;
    for (const auto& [i, j] : path.graph_alt.edges())
        f += (i == j ? 1.0 : 2.0) * (c.omega(i, j) - fit_null.omega_hat(i, j)) * target(i, j);
    return f;
}

TestReport test_nested(const SuffStats& stats, const NestedPair& pair, const QuadratureConfig& quad,
                       const FitOptions& fit_opts) {
    if (stats.q != pair.alt_graph.order() || stats.q != pair.null_graph.order())
        throw ShapeError("test_nested: graphs have " + std::to_string(pair.alt_graph.order()) +
                         " vertices but the data has " + std::to_string(stats.q) + " variables");
    const auto verdict = existence_check(pair.alt_graph, stats.n);
    if (!verdict.ok) throw ValidationError("existence: " + verdict.reason);

    TestReport r;
    r.n = stats.n;
    r.q = stats.q;
    r.d = pair.d;
    r.one_sided = pair.d == 1;
    const GgmFit fit_null = in_stage("null fit", [&] { return fit_ggm(stats, pair.null_graph, fit_opts); });
    const GgmFit fit_alt = in_stage("alternative fit", [&] { return fit_ggm(stats, pair.alt_graph, fit_opts); });
    r.null_iterations = fit_null.iterations;
    r.alt_iterations = fit_alt.iterations;

    r.w = lrt_statistic(fit_alt, fit_null, stats.n);
    if (pair.d == 0 || !(r.w > 0.0)) {
        r.degenerate = true;
        return r;
    }
    r.p_lr = chisq_sf(r.w, pair.d);
    r.log_gamma = in_stage("skovgaard", [&] { return skovgaard_log_gamma(fit_alt, fit_null, stats, pair.d); });
    const auto sk = skovgaard_statistics(r.w, r.log_gamma);
    r.w_star = sk.w_star;
    r.w_star2 = sk.w_star2;
    r.p_star = chisq_sf(r.w_star, pair.d);
    r.p_star2 = chisq_sf(r.w_star2, pair.d);

    const auto path = in_stage("t_max", [&] { return make_path(fit_alt, fit_null, stats.n); });
    r.t_max = path.t_max;
    const auto dir = in_stage("directional", [&] { return directional_pvalue(path, pair.d, quad); });
    r.p_dir = dir.p_value;
    r.quadrature = dir.quadrature;
    r.degenerate = dir.degenerate;
    return r;
}

}  // namespace ggmdir
