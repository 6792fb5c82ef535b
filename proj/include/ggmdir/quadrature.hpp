#pragma once

#include <functional>
#include <vector>

namespace ggmdir {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussLegendreRule& gauss_legendre(int order);

/// ln(exp(a) + exp(b)) without overflow; -inf is the identity.
double log_add_exp(double a, double b);

struct QuadratureConfig {
    double rel_tol = 1e-8;
    int order = 20;
    int max_panels = 4000;
    /// The integration range ends at t_max (1 - upper_shrink).
    double upper_shrink = 1e-8;
};

struct QuadratureDiagnostics {
    long nodes = 0;
    int panels = 0;
    int max_level = 0;
    double rel_error = 0.0;
    /// Integrand at the upper limit times the omitted width t_max - upper,
    /// relative to the total: the share of mass lost by truncating the range.
    double tail_fraction = 0.0;
};

struct DirectionalIntegral {
    double p_value = 1.0;
    double log_lower = 0.0;  // ln of the integral over [0, 1]
    double log_upper = 0.0;  // ln of the integral over [1, t_max]
    QuadratureDiagnostics diagnostics;
};

/// Ratio of int_1^T t^(d-1) exp(k(t)) dt to int_0^T t^(d-1) exp(k(t)) dt,
/// where k is a log kernel and T = t_max (1 - upper_shrink).
///
/// Composite Gauss-Legendre panels, graded towards t = 1 on both sides,
/// refined by bisection wherever a panel's rule disagrees with the sum over
/// its halves. Everything is accumulated in the log domain, so the kernel
/// may carry an arbitrary additive constant. Throws QuadratureError when the
/// panel budget runs out before the estimated relative error of the ratio
/// falls below rel_tol.
DirectionalIntegral integrate_directional(const std::function<double(double)>& log_kernel, double t_max, int d,
                                          const QuadratureConfig& config = {});

}  // namespace ggmdir
