#include "ggmdir/quadrature.hpp"

#include "ggmdir/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

namespace ggmdir {

namespace {

GaussLegendreRule compute_rule(int n) {
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_abs_diff(double a, double b) {
    const double m = std::max(a, b);
    if (m == kNegInf) return kNegInf;
    const double diff = std::abs(std::exp(a - m) - std::exp(b - m));
    return diff > 0.0 ? m + std::log(diff) : kNegInf;
}

struct Panel {
    double a = 0.0;
    double b = 0.0;
    int level = 0;
    bool upper = false;
    double log_value = kNegInf;
    double log_error = kNegInf;
};

class PanelIntegrator {
public:
    PanelIntegrator(const std::function<double(double)>& kernel, int d, const GaussLegendreRule& rule)
        : kernel_(kernel), d_(d), rule_(rule) {}

    Panel make(double a, double b, int level, bool upper) {
        Panel p{a, b, level, upper};
        const double m = 0.5 * (a + b);
        const double whole = rule_sum(a, b);
        p.log_value = log_add_exp(rule_sum(a, m), rule_sum(m, b));
        p.log_error = log_abs_diff(whole, p.log_value);
        return p;
    }

    long evaluations() const noexcept { return evaluations_; }

    double log_integrand(double t) {
        ++evaluations_;
        double k;
        try {
            k = kernel_(t);
        } catch (const NotPositiveDefiniteError&) {
            // only reachable within rounding of the upper limit, where the
            // integrand vanishes
            return kNegInf;
        }
        if (std::isnan(k)) throw DomainError("log kernel returned NaN at t=" + std::to_string(t));
        return d_ > 1 ? k + (d_ - 1) * std::log(t) : k;
    }

private:
    double rule_sum(double a, double b) {
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        double acc = kNegInf;
        for (std::size_t i = 0; i < rule_.nodes.size(); ++i) {
            const double t = mid + half * rule_.nodes[i];
            acc = log_add_exp(acc, log_integrand(t) + std::log(half * rule_.weights[i]));
        }
        return acc;
    }

    const std::function<double(double)>& kernel_;
    int d_;
    const GaussLegendreRule& rule_;
    long evaluations_ = 0;
};

}  // namespace

const GaussLegendreRule& gauss_legendre(int order) {
    if (order < 1) throw ValidationError("gauss_legendre: order must be positive");
    static std::mutex mutex;
    static std::map<int, GaussLegendreRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute_rule(order)).first;
    return it->second;
}

double log_add_exp(double a, double b) {
    if (a < b) std::swap(a, b);
    if (b == kNegInf) return a;
    return a + std::log1p(std::exp(b - a));
}

DirectionalIntegral integrate_directional(const std::function<double(double)>& log_kernel, double t_max, int d,
                                          const QuadratureConfig& config) {
    if (d < 1) throw DomainError("integrate_directional: d must be at least 1");
    const double upper = t_max * (1.0 - config.upper_shrink);
    if (!(upper > 1.0)) throw DomainError("integrate_directional: t_max must exceed 1, got " + std::to_string(t_max));

    PanelIntegrator integrator(log_kernel, d, gauss_legendre(config.order));
    std::vector<Panel> panels;
    // graded towards t = 1, where the observed point sits
    const double lower_breaks[] = {0.0, 0.5, 0.75, 0.875, 0.9375, 1.0};
    for (int i = 0; i + 1 < 6; ++i) panels.push_back(integrator.make(lower_breaks[i], lower_breaks[i + 1], 0, false));
    const double upper_fracs[] = {0.0, 1.0 / 64, 1.0 / 32, 1.0 / 16, 1.0 / 8, 1.0 / 4, 1.0 / 2, 1.0};
    for (int i = 0; i + 1 < 8; ++i)
        panels.push_back(integrator.make(1.0 + (upper - 1.0) * upper_fracs[i], 1.0 + (upper - 1.0) * upper_fracs[i + 1],
                                         0, true));

    DirectionalIntegral out;
    for (;;) {
        double lo = kNegInf, up = kNegInf, lo_err = kNegInf, up_err = kNegInf;
        for (const auto& p : panels) {
            if (p.upper) {
                up = log_add_exp(up, p.log_value);
                up_err = log_add_exp(up_err, p.log_error);
            } else {
                lo = log_add_exp(lo, p.log_value);
                lo_err = log_add_exp(lo_err, p.log_error);
            }
        }
        if (lo == kNegInf && up == kNegInf)
            throw QuadratureError("integrand vanishes on the whole path", INFINITY);
        const double p_value = up == kNegInf ? 0.0 : 1.0 / (1.0 + std::exp(lo - up));
        const double r_lo = lo == kNegInf ? 0.0 : std::exp(lo_err - lo);
        const double r_up = up == kNegInf ? 0.0 : std::exp(up_err - up);
        const double estimate = (1.0 - p_value) * (r_lo + r_up);

        out.p_value = p_value;
        out.log_lower = lo;
        out.log_upper = up;
        out.diagnostics.rel_error = estimate;
        if (estimate <= config.rel_tol) break;

        // refine every panel carrying more than an equal share of the budget
        const double share = config.rel_tol / static_cast<double>(panels.size());
        std::vector<Panel> next;
        next.reserve(panels.size() * 2);
        std::size_t refined = 0;
        for (const auto& p : panels) {
            const double side = p.upper ? up : lo;
            const double contribution = side == kNegInf ? 0.0 : (1.0 - p_value) * std::exp(p.log_error - side);
            if (contribution > share) {
                const double m = 0.5 * (p.a + p.b);
                next.push_back(integrator.make(p.a, m, p.level + 1, p.upper));
                next.push_back(integrator.make(m, p.b, p.level + 1, p.upper));
                ++refined;
            } else {
                next.push_back(p);
            }
        }
        if (refined == 0 || static_cast<int>(next.size()) > config.max_panels)
        {
            char msg[128];
            std::snprintf(msg, sizeof msg, "quadrature did not reach relative tolerance %.3g (achieved %.3g)",
                          config.rel_tol, estimate);
            throw QuadratureError(msg, estimate);
        }
        panels = std::move(next);
    }

    // the omitted sliver [upper, t_max], bounded by the integrand at its left end
    const double total = log_add_exp(out.log_lower, out.log_upper);
    out.diagnostics.tail_fraction = std::exp(integrator.log_integrand(upper) + std::log(t_max - upper) - total);
    out.diagnostics.nodes = integrator.evaluations();
    out.diagnostics.panels = static_cast<int>(panels.size());
    for (const auto& p : panels) out.diagnostics.max_level = std::max(out.diagnostics.max_level, p.level);
    return out;
}

}  // namespace ggmdir
