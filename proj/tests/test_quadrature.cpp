#include "catch_amalgamated.hpp"

#include "ggmdir/errors.hpp"
#include "ggmdir/quadrature.hpp"

#include <cmath>
#include <limits>

using namespace ggmdir;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// composite Simpson on [a, b] of t^(d-1) exp(k(t) - shift)
double simpson(const std::function<double(double)>& k, int d, double a, double b, int m, double shift) {
    const double h = (b - a) / m;
    double acc = 0.0;
    for (int i = 0; i <= m; ++i) {
        const double t = a + i * h;
        const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        const double f = t > 0.0 || d == 1 ? std::pow(t, d - 1) * std::exp(k(t) - shift) : 0.0;
        acc += w * f;
    }
    return acc * h / 3.0;
}

}  // namespace

TEST_CASE("Gauss-Legendre rule", "[quadrature]") {
    const auto& rule = gauss_legendre(20);
    REQUIRE(rule.nodes.size() == 20);
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    CHECK_THAT(wsum, WithinRel(2.0, 1e-14));
    // exact for polynomials up to degree 39
    for (int deg : {0, 2, 10, 38}) {
        double acc = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * std::pow(rule.nodes[i], deg);
        CHECK_THAT(acc, WithinRel(2.0 / (deg + 1), 1e-13));
    }
    for (std::size_t i = 1; i < rule.nodes.size(); ++i) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
    CHECK_THROWS_AS(gauss_legendre(0), ValidationError);
}

TEST_CASE("log_add_exp", "[quadrature]") {
    const double ninf = -std::numeric_limits<double>::infinity();
    CHECK(log_add_exp(ninf, 1.5) == 1.5);
    CHECK(log_add_exp(ninf, ninf) == ninf);
    CHECK_THAT(log_add_exp(0.0, 0.0), WithinRel(std::log(2.0), 1e-15));
    CHECK_THAT(log_add_exp(1000.0, 1000.0), WithinRel(1000.0 + std::log(2.0), 1e-15));
}

TEST_CASE("flat kernel has a closed form", "[quadrature]") {
    for (int d : {1, 2, 5, 17}) {
        const double tmax = 2.5;
        const auto r = integrate_directional([](double) { return 0.0; }, tmax, d);
        const double top = std::pow(tmax * (1.0 - 1e-8), d);
        CHECK_THAT(r.p_value, WithinRel((top - 1.0) / top, 1e-12));
        CHECK(r.diagnostics.rel_error <= 1e-8);
    }
}

TEST_CASE("peaked kernel against a fine Simpson rule", "[quadrature]") {
    for (int d : {1, 3, 12, 40}) {
        for (double a : {5.0, 50.0, 400.0}) {
            auto k = [a](double t) { return -a * (t - 0.8) * (t - 0.8) + 30.0 * std::log1p(-t / 3.0); };
            const double tmax = 3.0;
            const auto r = integrate_directional(k, tmax, d);
            const double upper = tmax * (1.0 - 1e-8);
            const double lo = simpson(k, d, 0.0, 1.0, 400000, 0.0);
            const double up = simpson(k, d, 1.0, upper, 400000, 0.0);
            CHECK_THAT(r.p_value, WithinRel(up / (lo + up), 1e-8));
        }
    }
}

TEST_CASE("an additive constant in the kernel leaves the p-value unchanged", "[quadrature]") {
    auto k = [](double t) { return -20.0 * (t - 0.9) * (t - 0.9); };
    const auto a = integrate_directional(k, 4.0, 6);
    const auto b = integrate_directional([&](double t) { return k(t) + 5000.0; }, 4.0, 6);
    const auto c = integrate_directional([&](double t) { return k(t) - 5000.0; }, 4.0, 6);
    // the shifted kernel loses a few bits to rounding of k(t) + 5000
    CHECK_THAT(b.p_value, WithinRel(a.p_value, 1e-11));
    CHECK_THAT(c.p_value, WithinRel(a.p_value, 1e-11));
}

TEST_CASE("diagnostics and endpoint behaviour", "[quadrature]") {
    // kernel vanishing like (tmax - t)^5 at the upper limit
    auto k = [](double t) { return 5.0 * std::log(2.0 - t); };
    const auto r = integrate_directional(k, 2.0, 3);
    CHECK(r.diagnostics.nodes > 0);
    CHECK(r.diagnostics.panels >= 12);
    CHECK(r.diagnostics.tail_fraction < 1e-10);
    // int_1^2 t^2 (2-t)^5 dt / int_0^2 t^2 (2-t)^5 dt, by beta integrals
    // numerator: substitute s = 2 - t: int_0^1 (2-s)^2 s^5 ds = 4/6 - 4/7 + 1/8
    const double num = 4.0 / 6 - 4.0 / 7 + 1.0 / 8;
    const double den = std::pow(2.0, 8) * std::tgamma(3) * std::tgamma(6) / std::tgamma(9);
    CHECK_THAT(r.p_value, WithinRel(num / den, 1e-7));
}

TEST_CASE("kernel failures", "[quadrature]") {
    CHECK_THROWS_AS(integrate_directional([](double) { return 0.0; }, 2.0, 0), DomainError);
    CHECK_THROWS_AS(integrate_directional([](double) { return 0.0; }, 1.0, 2), DomainError);
    CHECK_THROWS_AS(integrate_directional([](double) { return std::nan(""); }, 2.0, 2), DomainError);
    // not positive definite is treated as a vanishing integrand
    auto cut = [](double t) -> double {
        if (t > 1.9) throw NotPositiveDefiniteError("beyond", 0);
        return 0.0;
    };
    const auto r = integrate_directional(cut, 2.0, 1, {1e-3, 20, 4000, 1e-8});
    CHECK_THAT(r.p_value, WithinAbs(0.9 / 1.9, 2e-3));
}

TEST_CASE("panel budget exhaustion", "[quadrature]") {
    auto wild = [](double t) { return 50.0 * std::sin(400.0 * t); };
    try {
        integrate_directional(wild, 3.0, 2, {1e-12, 20, 40, 1e-8});
        FAIL("expected QuadratureError");
    } catch (const QuadratureError& e) {
        CHECK(e.achieved_tolerance() > 1e-12);
    }
}
