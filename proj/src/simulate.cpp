#include "ggmdir/simulate.hpp"

#include "ggmdir/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

namespace ggmdir {

namespace {

std::mt19937_64 stream_for(std::uint64_t base_seed, std::uint64_t rep) {
    std::seed_seq seq{static_cast<std::uint32_t>(base_seed), static_cast<std::uint32_t>(base_seed >> 32),
                      static_cast<std::uint32_t>(rep), static_cast<std::uint32_t>(rep >> 32)};
    return std::mt19937_64(seq);
}

std::vector<std::vector<int>> components(const Graph& g) {
    const int q = g.order();
    std::vector<int> label(q, -1);
    std::vector<std::vector<int>> out;
    for (int s = 0; s < q; ++s) {
        if (label[s] >= 0) continue;
        out.emplace_back();
        std::vector<int> stack{s};
        label[s] = static_cast<int>(out.size()) - 1;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            out.back().push_back(v);
            for (int w : g.neighbours(v))
                if (label[w] < 0) {
                    label[w] = label[s];
                    stack.push_back(w);
                }
        }
    }
    return out;
}

}  // namespace

void Scenario::validate() const {
    if (q < 1) throw ValidationError("scenario: q must be positive");
    if (n < 2) throw ValidationError("scenario: n must be at least 2");
    if (replications < 0) throw ValidationError("scenario: negative replication count");
    if (sigma0.order() != q || null_graph.order() != q || alt_graph.order() != q)
        throw ShapeError("scenario: sigma0 and both graphs must have order q = " + std::to_string(q));
    for (std::size_t i = 0; i < nominal_levels.size(); ++i) {
        const double a = nominal_levels[i];
        if (!(a > 0.0 && a < 1.0)) throw ValidationError("scenario: nominal levels must lie in (0, 1)");
        if (i > 0 && !(a > nominal_levels[i - 1]))
            throw ValidationError("scenario: nominal levels must be strictly increasing");
    }
    if (!is_positive_definite(sigma0.matrix())) throw ValidationError("scenario: sigma0 is not positive definite");
    const Matrix omega0 = inverse_pd(sigma0.matrix()).matrix();
    for (const auto& [i, j] : null_graph.complement())
        if (std::abs(omega0(i, j)) > 1e-8 * std::sqrt(omega0(i, i) * omega0(j, j)))
            throw ValidationError("scenario: sigma0 is not Markov with respect to the null graph (entry " +
                                  std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
    nest(null_graph, alt_graph);
    const auto verdict = existence_check(alt_graph, n);
    if (!verdict.ok) throw ValidationError("scenario: " + verdict.reason);
}

SuffStats sample_null_stats(const Scenario& scenario, std::uint64_t rep_index) {
    const int q = scenario.q;
    const int df = scenario.n - 1;
    auto rng = stream_for(scenario.base_seed, rep_index);
    std::normal_distribution<double> normal;
    const Matrix l = cholesky(scenario.sigma0.matrix() / scenario.n).matrixL();

    Matrix b;
    if (df >= q) {
        Matrix a = Matrix::Zero(q, q);
        for (int i = 0; i < q; ++i) {
            std::chi_squared_distribution<double> chi2(df - i);
            a(i, i) = std::sqrt(chi2(rng));
            for (int j = 0; j < i; ++j) a(i, j) = normal(rng);
        }
        b = l * a;
    } else {
        // too few degrees of freedom for the Bartlett factor: centred rows
        Matrix z(q, df);
        for (int r = 0; r < df; ++r)
            for (int i = 0; i < q; ++i) z(i, r) = normal(rng);
        b = l * z;
    }
    return stats_from_covariance(scenario.n, SymMatrix::symmetrized(b * b.transpose()));
}

SymMatrix default_null_sigma(const Graph& null_graph, const std::string& family) {
    const int q = null_graph.order();
    if (q < 1) throw ValidationError("default_null_sigma: empty graph");
    if (family == "block") {
        Matrix s = Matrix::Identity(q, q);
        for (const auto& comp : components(null_graph)) {
            for (std::size_t a = 0; a < comp.size(); ++a)
                for (std::size_t b = 0; b < a; ++b) {
                    if (!null_graph.adjacent(comp[a], comp[b]))
                        throw ValidationError("default_null_sigma: block family needs complete components");
                    s(comp[a], comp[b]) = s(comp[b], comp[a]) = 0.5;
                }
        }
        return SymMatrix(s);
    }
    if (family == "md") {
        Matrix omega = Matrix::Identity(q, q);
        for (int i = 1; i < q; ++i) {
            if (!null_graph.adjacent(i, i - 1))
                throw ValidationError("default_null_sigma: md family needs every edge (i, i+1) in the null graph");
            omega(i, i - 1) = omega(i - 1, i) = -0.3;
        }
        return inverse_pd(omega);
    }
    throw ValidationError("default_null_sigma: unknown family '" + family + "' (expected md or block)");
}

SimReport run_scenario(const Scenario& scenario, int workers, bool store_pvalues) {
    scenario.validate();
    if (workers < 1) throw ValidationError("run_scenario: worker count must be positive");
    const auto pair = nest(scenario.null_graph, scenario.alt_graph);
    const auto reps = static_cast<std::size_t>(scenario.replications);
    constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

    std::vector<std::array<double, 4>> pvalues(reps, {kNaN, kNaN, kNaN, kNaN});
    std::vector<std::string> errors(reps);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t r = next++; r < reps; r = next++) {
            try {
                const auto stats = sample_null_stats(scenario, r);
                const auto rep = test_nested(stats, pair, scenario.quad);
                pvalues[r] = {rep.p_lr, rep.p_star, rep.p_star2, rep.p_dir};
            } catch (const std::exception& e) {
                errors[r] = e.what();
                if (errors[r].empty()) errors[r] = "unknown failure";
            }
        }
    };
    const int threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), std::max<std::size_t>(reps, 1)));
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();

    SimReport report;
    report.levels = scenario.nominal_levels;
    report.replications = scenario.replications;
    for (std::size_t r = 0; r < reps; ++r)
        if (!errors[r].empty()) {
            if (report.failures == 0) report.first_failure = "replication " + std::to_string(r) + ": " + errors[r];
            ++report.failures;
        }
    const double ok = static_cast<double>(scenario.replications - report.failures);
    for (std::size_t m = 0; m < kMethodNames.size(); ++m) {
        MethodRow row{kMethodNames[m], {}, {}};
        for (double level : scenario.nominal_levels) {
            long hits = 0;
            for (std::size_t r = 0; r < reps; ++r)
                if (errors[r].empty() && pvalues[r][m] <= level) ++hits;
            row.empirical.push_back(ok > 0 ? 100.0 * hits / ok : 0.0);
            row.std_error.push_back(ok > 0 ? 100.0 * std::sqrt(level * (1.0 - level) / ok) : 0.0);
        }
        report.rows.push_back(std::move(row));
    }
    if (store_pvalues) {
        report.pvalues = std::move(pvalues);
        report.has_pvalues = true;
    }
    return report;
}

std::vector<RelativeErrorRow> relative_error_table(const SimReport& report, std::vector<double> grid) {
    if (!report.has_pvalues) throw ValidationError("relative_error_table: report holds no per-replication p-values");
    if (grid.empty())
        for (int k = 1; k < 200; ++k) grid.push_back(0.005 * k);
    std::vector<RelativeErrorRow> out;
    for (std::size_t m = 0; m < kMethodNames.size(); ++m) {
        std::vector<double> ps;
        for (const auto& p : report.pvalues)
            if (!std::isnan(p[m])) ps.push_back(p[m]);
        std::sort(ps.begin(), ps.end());
        for (double a : grid) {
            const auto hits = std::upper_bound(ps.begin(), ps.end(), a) - ps.begin();
            const double emp = ps.empty() ? 0.0 : static_cast<double>(hits) / ps.size();
            out.push_back({kMethodNames[m], a, emp, (emp - a) / a});
        }
    }
    return out;
}

}  // namespace ggmdir
