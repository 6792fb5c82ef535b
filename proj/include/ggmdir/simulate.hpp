#pragma once

// Monte Carlo calibration of the four tests under the null model.

#include "ggmdir/dirtest.hpp"
#include "ggmdir/graph.hpp"
#include "ggmdir/mle.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace ggmdir {

struct Scenario {
    int q = 0;
    int n = 0;
    SymMatrix sigma0;
    Graph null_graph;
    Graph alt_graph;
    long replications = 0;
    std::uint64_t base_seed = 0;
    /// Probabilities, strictly increasing in (0, 1).
    std::vector<double> nominal_levels{0.01, 0.025, 0.05, 0.10, 0.25, 0.50, 0.75, 0.90, 0.95, 0.975, 0.99};
    QuadratureConfig quad;

    /// Throws ValidationError unless sigma0 is PD, of order q and Markov with
    /// respect to the null graph, the graphs are nested and the alternative
    /// MLE exists at sample size n.
    void validate() const;
};

inline constexpr std::array<const char*, 4> kMethodNames{"w", "w*", "w**", "directional"};

struct MethodRow {
    std::string method;
    std::vector<double> empirical;  // percent
    std::vector<double> std_error;  // percent, at the nominal level
};

struct SimReport {
    std::vector<double> levels;  // probabilities
    std::vector<MethodRow> rows;
    long replications = 0;
    long failures = 0;
    /// First failure message, empty when none.
    std::string first_failure;
    /// Per replication p-values in method order; NaN for failed replications.
    std::vector<std::array<double, 4>> pvalues;
    bool has_pvalues = false;
};

/// Draw of the sufficient statistics under the null: S_sat ~ W_q(n-1, sigma0/n)
/// by the Bartlett decomposition, from a stream determined by
/// (base_seed, rep_index) alone.
SuffStats sample_null_stats(const Scenario& scenario, std::uint64_t rep_index);

/// "block": unit diagonal, 0.5 between vertices in the same connected
/// component (each component must be complete). "md": inverse of the
/// tridiagonal matrix with unit diagonal and -0.3 next to it.
SymMatrix default_null_sigma(const Graph& null_graph, const std::string& family);

SimReport run_scenario(const Scenario& scenario, int workers = 1, bool store_pvalues = true);

struct RelativeErrorRow {
    std::string method;
    double nominal = 0.0;
    double empirical = 0.0;
    double relative_error = 0.0;
};

/// (empirical - nominal) / nominal on a grid of nominal levels, from the
/// stored p-values. Defaults to 0.005, 0.010, ..., 0.995.
std::vector<RelativeErrorRow> relative_error_table(const SimReport& report, std::vector<double> grid = {});

}  // namespace ggmdir
