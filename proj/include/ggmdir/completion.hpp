#pragma once

#include "ggmdir/graph.hpp"
#include "ggmdir/linalg.hpp"

#include <optional>

namespace ggmdir {

struct CompletionOptions {
    double tol = 1e-10;
    int max_iterations = 200;
};

/// Maximum-determinant positive definite completion of a partial matrix.
struct Completion {
    Matrix omega;  // zero off the graph
    Matrix sigma;  // omega^-1, equal to the target on the graph's edges
    double iss_logdet = 0.0;  // ln|Iss(sigma)_kk|
    int iterations = 0;
};

/// Damped Newton ascent of ln|omega| - tr(omega target) over the
/// concentration entries on the graph's edges. `start` must be positive
/// definite and zero off the graph. Returns nullopt when the iteration
/// diverges, i.e. the partial matrix has no positive definite completion.
std::optional<Completion> newton_completion(const Matrix& target, const Graph& g, const Matrix& start,
                                            const CompletionOptions& opts = {});

}  // namespace ggmdir
