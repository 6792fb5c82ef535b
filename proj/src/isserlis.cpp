#include "ggmdir/isserlis.hpp"

#include "ggmdir/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ggmdir {

IsserlisBlock isserlis_block(const Matrix& s, const std::vector<Edge>& edges) {
    const auto q = static_cast<int>(s.rows());
    for (const auto& e : edges)
        if (e.j < 0 || e.i >= q || e.i < e.j)
            throw IndexError("isserlis_block: pair (" + std::to_string(e.i) + "," + std::to_string(e.j) +
                             ") invalid for order " + std::to_string(q));
    const auto p = static_cast<Eigen::Index>(edges.size());
    Matrix m(p, p);
    for (Eigen::Index b = 0; b < p; ++b) {
        const auto [r, c] = edges[b];
        for (Eigen::Index a = b; a < p; ++a) {
            const auto [i, j] = edges[a];
            const double v = s(i, r) * s(j, c) + s(i, c) * s(j, r);
            m(a, b) = v;
            m(b, a) = v;
        }
    }
    return {edges, std::move(m)};
}

IsserlisBlock isserlis_block(const SymMatrix& s, const std::vector<Edge>& edges) {
    return isserlis_block(s.matrix(), edges);
}

double isserlis_logdet_dense(const Matrix& a, const std::vector<Edge>& edges) {
    return logdet_pd(isserlis_block(a, edges).matrix);
}

double isserlis_logdet(const Matrix& a, const Graph& graph, const std::optional<ChordalDecomposition>& decomp) {
    if (!decomp) return isserlis_logdet_dense(a, graph.edges());
    double out = graph.order() * std::numbers::ln2;
    for (const auto& c : decomp->cliques) out += (static_cast<double>(c.size()) + 1.0) * logdet_pd(principal(a, c));
    for (const auto& s : decomp->separators)
        if (!s.empty()) out -= (static_cast<double>(s.size()) + 1.0) * logdet_pd(principal(a, s));
    return out;
}

double isserlis_logdet(const SymMatrix& a, const Graph& graph, const std::optional<ChordalDecomposition>& decomp) {
    return isserlis_logdet(a.matrix(), graph, decomp);
}

}  // namespace ggmdir
