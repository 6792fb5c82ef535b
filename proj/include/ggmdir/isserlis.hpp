#pragma once

#include "ggmdir/graph.hpp"
#include "ggmdir/linalg.hpp"

#include <optional>
#include <vector>

namespace ggmdir {

/// Covariance matrix of the sample-covariance entries listed in `edges`
/// under Gaussianity: Cov(u_ij, u_rs) = s_ir s_js + s_is s_jr.
struct IsserlisBlock {
    std::vector<Edge> edges;
    Matrix matrix;
};

/// Throws IndexError for pairs outside the matrix or with i < j.
IsserlisBlock isserlis_block(const SymMatrix& s, const std::vector<Edge>& edges);
IsserlisBlock isserlis_block(const Matrix& s, const std::vector<Edge>& edges);

/// ln|Iss(a)_kk| for the edge set k of `graph`.
///
/// With a decomposition the clique/separator product
///   q ln 2 + sum_C (|C|+1) ln|a_CC| - sum_S (|S|+1) ln|a_SS|
/// is used; without one the block is built densely and factorized. The two
/// agree when a^-1 vanishes off the graph, e.g. for a fitted covariance. For
/// other a the product reads only the clique blocks, so it is the value at
/// the maximum-determinant completion of those blocks.
double isserlis_logdet(const SymMatrix& a, const Graph& graph,
                       const std::optional<ChordalDecomposition>& decomp = std::nullopt);
double isserlis_logdet(const Matrix& a, const Graph& graph,
                       const std::optional<ChordalDecomposition>& decomp = std::nullopt);

/// Dense path only, any edge list.
double isserlis_logdet_dense(const Matrix& a, const std::vector<Edge>& edges);

}  // namespace ggmdir
