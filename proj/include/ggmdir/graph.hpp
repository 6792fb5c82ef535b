#pragma once

// Undirected graphs on q vertices, stored as the edge set k of a
// concentration matrix: all diagonal pairs plus the off-diagonal nonzero
// pattern, in half-vector order. Vertices are zero-based here; the file
// formats in io.hpp are one-based.

#include "ggmdir/linalg.hpp"

#include <optional>
#include <vector>

namespace ggmdir {

class Graph {
public:
    Graph() = default;

    /// Diagonal pairs are added automatically. Pairs may be given in either
    /// orientation. Throws ValidationError on duplicates, self loops or
    /// out-of-range vertices.
    Graph(int q, const std::vector<Edge>& off_diagonal);

    int order() const noexcept { return q_; }

    /// Edge set k, half-vector order, diagonal pairs included.
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    std::ptrdiff_t p() const noexcept { return static_cast<std::ptrdiff_t>(edges_.size()); }

    /// Complement h: off-diagonal pairs absent from k.
    std::vector<Edge> complement() const;
    std::ptrdiff_t w() const noexcept { return half_size(q_) - p(); }

    std::vector<Edge> off_diagonal_edges() const;
    bool adjacent(int a, int b) const { return adj_[static_cast<std::size_t>(a) * q_ + b]; }
    const std::vector<int>& neighbours(int v) const { return nbrs_[v]; }

    bool saturated() const noexcept { return w() == 0; }

    /// True when every edge of `sub` is an edge of this graph.
    bool contains(const Graph& sub) const;

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.q_ == b.q_ && a.edges_ == b.edges_;
    }

private:
    int q_ = 0;
    std::vector<Edge> edges_;
    std::vector<char> adj_;
    std::vector<std::vector<int>> nbrs_;
};

Graph build_graph(int q, const std::vector<Edge>& off_diagonal);

/// Complete graph on q vertices.
Graph saturated_graph(int q);

/// Banded pattern: (i, j) present iff 0 < |i - j| <= m.
Graph markov_graph(int q, int m);

/// Complete within each consecutive block, plus the listed extra edges.
Graph block_graph(const std::vector<int>& block_sizes, const std::vector<Edge>& extra_edges = {});

/// Maximum cardinality search result.
struct ChordalityVerdict {
    /// Visit order of the search; its reverse is a perfect elimination
    /// ordering when the graph is chordal.
    std::vector<int> order;
    /// Vertex whose earlier-visited neighbours are not a clique.
    std::optional<int> fill_in_vertex;

    bool chordal() const noexcept { return !fill_in_vertex.has_value(); }
};

/// Ties in the search are broken by lowest vertex index.
ChordalityVerdict chordality(const Graph& g);

struct ChordalDecomposition {
    /// Cliques in running-intersection order, each sorted ascending.
    std::vector<std::vector<int>> cliques;
    /// separators[i] = cliques[i + 1] ∩ (cliques[0] ∪ ... ∪ cliques[i]).
    /// May be empty for disconnected graphs.
    std::vector<std::vector<int>> separators;

    std::size_t max_clique_size() const;
};

/// Throws NotChordalError carrying the certificate vertex.
ChordalDecomposition clique_decomposition(const Graph& g);

/// Decomposition when chordal, nullopt otherwise.
std::optional<ChordalDecomposition> try_clique_decomposition(const Graph& g);

/// All maximal cliques (Bron-Kerbosch with pivoting), sorted.
std::vector<std::vector<int>> maximal_cliques(const Graph& g);

/// Largest clique of the graph as given (no triangulation).
std::size_t max_clique_size(const Graph& g);

struct NestedPair {
    Graph null_graph;
    Graph alt_graph;
    /// Off-diagonal edges of alt absent from null, half-vector order.
    std::vector<Edge> interest_edges;
    int d = 0;
};

/// Throws NotNestedError listing the null edges missing from alt.
NestedPair nest(const Graph& null_graph, const Graph& alt_graph);

}  // namespace ggmdir
