#pragma once

// Shared fixtures and independent oracles for the unit and acceptance tests.
// Nothing here calls into the code paths it is used to check.

#include "ggmdir/graph.hpp"
#include "ggmdir/linalg.hpp"
#include "ggmdir/mle.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>
#include <vector>

namespace testsupport {

using ggmdir::Edge;
using ggmdir::Graph;
using ggmdir::Matrix;
using ggmdir::Vector;

inline Matrix random_normal(std::mt19937_64& rng, int rows, int cols) {
    std::normal_distribution<double> z;
    Matrix m(rows, cols);
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r) m(r, c) = z(rng);
    return m;
}

/// Well-conditioned random SPD matrix: X'X/m + 0.5 I.
inline Matrix random_spd(std::mt19937_64& rng, int q) {
    const Matrix x = random_normal(rng, q + 3, q);
    Matrix a = x.transpose() * x / (q + 3.0) + 0.5 * Matrix::Identity(q, q);
    return 0.5 * (a + a.transpose());
}

/// Random SPD matrix whose inverse vanishes off the graph.
inline Matrix random_markov_sigma(std::mt19937_64& rng, const Graph& g) {
    const int q = g.order();
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    Matrix omega = Matrix::Zero(q, q);
    for (const auto& [i, j] : g.off_diagonal_edges()) omega(i, j) = omega(j, i) = u(rng);
    // diagonal dominance keeps it PD
    for (int i = 0; i < q; ++i) omega(i, i) = 1.0 + omega.row(i).cwiseAbs().sum();
    Matrix s = omega.inverse();
    return 0.5 * (s + s.transpose());
}

inline double logdet_eigen(const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a);
    return es.eigenvalues().array().log().sum();
}

inline Matrix data_from(std::mt19937_64& rng, const Matrix& sigma, int n) {
    const Matrix l = sigma.llt().matrixL();
    return random_normal(rng, n, static_cast<int>(sigma.rows())) * l.transpose();
}

inline ggmdir::SuffStats stats_from(std::mt19937_64& rng, const Matrix& sigma, int n) {
    return ggmdir::suff_stats(data_from(rng, sigma, n));
}

/// Random graph with each off-diagonal pair present with probability `density`.
inline Graph random_graph(std::mt19937_64& rng, int q, double density) {
    std::bernoulli_distribution coin(density);
    std::vector<Edge> edges;
    for (int j = 0; j < q; ++j)
        for (int i = j + 1; i < q; ++i)
            if (coin(rng)) edges.push_back({i, j});
    return Graph(q, edges);
}

/// Random chordal graph: each new vertex joins a random clique-subset of a
/// random earlier vertex's closed neighbourhood (a perfect elimination
/// ordering by construction).
inline Graph random_chordal(std::mt19937_64& rng, int q, double keep = 0.7) {
    std::vector<std::vector<char>> adj(q, std::vector<char>(q, 0));
    std::bernoulli_distribution coin(keep);
    for (int v = 1; v < q; ++v) {
        std::uniform_int_distribution<int> pick(0, v - 1);
        const int anchor = pick(rng);
        std::vector<int> clique{anchor};
        for (int w = 0; w < v; ++w)
            if (w != anchor && adj[anchor][w]) {
                bool ok = true;
                for (int c : clique) ok = ok && adj[c][w];
                if (ok && coin(rng)) clique.push_back(w);
            }
        if (!coin(rng) && v > 1) continue;  // sometimes start a new component
        for (int c : clique) adj[v][c] = adj[c][v] = 1;
    }
    std::vector<Edge> edges;
    for (int j = 0; j < q; ++j)
        for (int i = j + 1; i < q; ++i)
            if (adj[i][j]) edges.push_back({i, j});
    return Graph(q, edges);
}

/// Subgraph keeping each off-diagonal edge with probability `keep`.
inline Graph random_subgraph(std::mt19937_64& rng, const Graph& g, double keep) {
    std::bernoulli_distribution coin(keep);
    std::vector<Edge> edges;
    for (const auto& e : g.off_diagonal_edges())
        if (coin(rng)) edges.push_back(e);
    return Graph(g.order(), edges);
}

/// Explicit duplication matrix: vec A = G vech A, column-major vec.
inline Matrix duplication_matrix(int q) {
    const int qs = q * (q + 1) / 2;
    Matrix g = Matrix::Zero(q * q, qs);
    int col = 0;
    for (int j = 0; j < q; ++j)
        for (int i = j; i < q; ++i, ++col) {
            g(j * q + i, col) = 1.0;
            g(i * q + j, col) = 1.0;
        }
    return g;
}

/// Isserlis block from the vec-level covariance (I + K)(S kron S) restricted
/// to the listed pairs.
inline Matrix isserlis_via_kronecker(const Matrix& s, const std::vector<Edge>& k) {
    const int q = static_cast<int>(s.rows());
    Matrix kron(q * q, q * q);
    for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b) kron.block(a * q, b * q, q, q) = s(a, b) * s;
    Matrix comm = Matrix::Zero(q * q, q * q);
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) comm(i * q + j, j * q + i) = 1.0;
    const Matrix m = (Matrix::Identity(q * q, q * q) + comm) * kron;
    Matrix out(k.size(), k.size());
    // vec index of (i, j) in column-major order is j*q + i
    for (std::size_t a = 0; a < k.size(); ++a)
        for (std::size_t b = 0; b < k.size(); ++b)
            out(a, b) = m(k[a].j * q + k[a].i, k[b].j * q + k[b].i);
    return out;
}

/// Brute force: does the graph contain an induced cycle of length >= 4?
inline bool has_chordless_cycle(const Graph& g) {
    const int q = g.order();
    std::vector<int> path;
    std::vector<char> used(q, 0);
    // extend simple paths whose internal vertices are chord-free
    auto extend = [&](auto&& self) -> bool {
        const int last = path.back();
        for (int w : g.neighbours(last)) {
            if (used[w]) continue;
            if (w < path.front()) continue;  // the start is the smallest vertex
            bool chord = false;
            for (std::size_t k = 1; k + 1 < path.size() && !chord; ++k) chord = g.adjacent(w, path[k]);
            if (chord) continue;
            const bool closes = path.size() >= 2 && g.adjacent(w, path.front());
            if (closes && path.size() >= 3) return true;
            if (closes) continue;  // a triangle or a chord to the start
            path.push_back(w);
            used[w] = 1;
            if (self(self)) return true;
            used[w] = 0;
            path.pop_back();
        }
        return false;
    };
    for (int s = 0; s < q; ++s) {
        path = {s};
        std::fill(used.begin(), used.end(), 0);
        used[s] = 1;
        if (extend(extend)) return true;
    }
    return false;
}

/// Max-determinant completion by cyclic coordinate ascent over the
/// off-graph entries of a positive definite starting matrix: each entry is
/// set so that the corresponding inverse entry vanishes.
inline Matrix completion_bruteforce(const Matrix& partial, const Graph& g) {
    const auto h = g.complement();
    Matrix s = partial;
    for (int sweep = 0; sweep < 2000; ++sweep) {
        double worst = 0.0;
        for (const auto& [i, j] : h) {
            // (S^-1)_ij = 0 iff s_ij = s_iR S_RR^-1 s_Rj, R = the other vertices
            std::vector<int> rest;
            for (int v = 0; v < s.rows(); ++v)
                if (v != i && v != j) rest.push_back(v);
            double target = 0.0;
            if (!rest.empty()) {
                Matrix srr(rest.size(), rest.size());
                Vector si(rest.size()), sj(rest.size());
                for (std::size_t a = 0; a < rest.size(); ++a) {
                    si[a] = s(i, rest[a]);
                    sj[a] = s(j, rest[a]);
                    for (std::size_t b = 0; b < rest.size(); ++b) srr(a, b) = s(rest[a], rest[b]);
                }
                target = si.dot(srr.ldlt().solve(sj));
            }
            worst = std::max(worst, std::abs(target - s(i, j)));
            s(i, j) = s(j, i) = target;
        }
        if (worst < 1e-15) break;
    }
    return s;
}

}  // namespace testsupport
