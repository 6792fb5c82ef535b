#include "ggmdir/graph.hpp"

#include "ggmdir/errors.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <string>

namespace ggmdir {

namespace {

std::string one_based(const Edge& e) {
    return "(" + std::to_string(e.i + 1) + "," + std::to_string(e.j + 1) + ")";
}

}  // namespace

Graph::Graph(int q, const std::vector<Edge>& off_diagonal) : q_(q) {
    if (q < 1) throw ValidationError("graph: vertex count must be at least 1");
    adj_.assign(static_cast<std::size_t>(q) * q, 0);
    for (auto e : off_diagonal) {
        if (e.i < e.j) std::swap(e.i, e.j);
        if (e.j < 0 || e.i >= q)
            throw ValidationError("graph: edge " + one_based(e) + " out of range for q=" + std::to_string(q));
        if (e.i == e.j) throw ValidationError("graph: self loop " + one_based(e));
        auto& cell = adj_[static_cast<std::size_t>(e.i) * q + e.j];
        if (cell) throw ValidationError("graph: duplicate edge " + one_based(e));
        cell = 1;
        adj_[static_cast<std::size_t>(e.j) * q + e.i] = 1;
    }
    nbrs_.assign(q, {});
    for (int j = 0; j < q; ++j)
        for (int i = j; i < q; ++i)
            if (i == j || adjacent(i, j)) {
                edges_.push_back({i, j});
                if (i != j) {
                    nbrs_[i].push_back(j);
                    nbrs_[j].push_back(i);
                }
            }
    for (auto& n : nbrs_) std::sort(n.begin(), n.end());
}

std::vector<Edge> Graph::complement() const {
    std::vector<Edge> h;
    for (int j = 0; j < q_; ++j)
        for (int i = j + 1; i < q_; ++i)
            if (!adjacent(i, j)) h.push_back({i, j});
    return h;
}

std::vector<Edge> Graph::off_diagonal_edges() const {
    std::vector<Edge> out;
    for (const auto& e : edges_)
        if (!e.diagonal()) out.push_back(e);
    return out;
}

bool Graph::contains(const Graph& sub) const {
    if (sub.q_ != q_) return false;
    for (const auto& e : sub.edges_)
        if (!e.diagonal() && !adjacent(e.i, e.j)) return false;
    return true;
}

Graph build_graph(int q, const std::vector<Edge>& off_diagonal) { return Graph(q, off_diagonal); }

Graph saturated_graph(int q) { return markov_graph(q, q - 1); }

Graph markov_graph(int q, int m) {
    if (q < 1) throw ValidationError("markov graph: q must be at least 1");
    if (m < 0 || m > q - 1)
        throw ValidationError("markov graph: order " + std::to_string(m) + " outside [0, " +
                              std::to_string(q - 1) + "]");
    std::vector<Edge> e;
    for (int j = 0; j < q; ++j)
        for (int i = j + 1; i < q && i - j <= m; ++i) e.push_back({i, j});
    return Graph(q, e);
}

Graph block_graph(const std::vector<int>& block_sizes, const std::vector<Edge>& extra_edges) {
    if (block_sizes.empty()) throw ValidationError("block graph: no blocks given");
    std::vector<int> block_of;
    for (std::size_t b = 0; b < block_sizes.size(); ++b) {
        if (block_sizes[b] < 1) throw ValidationError("block graph: block sizes must be positive");
        block_of.insert(block_of.end(), block_sizes[b], static_cast<int>(b));
    }
    const int q = static_cast<int>(block_of.size());
    std::vector<Edge> e;
    for (int j = 0; j < q; ++j)
        for (int i = j + 1; i < q; ++i)
            if (block_of[i] == block_of[j]) e.push_back({i, j});
    for (auto x : extra_edges) {
        if (x.i < x.j) std::swap(x.i, x.j);
        if (x.j < 0 || x.i >= q)
            throw ValidationError("block graph: extra edge " + one_based(x) + " out of range for q=" +
                                  std::to_string(q));
        if (x.i != x.j && block_of[x.i] == block_of[x.j])
            throw ValidationError("block graph: extra edge " + one_based(x) + " lies inside a block");
        e.push_back(x);
    }
    return Graph(q, e);
}

ChordalityVerdict chordality(const Graph& g) {
    const int q = g.order();
    std::vector<int> weight(q, 0), position(q, -1);
    ChordalityVerdict out;
    out.order.reserve(q);
    for (int step = 0; step < q; ++step) {
        int best = -1;
        for (int v = 0; v < q; ++v)
            if (position[v] < 0 && (best < 0 || weight[v] > weight[best])) best = v;
        position[best] = step;
        out.order.push_back(best);
        for (int u : g.neighbours(best))
            if (position[u] < 0) ++weight[u];
    }
    // Reverse visit order is a perfect elimination ordering iff, for every
    // vertex, its earlier neighbours other than the latest one are earlier
    // neighbours of that latest one.
    for (int v : out.order) {
        int parent = -1;
        for (int u : g.neighbours(v))
            if (position[u] < position[v] && (parent < 0 || position[u] > position[parent])) parent = u;
        if (parent < 0) continue;
        for (int u : g.neighbours(v)) {
            if (u == parent || position[u] >= position[v]) continue;
            if (!g.adjacent(u, parent)) {
                out.fill_in_vertex = v;
                return out;
            }
        }
    }
    return out;
}

std::size_t ChordalDecomposition::max_clique_size() const {
    std::size_t m = 0;
    for (const auto& c : cliques) m = std::max(m, c.size());
    return m;
}

std::optional<ChordalDecomposition> try_clique_decomposition(const Graph& g) {
    const auto verdict = chordality(g);
    if (!verdict.chordal()) return std::nullopt;
    const int q = g.order();
    std::vector<int> position(q, -1);
    ChordalDecomposition dec;
    std::size_t prev_count = 0;
    for (int step = 0; step < q; ++step) {
        const int v = verdict.order[step];
        std::vector<int> earlier;
        for (int u : g.neighbours(v))
            if (position[u] >= 0) earlier.push_back(u);
        position[v] = step;
        const std::size_t count = earlier.size();
        // A vertex extends the current clique exactly when its earlier
        // neighbourhood grew by one; otherwise it opens a new clique whose
        // separator is that neighbourhood.
        if (step == 0 || count != prev_count + 1) {
            std::sort(earlier.begin(), earlier.end());
            if (step > 0) dec.separators.push_back(earlier);
            earlier.push_back(v);
            std::sort(earlier.begin(), earlier.end());
            dec.cliques.push_back(std::move(earlier));
        } else {
            auto& c = dec.cliques.back();
            c.insert(std::upper_bound(c.begin(), c.end(), v), v);
        }
        prev_count = count;
    }
    return dec;
}

ChordalDecomposition clique_decomposition(const Graph& g) {
    auto dec = try_clique_decomposition(g);
    if (!dec) {
        const auto verdict = chordality(g);
        const int v = *verdict.fill_in_vertex;
        throw NotChordalError("graph is not chordal: fill-in required at vertex " + std::to_string(v + 1), v);
    }
    return *dec;
}

namespace {

void bron_kerbosch(const Graph& g, std::vector<int>& r, std::vector<int> p, std::vector<int> x,
                   std::vector<std::vector<int>>& out) {
    if (p.empty() && x.empty()) {
        auto c = r;
        std::sort(c.begin(), c.end());
        out.push_back(std::move(c));
        return;
    }
    int pivot = -1;
    std::size_t best = 0;
    for (const auto* set : {&p, &x})
        for (int u : *set) {
            std::size_t cnt = 0;
            for (int v : p)
                if (g.adjacent(u, v)) ++cnt;
            if (pivot < 0 || cnt > best) {
                pivot = u;
                best = cnt;
            }
        }
    std::vector<int> candidates;
    for (int v : p)
        if (v == pivot || !g.adjacent(pivot, v)) candidates.push_back(v);
    for (int v : candidates) {
        std::vector<int> p2, x2;
        for (int u : p)
            if (u != v && g.adjacent(u, v)) p2.push_back(u);
        for (int u : x)
            if (g.adjacent(u, v)) x2.push_back(u);
        r.push_back(v);
        bron_kerbosch(g, r, std::move(p2), std::move(x2), out);
        r.pop_back();
        p.erase(std::find(p.begin(), p.end(), v));
        x.push_back(v);
    }
}

}  // namespace

std::vector<std::vector<int>> maximal_cliques(const Graph& g) {
    std::vector<std::vector<int>> out;
    std::vector<int> r, p(g.order()), x;
    std::iota(p.begin(), p.end(), 0);
    bron_kerbosch(g, r, std::move(p), std::move(x), out);
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t max_clique_size(const Graph& g) {
    if (auto dec = try_clique_decomposition(g)) return dec->max_clique_size();
    std::size_t m = 0;
    for (const auto& c : maximal_cliques(g)) m = std::max(m, c.size());
    return m;
}

NestedPair nest(const Graph& null_graph, const Graph& alt_graph) {
    if (null_graph.order() != alt_graph.order())
        throw NotNestedError("graphs have different vertex counts (" + std::to_string(null_graph.order()) +
                             " vs " + std::to_string(alt_graph.order()) + ")");
    std::vector<Edge> missing;
    for (const auto& e : null_graph.off_diagonal_edges())
        if (!alt_graph.adjacent(e.i, e.j)) missing.push_back(e);
    if (!missing.empty()) {
        std::ostringstream msg;
        msg << "null graph is not contained in the alternative; missing edges:";
        for (const auto& e : missing) msg << ' ' << one_based(e);
        throw NotNestedError(msg.str());
    }
    NestedPair pair{null_graph, alt_graph, {}, 0};
    for (const auto& e : alt_graph.off_diagonal_edges())
        if (!null_graph.adjacent(e.i, e.j)) pair.interest_edges.push_back(e);
    pair.d = static_cast<int>(pair.interest_edges.size());
    return pair;
}

}  // namespace ggmdir
