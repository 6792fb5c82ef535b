#include "catch_amalgamated.hpp"

#include "ggmdir/completion.hpp"
#include "ggmdir/isserlis.hpp"
#include "ggmdir/mle.hpp"
#include "support.hpp"

using namespace ggmdir;
using Catch::Matchers::WithinRel;

TEST_CASE("Newton completion matches the brute-force completion", "[completion]") {
    std::mt19937_64 rng(41);
    for (int rep = 0; rep < 40; ++rep) {
        const int q = 3 + rep % 5;
        const auto g = testsupport::random_graph(rng, q, 0.5);
        const Matrix target = testsupport::random_spd(rng, q);
        Matrix start = Matrix::Zero(q, q);
        for (int i = 0; i < q; ++i) start(i, i) = 1.0 / target(i, i);
        const auto c = newton_completion(target, g, start);
        REQUIRE(c.has_value());
        const Matrix oracle = testsupport::completion_bruteforce(target, g);
        CHECK((c->sigma - oracle).cwiseAbs().maxCoeff() < 1e-9);
        for (const auto& [i, j] : g.complement()) CHECK(c->omega(i, j) == 0.0);
        CHECK_THAT(c->iss_logdet, WithinRel(isserlis_logdet_dense(oracle, g.edges()), 1e-9));
    }
}

TEST_CASE("Newton completion agrees with the closed form on chordal graphs", "[completion]") {
    std::mt19937_64 rng(42);
    for (int rep = 0; rep < 20; ++rep) {
        const auto g = testsupport::random_chordal(rng, 4 + rep % 5);
        const int q = g.order();
        const Matrix target = testsupport::random_spd(rng, q);
        const auto c = newton_completion(target, g, Matrix::Identity(q, q));
        REQUIRE(c.has_value());
        const Matrix closed = decomposable_omega(target, clique_decomposition(g));
        CHECK((c->omega - closed).cwiseAbs().maxCoeff() < 1e-9 * closed.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("no completion when a clique block is indefinite", "[completion]") {
    Matrix target = Matrix::Identity(3, 3);
    target(1, 0) = target(0, 1) = 1.2;
    const auto g = markov_graph(3, 1);
    CHECK_FALSE(newton_completion(target, g, Matrix::Identity(3, 3)).has_value());
}

TEST_CASE("no completion for an infeasible four-cycle", "[completion]") {
    // correlations 0.9, 0.9, 0.9, -0.9 around a chordless cycle: every edge
    // is a valid 2x2 block but no positive definite completion exists
    Matrix target = Matrix::Identity(4, 4);
    target(1, 0) = target(0, 1) = 0.9;
    target(2, 1) = target(1, 2) = 0.9;
    target(3, 2) = target(2, 3) = 0.9;
    target(3, 0) = target(0, 3) = -0.9;
    const auto g = build_graph(4, {{1, 0}, {2, 1}, {3, 2}, {3, 0}});
    CHECK_FALSE(newton_completion(target, g, Matrix::Identity(4, 4)).has_value());
}

TEST_CASE("invalid start gives no completion", "[completion]") {
    Matrix start = Matrix::Identity(3, 3);
    start(0, 0) = -1.0;
    CHECK_FALSE(newton_completion(Matrix::Identity(3, 3), markov_graph(3, 1), start).has_value());
}
