#pragma once

// Symmetric-matrix primitives shared by the whole library.
//
// Ordering convention: half-vectors stack the lower triangle (diagonal
// included) column by column, so for q = 3 the positions are
// (0,0) (1,0) (2,0) (1,1) (2,1) (2,2). Every edge list, Isserlis block and
// half-vector in the library uses this order.

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cstddef>
#include <vector>

namespace ggmdir {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Index pair (i, j) with i >= j, zero-based.
struct Edge {
    int i = 0;
    int j = 0;

    bool diagonal() const noexcept { return i == j; }
    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Dense symmetric matrix. Symmetry is exact: entries(i,j) == entries(j,i).
class SymMatrix {
public:
    SymMatrix() = default;

    /// Throws ShapeError on non-square, empty or asymmetric input.
    explicit SymMatrix(Matrix entries);

    /// Averages `a` with its transpose before wrapping. Use for results of
    /// floating-point inversions that are symmetric only up to rounding.
    static SymMatrix symmetrized(const Matrix& a);

    static SymMatrix identity(int q);

    int order() const noexcept { return static_cast<int>(m_.rows()); }
    double operator()(int i, int j) const { return m_(i, j); }
    const Matrix& matrix() const noexcept { return m_; }

    friend bool operator==(const SymMatrix& a, const SymMatrix& b) {
        return a.m_.rows() == b.m_.rows() && a.m_ == b.m_;
    }

private:
    Matrix m_;
};

/// Half-vectorized symmetric matrix of order q; values has q(q+1)/2 entries.
class HalfVec {
public:
    HalfVec() = default;

    /// Throws ShapeError when the length is not a triangular number.
    explicit HalfVec(Vector values);

    int order() const noexcept { return q_; }
    std::ptrdiff_t size() const noexcept { return values_.size(); }
    double operator[](std::ptrdiff_t k) const { return values_[k]; }
    const Vector& values() const noexcept { return values_; }

    friend bool operator==(const HalfVec& a, const HalfVec& b) {
        return a.q_ == b.q_ && a.values_ == b.values_;
    }

private:
    int q_ = 0;
    Vector values_;
};

/// q(q+1)/2
constexpr std::ptrdiff_t half_size(int q) noexcept {
    return static_cast<std::ptrdiff_t>(q) * (q + 1) / 2;
}

/// Position of (i, j), i >= j, inside a half-vector of order q.
constexpr std::ptrdiff_t vech_index(int q, int i, int j) noexcept {
    return static_cast<std::ptrdiff_t>(j) * q - static_cast<std::ptrdiff_t>(j) * (j - 1) / 2 + (i - j);
}

/// All q(q+1)/2 index pairs in half-vector order.
std::vector<Edge> vech_edges(int q);

HalfVec vech(const SymMatrix& a);
SymMatrix unvech(const HalfVec& v);

/// Diagonal of J = G'G: 1 at diagonal positions, 2 elsewhere.
HalfVec j_weights(int q);

/// Cholesky factorization of a symmetric matrix (lower triangle read).
/// Throws NotPositiveDefiniteError with the first failing pivot.
Eigen::LLT<Matrix> cholesky(const Matrix& a);

/// True when the Cholesky factorization succeeds with positive pivots.
bool is_positive_definite(const Matrix& a);

/// ln det(a) for a positive definite a, via Cholesky.
double logdet_pd(const SymMatrix& a);
double logdet_pd(const Matrix& a);

/// Inverse of a positive definite matrix, symmetrized.
SymMatrix inverse_pd(const Matrix& a);

/// Principal submatrix a[idx, idx].
Matrix principal(const Matrix& a, const std::vector<int>& idx);

}  // namespace ggmdir
