#include "ggmdir/linalg.hpp"

#include "ggmdir/errors.hpp"

#include <cmath>
#include <string>

namespace ggmdir {

SymMatrix::SymMatrix(Matrix entries) : m_(std::move(entries)) {
    if (m_.rows() != m_.cols())
        throw ShapeError("SymMatrix: matrix is " + std::to_string(m_.rows()) + "x" +
                         std::to_string(m_.cols()) + ", expected square");
    if (m_.rows() == 0) throw ShapeError("SymMatrix: order must be at least 1");
    for (Eigen::Index j = 0; j < m_.cols(); ++j)
        for (Eigen::Index i = j + 1; i < m_.rows(); ++i)
            if (m_(i, j) != m_(j, i))
                throw ShapeError("SymMatrix: entries (" + std::to_string(i) + "," +
                                 std::to_string(j) + ") and its transpose differ");
}

SymMatrix SymMatrix::symmetrized(const Matrix& a) {
    if (a.rows() != a.cols()) throw ShapeError("SymMatrix::symmetrized: matrix is not square");
    Matrix s = 0.5 * (a + a.transpose());
    return SymMatrix(std::move(s));
}

SymMatrix SymMatrix::identity(int q) { return SymMatrix(Matrix::Identity(q, q)); }

HalfVec::HalfVec(Vector values) : values_(std::move(values)) {
    const auto len = values_.size();
    // q = (sqrt(8 len + 1) - 1) / 2 must be a positive integer
    const auto q = static_cast<int>(std::llround((std::sqrt(8.0 * static_cast<double>(len) + 1.0) - 1.0) / 2.0));
    if (len == 0 || half_size(q) != len)
        throw ShapeError("HalfVec: length " + std::to_string(len) + " is not a triangular number");
    q_ = q;
}

std::vector<Edge> vech_edges(int q) {
    std::vector<Edge> out;
    out.reserve(static_cast<std::size_t>(half_size(q)));
    for (int j = 0; j < q; ++j)
        for (int i = j; i < q; ++i) out.push_back({i, j});
    return out;
}

HalfVec vech(const SymMatrix& a) {
    const int q = a.order();
    Vector v(half_size(q));
    std::ptrdiff_t k = 0;
    for (int j = 0; j < q; ++j)
        for (int i = j; i < q; ++i) v[k++] = a(i, j);
    return HalfVec(std::move(v));
}

SymMatrix unvech(const HalfVec& v) {
    const int q = v.order();
    Matrix a(q, q);
    std::ptrdiff_t k = 0;
    for (int j = 0; j < q; ++j)
        for (int i = j; i < q; ++i) {
            a(i, j) = v[k];
            a(j, i) = v[k];
            ++k;
        }
    return SymMatrix(std::move(a));
}

HalfVec j_weights(int q) {
    Vector w(half_size(q));
    std::ptrdiff_t k = 0;
    for (int j = 0; j < q; ++j)
        for (int i = j; i < q; ++i) w[k++] = (i == j) ? 1.0 : 2.0;
    return HalfVec(std::move(w));
}

namespace {

// Unblocked factorization used only to locate the pivot once the blocked
// Eigen factorization has reported failure.
long failing_pivot(const Matrix& a) {
    const Eigen::Index n = a.rows();
    Matrix l = Matrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double d = a(j, j) - l.row(j).head(j).squaredNorm();
        if (!(d > 0.0) || !std::isfinite(d)) return static_cast<long>(j);
        l(j, j) = std::sqrt(d);
        for (Eigen::Index i = j + 1; i < n; ++i)
            l(i, j) = (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / l(j, j);
    }
    return -1;
}

bool factor_ok(const Eigen::LLT<Matrix>& llt) {
    if (llt.info() != Eigen::Success) return false;
    const auto diag = llt.matrixLLT().diagonal();
    for (Eigen::Index i = 0; i < diag.size(); ++i)
        if (!(diag[i] > 0.0) || !std::isfinite(diag[i])) return false;
    return true;
}

}  // namespace

Eigen::LLT<Matrix> cholesky(const Matrix& a) {
    if (a.rows() != a.cols()) throw ShapeError("cholesky: matrix is not square");
    Eigen::LLT<Matrix> llt(a);
    if (!factor_ok(llt)) {
        long pivot = failing_pivot(a);
        if (pivot < 0) pivot = 0;
        throw NotPositiveDefiniteError(
            "matrix is not positive definite (pivot " + std::to_string(pivot) + ")", pivot);
    }
    return llt;
}

bool is_positive_definite(const Matrix& a) {
    if (a.rows() != a.cols()) return false;
    Eigen::LLT<Matrix> llt(a);
    return factor_ok(llt);
}

double logdet_pd(const Matrix& a) {
    if (a.rows() == 0) return 0.0;
    const auto llt = cholesky(a);
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

double logdet_pd(const SymMatrix& a) { return logdet_pd(a.matrix()); }

SymMatrix inverse_pd(const Matrix& a) {
    const auto llt = cholesky(a);
    return SymMatrix::symmetrized(llt.solve(Matrix::Identity(a.rows(), a.cols())));
}

Matrix principal(const Matrix& a, const std::vector<int>& idx) {
    const auto m = static_cast<Eigen::Index>(idx.size());
    Matrix out(m, m);
    for (Eigen::Index c = 0; c < m; ++c)
        for (Eigen::Index r = 0; r < m; ++r) out(r, c) = a(idx[r], idx[c]);
    return out;
}

}  // namespace ggmdir
