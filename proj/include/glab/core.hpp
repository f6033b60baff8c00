#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "glab/errors.hpp"
#include "glab/rng.hpp"

namespace glab {

/// A linear subspace of R^d held as an orthonormal column frame.
///
/// Frames are never unique; consumers must stay basis-free (brackets,
/// projection residuals). Equality of spans is tested through bracket == 1,
/// never by comparing frames.
template <typename Scalar>
class SubspaceT {
  public:
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    SubspaceT() = default;

    SubspaceT(Eigen::Index ambient, Matrix frame) : ambient_(ambient), frame_(std::move(frame)) {
        if (ambient_ < 1 || frame_.rows() != ambient_ || frame_.cols() > ambient_)
            throw InvalidDimension("Subspace: frame shape inconsistent with ambient dimension");
    }

    /// Full space R^d (identity frame).
    static SubspaceT full(Eigen::Index d) {
        return SubspaceT(d, Matrix::Identity(d, d));
    }

    /// Span of the first k coordinate axes.
    static SubspaceT coordinate(Eigen::Index d, Eigen::Index k) {
        return SubspaceT(d, Matrix::Identity(d, d).leftCols(k));
    }

    /// Span of an arbitrary full-column-rank matrix, orthonormalized.
    template <typename Derived>
    static SubspaceT from_span(const Eigen::MatrixBase<Derived>& columns);

    Eigen::Index ambient_dim() const { return ambient_; }
    Eigen::Index sub_dim() const { return frame_.cols(); }
    const Matrix& frame() const { return frame_; }

    /// Largest entry of |F^T F - I|; the type invariant keeps this below 1e-12.
    Scalar orthonormality_error() const {
        if (frame_.cols() == 0) return Scalar(0);
        Matrix g = frame_.transpose() * frame_;
        g.diagonal().array() -= Scalar(1);
        return g.cwiseAbs().maxCoeff();
    }

    /// Projection of x onto the subspace.
    Vector project(const Vector& x) const { return frame_ * (frame_.transpose() * x); }

  private:
    Eigen::Index ambient_ = 0;
    Matrix frame_;
};

using Subspace = SubspaceT<double>;

namespace detail {

/// Thin Q of a Householder QR with the convention that the diagonal of the
/// triangular factor is nonnegative. With Gaussian input this realizes the
/// invariant distribution exactly.
template <typename Matrix>
Matrix qr_nonneg(const Matrix& a) {
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ() * Matrix::Identity(a.rows(), a.cols());
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
        if (qr.matrixQR()(c, c) < typename Matrix::Scalar(0)) q.col(c) = -q.col(c);
    }
    return q;
}

}  // namespace detail

template <typename Scalar>
template <typename Derived>
SubspaceT<Scalar> SubspaceT<Scalar>::from_span(const Eigen::MatrixBase<Derived>& columns) {
    Matrix a = columns.template cast<Scalar>();
    Matrix q = detail::qr_nonneg(a);
    return SubspaceT(a.rows(), std::move(q));
}

/// Absolute determinant of the orthogonal projection between equal-dimension
/// subspaces: |det(B_L^T B_M)|, a value in [0, 1], symmetric and basis-free.
template <typename Scalar>
Scalar bracket(const SubspaceT<Scalar>& L, const SubspaceT<Scalar>& M) {
    if (L.ambient_dim() != M.ambient_dim() || L.sub_dim() != M.sub_dim() || L.sub_dim() < 1)
        throw InvalidDimension("bracket: operands must share ambient and subspace dimension >= 1");
    using Matrix = typename SubspaceT<Scalar>::Matrix;
    Matrix cross = L.frame().transpose() * M.frame();
    if (cross.cols() == 1) return std::abs(cross(0, 0));
    return std::abs(cross.determinant());
}

/// The same determinant for unequal dimensions: the j-volume scaling factor
/// of the orthogonal projection of M (dim j) into L (dim k >= j), computed as
/// sqrt(det Gram) of the projected frame.
template <typename Scalar>
Scalar mixed_bracket(const SubspaceT<Scalar>& M, const SubspaceT<Scalar>& L) {
    if (L.ambient_dim() != M.ambient_dim())
        throw InvalidDimension("mixed_bracket: ambient dimensions differ");
    using Matrix = typename SubspaceT<Scalar>::Matrix;
    Matrix cross = L.frame().transpose() * M.frame();  // k x j
    Matrix gram = cross.transpose() * cross;
    Scalar det = gram.determinant();
    return det > Scalar(0) ? std::sqrt(det) : Scalar(0);
}

/// j-volume of the parallelepiped spanned by the columns; 0 when dependent.
/// Gram determinant clamped at zero so round-off never produces NaN.
template <typename Derived>
typename Derived::Scalar det_j(const Eigen::MatrixBase<Derived>& vectors) {
    using Scalar = typename Derived::Scalar;
    if (vectors.cols() < 1) throw InvalidDimension("det_j: need at least one vector");
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> gram = vectors.transpose() * vectors;
    Scalar det = gram.cols() == 1 ? gram(0, 0) : gram.determinant();
    return det > Scalar(0) ? std::sqrt(det) : Scalar(0);
}

/// Draw from the rotation-invariant probability measure on G(d,k):
/// orthonormalized standard-Gaussian d x k array.
template <typename Scalar = double>
SubspaceT<Scalar> haar_subspace(Eigen::Index d, Eigen::Index k, RngStream& rng) {
    if (k < 1 || k > d) throw InvalidDimension("haar_subspace: need 1 <= k <= d");
    typename SubspaceT<Scalar>::Matrix a(d, k);
    for (Eigen::Index c = 0; c < k; ++c)
        for (Eigen::Index r = 0; r < d; ++r) a(r, c) = static_cast<Scalar>(rng.gaussian());
    return SubspaceT<Scalar>(d, detail::qr_nonneg(a));
}

/// Uniform unit vector in the span of L.
template <typename Scalar>
typename SubspaceT<Scalar>::Vector uniform_unit_in(const SubspaceT<Scalar>& L, RngStream& rng) {
    if (L.sub_dim() < 1) throw InvalidDimension("uniform_unit_in: empty subspace");
    typename SubspaceT<Scalar>::Vector c(L.sub_dim());
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = static_cast<Scalar>(rng.gaussian());
    c.normalize();
    return L.frame() * c;
}

/// Orthogonal complement L^perp; complement(complement(L)) spans L.
template <typename Scalar>
SubspaceT<Scalar> complement(const SubspaceT<Scalar>& L) {
    using Matrix = typename SubspaceT<Scalar>::Matrix;
    Eigen::Index d = L.ambient_dim();
    Eigen::Index k = L.sub_dim();
    if (k == 0) return SubspaceT<Scalar>::full(d);
    Eigen::HouseholderQR<Matrix> qr(L.frame());
    Matrix qfull = qr.householderQ() * Matrix::Identity(d, d);
    return SubspaceT<Scalar>(d, qfull.rightCols(d - k));
}

/// u^perp cap L for a unit u in span(L): sub_dim drops by one.
/// Throws InconsistentFlag when the containment residual exceeds 1e-8.
template <typename Scalar>
SubspaceT<Scalar> slice(const typename SubspaceT<Scalar>::Vector& u, const SubspaceT<Scalar>& L) {
    using Matrix = typename SubspaceT<Scalar>::Matrix;
    using Vector = typename SubspaceT<Scalar>::Vector;
    Eigen::Index k = L.sub_dim();
    if (u.size() != L.ambient_dim() || k < 1) throw InvalidDimension("slice: dimension mismatch");
    Vector c = L.frame().transpose() * u;
    Scalar resid = (u - L.frame() * c).norm();
    if (resid > Scalar(1e-8)) throw InconsistentFlag("slice: direction not contained in subspace");
    c.normalize();
    // Householder reflection sending c to +-e1; its trailing columns span c^perp in R^k.
    Vector v = c;
    v(0) += (c(0) >= Scalar(0) ? Scalar(1) : Scalar(-1));
    Matrix h = Matrix::Identity(k, k) - (Scalar(2) / v.squaredNorm()) * (v * v.transpose());
    return SubspaceT<Scalar>(L.ambient_dim(), L.frame() * h.rightCols(k - 1));
}

inline Subspace slice(const Eigen::VectorXd& u, const Subspace& L) { return slice<double>(u, L); }

/// Haar-distributed k-dimensional superspace of M: appends an invariant
/// frame drawn in M^perp.
template <typename Scalar>
SubspaceT<Scalar> extend_uniform(const SubspaceT<Scalar>& M, Eigen::Index k, RngStream& rng) {
    using Matrix = typename SubspaceT<Scalar>::Matrix;
    Eigen::Index d = M.ambient_dim();
    Eigen::Index m = M.sub_dim();
    if (k < m || k > d) throw InvalidDimension("extend_uniform: need sub_dim(M) <= k <= d");
    if (k == m) return M;
    Matrix out(d, k);
    out.leftCols(m) = M.frame();
    if (k - m == 1) {
        // Common fibre case: one Gaussian direction in M^perp, normalized.
        typename SubspaceT<Scalar>::Vector g(d);
        for (Eigen::Index r = 0; r < d; ++r) g(r) = static_cast<Scalar>(rng.gaussian());
        if (m > 0) g -= M.frame() * (M.frame().transpose() * g);
        out.col(m) = g / g.norm();
        return SubspaceT<Scalar>(d, std::move(out));
    }
    Matrix g(d, k - m);
    for (Eigen::Index c = 0; c < k - m; ++c)
        for (Eigen::Index r = 0; r < d; ++r) g(r, c) = static_cast<Scalar>(rng.gaussian());
    if (m > 0) g -= M.frame() * (M.frame().transpose() * g);
    out.rightCols(k - m) = detail::qr_nonneg(g);
    return SubspaceT<Scalar>(d, std::move(out));
}

/// Haar j-dimensional subspace of E (drawn inside E).
template <typename Scalar>
SubspaceT<Scalar> haar_inside(const SubspaceT<Scalar>& E, Eigen::Index j, RngStream& rng) {
    Eigen::Index k = E.sub_dim();
    if (j < 1 || j > k) throw InvalidDimension("haar_inside: need 1 <= j <= sub_dim(E)");
    typename SubspaceT<Scalar>::Matrix c(k, j);
    for (Eigen::Index cc = 0; cc < j; ++cc)
        for (Eigen::Index r = 0; r < k; ++r) c(r, cc) = static_cast<Scalar>(rng.gaussian());
    return SubspaceT<Scalar>(E.ambient_dim(), E.frame() * detail::qr_nonneg(c));
}

/// Projection M|L of M into L, re-orthonormalized. Sets *rank_ok to false
/// (and returns an empty-frame subspace) when a projected column collapses
/// below the 1e-10 relative threshold.
template <typename Scalar>
SubspaceT<Scalar> project_subspace(const SubspaceT<Scalar>& M, const SubspaceT<Scalar>& L,
                                   bool* rank_ok = nullptr) {
    using Matrix = typename SubspaceT<Scalar>::Matrix;
    if (M.ambient_dim() != L.ambient_dim())
        throw InvalidDimension("project_subspace: ambient dimensions differ");
    Matrix coords = L.frame().transpose() * M.frame();  // k x j
    Eigen::ColPivHouseholderQR<Matrix> qr(coords);
    qr.setThreshold(Scalar(1e-10));
    bool ok = qr.rank() == M.sub_dim();
    if (rank_ok) *rank_ok = ok;
    if (!ok) return SubspaceT<Scalar>(M.ambient_dim(), Matrix(M.ambient_dim(), 0));
    Matrix q = qr.householderQ() * Matrix::Identity(coords.rows(), M.sub_dim());
    return SubspaceT<Scalar>(M.ambient_dim(), L.frame() * q);
}

// Rvalue overloads so fresh substreams can be passed inline.
template <typename Scalar = double>
SubspaceT<Scalar> haar_subspace(Eigen::Index d, Eigen::Index k, RngStream&& rng) {
    return haar_subspace<Scalar>(d, k, rng);
}
template <typename Scalar>
typename SubspaceT<Scalar>::Vector uniform_unit_in(const SubspaceT<Scalar>& L, RngStream&& rng) {
    return uniform_unit_in(L, rng);
}
template <typename Scalar>
SubspaceT<Scalar> extend_uniform(const SubspaceT<Scalar>& M, Eigen::Index k, RngStream&& rng) {
    return extend_uniform(M, k, rng);
}
template <typename Scalar>
SubspaceT<Scalar> haar_inside(const SubspaceT<Scalar>& E, Eigen::Index j, RngStream&& rng) {
    return haar_inside(E, j, rng);
}

/// Haar rotation in SO(d); used by the rotation-covariance checks.
inline Eigen::MatrixXd random_rotation(Eigen::Index d, RngStream& rng) {
    Eigen::MatrixXd a(d, d);
    for (Eigen::Index c = 0; c < d; ++c)
        for (Eigen::Index r = 0; r < d; ++r) a(r, c) = rng.gaussian();
    Eigen::MatrixXd q = detail::qr_nonneg(a);
    if (q.determinant() < 0) q.col(d - 1) = -q.col(d - 1);
    return q;
}

}  // namespace glab
