// Dense symmetric spectral kernel: eigendecomposition, inertia counts under an
// explicit zero tolerance, kernel extraction, and the diagonally weighted
// generalized eigenproblem. Entry points accept arbitrary Eigen expressions
// of matching shape; all functions are pure and deterministic.

#ifndef CONELAP_SPECTRAL_HPP
#define CONELAP_SPECTRAL_HPP

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace conelap {

template <class Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

// Eigenvalues ascending; eigenvectors stored as columns, orthonormal, each
// scaled so that its first component above noise level is positive.
template <class Scalar>
struct EigenDecomposition {
  VectorX<Scalar> eigenvalues;
  MatrixX<Scalar> eigenvectors;

  Index size() const { return eigenvalues.size(); }
  // Largest |eigenvalue|, i.e. the spectral norm of the decomposed matrix.
  Scalar spectral_norm() const {
    return eigenvalues.size() == 0 ? Scalar(0)
                                   : eigenvalues.cwiseAbs().maxCoeff();
  }
};

// Inertia triple (p, q, r). `tolerance` is the absolute eigenvalue threshold
// that produced the zero count.
template <class Scalar>
struct Signature {
  Index positive = 0;
  Index zero = 0;
  Index negative = 0;
  Scalar tolerance = Scalar(0);

  Index total() const { return positive + zero + negative; }
  bool counts_equal(const Signature& o) const {
    return positive == o.positive && zero == o.zero && negative == o.negative;
  }
};

namespace detail {

template <class Scalar>
void require_symmetric_input(const MatrixX<Scalar>& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() < 1)
    throw std::invalid_argument(std::string(who) + ": matrix must be square, n >= 1");
  if (!m.allFinite())
    throw std::invalid_argument(std::string(who) + ": non-finite entry");
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = j + 1; i < m.rows(); ++i)
      if (m(i, j) != m(j, i))
        throw std::invalid_argument(std::string(who) +
                                    ": matrix is not exactly symmetric");
}

// Flip each column so its first component of non-negligible size is positive.
// Keeps output reproducible when the backend returns an arbitrary sign.
template <class Scalar>
void fix_column_signs(MatrixX<Scalar>& vectors) {
  for (Index j = 0; j < vectors.cols(); ++j) {
    const Scalar big = vectors.col(j).cwiseAbs().maxCoeff();
    const Scalar cut = big * Scalar(1e-12);
    for (Index i = 0; i < vectors.rows(); ++i) {
      const Scalar v = vectors(i, j);
      if (std::abs(v) > cut) {
        if (v < Scalar(0)) vectors.col(j) = -vectors.col(j);
        break;
      }
    }
  }
}

template <class Scalar>
EigenDecomposition<Scalar> eigh_dense(const MatrixX<Scalar>& m) {
  require_symmetric_input(m, "eigh");
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> solver(m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigh: eigensolver failed to converge");
  EigenDecomposition<Scalar> d{solver.eigenvalues(), solver.eigenvectors()};
  fix_column_signs(d.eigenvectors);
  return d;
}

template <class Scalar>
EigenDecomposition<Scalar> geneigh_dense(const MatrixX<Scalar>& m,
                                         const VectorX<Scalar>& weights) {
  if (weights.size() != m.rows())
    throw std::invalid_argument("geneigh: weight vector length mismatch");
  if (!weights.allFinite() || (weights.array() <= Scalar(0)).any())
    throw std::invalid_argument("geneigh: weights must be strictly positive");
  require_symmetric_input(m, "geneigh");

  const VectorX<Scalar> root = weights.cwiseSqrt();
  MatrixX<Scalar> scaled(m.rows(), m.cols());
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i <= j; ++i) {
      const Scalar v = m(i, j) / (root[i] * root[j]);
      scaled(i, j) = v;
      scaled(j, i) = v;
    }
  }
  EigenDecomposition<Scalar> d = eigh_dense(scaled);
  for (Index j = 0; j < d.eigenvectors.cols(); ++j)
    d.eigenvectors.col(j).array() /= root.array();
  return d;
}

}  // namespace detail

// Full spectral decomposition of a symmetric matrix.
template <class Derived>
EigenDecomposition<typename Derived::Scalar> eigh(
    const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  return detail::eigh_dense<Scalar>(m.eval());
}

// Default zero band: relative to the spectral norm, floored at 1.
template <class Scalar>
Scalar default_zero_tolerance(const EigenDecomposition<Scalar>& d) {
  return Scalar(1e-9) * std::max(Scalar(1), d.spectral_norm());
}

template <class Scalar>
Signature<Scalar> signature(const EigenDecomposition<Scalar>& d,
                            Scalar tol = Scalar(-1)) {
  if (tol < Scalar(0)) tol = default_zero_tolerance(d);
  Signature<Scalar> s;
  s.tolerance = tol;
  for (Index i = 0; i < d.size(); ++i) {
    const Scalar v = d.eigenvalues[i];
    if (v > tol)
      ++s.positive;
    else if (v < -tol)
      ++s.negative;
    else
      ++s.zero;
  }
  return s;
}

// Inertia of a symmetric matrix. tol < 0 selects the default band.
template <class Derived>
Signature<typename Derived::Scalar> signature(
    const Eigen::MatrixBase<Derived>& m,
    typename Derived::Scalar tol = typename Derived::Scalar(-1)) {
  return signature(eigh(m), tol);
}

// Orthonormal basis (columns) of the span of eigenvectors with |lambda| <= tol.
// Zero columns when the matrix has no numerical kernel.
template <class Derived>
MatrixX<typename Derived::Scalar> kernel_basis(
    const Eigen::MatrixBase<Derived>& m,
    typename Derived::Scalar tol = typename Derived::Scalar(-1)) {
  using Scalar = typename Derived::Scalar;
  const EigenDecomposition<Scalar> d = eigh(m);
  if (tol < Scalar(0)) tol = default_zero_tolerance(d);
  Index count = 0;
  for (Index i = 0; i < d.size(); ++i)
    if (std::abs(d.eigenvalues[i]) <= tol) ++count;
  MatrixX<Scalar> basis(m.rows(), count);
  Index k = 0;
  for (Index i = 0; i < d.size(); ++i)
    if (std::abs(d.eigenvalues[i]) <= tol) basis.col(k++) = d.eigenvectors.col(i);
  return basis;
}

// Generalized problem M x = lambda W x. The second argument is either the
// strictly positive weight vector or the diagonal matrix holding it (any
// off-diagonal entry is an input error). Eigenvalues are those of
// W^{-1/2} M W^{-1/2}; eigenvectors are back-transformed, hence W-orthonormal.
template <class DerivedM, class DerivedW>
EigenDecomposition<typename DerivedM::Scalar> geneigh(
    const Eigen::MatrixBase<DerivedM>& m, const Eigen::MatrixBase<DerivedW>& w) {
  using Scalar = typename DerivedM::Scalar;
  const MatrixX<Scalar> dense_m = m.eval();
  const MatrixX<Scalar> dense_w = w.eval();
  if (dense_w.cols() == 1)
    return detail::geneigh_dense<Scalar>(dense_m, VectorX<Scalar>(dense_w));
  if (dense_w.rows() != dense_w.cols() || dense_w.rows() != dense_m.rows())
    throw std::invalid_argument("geneigh: W must be square and match M");
  for (Index j = 0; j < dense_w.cols(); ++j)
    for (Index i = 0; i < dense_w.rows(); ++i)
      if (i != j && dense_w(i, j) != Scalar(0))
        throw std::invalid_argument("geneigh: W must be diagonal");
  return detail::geneigh_dense<Scalar>(dense_m, VectorX<Scalar>(dense_w.diagonal()));
}

// Orthonormal basis of the hyperplane { x : <x, normal> = 0 }, n x (n-1).
// Householder-based, deterministic.
template <class Derived>
MatrixX<typename Derived::Scalar> hyperplane_basis(
    const Eigen::MatrixBase<Derived>& normal) {
  using Scalar = typename Derived::Scalar;
  const VectorX<Scalar> v = normal.eval();
  const Index n = v.size();
  if (n < 1 || v.norm() == Scalar(0))
    throw std::invalid_argument("hyperplane_basis: zero normal");
  Eigen::HouseholderQR<MatrixX<Scalar>> qr(v);
  MatrixX<Scalar> q = qr.householderQ() * MatrixX<Scalar>::Identity(n, n);
  return q.rightCols(n - 1);
}

// B^T M B assembled entrywise from the upper triangle and mirrored, so the
// result is symmetric in exact floating point.
template <class DerivedM, class DerivedB>
MatrixX<typename DerivedM::Scalar> project_quadratic(
    const Eigen::MatrixBase<DerivedM>& m, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedM::Scalar;
  const MatrixX<Scalar> basis = b.eval();
  if (basis.rows() != m.rows())
    throw std::invalid_argument("project_quadratic: basis row mismatch");
  const MatrixX<Scalar> mb = m * basis;
  const Index k = basis.cols();
  MatrixX<Scalar> r(k, k);
  for (Index j = 0; j < k; ++j) {
    for (Index i = 0; i <= j; ++i) {
      const Scalar v = basis.col(i).dot(mb.col(j));
      r(i, j) = v;
      r(j, i) = v;
    }
  }
  return r;
}

}  // namespace conelap

#endif  // CONELAP_SPECTRAL_HPP
