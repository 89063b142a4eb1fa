#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace ecdesign {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

/// Checked A*B; throws on an inner-dimension mismatch instead of asserting.
template <typename DerivedA, typename DerivedB>
auto checked_product(const Eigen::MatrixBase<DerivedA>& a,
                     const Eigen::MatrixBase<DerivedB>& b) {
  if (a.cols() != b.rows())
    throw std::invalid_argument("matrix product: inner dimensions disagree");
  return (a.derived() * b.derived()).eval();
}

template <typename Derived>
typename Derived::Scalar trace_of(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("trace: matrix must be square");
  return m.trace();
}

template <typename Derived>
auto transposed(const Eigen::MatrixBase<Derived>& m) {
  return m.transpose().eval();
}

/// tr(M Mᵀ), the squared Frobenius norm.
template <typename Derived>
typename Derived::Scalar frobenius_sq(const Eigen::MatrixBase<Derived>& m) {
  return m.squaredNorm();
}

/// v ⊗ I_n, stacked so that (v ⊗ I)ᵀ vec(A) = A v for column-stacked vec(A).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
kron_with_identity(const Eigen::MatrixBase<Derived>& v, Index n) {
  if (n < 1) throw std::invalid_argument("kron_with_identity: n must be >= 1");
  if (v.size() != n || v.cols() != 1)
    throw std::invalid_argument("kron_with_identity: v must be an n-vector");
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n * n, n);
  for (Index i = 0; i < n; ++i)
    out.block(i * n, 0, n, n) =
        v(i) * Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Identity(n, n);
  return out;
}

/// Solve M X = B for symmetric positive definite M via Cholesky.
/// Rejects visibly asymmetric inputs and non-positive pivots.
inline Matrix spd_solve(const Matrix& m, const Matrix& rhs) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("spd_solve: matrix must be square");
  if (m.rows() != rhs.rows())
    throw std::invalid_argument("spd_solve: rhs row count must match");
  const double scale = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * scale && asym > 0.0)
    throw std::invalid_argument("spd_solve: matrix is not symmetric");
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("spd_solve: matrix is not positive definite");
  return llt.solve(rhs);
}

inline double spectral_radius(const Matrix& a) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("spectral_radius: matrix must be square");
  return Eigen::EigenSolver<Matrix>(a, false).eigenvalues().cwiseAbs().maxCoeff();
}

/// Column-stacked vec(M) = [M_1ᵀ ... M_nᵀ]ᵀ.
inline Vector vec_stack(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

inline Matrix unvec(const Vector& v, Index rows, Index cols) {
  if (v.size() != rows * cols)
    throw std::invalid_argument("unvec: size mismatch");
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

}  // namespace ecdesign
