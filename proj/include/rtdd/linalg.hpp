#ifndef RTDD_LINALG_HPP
#define RTDD_LINALG_HPP

// Dense helpers shared by the feasibility, beamforming and rate code. All of
// them are templated on the Eigen expression type so they work for real and
// complex scalars alike.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "rtdd/types.hpp"

namespace rtdd {

template <typename Derived>
using PlainMatrix = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Rows x cols matrix of i.i.d. CN(0,1) entries: real and imaginary parts are
/// independent N(0, 1/2).
template <typename Engine>
cmat complex_gaussian(Eigen::Index rows, Eigen::Index cols, Engine& engine) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  cmat out(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(engine);
      const double im = normal(engine);
      out(i, j) = cplx(re, im);
    }
  return out;
}

/// Haar-distributed n x d matrix with orthonormal columns.
///
/// QR of a complex Gaussian matrix, with the phases of diag(R) folded back into
/// Q so the result does not depend on the sign convention of the QR routine.
template <typename Engine>
cmat random_orthonormal(Eigen::Index n, Eigen::Index d, Engine& engine) {
  if (d == 0) return cmat(n, 0);
  const cmat z = complex_gaussian(n, d, engine);
  Eigen::HouseholderQR<cmat> qr(z);
  cmat q = qr.householderQ() * cmat::Identity(n, d);
  const cmat& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < d; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

/// Numerical rank: count of singular values above eps * sigma_max * max(rows, cols).
template <typename Derived>
Eigen::Index numerical_rank(const Eigen::MatrixBase<Derived>& a, double eps = 1e-10) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  Eigen::BDCSVD<PlainMatrix<Derived>> svd(a.derived());
  const auto& sv = svd.singularValues();
  const double sigma_max = sv.size() > 0 ? static_cast<double>(sv(0)) : 0.0;
  if (sigma_max == 0.0) return 0;
  const double cutoff = eps * sigma_max * static_cast<double>(std::max(a.rows(), a.cols()));
  return static_cast<Eigen::Index>((sv.array() > cutoff).count());
}

/// Smallest singular value; zero for an empty matrix.
template <typename Derived>
double min_singular_value(const Eigen::MatrixBase<Derived>& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  Eigen::JacobiSVD<PlainMatrix<Derived>> svd(a.derived());
  return static_cast<double>(svd.singularValues().minCoeff());
}

/// sigma_max / sigma_min over min(rows, cols) singular values. Infinite when
/// the matrix is rank deficient.
template <typename Derived>
double condition_number(const Eigen::MatrixBase<Derived>& a) {
  if (a.rows() == 0 || a.cols() == 0) return 1.0;
  Eigen::JacobiSVD<PlainMatrix<Derived>> svd(a.derived());
  const auto& sv = svd.singularValues();
  const double lo = static_cast<double>(sv.minCoeff());
  const double hi = static_cast<double>(sv.maxCoeff());
  if (lo == 0.0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

/// Moore-Penrose pseudo-inverse from a thin SVD.
///
/// For a tall full-column-rank matrix this is the left inverse (A'A)^-1 A', for
/// a wide full-row-rank matrix the right inverse A'(AA')^-1. Throws
/// SingularSystemError when the condition number exceeds `cond_limit`.
template <typename Derived>
PlainMatrix<Derived> pseudo_inverse(const Eigen::MatrixBase<Derived>& a, double cond_limit,
                                    std::string_view what) {
  using Matrix = PlainMatrix<Derived>;
  if (a.rows() == 0 || a.cols() == 0) return Matrix::Zero(a.cols(), a.rows());
  Eigen::JacobiSVD<Matrix> svd(a.derived(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double hi = static_cast<double>(sv.maxCoeff());
  const double lo = static_cast<double>(sv.minCoeff());
  if (!(lo > 0.0) || hi / lo > cond_limit) {
    throw SingularSystemError(std::string(what) + ": stacked matrix is rank deficient (condition number " +
                              std::to_string(lo > 0.0 ? hi / lo : INFINITY) + ")");
  }
  const auto inv_sv = sv.cwiseInverse().template cast<typename Derived::Scalar>();
  return svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().adjoint();
}

/// Orthonormal eigenvectors for the `count` smallest eigenvalues of a
/// Hermitian matrix, in ascending eigenvalue order.
///
/// Each eigenvector is rotated so its first component with magnitude above
/// 1e-12 is real and positive. Rejects inputs with ||A - A^H||_F > 1e-8.
template <typename Derived>
PlainMatrix<Derived> smallest_eigenvectors(const Eigen::MatrixBase<Derived>& herm, Eigen::Index count) {
  using Matrix = PlainMatrix<Derived>;
  using Scalar = typename Derived::Scalar;
  if (herm.rows() != herm.cols()) throw std::invalid_argument("smallest_eigenvectors: matrix is not square");
  if (count < 0 || count > herm.rows()) throw std::invalid_argument("smallest_eigenvectors: count out of range");
  const double asym = (herm - herm.adjoint()).norm();
  if (asym > 1e-8) {
    throw std::invalid_argument("smallest_eigenvectors: input is not Hermitian (residual " + std::to_string(asym) +
                                ")");
  }
  if (count == 0) return Matrix(herm.rows(), 0);
  const Matrix sym = (herm + herm.adjoint()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  if (eig.info() != Eigen::Success) throw NumericalFailure("smallest_eigenvectors: eigensolver did not converge");
  Matrix out = eig.eigenvectors().leftCols(count);
  for (Eigen::Index j = 0; j < count; ++j) {
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      const double mag = std::abs(out(i, j));
      if (mag > 1e-12) {
        out.col(j) *= Eigen::numext::conj(out(i, j)) / Scalar(mag);
        break;
      }
    }
  }
  return out;
}

/// log(det(A)) of a Hermitian positive definite matrix via Cholesky.
template <typename Derived>
double hermitian_logdet(const Eigen::MatrixBase<Derived>& a) {
  if (a.rows() == 0) return 0.0;
  Eigen::LLT<PlainMatrix<Derived>> llt(a.derived());
  if (llt.info() != Eigen::Success) throw NumericalFailure("hermitian_logdet: matrix is not positive definite");
  const auto diag = llt.matrixLLT().diagonal();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < diag.size(); ++i) acc += std::log(std::real(diag(i)));
  return 2.0 * acc;
}

/// Scales every column to unit Euclidean norm. Throws on a zero column.
template <typename Derived>
PlainMatrix<Derived> normalize_columns(const Eigen::MatrixBase<Derived>& a) {
  PlainMatrix<Derived> out = a;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const double n = out.col(j).norm();
    if (!(n > 0.0)) throw std::invalid_argument("normalize_columns: zero column " + std::to_string(j));
    out.col(j) /= n;
  }
  return out;
}

}  // namespace rtdd

#endif  // RTDD_LINALG_HPP
