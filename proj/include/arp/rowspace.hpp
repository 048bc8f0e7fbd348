#pragma once

#include <algorithm>

#include "arp/core.hpp"
#include "arp/random.hpp"

namespace arp {

enum class RowspaceMethod { exact_svd, gaussian_sketch };

struct RowspaceSpec {
  RowspaceMethod method = RowspaceMethod::exact_svd;
  Index rank = 1;
  Index oversample = 2;  // sketch only

  /// Number of columns of the basis this spec produces.
  Index basis_cols() const { return method == RowspaceMethod::gaussian_sketch ? rank + oversample : rank; }
};

/// m×k matrix of i.i.d. standard normals, filled column by column.
template <typename Scalar = double>
Matrix<Scalar> gaussian_matrix(Index rows, Index cols, RandomStream& rng) {
  Matrix<Scalar> omega(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) omega(i, j) = Scalar(rng.normal());
  return omega;
}

/// Orthonormal approximation V of the row space of A, either exact (top
/// right singular vectors) or from the sketch QR(AᵀΩ) with Ω Gaussian
/// m×(rank+oversample).
template <typename Derived>
OrthonormalBasis<typename Derived::Scalar> build_rowspace(const Eigen::MatrixBase<Derived>& a,
                                                          const RowspaceSpec& spec, RandomStream& rng) {
  using Scalar = typename Derived::Scalar;
  require_nonempty(a, "matrix");
  require(spec.rank >= 1, Errc::invalid_argument, "rank must be >= 1");
  const Index min_dim = std::min(a.rows(), a.cols());
  if (spec.method == RowspaceMethod::exact_svd) {
    require(spec.rank <= min_dim, Errc::invalid_argument, "rank exceeds min(m, n)");
    return top_right_singular_basis(a, spec.rank);
  }
  require(spec.oversample >= 0, Errc::invalid_argument, "oversample must be >= 0");
  require(spec.rank + spec.oversample <= min_dim, Errc::invalid_argument,
          "rank + oversample exceeds min(m, n)");
  const Index k = spec.rank + spec.oversample;
  auto sketch = [&](RandomStream& source) -> Matrix<Scalar> {
    return a.transpose() * gaussian_matrix<Scalar>(a.rows(), k, source);
  };
  try {
    return OrthonormalBasis<Scalar>(thin_qr(sketch(rng)).q);
  } catch (const Error& e) {
    if (e.code() != Errc::rank_deficient) throw;
  }
  RandomStream fresh = rng.split_one();
  const Matrix<Scalar> y = sketch(fresh);
  try {
    return OrthonormalBasis<Scalar>(thin_qr(y).q);
  } catch (const Error& e) {
    if (e.code() != Errc::rank_deficient) throw;
  }
  // A genuinely low-rank A: the sketch already spans its whole row space.
  // Keep that span and pad with orthonormal complement directions so the
  // basis still has rank + oversample columns.
  Eigen::ColPivHouseholderQR<Matrix<Scalar>> qr(y);
  qr.setThreshold(Scalar(tol::rank));
  require(qr.rank() >= 1, Errc::rank_deficient, "sketch A^T Omega is numerically zero");
  const Matrix<Scalar> q = qr.householderQ() * Matrix<Scalar>::Identity(y.rows(), k);
  return OrthonormalBasis<Scalar>(q);
}

}  // namespace arp
