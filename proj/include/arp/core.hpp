#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "arp/error.hpp"

namespace arp {

using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

/// Dense, column-major, double precision.
using RealMatrix = Matrix<double>;
using RealVector = Vector<double>;

namespace tol {
inline constexpr double ortho = 1e-10;
inline constexpr double underflow = 1e-300;
inline constexpr double rank = 1e-12;
inline constexpr double symmetric = 1e-8;
inline constexpr double pivot = 1e-14;
inline constexpr double probability = 1e-14;
}  // namespace tol

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* what) {
  require(m.allFinite(), Errc::non_finite, std::string(what) + " contains NaN or Inf");
}

template <typename Derived>
void require_nonempty(const Eigen::MatrixBase<Derived>& m, const char* what) {
  require(m.rows() >= 1 && m.cols() >= 1, Errc::invalid_argument,
          std::string(what) + " must have at least one row and one column");
}

//
// IndexList
//

/// Ordered list of distinct zero-based indices into a dimension of size
/// `ambient()`. Order is meaningful: entry k is the k-th pivot chosen.
class IndexList {
 public:
  IndexList() = default;
  explicit IndexList(Index ambient) : ambient_(ambient) {}
  IndexList(std::vector<Index> indices, Index ambient) : ambient_(ambient) {
    values_.reserve(indices.size());
    for (Index j : indices) push_back(j);
  }

  void push_back(Index j) {
    require(j >= 0 && j < ambient_, Errc::invalid_argument,
            "index " + std::to_string(j) + " out of range [0, " + std::to_string(ambient_) + ")");
    require(!contains(j), Errc::invalid_argument, "index " + std::to_string(j) + " repeated");
    values_.push_back(j);
  }

  bool contains(Index j) const { return std::find(values_.begin(), values_.end(), j) != values_.end(); }

  Index size() const noexcept { return static_cast<Index>(values_.size()); }
  bool empty() const noexcept { return values_.empty(); }
  Index ambient() const noexcept { return ambient_; }
  Index operator[](Index k) const { return values_[static_cast<std::size_t>(k)]; }
  const std::vector<Index>& values() const noexcept { return values_; }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  /// Same indices irrespective of order.
  bool same_set(const IndexList& other) const {
    auto a = values_, b = other.values_;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
  }

  friend bool operator==(const IndexList& a, const IndexList& b) {
    return a.ambient_ == b.ambient_ && a.values_ == b.values_;
  }

 private:
  std::vector<Index> values_;
  Index ambient_ = 0;
};

//
// OrthonormalBasis
//

/// An n×r matrix whose columns are verified orthonormal at construction:
/// ‖VᵀV − I‖_F ≤ ortho_tol and r ≤ n.
template <typename Scalar = double>
class OrthonormalBasis {
 public:
  explicit OrthonormalBasis(Matrix<Scalar> mat, Scalar ortho_tol = Scalar(tol::ortho))
      : mat_(std::move(mat)), ortho_tol_(ortho_tol) {
    require_nonempty(mat_, "basis");
    require_finite(mat_, "basis");
    require(mat_.cols() <= mat_.rows(), Errc::not_orthonormal,
            "basis has more columns than rows");
    const Index r = mat_.cols();
    const Scalar defect =
        (mat_.transpose() * mat_ - Matrix<Scalar>::Identity(r, r)).norm();
    require(defect <= ortho_tol_, Errc::not_orthonormal,
            "||V^T V - I||_F = " + std::to_string(static_cast<double>(defect)));
  }

  const Matrix<Scalar>& matrix() const noexcept { return mat_; }
  Index rows() const noexcept { return mat_.rows(); }
  Index cols() const noexcept { return mat_.cols(); }
  Scalar ortho_tol() const noexcept { return ortho_tol_; }

  /// Leading `k` columns, still orthonormal.
  OrthonormalBasis leading(Index k) const {
    require(k >= 1 && k <= cols(), Errc::invalid_argument, "leading column count out of range");
    return OrthonormalBasis(mat_.leftCols(k), ortho_tol_);
  }

 private:
  Matrix<Scalar> mat_;
  Scalar ortho_tol_;
};

//
// Householder reflectors
//

/// Reflector Q = diag(I_offset, I − 2uuᵀ) acting on the trailing columns of
/// a matrix from the right. `identity()` marks the degenerate case where the
/// generating row was already a positive multiple of e₁.
template <typename Scalar = double>
struct HouseholderReflector {
  Vector<Scalar> u;
  Index offset = 0;
  bool is_identity = false;
  /// Surviving first entry of the reflected row, always ‖row‖₂ ≥ 0.
  Scalar pivot = 0;

  Index length() const noexcept { return u.size(); }
};

/// Builds the reflector mapping `row` to ‖row‖₂·e₁ᵀ (positive pivot).
template <typename Derived>
HouseholderReflector<typename Derived::Scalar> householder_annihilate(
    const Eigen::MatrixBase<Derived>& row, Index offset = 0) {
  using Scalar = typename Derived::Scalar;
  require(row.size() >= 1, Errc::invalid_argument, "empty row");
  const Index len = row.size();
  const Scalar x0 = row(0);
  const Scalar tail_sq = len > 1 ? row.tail(len - 1).squaredNorm() : Scalar(0);
  const Scalar norm = std::sqrt(x0 * x0 + tail_sq);
  require(norm >= Scalar(tol::underflow), Errc::zero_vector, "cannot reflect a zero row");

  HouseholderReflector<Scalar> q;
  q.offset = offset;
  q.pivot = norm;
  q.u = Vector<Scalar>::Zero(len);
  if (tail_sq == Scalar(0) && x0 > Scalar(0)) {
    q.is_identity = true;
    q.u(0) = Scalar(1);
    return q;
  }
  // v = x − ‖x‖e₁, with the first entry in cancellation-free form when x0 > 0.
  Vector<Scalar> v = row.transpose();
  v(0) = x0 > Scalar(0) ? -tail_sq / (x0 + norm) : x0 - norm;
  q.u = v / v.norm();
  return q;
}

/// In-place M ← M·Q.
template <typename Scalar, typename Derived>
void apply_reflector_right_inplace(Eigen::MatrixBase<Derived>& m, const HouseholderReflector<Scalar>& q) {
  require(q.offset + q.length() == m.cols(), Errc::dimension_mismatch,
          "reflector length does not match the trailing column block");
  if (q.is_identity) return;
  auto block = m.rightCols(q.length());
  const Vector<Scalar> mu = block * q.u;
  block.noalias() -= (Scalar(2) * mu) * q.u.transpose();
}

/// Returns M·Q; the leading `offset` columns are unchanged.
template <typename Derived>
Matrix<typename Derived::Scalar> apply_reflector_right(
    const Eigen::MatrixBase<Derived>& m, const HouseholderReflector<typename Derived::Scalar>& q) {
  Matrix<typename Derived::Scalar> out = m;
  apply_reflector_right_inplace(out, q);
  return out;
}

//
// Thin QR
//

template <typename Scalar>
struct ThinQr {
  Matrix<Scalar> q;  // m×n orthonormal columns
  Matrix<Scalar> r;  // n×n upper triangular, positive diagonal
};

/// Householder thin QR with R normalized to a positive diagonal.
/// Throws RankDeficient if a diagonal entry of R falls below 1e−12·‖M‖_F.
template <typename Derived>
ThinQr<typename Derived::Scalar> thin_qr(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  require_nonempty(m, "matrix");
  require(m.cols() <= m.rows(), Errc::dimension_mismatch, "thin QR needs cols <= rows");
  const Index rows = m.rows(), cols = m.cols();
  const Eigen::HouseholderQR<Matrix<Scalar>> qr(m);
  ThinQr<Scalar> out;
  out.r = qr.matrixQR().topRows(cols).template triangularView<Eigen::Upper>();
  out.q = qr.householderQ() * Matrix<Scalar>::Identity(rows, cols);
  const Scalar threshold = Scalar(tol::rank) * m.norm();
  for (Index k = 0; k < cols; ++k) {
    require(std::abs(out.r(k, k)) > threshold, Errc::rank_deficient,
            "diagonal " + std::to_string(k) + " of R below rank tolerance");
    if (out.r(k, k) < Scalar(0)) {
      out.r.row(k) *= Scalar(-1);
      out.q.col(k) *= Scalar(-1);
    }
  }
  return out;
}

/// Orthonormal basis of the column space of a full-column-rank matrix.
template <typename Derived>
OrthonormalBasis<typename Derived::Scalar> orthonormal_columns(const Eigen::MatrixBase<Derived>& m) {
  return OrthonormalBasis<typename Derived::Scalar>(thin_qr(m).q);
}

//
// Singular subspaces
//

/// Right singular vectors of the r largest singular values (V_opt).
template <typename Derived>
OrthonormalBasis<typename Derived::Scalar> top_right_singular_basis(
    const Eigen::MatrixBase<Derived>& a, Index r) {
  using Scalar = typename Derived::Scalar;
  require_nonempty(a, "matrix");
  require(r >= 1 && r <= std::min(a.rows(), a.cols()), Errc::invalid_argument,
          "rank must lie in [1, min(m, n)]");
  const Eigen::BDCSVD<Matrix<Scalar>> svd(a, Eigen::ComputeThinV);
  return OrthonormalBasis<Scalar>(svd.matrixV().leftCols(r));
}

/// Left singular vectors of the r largest singular values.
template <typename Derived>
OrthonormalBasis<typename Derived::Scalar> top_left_singular_basis(
    const Eigen::MatrixBase<Derived>& a, Index r) {
  return top_right_singular_basis(a.transpose(), r);
}

template <typename Derived>
Vector<typename Derived::Scalar> singular_values(const Eigen::MatrixBase<Derived>& a) {
  return Eigen::BDCSVD<Matrix<typename Derived::Scalar>>(a).singularValues();
}

/// Σ_{i>r} σ_i², the squared Frobenius distance to the best rank-r matrix.
template <typename Derived>
typename Derived::Scalar svd_tail_sq(const Eigen::MatrixBase<Derived>& a, Index r) {
  const auto s = singular_values(a);
  return r >= s.size() ? typename Derived::Scalar(0) : s.tail(s.size() - r).squaredNorm();
}

//
// Norms
//

template <typename Derived>
typename Derived::RealScalar frobenius_sq(const Eigen::MatrixBase<Derived>& m) {
  return m.squaredNorm();
}

template <typename Derived>
Vector<typename Derived::RealScalar> column_sq_norms(const Eigen::MatrixBase<Derived>& m) {
  return m.colwise().squaredNorm().transpose();
}

template <typename Derived>
bool is_symmetric(const Eigen::MatrixBase<Derived>& m, double rel_tol = tol::symmetric) {
  if (m.rows() != m.cols()) return false;
  return (m - m.transpose()).norm() <= typename Derived::RealScalar(rel_tol) * m.norm();
}

/// Nuclear norm of a symmetric positive semidefinite matrix, which equals its
/// trace. Rejects inputs that are not symmetric to 1e−8 relative.
template <typename Derived>
typename Derived::Scalar trace_norm_spsd(const Eigen::MatrixBase<Derived>& m) {
  require(is_symmetric(m), Errc::not_symmetric, "trace norm needs a symmetric matrix");
  return m.trace();
}

}  // namespace arp
