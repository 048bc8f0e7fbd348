#pragma once

#include <string>
#include <vector>

#include "arp/core.hpp"
#include "arp/random.hpp"

namespace arp {

/// Indices chosen by a selector plus per-step diagnostics.
template <typename Scalar = double>
struct SelectionReport {
  IndexList indices;
  /// One vector per step when requested: sampling probabilities for the
  /// randomized selectors, arg-min/arg-max scores for the deterministic ones.
  std::vector<Vector<Scalar>> step_scores;
  /// Norm of the row eliminated at each step.
  Vector<Scalar> pivots;
};

struct SelectOptions {
  bool record_scores = false;
};

/// Working basis of the Householder form of adaptive pivoting.
///
/// Holds W_k = V·Q_1⋯Q_k after k steps. The trailing block W(:, k:r) is an
/// orthonormal basis of the projected row space, so its squared row norms
/// are the current leverage scores and they sum to r − k. Row j_ℓ of W is
/// zero beyond column ℓ, hence W(J,:) is lower triangular with the pivots on
/// its diagonal.
template <typename Scalar = double>
class ArpState {
 public:
  explicit ArpState(const OrthonormalBasis<Scalar>& v)
      : w_(v.matrix()), selected_(v.rows()), pivots_(v.cols()) {}

  Index step() const noexcept { return step_; }
  Index rank() const noexcept { return w_.cols(); }
  Index size() const noexcept { return w_.rows(); }
  bool done() const noexcept { return step_ == rank(); }

  /// ‖W(j, k:r)‖², the leverage of row j in the projected basis.
  Scalar leverage(Index j) const { return w_.row(j).tail(rank() - step_).squaredNorm(); }

  Vector<Scalar> leverage_scores() const {
    return w_.rightCols(rank() - step_).rowwise().squaredNorm();
  }

  /// Eliminates row j: reflects W(:, k:r) so that W(j, k:r) = (pivot, 0, …, 0)
  /// and records j. Returns the (positive) pivot.
  Scalar advance(Index j) {
    require(!done(), Errc::invalid_argument, "all r pivots already chosen");
    require(j >= 0 && j < size(), Errc::invalid_argument, "pivot row out of range");
    const Index k = step_;
    const Index trailing = rank() - k;
    auto tail = w_.row(j).tail(trailing);
    require(std::sqrt(tail.squaredNorm()) >= Scalar(tol::pivot), Errc::zero_pivot,
            "row " + std::to_string(j) + " has no remaining leverage");
    const auto q = householder_annihilate(tail, k);
    apply_reflector_right_inplace(w_, q);
    // Exact zeros where the reflector annihilated, as in exact arithmetic.
    if (trailing > 1) w_.row(j).tail(trailing - 1).setZero();
    w_(j, k) = q.pivot;
    selected_.push_back(j);
    pivots_(k) = q.pivot;
    ++step_;
    return q.pivot;
  }

  const Matrix<Scalar>& basis() const noexcept { return w_; }
  const IndexList& selected() const noexcept { return selected_; }
  Vector<Scalar> pivots() const { return pivots_.head(step_); }

  /// W(J_k, 0:k), lower triangular with positive diagonal.
  Matrix<Scalar> selected_rows() const {
    return w_(selected_.values(), Eigen::seqN(0, step_));
  }

 private:
  Matrix<Scalar> w_;
  IndexList selected_;
  Vector<Scalar> pivots_;
  Index step_ = 0;
};

namespace detail {

/// Inverse-CDF draw from nonnegative weights summing to `total`, scanning
/// indices in increasing order. Zero-weight indices are never returned.
template <typename Scalar>
Index sample_from_weights(const Vector<Scalar>& weights, Scalar total, RandomStream& rng) {
  const Scalar target = Scalar(rng.uniform()) * total;
  Scalar acc = 0;
  Index last_positive = -1;
  for (Index j = 0; j < weights.size(); ++j) {
    if (weights(j) <= Scalar(0)) continue;
    acc += weights(j);
    last_positive = j;
    if (target < acc) return j;
  }
  return last_positive;  // target landed in the rounding gap at the top
}

/// Clamps leverage-type scores at zero and checks they carry probability mass.
/// `expected_mass` is r − k + 1, the exact-arithmetic sum.
template <typename Scalar>
Scalar clamp_weights(Vector<Scalar>& weights, Scalar expected_mass) {
  weights = weights.cwiseMax(Scalar(0));
  require((weights / expected_mass).maxCoeff() >= Scalar(tol::probability),
          Errc::degenerate_probabilities, "every sampling probability is below 1e-14");
  return weights.sum();
}

template <typename Scalar>
SelectionReport<Scalar> report_from(const ArpState<Scalar>& state, std::vector<Vector<Scalar>> scores) {
  return {state.selected(), std::move(scores), state.pivots()};
}

}  // namespace detail

/// Runs adaptive randomized pivoting and returns the final working state.
template <typename Scalar>
ArpState<Scalar> arp_run(const OrthonormalBasis<Scalar>& v, RandomStream& rng,
                         std::vector<Vector<Scalar>>* scores = nullptr) {
  ArpState<Scalar> state(v);
  while (!state.done()) {
    Vector<Scalar> weights = state.leverage_scores();
    const Scalar mass = Scalar(state.rank() - state.step());
    const Scalar total = detail::clamp_weights(weights, mass);
    if (scores) scores->push_back(weights / total);
    state.advance(detail::sample_from_weights(weights, total, rng));
  }
  return state;
}

/// Adaptive randomized pivoting (Householder form). Draws r = cols(V)
/// distinct rows; the resulting subset is distributed as a projection DPP
/// with kernel VVᵀ, i.e. P(J) = det(V(J,:))² as an unordered set.
template <typename Scalar>
SelectionReport<Scalar> arp_select(const OrthonormalBasis<Scalar>& v, RandomStream& rng,
                                   const SelectOptions& opts = {}) {
  std::vector<Vector<Scalar>> scores;
  const auto state = arp_run(v, rng, opts.record_scores ? &scores : nullptr);
  return detail::report_from(state, std::move(scores));
}

/// Reference form with explicit rank-one projections
///   V_k = V_{k−1} − V_{k−1}·v⁺·v,  v = V_{k−1}(j_k,:).
/// Consumes the stream identically to arp_select, so both return the same
/// indices for the same stream up to rounding at CDF boundaries.
template <typename Scalar>
SelectionReport<Scalar> arp_select_prototype(const OrthonormalBasis<Scalar>& v, RandomStream& rng,
                                             const SelectOptions& opts = {},
                                             Matrix<Scalar>* final_basis = nullptr) {
  const Index n = v.rows(), r = v.cols();
  Matrix<Scalar> vk = v.matrix();
  SelectionReport<Scalar> report{IndexList(n), {}, Vector<Scalar>(r)};
  for (Index k = 0; k < r; ++k) {
    Vector<Scalar> weights = vk.rowwise().squaredNorm();
    const Scalar total = detail::clamp_weights(weights, Scalar(r - k));
    if (opts.record_scores) report.step_scores.push_back(weights / total);
    const Index j = detail::sample_from_weights(weights, total, rng);
    const RowVector<Scalar> row = vk.row(j);
    const Scalar row_sq = row.squaredNorm();
    require(std::sqrt(row_sq) >= Scalar(tol::pivot), Errc::zero_pivot, "sampled a zero row");
    const Vector<Scalar> coeff = vk * row.transpose() / row_sq;
    vk.noalias() -= coeff * row;
    vk.row(j).setZero();
    report.indices.push_back(j);
    report.pivots(k) = std::sqrt(row_sq);
  }
  if (final_basis) *final_basis = std::move(vk);
  return report;
}

/// Replays the Householder elimination on a given index order. Throws
/// SingularPivot if V(J,:) is (numerically) singular.
template <typename Scalar>
ArpState<Scalar> arp_replay(const OrthonormalBasis<Scalar>& v, const IndexList& j) {
  require(j.size() == v.cols(), Errc::dimension_mismatch, "need exactly r = cols(V) indices");
  require(j.ambient() == v.rows(), Errc::dimension_mismatch, "index list ambient size != rows(V)");
  ArpState<Scalar> state(v);
  try {
    for (Index idx : j) state.advance(idx);
  } catch (const Error& e) {
    if (e.code() == Errc::zero_pivot) throw Error(Errc::singular_pivot, "V(J,:) is singular");
    throw;
  }
  return state;
}

/// The r×n factor V(J,:)^{-T}·Vᵀ, computed as W(J,:)^{-T}·Wᵀ by back
/// substitution on the upper-triangular W(J,:)ᵀ.
template <typename Scalar>
Matrix<Scalar> interpolation_factor(const OrthonormalBasis<Scalar>& v, const IndexList& j) {
  const auto state = arp_replay(v, j);
  const Matrix<Scalar> wj = state.selected_rows();
  for (Index k = 0; k < wj.rows(); ++k)
    require(std::abs(wj(k, k)) >= Scalar(tol::pivot), Errc::singular_pivot, "triangular pivot below 1e-14");
  return wj.transpose().template triangularView<Eigen::Upper>().solve(state.basis().transpose());
}

/// Oblique-projection approximation Â = A(:,J)·V(J,:)^{-T}·Vᵀ. Columns J of A
/// are reproduced exactly.
template <typename Derived, typename Scalar = typename Derived::Scalar>
Matrix<Scalar> oblique_cssp_approx(const Eigen::MatrixBase<Derived>& a, const OrthonormalBasis<Scalar>& v,
                                   const IndexList& j) {
  require(a.cols() == v.rows(), Errc::dimension_mismatch, "cols(A) != rows(V)");
  return a(Eigen::all, j.values()) * interpolation_factor(v, j);
}

/// ‖A − Â‖_F² for the oblique approximation.
template <typename Derived, typename Scalar = typename Derived::Scalar>
Scalar oblique_cssp_error_sq(const Eigen::MatrixBase<Derived>& a, const OrthonormalBasis<Scalar>& v,
                             const IndexList& j) {
  return (a - oblique_cssp_approx(a, v, j)).squaredNorm();
}

/// ‖A − Π_J A‖_F with Π_J the orthogonal projector onto span A(:,J).
template <typename Derived>
typename Derived::Scalar orthogonal_cssp_error(const Eigen::MatrixBase<Derived>& a, const IndexList& j) {
  using Scalar = typename Derived::Scalar;
  require(j.ambient() == a.cols(), Errc::dimension_mismatch, "index list ambient size != cols(A)");
  require(!j.empty(), Errc::invalid_argument, "empty index list");
  const Matrix<Scalar> q = thin_qr(a(Eigen::all, j.values())).q;
  return (a - q * (q.transpose() * a)).norm();
}

}  // namespace arp
