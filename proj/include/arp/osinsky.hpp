#pragma once

#include <limits>
#include <vector>

#include "arp/arp.hpp"

namespace arp {

/// Residual Ã_k = (A − AVVᵀ)·Π̃_1⋯Π̃_k alongside the Householder working basis.
template <typename Scalar = double>
struct ResidualState {
  Matrix<Scalar> residual;
  ArpState<Scalar> basis;

  const IndexList& selected() const noexcept { return basis.selected(); }
};

template <typename Derived, typename Scalar = typename Derived::Scalar>
ResidualState<Scalar> residual_init(const Eigen::MatrixBase<Derived>& a, const OrthonormalBasis<Scalar>& v) {
  require_nonempty(a, "matrix");
  require_finite(a, "matrix");
  require(a.cols() == v.rows(), Errc::dimension_mismatch, "cols(A) != rows(V)");
  const Matrix<Scalar> av = a * v.matrix();
  Matrix<Scalar> residual = a;
  residual.noalias() -= av * v.matrix().transpose();
  return {std::move(residual), ArpState<Scalar>(v)};
}

/// One elimination step on column j: advance W by the Householder reflector,
/// then Ã ← Ã − Ã(:,j)·W(:,k)ᵀ / W(j,k). Column j ends exactly zero.
template <typename Scalar>
void residual_step(ResidualState<Scalar>& state, Index j) {
  require(!state.selected().contains(j), Errc::invalid_argument, "column already selected");
  const Index k = state.basis.step();
  state.basis.advance(j);  // throws ZeroPivot on a vanishing leverage
  const auto& w = state.basis.basis();
  const Scalar pivot = w(j, k);
  require(std::abs(pivot) >= Scalar(tol::pivot), Errc::zero_pivot, "W(j_k, k) below 1e-14");
  const Vector<Scalar> col = state.residual.col(j) / pivot;
  state.residual.noalias() -= col * w.col(k).transpose();
  state.residual.col(j).setZero();
}

namespace detail {

/// Smallest-index arg min of scores(j) over j with leverage(j) ≥ 1e−14.
template <typename Scalar>
Index argmin_admissible(const Vector<Scalar>& numer, const Vector<Scalar>& leverage, Vector<Scalar>* scores) {
  Index best = -1;
  Scalar best_score = std::numeric_limits<Scalar>::infinity();
  if (scores) scores->setConstant(numer.size(), std::numeric_limits<Scalar>::infinity());
  for (Index j = 0; j < numer.size(); ++j) {
    if (leverage(j) < Scalar(tol::pivot)) continue;
    const Scalar s = numer(j) / leverage(j);
    if (scores) (*scores)(j) = s;
    if (best < 0 || s < best_score) {
      best = j;
      best_score = s;
    }
  }
  require(best >= 0, Errc::zero_leverage, "no candidate with leverage >= 1e-14");
  return best;
}

}  // namespace detail

/// Deterministic column selection: at each step pick
///   j_k = argmin_j ‖Ã_{k−1}(:,j)‖² / ‖W_{k−1}(j,k:r)‖²
/// (ties → smallest index). Guarantees
///   ‖A − A(:,J)V(J,:)^{-T}Vᵀ‖_F² ≤ (r+1)‖A − AVVᵀ‖_F².
/// Column norms are recomputed from the stored residual every step.
template <typename Derived, typename Scalar = typename Derived::Scalar>
SelectionReport<Scalar> osinsky_select(const Eigen::MatrixBase<Derived>& a, const OrthonormalBasis<Scalar>& v,
                                       const SelectOptions& opts = {}) {
  auto state = residual_init(a, v);
  std::vector<Vector<Scalar>> scores;
  while (!state.basis.done()) {
    Vector<Scalar> step_scores;
    const Vector<Scalar> norms = column_sq_norms(state.residual);
    const Index j = detail::argmin_admissible<Scalar>(norms, state.basis.leverage_scores(),
                                                      opts.record_scores ? &step_scores : nullptr);
    if (opts.record_scores) scores.push_back(std::move(step_scores));
    residual_step(state, j);
  }
  return detail::report_from(state.basis, std::move(scores));
}

/// Greedy leverage pivoting: j_k = argmax_j ‖W_{k−1}(j,k:r)‖² (ties →
/// smallest index). Carries no error guarantee; kept as a baseline.
template <typename Scalar>
SelectionReport<Scalar> greedy_leverage_select(const OrthonormalBasis<Scalar>& v, const SelectOptions& opts = {}) {
  ArpState<Scalar> state(v);
  std::vector<Vector<Scalar>> scores;
  while (!state.done()) {
    const Vector<Scalar> lev = state.leverage_scores();
    Index best = 0;
    for (Index j = 1; j < lev.size(); ++j)
      if (lev(j) > lev(best)) best = j;
    if (opts.record_scores) scores.push_back(lev);
    state.advance(best);
  }
  return detail::report_from(state, std::move(scores));
}

}  // namespace arp
