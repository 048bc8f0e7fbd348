#pragma once

#include <cstdint>
#include <vector>

#include "arp/apps.hpp"
#include "arp/osinsky.hpp"

namespace arp {

/// State of deterministic Nyström pivoting on an SPSD A, carried without a
/// square root of A. `diag` is the diagonal of the implicit residual
///   Ã_k = Π̃_kᵀ⋯Π̃_1ᵀ (I−VVᵀ)A(I−VVᵀ) Π̃_1⋯Π̃_k,
/// i.e. the squared column norms of B̃_k for any B with BᵀB = A.
template <typename Scalar = double>
struct DetNystromState {
  Matrix<Scalar> v;      // n×r orthonormal
  Matrix<Scalar> y;      // A·V
  Matrix<Scalar> vty;    // Vᵀ·A·V
  Vector<Scalar> diag;   // diagonal of Ã_k, clamped at zero
  ArpState<Scalar> basis;
  // Thin QR of Vᵀ·E_J (r×k), grown one column per step.
  Matrix<Scalar> core_q;
  Matrix<Scalar> core_r;
  Scalar trace_a = 0;
  /// Multiply-adds spent after forming A·V.
  std::uint64_t flops = 0;

  const IndexList& selected() const noexcept { return basis.selected(); }
  Index size() const noexcept { return v.rows(); }
  Index rank() const noexcept { return v.cols(); }
};

/// Y = AV and the diagonal of (I−VVᵀ)A(I−VVᵀ):
///   d_j = A_jj − 2·V(j,:)·Y(j,:)ᵀ + V(j,:)·(VᵀY)·V(j,:)ᵀ.
template <typename Derived, typename Scalar = typename Derived::Scalar>
DetNystromState<Scalar> det_nystrom_init(const Eigen::MatrixBase<Derived>& a, const OrthonormalBasis<Scalar>& v) {
  require(a.rows() == a.cols(), Errc::dimension_mismatch, "A must be square");
  require(v.rows() == a.rows(), Errc::dimension_mismatch, "rows(V) != n");
  const Index n = v.rows(), r = v.cols();
  DetNystromState<Scalar> s{v.matrix(), a * v.matrix(), Matrix<Scalar>(), Vector<Scalar>(),
                            ArpState<Scalar>(v), Matrix<Scalar>(r, 0), Matrix<Scalar>(0, 0), a.trace(), 0};
  s.vty = s.v.transpose() * s.y;
  const Matrix<Scalar> vt = s.v * s.vty;
  s.diag = a.diagonal() - Scalar(2) * s.v.cwiseProduct(s.y).rowwise().sum() + vt.cwiseProduct(s.v).rowwise().sum();
  s.diag = s.diag.cwiseMax(Scalar(0));
  s.flops += static_cast<std::uint64_t>(2 * n * r * r + 2 * n * r);
  return s;
}

/// Column j of the current implicit residual Ã_{k−1}, from cached Y, the
/// maintained QR of VᵀE_J and columns J ∪ {j} of A only. O(n·r) work.
template <typename Derived, typename Scalar = typename Derived::Scalar>
Vector<Scalar> det_nystrom_column(DetNystromState<Scalar>& s, const Eigen::MatrixBase<Derived>& a, Index j) {
  require(!s.selected().contains(j), Errc::invalid_argument, "column already selected");
  const Index n = s.size(), r = s.rank(), p = s.selected().size();
  const auto& sel = s.selected().values();
  const Vector<Scalar> m = s.v.row(j).transpose();

  // x = e_j − E_J·a with a = (VᵀE_J)^†·m; c = Vᵀx = (I − QQᵀ)m.
  Vector<Scalar> coef(p);
  Vector<Scalar> c = m;
  if (p > 0) {
    const Vector<Scalar> qtm = s.core_q.transpose() * m;
    coef = s.core_r.template triangularView<Eigen::Upper>().solve(qtm);
    c.noalias() -= s.core_q * qtm;
  }
  // A·z with z = (I − VVᵀ)x
  Vector<Scalar> az = a.col(j);
  if (p > 0) az.noalias() -= a(Eigen::all, sel) * coef;
  az.noalias() -= s.y * c;
  // Vᵀ·A·z = Y(j,:)ᵀ − Y(J,:)ᵀ·a − (VᵀY)·c, using VᵀA = Yᵀ.
  Vector<Scalar> vtaz = s.y.row(j).transpose();
  if (p > 0) vtaz.noalias() -= s.y(sel, Eigen::all).transpose() * coef;
  vtaz.noalias() -= s.vty * c;
  Vector<Scalar> u = az;
  u.noalias() -= s.v * vtaz;
  // w = (I − V·(E_JᵀV)^†·E_Jᵀ)u with (E_JᵀV)^† = Q·R^{-T}.
  if (p > 0) {
    const Vector<Scalar> uj = u(sel);
    const Vector<Scalar> t = s.core_r.transpose().template triangularView<Eigen::Lower>().solve(uj);
    u.noalias() -= s.v * (s.core_q * t);
  }
  s.flops += static_cast<std::uint64_t>(n * p + 3 * n * r + r * r + 2 * r * p);
  return u;
}

/// Advances W by the reflector for j and appends V(j,:)ᵀ to the QR of VᵀE_J
/// (classical Gram–Schmidt, two passes; full refactorization if
/// orthogonality degrades past 1e−8).
template <typename Scalar>
void det_nystrom_advance(DetNystromState<Scalar>& s, Index j) {
  const Index n = s.size(), r = s.rank(), k = s.basis.step();
  s.basis.advance(j);
  s.flops += static_cast<std::uint64_t>(2 * n * (r - k));

  const Vector<Scalar> m = s.v.row(j).transpose();
  Vector<Scalar> q = m;
  Vector<Scalar> rcol = Vector<Scalar>::Zero(k + 1);
  for (int pass = 0; pass < 2 && k > 0; ++pass) {
    const Vector<Scalar> h = s.core_q.transpose() * q;
    q.noalias() -= s.core_q * h;
    rcol.head(k) += h;
  }
  const Scalar rho = q.norm();
  require(rho >= Scalar(tol::pivot) * std::max(Scalar(1), m.norm()), Errc::singular_core,
          "V^T E_J lost rank");
  rcol(k) = rho;
  s.core_q.conservativeResize(r, k + 1);
  s.core_q.col(k) = q / rho;
  Matrix<Scalar> grown = Matrix<Scalar>::Zero(k + 1, k + 1);
  grown.topLeftCorner(k, k) = s.core_r;
  grown.col(k) = rcol;
  s.core_r = std::move(grown);

  const Matrix<Scalar> gram = s.core_q.transpose() * s.core_q;
  if ((gram - Matrix<Scalar>::Identity(k + 1, k + 1)).norm() > Scalar(1e-8)) {
    const auto qr = thin_qr(s.v(s.selected().values(), Eigen::all).transpose());
    s.core_q = qr.q;
    s.core_r = qr.r;
  }
  s.flops += static_cast<std::uint64_t>(4 * r * k + r * (k + 1) * (k + 1));
}

/// d_j ← d_j − 2·w(j)·W(j,k)/W(j_k,k) + w(j_k)·W(j,k)²/W(j_k,k)², using W
/// after the step-k reflector. d_{j_k} is set to zero; entries are clamped at 0.
template <typename Scalar>
void det_nystrom_diag_update(DetNystromState<Scalar>& s, const Vector<Scalar>& w, Index jk) {
  const Index k = s.basis.step() - 1;
  require(k >= 0 && s.selected()[k] == jk, Errc::invalid_argument, "W has not been advanced for this pivot");
  const auto& wk = s.basis.basis();
  const Scalar pivot = wk(jk, k);
  require(std::abs(pivot) >= Scalar(tol::pivot), Errc::zero_pivot, "W(j_k, k) below 1e-14");
  const Vector<Scalar> t = wk.col(k) / pivot;
  s.diag.array() += -Scalar(2) * w.array() * t.array() + w(jk) * t.array().square();
  s.diag(jk) = Scalar(0);
  s.diag = s.diag.cwiseMax(Scalar(0));
  s.flops += static_cast<std::uint64_t>(4 * s.size());
}

/// Deterministic Nyström pivoting. Mathematically identical to
/// osinsky_select(B, V) for any B with BᵀB = A (same smallest-index tie rule),
/// and guarantees ‖A − A(:,J)A(J,J)^{-1}A(J,:)‖_* ≤ (r+1)‖(I−VVᵀ)A(I−VVᵀ)‖_*.
template <typename Derived, typename Scalar = typename Derived::Scalar>
SelectionReport<Scalar> det_nystrom_select(const Eigen::MatrixBase<Derived>& a, const OrthonormalBasis<Scalar>& v,
                                           const SelectOptions& opts = {}, std::uint64_t* flops = nullptr) {
  require_spsd(a);
  auto s = det_nystrom_init(a, v);
  std::vector<Vector<Scalar>> scores;
  while (!s.basis.done()) {
    Vector<Scalar> step_scores;
    const Index j = detail::argmin_admissible<Scalar>(s.diag, s.basis.leverage_scores(),
                                                      opts.record_scores ? &step_scores : nullptr);
    s.flops += static_cast<std::uint64_t>(s.size() * (s.rank() - s.basis.step() + 1));
    if (opts.record_scores) scores.push_back(std::move(step_scores));
    const Vector<Scalar> w = det_nystrom_column(s, a, j);
    det_nystrom_advance(s, j);
    det_nystrom_diag_update(s, w, j);
  }
  if (flops) *flops = s.flops;
  return detail::report_from(s.basis, std::move(scores));
}

}  // namespace arp
