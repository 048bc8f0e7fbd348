#pragma once

#include <cmath>
#include <concepts>
#include <string_view>
#include <vector>

#include "arp/arp.hpp"
#include "arp/apps.hpp"

namespace arp {

enum class BaselineKind { leverage, column_norm, uniform, cpqr, rp_cholesky, aca_full, aca_partial };

inline std::string_view to_string(BaselineKind kind) noexcept {
  switch (kind) {
    case BaselineKind::leverage: return "leverage";
    case BaselineKind::column_norm: return "column_norm";
    case BaselineKind::uniform: return "uniform";
    case BaselineKind::cpqr: return "cpqr";
    case BaselineKind::rp_cholesky: return "rp_cholesky";
    case BaselineKind::aca_full: return "aca_full";
    case BaselineKind::aca_partial: return "aca_partial";
  }
  return "unknown";
}

/// Draws r distinct indices with probabilities ∝ weights: sample the missing
/// count i.i.d., drop duplicates and already-chosen indices, renormalize over
/// the unselected ones and repeat. Every round adds at least one index.
template <typename Scalar>
IndexList sample_exactly_r_distinct(const Vector<Scalar>& weights, Index r, RandomStream& rng) {
  const Index n = weights.size();
  require(r >= 0 && r <= n, Errc::invalid_argument, "r must lie in [0, n]");
  require(weights.allFinite() && (weights.array() >= Scalar(0)).all(), Errc::invalid_argument,
          "weights must be finite and nonnegative");
  IndexList out(n);
  Vector<Scalar> w = weights;
  while (out.size() < r) {
    const Scalar total = w.sum();
    require(total > Scalar(0), Errc::mass_exhausted, "no probability mass left on unselected indices");
    const Index need = r - out.size();
    std::vector<Index> round;
    for (Index t = 0; t < need; ++t) round.push_back(detail::sample_from_weights(w, total, rng));
    for (Index j : round) {
      if (out.contains(j)) continue;
      out.push_back(j);
    }
    for (Index j : out) w(j) = Scalar(0);
  }
  return out;
}

/// Leverage-score sampling: weights ‖V(j,:)‖², r = cols(V).
template <typename Scalar>
IndexList leverage_select(const OrthonormalBasis<Scalar>& v, RandomStream& rng) {
  return sample_exactly_r_distinct<Scalar>(v.matrix().rowwise().squaredNorm(), v.cols(), rng);
}

template <typename Derived>
IndexList column_norm_select(const Eigen::MatrixBase<Derived>& a, Index r, RandomStream& rng) {
  require_finite(a, "matrix");
  return sample_exactly_r_distinct<typename Derived::Scalar>(column_sq_norms(a), r, rng);
}

inline IndexList uniform_select(Index n, Index r, RandomStream& rng) {
  require(n > 0, Errc::invalid_argument, "n must be positive");
  return sample_exactly_r_distinct<double>(RealVector::Ones(n), r, rng);
}

/// First r pivots of Householder QR with column pivoting. Trailing column
/// norms are recomputed exactly every step (no downdating); ties go to the
/// smallest column index.
template <typename Derived>
IndexList cpqr_select(const Eigen::MatrixBase<Derived>& a, Index r) {
  using Scalar = typename Derived::Scalar;
  require_finite(a, "matrix");
  const Index m = a.rows(), n = a.cols();
  require(r >= 0 && r <= std::min(m, n), Errc::invalid_argument, "r must not exceed min(rows, cols)");
  Matrix<Scalar> work = a;
  IndexList out(n);
  Vector<Scalar> workspace(n);
  for (Index k = 0; k < r; ++k) {
    Index best = -1;
    Scalar best_norm = Scalar(-1);
    for (Index j = 0; j < n; ++j) {
      if (out.contains(j)) continue;
      const Scalar norm = work.col(j).tail(m - k).squaredNorm();
      if (norm > best_norm) {
        best = j;
        best_norm = norm;
      }
    }
    out.push_back(best);
    Vector<Scalar> essential(m - k - 1);
    Scalar tau, beta;
    work.col(best).tail(m - k).makeHouseholder(essential, tau, beta);
    work.bottomRows(m - k).applyHouseholderOnTheLeft(essential, tau, workspace.data());
  }
  return out;
}

/// Read access to an SPSD matrix through its diagonal and single columns.
template <typename T>
concept SpsdColumnAccess = requires(const T& a, Index j) {
  { a.size() } -> std::convertible_to<Index>;
  { a.diagonal() } -> std::convertible_to<RealVector>;
  { a.column(j) } -> std::convertible_to<RealVector>;
};

struct DenseSpsdAccess {
  const RealMatrix& m;
  Index size() const { return m.rows(); }
  RealVector diagonal() const { return m.diagonal(); }
  RealVector column(Index j) const { return m.col(j); }
};

struct RpCholeskyResult {
  IndexList indices;
  /// n×r factor F with A ≈ F·Fᵀ = A(:,J)·A(J,J)^{-1}·A(J,:).
  RealMatrix factor;
  /// Residual diagonal after the last step.
  RealVector residual_diag;
};

/// Randomly pivoted Cholesky: sample j ∝ current residual diagonal and
/// eliminate it with a rank-one Schur update built from column j only.
template <SpsdColumnAccess Access>
RpCholeskyResult rp_cholesky_select(const Access& a, Index r, RandomStream& rng) {
  const Index n = a.size();
  require(r >= 0 && r <= n, Errc::invalid_argument, "r must lie in [0, n]");
  RealVector d = a.diagonal();
  require(d.allFinite() && (d.array() >= -tol::symmetric * std::max(1.0, d.cwiseAbs().maxCoeff())).all(),
          Errc::not_spsd, "diagonal must be finite and nonnegative");
  d = d.cwiseMax(0.0);
  const double trace = d.sum();
  RpCholeskyResult out{IndexList(n), RealMatrix(n, r), RealVector()};
  for (Index k = 0; k < r; ++k) {
    const double total = d.sum();
    require(total >= tol::pivot * trace && total > 0.0, Errc::diagonal_exhausted,
            "residual diagonal fell below 1e-14 trace(A)");
    const Index j = detail::sample_from_weights(d, total, rng);
    RealVector g = a.column(j);
    require(g.size() == n, Errc::dimension_mismatch, "column length != n");
    if (k > 0) g.noalias() -= out.factor.leftCols(k) * out.factor.row(j).head(k).transpose();
    require(g(j) > 0.0, Errc::diagonal_exhausted, "selected pivot has no residual mass");
    out.factor.col(k) = g / std::sqrt(g(j));
    d -= out.factor.col(k).cwiseAbs2();
    d(j) = 0.0;
    for (Index i : out.indices) d(i) = 0.0;
    d = d.cwiseMax(0.0);
    out.indices.push_back(j);
  }
  out.residual_diag = std::move(d);
  return out;
}

inline RpCholeskyResult rp_cholesky_select(const RealMatrix& a, Index r, RandomStream& rng) {
  require(a.rows() == a.cols(), Errc::dimension_mismatch, "A must be square");
  require(is_symmetric(a), Errc::not_symmetric, "A must be symmetric");
  return rp_cholesky_select(DenseSpsdAccess{a}, r, rng);
}

enum class AcaMode { full, partial };

struct AcaResult {
  IndexList rows;
  IndexList cols;
  /// A ≈ u·w with u m×r and w r×n; equals A(:,J)·A(I,J)^{-1}·A(I,:).
  RealMatrix u;
  RealMatrix w;
  RealMatrix approximation() const { return u * w; }
};

namespace detail {

template <typename Derived>
Index argmax_abs_unused(const Eigen::MatrixBase<Derived>& x, const IndexList& used) {
  Index best = -1;
  double best_abs = -1.0;
  for (Index i = 0; i < x.size(); ++i) {
    if (used.contains(i)) continue;
    if (std::abs(x(i)) > best_abs) {
      best = i;
      best_abs = std::abs(x(i));
    }
  }
  return best;
}

}  // namespace detail

/// Adaptive cross approximation. Full pivoting takes the max-modulus entry of
/// the whole residual. Partial pivoting sweeps: the column pivot is the
/// max-modulus entry of the current residual row, the next row is the
/// max-modulus entry of that residual column. The first row is drawn
/// uniformly from `rng`; a row whose residual vanishes is replaced by another
/// random unused row.
template <typename Derived>
AcaResult aca_select(const Eigen::MatrixBase<Derived>& a, Index r, AcaMode mode, RandomStream& rng) {
  require_nonempty(a, "matrix");
  require_finite(a, "matrix");
  const Index m = a.rows(), n = a.cols();
  require(r >= 0 && r <= std::min(m, n), Errc::invalid_argument, "r must not exceed min(rows, cols)");
  const double amax = a.cwiseAbs().maxCoeff();
  const double tiny = tol::pivot * amax;
  AcaResult out{IndexList(m), IndexList(n), RealMatrix::Zero(m, r), RealMatrix::Zero(r, n)};

  if (mode == AcaMode::full) {
    RealMatrix res = a;
    for (Index k = 0; k < r; ++k) {
      Index bi = 0, bj = 0;
      double best = -1.0;
      for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < n; ++j)
          if (std::abs(res(i, j)) > best) {
            best = std::abs(res(i, j));
            bi = i;
            bj = j;
          }
      require(best >= tiny && best > 0.0, Errc::zero_pivot, "ACA pivot below 1e-14 max|A|");
      out.u.col(k) = res.col(bj) / res(bi, bj);
      out.w.row(k) = res.row(bi);
      res.noalias() -= out.u.col(k) * out.w.row(k);
      res.row(bi).setZero();
      res.col(bj).setZero();
      out.rows.push_back(bi);
      out.cols.push_back(bj);
    }
    return out;
  }

  IndexList tried(m);  // rows whose residual row was found empty
  auto random_unused_row = [&]() -> Index {
    std::vector<Index> pool;
    for (Index i = 0; i < m; ++i)
      if (!out.rows.contains(i) && !tried.contains(i)) pool.push_back(i);
    require(!pool.empty(), Errc::zero_pivot, "ACA partial: every row exhausted");
    const auto pick = static_cast<std::size_t>(rng.uniform() * static_cast<double>(pool.size()));
    return pool[std::min(pick, pool.size() - 1)];
  };

  Index i = random_unused_row();
  for (Index k = 0; k < r;) {
    RealVector row = a.row(i).transpose();
    if (k > 0) row.noalias() -= out.w.topRows(k).transpose() * out.u.row(i).head(k).transpose();
    const Index j = detail::argmax_abs_unused(row, out.cols);
    if (std::abs(row(j)) < tiny || row(j) == 0.0) {
      tried.push_back(i);
      i = random_unused_row();
      continue;
    }
    RealVector col = a.col(j);
    if (k > 0) col.noalias() -= out.u.leftCols(k) * out.w.col(j).head(k);
    out.u.col(k) = col / row(j);
    out.w.row(k) = row.transpose();
    out.rows.push_back(i);
    out.cols.push_back(j);
    ++k;
    if (k == r) break;
    col(i) = 0.0;
    i = detail::argmax_abs_unused(col, out.rows);
    if (tried.contains(i) || std::abs(col(i)) < tiny) i = random_unused_row();
  }
  return out;
}

}  // namespace arp
