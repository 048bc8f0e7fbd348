#pragma once

#include <tuple>
#include <utility>

#include "arp/arp.hpp"
#include "arp/monte_carlo.hpp"

namespace arp {

//
// DEIM
//

/// Interpolatory reconstruction f ≈ V·V(I,:)^{-1}·f(I).
///
/// V(I,:) is kept in the triangular form left by the pivoting: with
/// W = V·Q, V·V(I,:)^{-1} = W·W(I,:)^{-1} and W(I,:) is lower triangular.
template <typename Scalar = double>
class DeimModel {
 public:
  DeimModel(const OrthonormalBasis<Scalar>& v, ArpState<Scalar> state)
      : v_(v), indices_(state.selected()), w_(state.basis()), interp_factor_(state.selected_rows()) {
    require(state.done(), Errc::invalid_argument, "pivoting not finished");
  }

  const OrthonormalBasis<Scalar>& basis() const noexcept { return v_; }
  const IndexList& indices() const noexcept { return indices_; }
  /// Lower-triangular W(I,:), similar to V(I,:) by an orthogonal factor.
  const Matrix<Scalar>& interp_factor() const noexcept { return interp_factor_; }

  /// Reconstructs the full vector from its r samples f(I).
  template <typename Derived>
  Vector<Scalar> reconstruct_from_samples(const Eigen::MatrixBase<Derived>& samples) const {
    require(samples.size() == indices_.size(), Errc::dimension_mismatch, "need one sample per index");
    const Vector<Scalar> y =
        interp_factor_.template triangularView<Eigen::Lower>().solve(Vector<Scalar>(samples));
    return w_ * y;
  }

  /// Convenience: samples f at I, then reconstructs.
  template <typename Derived>
  Vector<Scalar> reconstruct(const Eigen::MatrixBase<Derived>& f) const {
    require(f.size() == v_.rows(), Errc::dimension_mismatch, "f has wrong length");
    return reconstruct_from_samples(Vector<Scalar>(f(indices_.values())));
  }

  /// Column-wise reconstruction from samples F(I,:) (r×s).
  template <typename Derived>
  Matrix<Scalar> reconstruct_columns_from_samples(const Eigen::MatrixBase<Derived>& samples) const {
    require(samples.rows() == indices_.size(), Errc::dimension_mismatch, "need one sample row per index");
    return w_ * interp_factor_.template triangularView<Eigen::Lower>().solve(Matrix<Scalar>(samples));
  }

  /// Column-wise reconstruction of a snapshot matrix F (n×s).
  template <typename Derived>
  Matrix<Scalar> reconstruct_columns(const Eigen::MatrixBase<Derived>& f) const {
    require(f.rows() == v_.rows(), Errc::dimension_mismatch, "F has wrong row count");
    const Matrix<Scalar> samples = f(indices_.values(), Eigen::all);
    return w_ * interp_factor_.template triangularView<Eigen::Lower>().solve(samples);
  }

  /// ‖V(I,:)^{-1}‖_F², equal to ‖W(I,:)^{-1}‖_F².
  Scalar inverse_frobenius_sq() const {
    const Index r = indices_.size();
    const Matrix<Scalar> inv = interp_factor_.template triangularView<Eigen::Lower>().solve(
        Matrix<Scalar>::Identity(r, r));
    return inv.squaredNorm();
  }

  /// ‖V(I,:)^{-1}‖₂² = 1/σ_min(V(I,:))².
  Scalar inverse_spectral_sq() const {
    const Eigen::JacobiSVD<Matrix<Scalar>> svd(interp_factor_);
    const Scalar smin = svd.singularValues().minCoeff();
    return Scalar(1) / (smin * smin);
  }

 private:
  OrthonormalBasis<Scalar> v_;
  IndexList indices_;
  Matrix<Scalar> w_;
  Matrix<Scalar> interp_factor_;
};

/// DEIM with indices from adaptive randomized pivoting on V. Never sees f.
template <typename Scalar>
DeimModel<Scalar> deim_build(const OrthonormalBasis<Scalar>& v, RandomStream& rng) {
  return DeimModel<Scalar>(v, arp_run(v, rng));
}

struct DeimConditionStats {
  SampleStats frob_sq;  // ‖V(I,:)^{-1}‖_F²
  SampleStats spec_sq;  // ‖V(I,:)^{-1}‖₂²
  double mean_frob_sq() const { return frob_sq.mean; }
  double mean_spec_sq() const { return spec_sq.mean; }
};

/// Monte Carlo moments of the DEIM interpolation constant over ARP draws.
template <typename Scalar>
DeimConditionStats deim_condition_stats(const OrthonormalBasis<Scalar>& v, RandomStream& rng, std::size_t trials,
                                        unsigned threads = 1) {
  require(trials >= 1, Errc::invalid_argument, "trials must be >= 1");
  const auto draws = run_trials(
      rng, trials,
      [&](RandomStream& s) {
        const auto model = deim_build(v, s);
        return std::pair<double, double>(model.inverse_frobenius_sq(), model.inverse_spectral_sq());
      },
      threads);
  std::vector<double> frob(trials), spec(trials);
  for (std::size_t t = 0; t < trials; ++t) std::tie(frob[t], spec[t]) = draws[t];
  return {summarize(frob), summarize(spec)};
}

//
// Cross / CUR
//

/// Cross (skeleton) approximation A ≈ A(:,J)·A(I,J)^{-1}·A(I,:).
///
/// The core is held factored: with A(:,J) = Q_J·R_J, A(I,J) = Q_J(I,:)·R_J and
/// A(:,J)·A(I,J)^{-1} = Q_J·Q_J(I,:)^{-1}, which is applied as a row
/// interpolator on the orthonormal Q_J.
template <typename Scalar = double>
class CrossModel {
 public:
  CrossModel(IndexList rows, IndexList cols, Matrix<Scalar> c, Matrix<Scalar> r, DeimModel<Scalar> row_interp)
      : rows_(std::move(rows)), cols_(std::move(cols)), c_(std::move(c)), r_(std::move(r)),
        row_interp_(std::move(row_interp)) {}

  const IndexList& rows() const noexcept { return rows_; }
  const IndexList& cols() const noexcept { return cols_; }
  const Matrix<Scalar>& c() const noexcept { return c_; }
  const Matrix<Scalar>& r() const noexcept { return r_; }
  /// A(I,J), materialized on request.
  Matrix<Scalar> core() const { return r_(Eigen::all, cols_.values()); }

  Matrix<Scalar> approximation() const { return row_interp_.reconstruct_columns_from_samples(r_); }

 private:
  IndexList rows_, cols_;
  Matrix<Scalar> c_, r_;
  DeimModel<Scalar> row_interp_;
};

/// Cross approximation from given index sets. Throws RankDeficient if A(:,J)
/// is rank deficient and SingularPivot if A(I,J) is singular.
template <typename Derived, typename Scalar = typename Derived::Scalar>
CrossModel<Scalar> cross_from_indices(const Eigen::MatrixBase<Derived>& a, const IndexList& rows,
                                      const IndexList& cols) {
  require(rows.size() == cols.size(), Errc::dimension_mismatch, "|I| != |J|");
  require(rows.ambient() == a.rows() && cols.ambient() == a.cols(), Errc::dimension_mismatch,
          "index lists do not match the matrix dimensions");
  Matrix<Scalar> c = a(Eigen::all, cols.values());
  const OrthonormalBasis<Scalar> qj(thin_qr(c).q);
  DeimModel<Scalar> interp(qj, arp_replay(qj, rows));
  return CrossModel<Scalar>(rows, cols, std::move(c), a(rows.values(), Eigen::all), std::move(interp));
}

/// Randomized cross approximation: J by adaptive pivoting on V, then I by
/// adaptive pivoting on an orthonormal basis Q_J of the selected columns.
template <typename Derived, typename Scalar = typename Derived::Scalar>
CrossModel<Scalar> cross_build(const Eigen::MatrixBase<Derived>& a, const OrthonormalBasis<Scalar>& v,
                               RandomStream& rng) {
  require(a.cols() == v.rows(), Errc::dimension_mismatch, "cols(A) != rows(V)");
  const IndexList cols = arp_run(v, rng).selected();
  Matrix<Scalar> c = a(Eigen::all, cols.values());
  const OrthonormalBasis<Scalar> qj(thin_qr(c).q);
  auto row_state = arp_run(qj, rng);
  IndexList rows = row_state.selected();
  Matrix<Scalar> r = a(rows.values(), Eigen::all);
  DeimModel<Scalar> interp(qj, std::move(row_state));
  return CrossModel<Scalar>(std::move(rows), cols, std::move(c), std::move(r), std::move(interp));
}

/// CUR with orthogonal-projection core: A(:,J)·A(:,J)^†·A·A(I,:)^†·A(I,:),
/// evaluated as Q_J·(Q_Jᵀ·A·Q_I)·Q_Iᵀ from thin QR factors.
template <typename Derived>
Matrix<typename Derived::Scalar> cur_build(const Eigen::MatrixBase<Derived>& a, const IndexList& cols,
                                           const IndexList& rows) {
  using Scalar = typename Derived::Scalar;
  require(cols.ambient() == a.cols() && rows.ambient() == a.rows(), Errc::dimension_mismatch,
          "index lists do not match the matrix dimensions");
  const Matrix<Scalar> qj = thin_qr(a(Eigen::all, cols.values())).q;
  const Matrix<Scalar> qi = thin_qr(a(rows.values(), Eigen::all).transpose()).q;
  const Matrix<Scalar> middle = qj.transpose() * a * qi;
  return qj * middle * qi.transpose();
}

//
// Nyström
//

/// Throws NotSymmetric / NotSpsd unless A is symmetric to 1e−8 relative and its
/// smallest eigenvalue is ≥ −1e−10·‖A‖₂.
template <typename Derived>
void require_spsd(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  require(is_symmetric(a), Errc::not_symmetric, "matrix is not symmetric");
  const Matrix<Scalar> sym = (a + a.transpose()) / Scalar(2);
  const Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(sym, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  const Scalar spectral = std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
  require(ev.minCoeff() >= Scalar(-1e-10) * spectral, Errc::not_spsd, "matrix has a negative eigenvalue");
}

/// Nyström approximation A ≈ A(:,J)·A(J,J)^{-1}·A(J,:) = F·Fᵀ with
/// F = A(:,J)·L^{-T}, A(J,J) = L·Lᵀ.
template <typename Scalar = double>
class NystromModel {
 public:
  NystromModel(IndexList cols, Matrix<Scalar> c, Matrix<Scalar> core_chol, Scalar jitter)
      : cols_(std::move(cols)), c_(std::move(c)), core_chol_(std::move(core_chol)), jitter_(jitter) {
    factor_ = core_chol_.template triangularView<Eigen::Lower>().solve(c_.transpose()).transpose();
  }

  const IndexList& cols() const noexcept { return cols_; }
  const Matrix<Scalar>& c() const noexcept { return c_; }
  /// Lower Cholesky factor of A(J,J) (+ jitter·I if the fallback fired).
  const Matrix<Scalar>& core_chol() const noexcept { return core_chol_; }
  Scalar jitter() const noexcept { return jitter_; }
  const Matrix<Scalar>& factor() const noexcept { return factor_; }

  Matrix<Scalar> approximation() const { return factor_ * factor_.transpose(); }

  template <typename Derived>
  Matrix<Scalar> residual(const Eigen::MatrixBase<Derived>& a) const {
    return a - approximation();
  }

  /// ‖A − Â‖_* as the trace of the explicitly formed residual.
  template <typename Derived>
  Scalar residual_trace(const Eigen::MatrixBase<Derived>& a) const {
    return trace_norm_spsd(residual(a));
  }

  /// Same quantity from the diagonal only: Σ_i A_ii − ‖F(i,:)‖².
  template <typename Derived>
  Scalar residual_trace_diag(const Eigen::MatrixBase<Derived>& a) const {
    return a.trace() - factor_.squaredNorm();
  }

 private:
  IndexList cols_;
  Matrix<Scalar> c_;
  Matrix<Scalar> core_chol_;
  Scalar jitter_;
  Matrix<Scalar> factor_;
};

/// Nyström model for a given index set. A(J,J) is Cholesky factored; on
/// failure a jitter of 1e−12·trace(A)/n is added to its diagonal once.
template <typename Derived, typename Scalar = typename Derived::Scalar>
NystromModel<Scalar> nystrom_from_indices(const Eigen::MatrixBase<Derived>& a, const IndexList& cols) {
  require(a.rows() == a.cols(), Errc::dimension_mismatch, "Nystrom needs a square matrix");
  require(cols.ambient() == a.rows(), Errc::dimension_mismatch, "index list ambient size != n");
  Matrix<Scalar> core = a(cols.values(), cols.values());
  core = (core + core.transpose()) / Scalar(2);
  Eigen::LLT<Matrix<Scalar>> llt(core);
  Scalar jitter = 0;
  if (llt.info() != Eigen::Success) {
    jitter = Scalar(1e-12) * a.trace() / Scalar(a.rows());
    core.diagonal().array() += jitter;
    llt.compute(core);
    require(llt.info() == Eigen::Success, Errc::core_not_pd, "A(J,J) is not positive definite");
  }
  return NystromModel<Scalar>(cols, a(Eigen::all, cols.values()), llt.matrixL(), jitter);
}

/// Randomized Nyström: J from adaptive randomized pivoting on V.
template <typename Derived, typename Scalar = typename Derived::Scalar>
NystromModel<Scalar> nystrom_build_randomized(const Eigen::MatrixBase<Derived>& a, const OrthonormalBasis<Scalar>& v,
                                              RandomStream& rng) {
  require_spsd(a);
  require(v.rows() == a.rows(), Errc::dimension_mismatch, "rows(V) != n");
  return nystrom_from_indices(a, arp_run(v, rng).selected());
}

}  // namespace arp
