#pragma once

// Independent reference computations for the tests: enumeration, dense
// projector algebra and explicit square roots. Nothing here calls the
// Householder machinery under test.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include "arp/core.hpp"
#include "arp/random.hpp"
#include "arp/rowspace.hpp"

namespace oracle {

using arp::Index;
using arp::RealMatrix;
using arp::RealVector;

inline void for_each_subset(Index n, Index r, const std::function<void(const std::vector<Index>&)>& f) {
  std::vector<Index> idx(static_cast<std::size_t>(r));
  for (Index i = 0; i < r; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    f(idx);
    Index k = r - 1;
    while (k >= 0 && idx[static_cast<std::size_t>(k)] == n - r + k) --k;
    if (k < 0) return;
    ++idx[static_cast<std::size_t>(k)];
    for (Index t = k + 1; t < r; ++t) idx[static_cast<std::size_t>(t)] = idx[static_cast<std::size_t>(t - 1)] + 1;
  }
}

/// det(V(J,:))² for every sorted r-subset J.
inline std::map<std::vector<Index>, double> dpp_probabilities(const RealMatrix& v) {
  std::map<std::vector<Index>, double> out;
  for_each_subset(v.rows(), v.cols(), [&](const std::vector<Index>& j) {
    const double d = v(j, Eigen::all).determinant();
    out[j] = d * d;
  });
  return out;
}

/// Orthogonal projector onto the column span of M (via SVD, rank by 1e-12).
inline RealMatrix column_projector(const RealMatrix& m) {
  Eigen::JacobiSVD<RealMatrix> svd(m, Eigen::ComputeThinU);
  const RealVector s = svd.singularValues();
  Index rank = 0;
  while (rank < s.size() && s(rank) > 1e-12 * s(0)) ++rank;
  const RealMatrix u = svd.matrixU().leftCols(rank);
  return u * u.transpose();
}

/// ‖A − Π_J A‖_F² with Π_J from an SVD of A(:,J).
inline double orthogonal_error_sq(const RealMatrix& a, const std::vector<Index>& j) {
  const RealMatrix p = column_projector(a(Eigen::all, j));
  return (a - p * a).squaredNorm();
}

/// ‖A − A(:,J)·V(J,:)^{-T}·Vᵀ‖_F² with a dense LU solve.
inline double oblique_error_sq(const RealMatrix& a, const RealMatrix& v, const std::vector<Index>& j) {
  const RealMatrix vj = v(j, Eigen::all);
  const RealMatrix approx = a(Eigen::all, j) * vj.transpose().fullPivLu().solve(v.transpose());
  return (a - approx).squaredNorm();
}

/// Id − E_J·(VᵀE_J)^†·Vᵀ for a partial index list J.
inline RealMatrix oblique_projector(const RealMatrix& v, const std::vector<Index>& j) {
  const Index n = v.rows();
  RealMatrix e = RealMatrix::Zero(n, static_cast<Index>(j.size()));
  for (std::size_t t = 0; t < j.size(); ++t) e(j[t], static_cast<Index>(t)) = 1.0;
  const RealMatrix m = v.transpose() * e;  // r×k
  const RealMatrix pinv = m.completeOrthogonalDecomposition().pseudoInverse();
  return RealMatrix::Identity(n, n) - e * pinv * v.transpose();
}

/// Residual (A − AVVᵀ)·Π for the first k selected indices.
inline RealMatrix cssp_residual(const RealMatrix& a, const RealMatrix& v, const std::vector<Index>& j) {
  const RealMatrix a0 = a - a * v * v.transpose();
  return j.empty() ? a0 : RealMatrix(a0 * oblique_projector(v, j));
}

/// Πᵀ(Id−VVᵀ)A(Id−VVᵀ)Π for SPSD A.
inline RealMatrix spsd_residual(const RealMatrix& a, const RealMatrix& v, const std::vector<Index>& j) {
  const Index n = a.rows();
  const RealMatrix p0 = RealMatrix::Identity(n, n) - v * v.transpose();
  const RealMatrix a0 = p0 * a * p0;
  if (j.empty()) return a0;
  const RealMatrix pi = oblique_projector(v, j);
  return pi.transpose() * a0 * pi;
}

/// B = Λ^{1/2}Qᵀ with eigenvalues clamped at 0, so that BᵀB = A.
inline RealMatrix gram_square_root(const RealMatrix& a) {
  const Eigen::SelfAdjointEigenSolver<RealMatrix> eig(a);
  return eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() * eig.eigenvectors().transpose();
}

inline RealVector singular_values_desc(const RealMatrix& a) {
  return Eigen::JacobiSVD<RealMatrix>(a).singularValues();
}

inline double tail_sq(const RealMatrix& a, Index r) {
  const RealVector s = singular_values_desc(a);
  return s.tail(s.size() - r).squaredNorm();
}

inline double tail_sum(const RealMatrix& a, Index r) {
  const RealVector s = singular_values_desc(a);
  return s.tail(s.size() - r).sum();
}

//
// Random instances
//

inline RealMatrix gaussian(Index m, Index n, arp::RandomStream& rng) { return arp::gaussian_matrix<double>(m, n, rng); }

inline RealMatrix random_orthonormal(Index n, Index r, arp::RandomStream& rng) {
  return Eigen::HouseholderQR<RealMatrix>(gaussian(n, r, rng)).householderQ() * RealMatrix::Identity(n, r);
}

/// Q·diag(λ)·Qᵀ, λ_i = (0.5+u)·(i+1)^{-decay}.
inline RealMatrix random_spsd(Index n, arp::RandomStream& rng, double decay = 1.0) {
  const RealMatrix q = random_orthonormal(n, n, rng);
  RealVector lambda(n);
  for (Index i = 0; i < n; ++i) lambda(i) = (0.5 + rng.uniform()) * std::pow(double(i + 1), -decay);
  const RealMatrix a = q * lambda.asDiagonal() * q.transpose();
  return (a + a.transpose()) / 2.0;
}

/// U·diag(s)·Wᵀ with s_i = (i+1)^{-decay}.
inline RealMatrix random_with_spectrum(Index m, Index n, double decay, arp::RandomStream& rng) {
  const Index k = std::min(m, n);
  RealVector s(k);
  for (Index i = 0; i < k; ++i) s(i) = std::pow(double(i + 1), -decay);
  return random_orthonormal(m, k, rng) * s.asDiagonal() * random_orthonormal(n, k, rng).transpose();
}

inline Index uniform_int(arp::RandomStream& rng, Index lo, Index hi) {
  return std::min(hi, lo + static_cast<Index>(rng.uniform() * double(hi - lo + 1)));
}

inline double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / double(v.size());
}

inline double std_error(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / double(v.size() - 1)) / std::sqrt(double(v.size()));
}

}  // namespace oracle
