#include <gtest/gtest.h>

#include "arp/osinsky.hpp"
#include "arp/bench/generators.hpp"
#include "support/oracles.hpp"

using namespace arp;

namespace {

OrthonormalBasis<double> random_basis(Index n, Index r, RandomStream& rng) {
  return OrthonormalBasis<double>(oracle::random_orthonormal(n, r, rng));
}

}  // namespace

TEST(Osinsky, ExactRankGivesZeroError) {
  RandomStream rng(1);
  const RealMatrix a = oracle::gaussian(10, 3, rng) * oracle::gaussian(3, 12, rng);
  const auto v = top_right_singular_basis(a, 3);
  const auto j = osinsky_select(a, v).indices;
  EXPECT_LE(std::sqrt(oblique_cssp_error_sq(a, v, j)), 1e-10 * a.norm());
}

TEST(Osinsky, ResidualMatchesDenseOracleEveryStep) {
  RandomStream rng(2);
  for (int t = 0; t < 20; ++t) {
    const Index n = oracle::uniform_int(rng, 4, 10);
    const Index r = oracle::uniform_int(rng, 1, n - 1);
    const RealMatrix a = oracle::gaussian(oracle::uniform_int(rng, 2, 8), n, rng);
    const auto v = random_basis(n, r, rng);
    auto state = residual_init(a, v);
    RealMatrix proto = v.matrix();
    std::vector<Index> picked;
    while (!state.basis.done()) {
      const Index j = detail::argmin_admissible<double>(column_sq_norms(state.residual),
                                                        state.basis.leverage_scores(), nullptr);
      // leverage bookkeeping equals the rank-one projection form
      EXPECT_NEAR(state.basis.leverage(j), proto.row(j).squaredNorm(), 1e-10);
      const RealVector row = proto.row(j).transpose();
      proto -= proto * row * row.transpose() / row.squaredNorm();
      const RealMatrix before = state.residual;
      const double lev = state.basis.leverage(j);
      residual_step(state, j);
      picked.push_back(j);
      EXPECT_LE((state.residual - oracle::cssp_residual(a, v.matrix(), picked)).norm(), 1e-9 * (1 + a.norm()));
      // per-step identity ‖Ã_k‖² = ‖Ã_{k−1}‖² + ‖Ã_{k−1}(:,j)‖²/lev_j
      EXPECT_NEAR(state.residual.squaredNorm(), before.squaredNorm() + before.col(j).squaredNorm() / lev,
                  1e-9 * (1 + before.squaredNorm() + before.col(j).squaredNorm() / lev));
      for (Index p : picked) EXPECT_EQ(state.residual.col(p).norm(), 0.0);
    }
  }
}

TEST(Osinsky, PerStepCertificateBoundsMonotone) {
  // min_j ‖Ã(:,j)‖²/lev_j ≤ ‖Ã‖²/(r−k+1), so the k-step certificate
  // ‖Ã_k‖² ≤ (1 + 1/(r−k+1))‖Ã_{k−1}‖² telescopes to (r+1)·tail.
  RandomStream rng(3);
  for (int t = 0; t < 30; ++t) {
    const RealMatrix a = oracle::gaussian(7, 11, rng);
    const Index r = oracle::uniform_int(rng, 1, 5);
    const auto v = random_basis(11, r, rng);
    auto state = residual_init(a, v);
    const double tail = state.residual.squaredNorm();
    while (!state.basis.done()) {
      const Index k = state.basis.step();
      const double prev = state.residual.squaredNorm();
      const Index j = detail::argmin_admissible<double>(column_sq_norms(state.residual),
                                                        state.basis.leverage_scores(), nullptr);
      residual_step(state, j);
      EXPECT_LE(state.residual.squaredNorm(), (1.0 + 1.0 / double(r - k)) * prev * (1 + 1e-10) + 1e-14);
    }
    EXPECT_LE(state.residual.squaredNorm(), double(r + 1) * tail * (1 + 1e-10));
  }
}

TEST(Osinsky, BoundAndExhaustiveMinimum) {
  RandomStream rng(4);
  for (int t = 0; t < 40; ++t) {
    const Index n = oracle::uniform_int(rng, 4, 8);
    const Index r = oracle::uniform_int(rng, 1, 3);
    const RealMatrix a = oracle::gaussian(oracle::uniform_int(rng, 3, 8), n, rng);
    const auto v = random_basis(n, r, rng);
    const double tail = (a - a * v.matrix() * v.matrix().transpose()).squaredNorm();
    const auto j = osinsky_select(a, v).indices;
    const double err = oblique_cssp_error_sq(a, v, j);
    EXPECT_LE(err, (r + 1) * tail * (1 + 1e-10));
    double best = std::numeric_limits<double>::infinity();
    oracle::for_each_subset(n, r, [&](const std::vector<Index>& s) {
      if (std::abs(v.matrix()(s, Eigen::all).determinant()) > 1e-10)
        best = std::min(best, oracle::oblique_error_sq(a, v.matrix(), s));
    });
    EXPECT_GE(err, best * (1 - 1e-10));
  }
}

TEST(Osinsky, NotWorseThanRandomizedMean) {
  RandomStream rng(5);
  const RealMatrix a = oracle::random_with_spectrum(20, 16, 0.7, rng);
  const auto v = top_right_singular_basis(a, 4);
  const double det = oblique_cssp_error_sq(a, v, osinsky_select(a, v).indices);
  std::vector<double> errs;
  for (int t = 0; t < 3000; ++t) errs.push_back(oblique_cssp_error_sq(a, v, arp_select(v, rng).indices));
  EXPECT_LE(det, oracle::mean(errs) + 3 * oracle::std_error(errs));
}

TEST(Osinsky, ZeroResidualPicksSmallestAdmissibleIndex) {
  RandomStream rng(6);
  RealMatrix m = RealMatrix::Zero(6, 2);
  m.bottomRows(5) = oracle::random_orthonormal(5, 2, rng);
  const OrthonormalBasis<double> v(m);
  const RealMatrix a = RealMatrix::Zero(3, 6);
  const auto rep = osinsky_select(a, v, {.record_scores = true});
  EXPECT_EQ(rep.indices[0], 1);  // row 0 has no leverage
  EXPECT_TRUE(std::isinf(rep.step_scores[0](0)));
  EXPECT_EQ(rep.indices[1], 2);
}

TEST(Osinsky, ZeroLeverage) {
  RealVector numer = RealVector::Ones(3), lev = RealVector::Constant(3, 1e-16);
  try {
    detail::argmin_admissible<double>(numer, lev, nullptr);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::zero_leverage);
  }
}

TEST(Osinsky, RejectsReselection) {
  RandomStream rng(7);
  const RealMatrix a = oracle::gaussian(3, 5, rng);
  auto state = residual_init(a, random_basis(5, 2, rng));
  residual_step(state, 1);
  EXPECT_THROW(residual_step(state, 1), Error);
}

TEST(Greedy, IdentityBasisTakesLeadingRows) {
  const OrthonormalBasis<double> v(RealMatrix::Identity(6, 3));
  const auto j = greedy_leverage_select(v).indices;
  EXPECT_EQ(j.values(), (std::vector<Index>{0, 1, 2}));
}

TEST(Greedy, DistinctIndices) {
  RandomStream rng(8);
  for (int t = 0; t < 20; ++t) {
    const auto v = random_basis(10, 6, rng);
    const auto j = greedy_leverage_select(v).indices;
    EXPECT_EQ(j.size(), 6);
  }
}

TEST(Counterexample, GreedyFailsWhereOsinskyDoesNot) {
  const Index n = 10000;
  const RealMatrix a = bench::greedy_counterexample(n);
  const auto v = top_right_singular_basis(a, 1);
  // all leverage scores but the first equal
  const RealVector lev = v.matrix().rowwise().squaredNorm();
  EXPECT_NEAR(lev(0), 4.0 / (n + 3), 1e-12);
  const auto g = greedy_leverage_select(v).indices;
  EXPECT_EQ(g[0], 0);
  EXPECT_NEAR(oblique_cssp_error_sq(a, v, g), 2.5e-5, 0.1e-5);
  const auto o = osinsky_select(a, v).indices;
  EXPECT_NE(o[0], 0);
  EXPECT_NEAR(oblique_cssp_error_sq(a, v, o), 1e-8, 0.05e-8);
}
