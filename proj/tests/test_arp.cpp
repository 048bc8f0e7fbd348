#include <gtest/gtest.h>

#include <map>

#include "arp/arp.hpp"
#include "support/oracles.hpp"

using namespace arp;

namespace {

OrthonormalBasis<double> random_basis(Index n, Index r, RandomStream& rng) {
  return OrthonormalBasis<double>(oracle::random_orthonormal(n, r, rng));
}

std::vector<Index> sorted(const IndexList& j) {
  std::vector<Index> s = j.values();
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

TEST(Arp, IdentityBasisSelectsAll) {
  RandomStream rng(1);
  const OrthonormalBasis<double> v(RealMatrix::Identity(5, 5));
  const auto rep = arp_select(v, rng);
  EXPECT_EQ(sorted(rep.indices), (std::vector<Index>{0, 1, 2, 3, 4}));
}

TEST(Arp, EqualRowsAreUniform) {
  RandomStream rng(2);
  const OrthonormalBasis<double> v(RealMatrix::Constant(4, 1, 0.5));
  std::vector<int> counts(4, 0);
  const int draws = 100000;
  for (int t = 0; t < draws; ++t) ++counts[static_cast<std::size_t>(arp_select(v, rng).indices[0])];
  for (int c : counts) EXPECT_NEAR(double(c) / draws, 0.25, 0.01);
}

TEST(Arp, ZeroRowNeverSelected) {
  RandomStream rng(3);
  RealMatrix m = RealMatrix::Zero(5, 2);
  m.topRows(4) = oracle::random_orthonormal(4, 2, rng);
  const OrthonormalBasis<double> v(m);
  for (int t = 0; t < 2000; ++t) EXPECT_FALSE(arp_select(v, rng).indices.contains(4));
}

TEST(Arp, SubsetLawIsDeterminantalPointProcess) {
  RandomStream rng(4);
  const auto v = random_basis(8, 3, rng);
  const auto probs = oracle::dpp_probabilities(v.matrix());
  double total = 0;
  for (const auto& [j, p] : probs) total += p;
  EXPECT_NEAR(total, 1.0, 1e-12);  // Cauchy–Binet
  std::map<std::vector<Index>, int> counts;
  const int draws = 100000;
  for (int t = 0; t < draws; ++t) ++counts[sorted(arp_select(v, rng).indices)];
  double tv = 0;
  for (const auto& [j, p] : probs) tv += std::abs(p - double(counts[j]) / draws);
  EXPECT_LE(tv / 2, 0.02);
}

TEST(Arp, PrototypeMatchesHouseholderForm) {
  RandomStream gen(5);
  int mismatches = 0;
  for (int t = 0; t < 100; ++t) {
    const Index n = oracle::uniform_int(gen, 2, 15);
    const Index r = oracle::uniform_int(gen, 1, n);
    const auto v = random_basis(n, r, gen);
    RandomStream s1(1000 + t), s2(1000 + t);
    if (!(arp_select(v, s1).indices == arp_select_prototype(v, s2).indices)) ++mismatches;
  }
  EXPECT_EQ(mismatches, 0);
}

TEST(Arp, PrototypeEndsWithZeroBasis) {
  RandomStream rng(6);
  const auto v = random_basis(9, 4, rng);
  RealMatrix vr;
  arp_select_prototype(v, rng, {}, &vr);
  EXPECT_LE(vr.norm(), 1e-12);
}

TEST(Arp, StepProbabilitiesSumToOne) {
  RandomStream rng(7);
  const auto v = random_basis(12, 5, rng);
  const auto rep = arp_select(v, rng, {.record_scores = true});
  ASSERT_EQ(rep.step_scores.size(), 5u);
  for (const auto& p : rep.step_scores) {
    EXPECT_NEAR(p.sum(), 1.0, 1e-10);
    EXPECT_GE(p.minCoeff(), 0.0);
  }
  // already selected rows carry no probability later on
  for (std::size_t k = 1; k < rep.step_scores.size(); ++k)
    for (std::size_t l = 0; l < k; ++l)
      EXPECT_EQ(rep.step_scores[k](rep.indices[static_cast<Index>(l)]), 0.0);
}

TEST(ArpState, InvariantsAlongRun) {
  RandomStream rng(8);
  for (int t = 0; t < 30; ++t) {
    const Index n = oracle::uniform_int(rng, 3, 12);
    const Index r = oracle::uniform_int(rng, 1, n);
    const auto v = random_basis(n, r, rng);
    ArpState<double> s(v);
    RealMatrix proto = v.matrix();
    while (!s.done()) {
      const Index k = s.step();
      EXPECT_NEAR(s.leverage_scores().sum(), double(r - k), 1e-10);
      // leverage equals the squared row norm of the projected basis
      EXPECT_NEAR((s.leverage_scores() - proto.rowwise().squaredNorm()).norm(), 0.0, 1e-10);
      Index j = 0;
      s.leverage_scores().maxCoeff(&j);
      const RealVector row = proto.row(j).transpose();
      proto -= proto * row * row.transpose() / row.squaredNorm();
      proto.row(j).setZero();
      const double pivot = s.advance(j);
      EXPECT_GT(pivot, 0.0);
      // W stays orthogonal-equivalent to V
      EXPECT_NEAR((s.basis() * s.basis().transpose() - v.matrix() * v.matrix().transpose()).norm(), 0.0, 1e-12);
    }
    const RealMatrix wj = s.selected_rows();
    EXPECT_EQ(wj.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().norm(), 0.0);
    EXPECT_TRUE((wj.diagonal().array() > 0).all());
    EXPECT_NEAR(std::abs(wj.diagonal().prod()), std::abs(v.matrix()(s.selected().values(), Eigen::all).determinant()),
                1e-12);
  }
}

TEST(ArpState, AdvanceErrors) {
  RealMatrix m = RealMatrix::Zero(3, 1);
  m(0, 0) = 1;
  ArpState<double> s{OrthonormalBasis<double>(m)};
  EXPECT_THROW(s.advance(1), Error);  // zero leverage
  s.advance(0);
  EXPECT_THROW(s.advance(2), Error);  // done
}

TEST(Arp, DegenerateProbabilities) {
  RandomStream rng(9);
  const OrthonormalBasis<double> zero(RealMatrix::Zero(4, 2), 10.0);
  try {
    arp_select(zero, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::degenerate_probabilities);
  }
}

TEST(Oblique, ExactWhenAInSpan) {
  RandomStream rng(10);
  const auto v = random_basis(10, 3, rng);
  const RealMatrix a = oracle::gaussian(6, 3, rng) * v.matrix().transpose();
  const auto j = arp_select(v, rng).indices;
  EXPECT_LE(std::sqrt(oblique_cssp_error_sq(a, v, j)), 1e-10 * a.norm());
}

TEST(Oblique, FullRankIsIdentity) {
  RandomStream rng(11);
  const OrthonormalBasis<double> v(RealMatrix::Identity(4, 4));
  const RealMatrix a = oracle::gaussian(3, 4, rng);
  const auto j = arp_select(v, rng).indices;
  EXPECT_LE((oblique_cssp_approx(a, v, j) - a).norm(), 1e-13);
}

TEST(Oblique, InterpolatesSelectedColumnsAndMatchesOracle) {
  RandomStream rng(12);
  for (int t = 0; t < 30; ++t) {
    const auto v = random_basis(9, 3, rng);
    const RealMatrix a = oracle::gaussian(7, 9, rng);
    const auto j = arp_select(v, rng).indices;
    const RealMatrix approx = oblique_cssp_approx(a, v, j);
    EXPECT_LE((approx(Eigen::all, j.values()) - a(Eigen::all, j.values())).norm(), 1e-10 * a.norm());
    EXPECT_NEAR(oblique_cssp_error_sq(a, v, j), oracle::oblique_error_sq(a, v.matrix(), j.values()),
                1e-9 * a.squaredNorm());
  }
}

TEST(Oblique, SingularPivot) {
  RealMatrix m = RealMatrix::Zero(3, 2);
  m(0, 0) = m(1, 1) = 1;
  const OrthonormalBasis<double> v(m);
  try {
    arp_replay(v, IndexList({0, 2}, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::singular_pivot);
  }
}

TEST(Orthogonal, DiagonalExample) {
  RealMatrix a = RealVector(RealVector::LinSpaced(3, 3, 1)).asDiagonal();
  EXPECT_NEAR(orthogonal_cssp_error(a, IndexList({0}, 3)), std::sqrt(5.0), 1e-14);
  EXPECT_NEAR(orthogonal_cssp_error(a, IndexList({0, 1, 2}, 3)), 0.0, 1e-14);
}

TEST(Orthogonal, NeverWorseThanOblique) {
  RandomStream rng(13);
  for (int t = 0; t < 50; ++t) {
    const RealMatrix a = oracle::gaussian(8, 10, rng);
    const auto v = top_right_singular_basis(a, 3);
    const auto j = arp_select(v, rng).indices;
    const double orth = orthogonal_cssp_error(a, j);
    EXPECT_NEAR(orth * orth, oracle::orthogonal_error_sq(a, j.values()), 1e-10 * a.squaredNorm());
    EXPECT_LE(orth * orth, oblique_cssp_error_sq(a, v, j) * (1 + 1e-12));
  }
}

TEST(Oblique, ExpectedErrorIsExactlyRPlusOneTimesTail) {
  // E‖A − Â‖² = (r+1)‖A − AVVᵀ‖² for any orthonormal V
  RandomStream rng(14);
  const RealMatrix a = oracle::gaussian(12, 10, rng);
  const auto v = random_basis(10, 3, rng);
  const double tail = (a - a * v.matrix() * v.matrix().transpose()).squaredNorm();
  // exact expectation from the subset law
  double exact = 0;
  for (const auto& [j, p] : oracle::dpp_probabilities(v.matrix())) exact += p * oracle::oblique_error_sq(a, v.matrix(), j);
  EXPECT_NEAR(exact, 4 * tail, 1e-9 * tail);
  std::vector<double> errs;
  for (int t = 0; t < 20000; ++t) errs.push_back(oblique_cssp_error_sq(a, v, arp_select(v, rng).indices));
  EXPECT_NEAR(oracle::mean(errs), 4 * tail, 3.5 * oracle::std_error(errs));
}

TEST(Orthogonal, OptimalBasisBound) {
  RandomStream rng(15);
  const RealMatrix a = oracle::random_with_spectrum(15, 12, 1.0, rng);
  const Index r = 4;
  const auto v = top_right_singular_basis(a, r);
  std::vector<double> errs;
  for (int t = 0; t < 5000; ++t) {
    const double e = orthogonal_cssp_error(a, arp_select(v, rng).indices);
    errs.push_back(e * e);
  }
  EXPECT_LE(oracle::mean(errs), (r + 1) * oracle::tail_sq(a, r) + 3 * oracle::std_error(errs));
}
