#include <gtest/gtest.h>

#include "arp/rowspace.hpp"
#include "support/oracles.hpp"

using namespace arp;

TEST(Rowspace, ExactOnIdentity) {
  RandomStream rng(1);
  const RealMatrix a = RealMatrix::Identity(6, 6);
  const auto v = build_rowspace(a, {RowspaceMethod::exact_svd, 2, 0}, rng);
  EXPECT_EQ(v.cols(), 2);
  EXPECT_NEAR((a - a * v.matrix() * v.matrix().transpose()).squaredNorm(), 4.0, 1e-12);
}

TEST(Rowspace, SketchCapturesExactLowRank) {
  RandomStream rng(2);
  const RealMatrix a = oracle::gaussian(30, 3, rng) * oracle::gaussian(3, 25, rng);
  const auto v = build_rowspace(a, {RowspaceMethod::gaussian_sketch, 3, 2}, rng);
  EXPECT_EQ(v.cols(), 5);
  EXPECT_LE((a - a * v.matrix() * v.matrix().transpose()).norm(), 1e-10 * a.norm());
}

TEST(Rowspace, SketchOnRankOneStillReturnsFullBasis) {
  RandomStream rng(3);
  const RealMatrix a = oracle::gaussian(10, 1, rng) * oracle::gaussian(1, 12, rng);
  const auto v = build_rowspace(a, {RowspaceMethod::gaussian_sketch, 2, 1}, rng);
  EXPECT_EQ(v.cols(), 3);
  EXPECT_LE((a - a * v.matrix() * v.matrix().transpose()).norm(), 1e-10 * a.norm());
}

TEST(Rowspace, ReproducibleForSameStream) {
  RandomStream base(4);
  const RealMatrix a = oracle::gaussian(12, 10, base);
  RandomStream r1(99), r2(99);
  const auto v1 = build_rowspace(a, {RowspaceMethod::gaussian_sketch, 3, 2}, r1);
  const auto v2 = build_rowspace(a, {RowspaceMethod::gaussian_sketch, 3, 2}, r2);
  EXPECT_EQ(v1.matrix(), v2.matrix());
}

TEST(Rowspace, OrthonormalOutput) {
  RandomStream rng(5);
  for (int t = 0; t < 10; ++t) {
    const RealMatrix a = oracle::gaussian(15, 12, rng);
    const auto v = build_rowspace(a, {RowspaceMethod::gaussian_sketch, 4, 3}, rng);
    EXPECT_LE((v.matrix().transpose() * v.matrix() - RealMatrix::Identity(7, 7)).norm(), 1e-10);
  }
}

TEST(Rowspace, SketchErrorBoundInExpectation) {
  // E‖A − AVVᵀ‖² ≤ (1 + r/(p−1))·tail_r for the Gaussian sketch
  RandomStream rng(6);
  const RealMatrix a = oracle::random_with_spectrum(30, 20, 1.0, rng);
  const Index r = 3, p = 3;
  std::vector<double> errs;
  for (int t = 0; t < 2000; ++t) {
    const auto v = build_rowspace(a, {RowspaceMethod::gaussian_sketch, r, p}, rng);
    errs.push_back((a - a * v.matrix() * v.matrix().transpose()).squaredNorm());
  }
  const double bound = (1.0 + double(r) / double(p - 1)) * oracle::tail_sq(a, r);
  EXPECT_LE(oracle::mean(errs), bound + 3 * oracle::std_error(errs));
}

TEST(Rowspace, InvalidRanks) {
  RandomStream rng(7);
  const RealMatrix a = RealMatrix::Identity(4, 4);
  EXPECT_THROW(build_rowspace(a, {RowspaceMethod::exact_svd, 5, 0}, rng), Error);
  EXPECT_THROW(build_rowspace(a, {RowspaceMethod::gaussian_sketch, 3, 2}, rng), Error);
  EXPECT_THROW(build_rowspace(a, {RowspaceMethod::exact_svd, 0, 0}, rng), Error);
}
