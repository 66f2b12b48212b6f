#include "pops/core.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace pops;
using pops::testing::mat2;

TEST(PExponent, RejectsClosedEndpoints) {
  EXPECT_THROW(PExponent{1.0}, std::invalid_argument);
  EXPECT_THROW(PExponent{kInf}, std::invalid_argument);
  EXPECT_THROW(PExponent{0.5}, std::invalid_argument);
  PExponent p(3.0);
  EXPECT_DOUBLE_EQ(p.conjugate(), 1.5);
  EXPECT_DOUBLE_EQ(p.dual().conjugate(), 3.0);
}

TEST(LpNorm, SmallVectors) {
  Vec v(2);
  v << 3.0, 4.0;
  EXPECT_NEAR(lp_norm(v, 2.0), 5.0, 1e-14);
  EXPECT_NEAR(lp_norm(v, 1.0), 7.0, 1e-14);
  EXPECT_NEAR(lp_norm(v, kInf), 4.0, 1e-14);
  Vec u = Vec::Ones(2);
  const double w[] = {8.0, 0.001};
  EXPECT_NEAR(lp_norm(u, 3.0, w), std::cbrt(8.001), 1e-13);
}

TEST(LpNorm, Errors) {
  Vec u = Vec::Ones(2);
  const double bad[] = {1.0, 0.0};
  const double shortw[] = {1.0};
  EXPECT_THROW(lp_norm(u, 2.0, bad), std::invalid_argument);
  EXPECT_THROW(lp_norm(u, 2.0, shortw), std::invalid_argument);
}

TEST(OpnormClosed, TwoByTwo) {
  const Mat A = mat2(1, 1, 0, 1);
  EXPECT_NEAR(opnorm_closed(A, ClosedP::One), 2.0, 1e-14);
  EXPECT_NEAR(opnorm_closed(A, ClosedP::Inf), 2.0, 1e-14);
  // A*A = [[1,1],[1,2]]: lambda^2 - 3 lambda + 1 = 0
  const double lam = (3.0 + std::sqrt(5.0)) / 2.0;
  EXPECT_NEAR(opnorm_closed(A, ClosedP::Two), std::sqrt(lam), 1e-12);
  EXPECT_NEAR(opnorm_closed(A, ClosedP::Two), (1.0 + std::sqrt(5.0)) / 2.0, 1e-12);
  for (auto p : {ClosedP::One, ClosedP::Two, ClosedP::Inf})
    EXPECT_NEAR(opnorm_closed(Mat::Identity(3, 3), p), 1.0, 1e-14);
}

TEST(DirectSum, Structure) {
  EXPECT_TRUE(direct_sum(Mat::Identity(1, 1), Mat::Identity(1, 1)).isApprox(Mat::Identity(2, 2)));
  const Mat A = pops::testing::rand_mat(1, 2, 3);
  const Mat S = direct_sum(A, Mat::Zero(2, 2));
  EXPECT_EQ(S.rows(), 4);
  EXPECT_EQ(S.cols(), 5);
  EXPECT_TRUE(S.topLeftCorner(2, 3).isApprox(A));
  EXPECT_EQ(S.bottomRows(2).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(S.topRightCorner(2, 2).cwiseAbs().maxCoeff(), 0.0);
}

TEST(DirectSum, ClosedNormsAreMaxOfParts) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const Mat A = pops::testing::rand_mat(s, 2, 3);
    const Mat B = pops::testing::rand_mat(s + 1000, 3, 2);
    for (auto p : {ClosedP::One, ClosedP::Two, ClosedP::Inf})
      EXPECT_NEAR(opnorm_closed(direct_sum(A, B), p),
                  std::max(opnorm_closed(A, p), opnorm_closed(B, p)), 1e-12);
  }
}

TEST(Kron, OuterIndexIsFirstFactor) {
  const Mat A = mat2(1, 2, 3, 4);
  const Mat B = Mat::Identity(2, 2);
  const Mat K = kron(A, B);
  EXPECT_EQ(K(0, 2), Complex(2.0));
  EXPECT_EQ(K(1, 3), Complex(2.0));
  EXPECT_EQ(K(0, 1), Complex(0.0));
}

TEST(DualityMap, PairsToNormPower) {
  const Vec y = pops::testing::rand_vec(4, 5);
  for (double p : {1.5, 3.0}) {
    const Vec phi = duality_map(y, p);
    const Complex pair = phi.dot(y);  // conjugates phi
    EXPECT_NEAR(pair.real(), std::pow(lp_norm(y, p), p), 1e-10);
    EXPECT_NEAR(pair.imag(), 0.0, 1e-10);
  }
}

TEST(NullSpace, RankDeficient) {
  Mat A(2, 3);
  A << 1, 1, 0, 0, 0, 1;
  const Mat N = null_space(A);
  ASSERT_EQ(N.cols(), 1);
  EXPECT_LT((A * N).norm(), 1e-12);
}
