#include "pops/cbmaps.hpp"
#include "test_util.hpp"

using namespace pops;
using pops::testing::rand_vec;

namespace {

const PExponent P3(3.0);

CbOptions quick(std::uint64_t seed) {
  CbOptions o;
  o.seed = seed;
  o.starts = 1;
  o.evals = 80;
  return o;
}

}  // namespace

TEST(LinearMap, ShapeIsChecked) {
  const auto S = POStructure::min(linf_space(2), P3);
  EXPECT_THROW(LinearMap(S, S, Mat::Identity(3, 2)), std::invalid_argument);
  EXPECT_THROW(LinearMap(S, POStructure::min(linf_space(2), PExponent(2.0)), Mat::Identity(2, 2)),
               std::invalid_argument);
}

TEST(CbEstimate, IdentityOnMinIsOne) {
  const auto S = POStructure::min(linf_space(2), P3);
  const auto est = cb_estimate(LinearMap(S, S, Mat::Identity(2, 2)), 2, quick(1));
  ASSERT_EQ(est.levels.size(), 2u);
  // the level-1 sup runs a branch and bound at relative tolerance 1e-4
  EXPECT_NEAR(est.levels[0].lower, 1.0, 1e-6);
  EXPECT_LE(est.levels[0].upper, 1.0 + 1e-3);
  EXPECT_GE(est.levels[1].lower, 1.0 - 1e-6);
  EXPECT_TRUE(est.monotone);
}

TEST(CbEstimate, ScaledIdentity) {
  const auto S = POStructure::min(linf_space(2), P3);
  const auto b = level_norm(LinearMap(S, S, 2.0 * Mat::Identity(2, 2)), 1, quick(2));
  EXPECT_NEAR(b.lower, 2.0, 1e-6);
  EXPECT_LE(b.upper, 2.0 + 2e-3);
}

TEST(CbEstimate, FunctionalIsCompletelyBounded) {
  // scalar-valued maps have cb norm equal to their norm
  const auto X = FiniteNormedSpace::lp(2, 3.0);
  const Vec phi = rand_vec(3, 2);
  std::vector<Mat> imgs;
  for (Eigen::Index k = 0; k < 2; ++k) imgs.push_back(Mat::Constant(1, 1, phi[k]));
  const auto est = cb_estimate(OperatorMap(POStructure::min(X, P3), imgs), 2, quick(3));
  const double v = dual_norm(X, phi).upper;
  for (const auto& l : est.levels) {
    EXPECT_LE(l.lower, v + 1e-9);
    EXPECT_LE(l.upper, v * (1.0 + 1e-6));
  }
  EXPECT_GE(est.levels[0].lower, v * (1.0 - 1e-6));
  EXPECT_GE(est.upper, est.sup_lower);
}

TEST(CbEstimate, Deterministic) {
  const auto S = POStructure::maxlp(l1_space(2), P3);
  const auto T = LinearMap(S, POStructure::min(l1_space(2), P3), Mat::Identity(2, 2));
  const auto a = cb_estimate(T, 2, quick(4)), b = cb_estimate(T, 2, quick(4));
  for (std::size_t i = 0; i < a.levels.size(); ++i) {
    EXPECT_EQ(a.levels[i].lower, b.levels[i].lower);
    EXPECT_EQ(a.levels[i].upper, b.levels[i].upper);
  }
}
