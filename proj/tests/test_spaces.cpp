#include "pops/spaces.hpp"
#include "test_util.hpp"

#include <cmath>
#include <numbers>

using namespace pops;
using pops::testing::rand_mat;
using pops::testing::rand_vec;

namespace {

Vec v2(Complex a, Complex b) {
  Vec v(2);
  v << a, b;
  return v;
}

// brute force inf over a complex grid of t of ||z + t d||_1
double coset_grid_l1(const Vec& z, const Vec& d, double radius, int steps) {
  double best = kInf;
  for (int i = -steps; i <= steps; ++i)
    for (int j = -steps; j <= steps; ++j) {
      const Complex t(radius * i / steps, radius * j / steps);
      best = std::min(best, lp_norm(z + t * d, 1.0));
    }
  return best;
}

std::vector<FiniteNormedSpace> zoo() {
  RealVec w(3);
  w << 1.0, 2.0, 0.5;
  Mat om(4, 2);
  om << 1, 0, 0, 1, 0.5, 0.5, Complex(0, 0.6), 0.3;
  Mat ker(3, 1);
  ker << 1, -1, Complex(0, 1);
  Mat basis(3, 2);
  basis << 1, 0, 1, 1, 0, Complex(0, 2);
  return {FiniteNormedSpace::lp(2, 3.0),
          FiniteNormedSpace::weighted_lp(1.5, w),
          l1_space(3),
          linf_space(3),
          FiniteNormedSpace::norming_set(om),
          FiniteNormedSpace::quotient(FiniteNormedSpace::lp(3, 3.0), ker),
          FiniteNormedSpace::quotient(l1_space(3), ker),
          FiniteNormedSpace::subspace(FiniteNormedSpace::lp(3, 4.0), basis),
          FiniteNormedSpace::dual(FiniteNormedSpace::norming_set(om))};
}

}  // namespace

TEST(Spaces, NormExamples) {
  EXPECT_NEAR(norm(linf_space(2), v2(1, -2)).upper, 2.0, 1e-15);
  EXPECT_NEAR(norm(linf_space(2), v2(1, -2)).lower, 2.0, 1e-15);
  EXPECT_NEAR(norm(l1_space(2), v2(1, -2)).upper, 3.0, 1e-15);
  EXPECT_NEAR(norm(l1_space(2), v2(1, -2)).lower, 3.0, 1e-15);
}

TEST(Spaces, QuotientExampleAgainstCosetGrid) {
  const Vec d = v2(1, -1);
  const Vec z = v2(1, 0);
  const double oracle = coset_grid_l1(z, d, 2.0, 200);
  EXPECT_NEAR(oracle, 1.0, 1e-12);
  const auto Z = FiniteNormedSpace::quotient(l1_space(2), Mat(d));
  const auto b = norm(Z, z);  // representative form
  EXPECT_TRUE(b.contains(oracle, 1e-9)) << b.lower << " " << b.upper;
  EXPECT_LT(b.width(), 1e-6);
}

TEST(Spaces, QuotientRandomAgainstCosetGrid) {
  Mat d(3, 1);
  d << 1, Complex(0.5, 0.5), -2;
  const auto Z = FiniteNormedSpace::quotient(l1_space(3), d);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Vec z = rand_vec(s, 3);
    const double oracle = coset_grid_l1(z, d.col(0), 3.0, 300);
    const auto b = norm(Z, z);
    // grid step 0.01 moves the l^1 value by at most 0.01 * ||d||_1
    EXPECT_LE(b.lower, oracle + 1e-9);
    EXPECT_GE(b.upper, oracle - 0.01 * lp_norm(d.col(0), 1.0) - 1e-9);
    EXPECT_LT(b.width(), 1e-5);
  }
}

TEST(Spaces, DualOfL1IsMaxModulus) {
  const auto D = FiniteNormedSpace::dual(l1_space(3));
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Vec x = rand_vec(s, 3);
    const double m = x.cwiseAbs().maxCoeff();
    EXPECT_NEAR(norm(D, x).upper, m, 1e-9);
    EXPECT_NEAR(norm(linf_space(3), x).upper, m, 1e-12);
    // optimiser route over the unit ball of l^1(3)
    EXPECT_NEAR(dual_norm_search(l1_space(3), x, 6, s).lower, m, 1e-9);
  }
}

TEST(Spaces, OneDimensional) {
  const Vec x = Vec::Constant(1, Complex(3, 4));
  EXPECT_NEAR(norm(l1_space(1), x).upper, 5.0, 1e-14);
  EXPECT_NEAR(norm(linf_space(1), x).upper, 5.0, 1e-14);
}

TEST(Spaces, CanonicalPairing) {
  const Mat delta = *finite_norming_set(linf_space(3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      EXPECT_EQ(pairing(delta.row(j).transpose(), Vec::Unit(3, i)), Complex(i == j ? 1.0 : 0.0));
}

TEST(Spaces, DualNormClosedFormsAgreeWithSearch) {
  for (const auto& X : zoo()) {
    for (std::uint64_t s = 0; s < 2; ++s) {
      const Vec phi = rand_vec(10 + s, X.dim());
      const auto b = dual_norm(X, phi);
      const auto sr = dual_norm_search(X, phi, 4, s);
      EXPECT_LE(sr.lower, b.upper + 1e-9) << X.describe();
      EXPECT_LE(b.lower, b.upper);
      EXPECT_LT(b.upper - sr.lower, 1e-3 * b.upper) << X.describe();
    }
  }
}

TEST(Spaces, BidualAgreement) {
  for (const auto& X : zoo()) {
    const auto XX = FiniteNormedSpace::dual(FiniteNormedSpace::dual(X));
    for (std::uint64_t s = 0; s < 20; ++s) {
      const Vec x = rand_vec(100 + s, X.dim());
      const auto a = norm(X, x), b = norm(XX, x);
      EXPECT_TRUE(a.overlaps(b, 1e-9)) << X.describe();
      if (s >= 2) continue;
      // independent route: sup over the ball of X*
      const auto sr = dual_norm_search(FiniteNormedSpace::dual(X), x, 4, s);
      EXPECT_LE(sr.lower, a.upper + 1e-9) << X.describe();
      EXPECT_GT(sr.lower, a.lower * (1.0 - 1e-3)) << X.describe();
    }
  }
}

TEST(Spaces, BracketsAreTight) {
  for (const auto& X : zoo()) {
    const Vec x = rand_vec(7, X.dim());
    const auto b = norm(X, x);
    EXPECT_LE(b.lower, b.upper);
    EXPECT_LT(b.width(), 1e-5 * b.upper) << X.describe();
  }
}

TEST(Spaces, NormingFunctionalAttainsNorm) {
  for (const auto& X : zoo()) {
    const Vec x = rand_vec(8, X.dim());
    const Vec phi = norming_functional(X, x);
    const Complex v = pairing(phi, x);
    EXPECT_NEAR(v.imag(), 0.0, 1e-9 * std::abs(v));
    EXPECT_GE(v.real(), norm(X, x).lower * (1 - 1e-9) - 1e-12) << X.describe();
    EXPECT_LE(dual_norm(X, phi).lower, 1.0 + 1e-9) << X.describe();
  }
}

TEST(Spaces, DualBallSampleIsContractive) {
  for (const auto& X : zoo()) {
    const Mat S = dual_ball_sample(X, 12, 3);
    EXPECT_GE(S.rows(), 12);
    for (std::uint64_t s = 0; s < 100; ++s) {
      const Vec x = rand_vec(200 + s, X.dim());
      const double nx = norm(X, x).upper;
      for (Eigen::Index i = 0; i < S.rows(); ++i)
        EXPECT_LE(std::abs(pairing(S.row(i).transpose(), x)), nx * (1 + 1e-9)) << X.describe();
    }
  }
  const Mat L = dual_ball_sample(linf_space(2), 1, 0);
  EXPECT_TRUE(L.topRows(2).isApprox(Mat::Identity(2, 2)));
  const Mat O = dual_ball_sample(l1_space(2), 1, 0);
  EXPECT_TRUE(O.topRows(2).isApprox(Mat::Identity(2, 2)));
}

TEST(Spaces, TriangleAndHomogeneity) {
  for (const auto& X : zoo()) {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const Vec x = rand_vec(300 + s, X.dim()), y = rand_vec(400 + s, X.dim());
      EXPECT_LE(norm(X, x + y).lower, norm(X, x).upper + norm(X, y).upper + 1e-12);
      if (X.kind() == SpaceKind::WeightedLp || X.kind() == SpaceKind::NormingSet) {
        const Complex c(0.3, -1.7);
        EXPECT_NEAR(norm(X, c * x).upper, std::abs(c) * norm(X, x).upper, 1e-12 * norm(X, x).upper);
      }
    }
  }
}

TEST(Spaces, QuotientIsContractive) {
  Mat ker(3, 1);
  ker << 1, 2, -1;
  const auto X = FiniteNormedSpace::lp(3, 1.5);
  const auto Z = FiniteNormedSpace::quotient(X, ker);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Vec x = rand_vec(500 + s, 3);
    EXPECT_LE(norm(Z, Vec(Z.quotient_map() * x)).lower, norm(X, x).upper + 1e-12);
  }
}

TEST(Spaces, SupOverDualBallRecoversNorm) {
  for (const auto& X : zoo()) {
    const Vec x = rand_vec(9, X.dim());
    auto h = [&](const Vec& phi) {
      const double v = std::abs(pairing(phi, x));
      return std::pair{v, v * (1 + 1e-14)};
    };
    const auto s = sup_dual_ball(X, h);
    const auto n = norm(X, x);
    EXPECT_LE(s.lower, n.upper + 1e-9) << X.describe();
    EXPECT_GE(s.upper, n.lower - 1e-9) << X.describe();
    const auto t = sup_ball(FiniteNormedSpace::dual(X), h);
    EXPECT_TRUE(t.overlaps(n, 1e-9)) << X.describe();
  }
  // exact routes
  const Vec x = rand_vec(1, 3);
  auto h = [&](const Vec& phi) {
    const double v = std::abs(pairing(phi, x));
    return std::pair{v, v};
  };
  for (const auto& X : {l1_space(3), linf_space(3)}) {
    const auto s = sup_dual_ball(X, h);
    EXPECT_LT(s.width(), 1e-4 * s.upper) << X.describe();
    EXPECT_TRUE(s.overlaps(norm(X, x), 1e-9)) << X.describe();
  }
  const Vec y = x.head(2);
  auto hy = [&](const Vec& phi) {
    const double v = std::abs(pairing(phi, y));
    return std::pair{v, v};
  };
  for (double p : {1.5, 3.0}) {
    const auto X = FiniteNormedSpace::lp(2, p);
    const auto s = sup_dual_ball(X, hy);
    EXPECT_LT(s.width(), 1e-2 * s.upper) << X.describe();
    EXPECT_TRUE(s.overlaps(norm(X, y), 1e-9)) << X.describe();
  }
}

TEST(Spaces, Errors) {
  EXPECT_THROW(norm(l1_space(2), Vec::Ones(3)), std::invalid_argument);
  EXPECT_THROW(FiniteNormedSpace::weighted_lp(2.0, RealVec::Zero(2)), std::invalid_argument);
  EXPECT_THROW(FiniteNormedSpace::norming_set(Mat::Ones(1, 2)), std::invalid_argument);
  EXPECT_THROW(FiniteNormedSpace::quotient(l1_space(2), Mat::Identity(2, 2)), std::invalid_argument);
  EXPECT_THROW(l1_space(0), std::invalid_argument);
  EXPECT_THROW(DiscreteMeasure(RealVec::Constant(2, -1.0)), std::invalid_argument);
  EXPECT_THROW(dual_ball_sample(l1_space(2), 0, 0), std::invalid_argument);
  EXPECT_THROW(l1_space(2).functionals(), std::logic_error);
}
