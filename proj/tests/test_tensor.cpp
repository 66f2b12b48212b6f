#include "pops/tensor.hpp"
#include "test_util.hpp"

#include <cmath>
#include <numbers>

using namespace pops;
using pops::testing::rand_mat;
using pops::testing::rand_vec;

namespace {

double singular_sum(const Mat& c) {
  Eigen::JacobiSVD<Mat> svd(c);
  return svd.singularValues().sum();
}

double spectral(const Mat& c) {
  Eigen::JacobiSVD<Mat> svd(c);
  return svd.singularValues()[0];
}

// sup over u = (1, e^{i theta}) of sum_j |sum_i u_i c_ij|, on a fine grid
double l1_inj_grid(const Mat& c, int steps, double* slack) {
  double best = 0.0;
  for (int k = 0; k < steps; ++k) {
    const double th = 2.0 * std::numbers::pi * k / steps;
    Vec u(2);
    u << 1.0, std::polar(1.0, th);
    best = std::max(best, (c.transpose() * u).cwiseAbs().sum());
  }
  // Lipschitz in theta with constant sum_j |c_2j|
  *slack = c.row(1).cwiseAbs().sum() * std::numbers::pi / steps;
  return best;
}

void expect_contains(const Bounds& b, double v, double tol) {
  EXPECT_LE(b.lower, v + tol);
  EXPECT_GE(b.upper, v - tol);
}

}  // namespace

TEST(TensorElem, ShapeIsChecked) {
  EXPECT_THROW(TensorElem(l1_space(2), l1_space(3), Mat::Zero(3, 2)), std::invalid_argument);
  const auto t = TensorElem::elementary(l1_space(2), rand_vec(1, 2), l1_space(3), rand_vec(2, 3));
  EXPECT_EQ(t.c.rows(), 2);
  EXPECT_EQ(t.c.cols(), 3);
}

TEST(InjNorm, ZeroTensor) {
  const auto b = inj_norm(TensorElem(l1_space(2), linf_space(2), Mat::Zero(2, 2)));
  EXPECT_EQ(b.lower, 0.0);
  EXPECT_EQ(b.upper, 0.0);
}

TEST(InjNorm, LinfLinfIsMaxEntry) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Mat c = rand_mat(s, 3, 2);
    const auto b = inj_norm(TensorElem(linf_space(3), linf_space(2), c));
    expect_contains(b, c.cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE(b.upper - b.lower, 1e-10);
  }
}

TEST(InjNorm, L2L2IsSpectral) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Mat c = rand_mat(10 + s, 2, 3);
    const auto b = inj_norm(TensorElem(FiniteNormedSpace::lp(2, 2.0), FiniteNormedSpace::lp(3, 2.0), c));
    expect_contains(b, spectral(c), 1e-10);
    EXPECT_LE(b.upper - b.lower, 1e-8);
  }
}

TEST(InjNorm, L1L1AgainstTorusGrid) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Mat c = rand_mat(20 + s, 2, 3);
    double slack = 0.0;
    const double g = l1_inj_grid(c, 20000, &slack);
    const auto b = inj_norm(TensorElem(l1_space(2), l1_space(3), c));
    EXPECT_GE(b.upper, g - 1e-12);
    EXPECT_LE(b.lower, g + slack + 1e-12);
    EXPECT_LE(b.upper - b.lower, 1e-2 * b.upper);
  }
}

TEST(InjNorm, WitnessAttainsLower) {
  const auto X = FiniteNormedSpace::lp(2, 3.0);
  const auto Y = l1_space(2);
  const Mat c = rand_mat(31, 2, 2);
  const auto b = inj_norm(TensorElem(X, Y, c));
  ASSERT_TRUE(b.witness.has_value());
  const Vec phi = b.witness->head(2), psi = b.witness->tail(2);
  EXPECT_LE(dual_norm(X, phi).lower, 1.0 + 1e-9);
  EXPECT_LE(dual_norm(Y, psi).lower, 1.0 + 1e-9);
  EXPECT_GE(std::abs(Complex((phi.transpose() * c * psi)(0, 0))), b.lower * (1.0 - 1e-3));
}

TEST(ProjNorm, ZeroTensor) {
  const auto b = proj_norm(TensorElem(l1_space(2), l1_space(2), Mat::Zero(2, 2)));
  EXPECT_EQ(b.lower, 0.0);
  EXPECT_EQ(b.upper, 0.0);
}

TEST(ProjNorm, L1L1IsEntrySum) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Eigen::Index m = 1 + s % 3, n = 1 + (s / 3) % 3;
    const Mat c = rand_mat(40 + s, m, n);
    const auto b = proj_norm(TensorElem(l1_space(m), l1_space(n), c));
    expect_contains(b, c.cwiseAbs().sum(), 1e-9);
    EXPECT_LE(b.upper - b.lower, 1e-3);
  }
}

TEST(ProjNorm, L2L2IsTraceNorm) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Mat c = rand_mat(60 + s, 3, 3);
    const auto b = proj_norm(TensorElem(FiniteNormedSpace::lp(3, 2.0), FiniteNormedSpace::lp(3, 2.0), c));
    expect_contains(b, singular_sum(c), 1e-9);
    EXPECT_LE(b.upper - b.lower, 1e-6 * b.upper);
  }
}

TEST(CrossNorm, RankOne) {
  const std::vector<std::pair<FiniteNormedSpace, FiniteNormedSpace>> pairs = {
      {l1_space(2), linf_space(3)},
      {FiniteNormedSpace::lp(2, 3.0), FiniteNormedSpace::lp(2, 1.5)},
      {FiniteNormedSpace::lp(3, 2.0), l1_space(2)}};
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& [X, Y] = pairs[k];
    const Vec x = rand_vec(70 + k, X.dim()), y = rand_vec(80 + k, Y.dim());
    const double v = norm(X, x).upper * norm(Y, y).upper;
    const auto t = TensorElem::elementary(X, x, Y, y);
    const auto bi = inj_norm(t);
    const auto bp = proj_norm(t);
    expect_contains(bi, v, 1e-3 * v);
    expect_contains(bp, v, 1e-3 * v);
  }
}

TEST(ProjNorm, DominatesInj) {
  const std::vector<std::pair<FiniteNormedSpace, FiniteNormedSpace>> pairs = {
      {l1_space(2), linf_space(2)},
      {FiniteNormedSpace::lp(2, 3.0), FiniteNormedSpace::lp(2, 3.0)},
      {linf_space(2), FiniteNormedSpace::lp(2, 1.5)}};
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& [X, Y] = pairs[k];
    const Mat c = rand_mat(90 + k, 2, 2);
    const auto bi = inj_norm(TensorElem(X, Y, c));
    const auto bp = proj_norm(TensorElem(X, Y, c));
    EXPECT_LE(bi.lower, bp.upper * (1.0 + 1e-12));
    EXPECT_LE(bp.lower, bp.upper);
  }
}

TEST(ProjNorm, DualWitnessCertifiesLower) {
  const auto X = FiniteNormedSpace::lp(2, 3.0);
  const auto Y = FiniteNormedSpace::lp(2, 1.5);
  const Mat c = rand_mat(101, 2, 2);
  const auto b = proj_norm(TensorElem(X, Y, c));
  ASSERT_TRUE(b.witness.has_value());
  const Mat T = Eigen::Map<const Mat>(b.witness->data(), 2, 2);
  const auto inj = inj_norm(TensorElem(FiniteNormedSpace::dual(X), FiniteNormedSpace::dual(Y), T));
  EXPECT_LE(inj.lower, 1.0 + 1e-9);
  EXPECT_GE(std::abs(c.cwiseProduct(T).sum()), b.lower * (1.0 - 1e-9));
}

TEST(ProjNorm, Deterministic) {
  const Mat c = rand_mat(111, 2, 2);
  const TensorElem t(FiniteNormedSpace::lp(2, 3.0), FiniteNormedSpace::lp(2, 1.5), c);
  const auto a = proj_norm(t), b = proj_norm(t);
  EXPECT_EQ(a.lower, b.lower);
  EXPECT_EQ(a.upper, b.upper);
}

TEST(NuclearNorm, ElementaryUnit) {
  for (double p : {1.5, 3.0}) {
    Mat e = Mat::Zero(2, 2);
    e(0, 0) = 1.0;
    const auto b = nuclear_norm(NuclearSpace(2, PExponent(p)), e);
    expect_contains(b, 1.0, 1e-9);
  }
}

TEST(NuclearNorm, TraceNormAtTwo) {
  for (std::uint64_t s = 0; s < 3; ++s) {
    const Mat c = rand_mat(120 + s, 3, 3);
    const auto b = nuclear_norm(NuclearSpace(3, PExponent(2.0)), c);
    expect_contains(b, singular_sum(c), 1e-9);
    EXPECT_LE(b.upper - b.lower, 1e-8 * b.upper);
  }
}

TEST(NuclearNorm, DiagonalIsAbsoluteSum) {
  for (double p : {1.5, 3.0}) {
    const Vec d = rand_vec(130, 2);
    const Mat c = d.asDiagonal();
    const auto b = nuclear_norm(NuclearSpace(2, PExponent(p)), c);
    expect_contains(b, d.cwiseAbs().sum(), 1e-6);
  }
}

TEST(NuclearNorm, BracketsAreReasonablyTight) {
  for (std::uint64_t s = 0; s < 3; ++s) {
    const Mat c = rand_mat(140 + s, 2, 2);
    const auto b = nuclear_norm(NuclearSpace(2, PExponent(3.0)), c);
    EXPECT_LE(b.upper - b.lower, 3e-2 * b.upper);
    // between the trace norm scaled by the norm equivalence constants
    EXPECT_GE(b.upper, singular_sum(c) * std::pow(2.0, -1.0 / 6.0) * (1 - 1e-9));
  }
}

TEST(NuclearNorm, Errors) {
  EXPECT_THROW(NuclearSpace(0, PExponent(2.0)), std::invalid_argument);
  EXPECT_THROW(nuclear_norm(NuclearSpace(2, PExponent(2.0)), Mat::Zero(3, 2)), std::invalid_argument);
}

TEST(PProjNorm, MaxTypeMatchesProjective) {
  const PExponent p(3.0);
  const auto V = POStructure::maxlp(l1_space(2), p);
  const auto W = POStructure::min(FiniteNormedSpace::lp(2, 2.0), p);
  const TensorElem t(l1_space(2), FiniteNormedSpace::lp(2, 2.0), rand_mat(150, 2, 2));
  CbOptions cb;
  cb.starts = 1;
  cb.evals = 40;
  const auto b = pproj_norm_level1(t, V, W, 2, {}, cb);
  const auto pj = proj_norm(t);
  EXPECT_LE(b.lower, pj.upper * (1.0 + 1e-12));
  EXPECT_EQ(b.upper, pj.upper);
  EXPECT_GE(b.lower, pj.lower * (1.0 - 3e-2));
}

TEST(PProjNorm, ZeroAndCrossNorm) {
  const PExponent p(3.0);
  const auto X = FiniteNormedSpace::lp(2, 3.0);
  const auto V = POStructure::min(X, p);
  const auto W = POStructure::min(l1_space(2), p);
  EXPECT_EQ(pproj_norm_level1(TensorElem(X, l1_space(2), Mat::Zero(2, 2)), V, W, 1).upper, 0.0);
  const Vec x = rand_vec(151, 2), y = rand_vec(152, 2);
  const auto b = pproj_norm_level1(TensorElem::elementary(X, x, l1_space(2), y), V, W, 1);
  EXPECT_LE(b.upper, norm(X, x).upper * y.cwiseAbs().sum() * (1.0 + 1e-9));
}
