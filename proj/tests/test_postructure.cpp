#include "pops/postructure.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace pops;
using pops::testing::rand_mat;
using pops::testing::rand_vec;

namespace {

const PExponent P2(2.0), P3(3.0);

double spectral(const Mat& a) {
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues()[0];
}

MatrixOverSpace random_u(std::uint64_t seed, Eigen::Index n, Eigen::Index d) {
  Rng rng = make_rng(seed, 7);
  return random_matrix_over(rng, n, n, d);
}

void expect_contains(const Bounds& b, double v, double tol) {
  EXPECT_LE(b.lower, v + tol) << b.lower_method;
  EXPECT_GE(b.upper, v - tol) << b.upper_method;
}

std::vector<Mat> diagonal_images(Eigen::Index k) {
  std::vector<Mat> out;
  for (Eigen::Index i = 0; i < k; ++i) out.push_back(Mat(Vec::Unit(k, i).asDiagonal()));
  return out;
}

}  // namespace

TEST(MatrixOverSpace, EntriesAndSlicesAgree) {
  const auto u = random_u(1, 2, 3);
  const Vec e = u.entry(1, 0);
  for (Eigen::Index k = 0; k < 3; ++k) EXPECT_EQ(e[k], u.slices()[k](1, 0));
  const Vec phi = rand_vec(2, 3);
  EXPECT_NEAR(std::abs(u.apply(phi)(1, 0) - pairing(phi, e)), 0.0, 1e-12);
}

TEST(MatrixOverSpace, DirectSumAndCompress) {
  const auto u = random_u(3, 2, 2), v = random_u(4, 1, 2);
  const auto w = u.direct_sum(v);
  EXPECT_EQ(w.rows(), 3);
  EXPECT_EQ(w.entry(2, 2), v.entry(0, 0));
  EXPECT_TRUE(w.entry(0, 2).isZero());
  const auto c = u.compress(Mat::Identity(2, 2), Mat::Identity(2, 2));
  EXPECT_EQ(c.entry(1, 1), u.entry(1, 1));
  EXPECT_THROW(MatrixOverSpace(0, 1, 1), std::invalid_argument);
}

TEST(MinNorm, LinfIsMaxOfSlices) {
  // sup over the l^1 ball of ||phi_1 U_1 + phi_2 U_2|| is attained at a vertex
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto u = random_u(10 + s, 2, 2);
    const double want = std::max(spectral(u.slices()[0]), spectral(u.slices()[1]));
    const auto b = min_matrix_norm(linf_space(2), u, P2);
    expect_contains(b, want, 1e-9);
    EXPECT_LE(b.upper - b.lower, 1e-8);
  }
}

TEST(MinNorm, LevelOneIsBanachNorm) {
  const auto X = FiniteNormedSpace::lp(2, 3.0);
  for (std::uint64_t s = 0; s < 3; ++s) {
    const Vec x = rand_vec(20 + s, 2);
    const auto u = MatrixOverSpace::scalar_times(Mat::Ones(1, 1), x);
    expect_contains(min_matrix_norm(X, u, P3), norm(X, x).upper, 1e-6);
  }
}

TEST(MinNorm, ScalarMatrixTimesVector) {
  const auto X = FiniteNormedSpace::lp(3, 3.0);
  const Mat a = rand_mat(30, 2, 2);
  const Vec v = rand_vec(31, 3);
  const auto b = min_matrix_norm(X, MatrixOverSpace::scalar_times(a, v), P2);
  expect_contains(b, spectral(a) * norm(X, v).upper, 1e-6);
}

TEST(ConcreteNorm, DiagonalEmbeddingIsMaxOverAtoms) {
  const auto S = POStructure::concrete(linf_space(3), diagonal_images(3), P2);
  for (std::uint64_t s = 0; s < 3; ++s) {
    const auto u = random_u(40 + s, 2, 3);
    double want = 0.0;
    for (const auto& U : u.slices()) want = std::max(want, spectral(U));
    expect_contains(matrix_norm(S, u), want, 1e-9);
  }
}

TEST(ConcreteNorm, RejectsNonInjective) {
  std::vector<Mat> imgs = {Mat::Identity(2, 2), Mat::Identity(2, 2)};
  EXPECT_THROW(POStructure::concrete(l1_space(2), imgs, P3), std::invalid_argument);
}

TEST(MaxLpNorm, LevelOneIsBanachNorm) {
  const Vec x = rand_vec(50, 2);
  const auto u = MatrixOverSpace::scalar_times(Mat::Ones(1, 1), x);
  const auto b = maxlp_matrix_norm(l1_space(2), u, P3, 0, MatNormOptions::fast());
  expect_contains(b, x.cwiseAbs().sum(), 1e-9);
  EXPECT_LE(b.upper - b.lower, 1e-6);
}

TEST(MaxLpNorm, DiagonalUnitsHaveNormOne) {
  // u = diag(e_1, e_2): every contraction gives diag(A_1, A_2), and the
  // identity factorisation gives 1
  MatrixOverSpace u(2, 2, 2);
  u.set_entry(0, 0, Vec::Unit(2, 0));
  u.set_entry(1, 1, Vec::Unit(2, 1));
  const auto b = maxlp_matrix_norm(l1_space(2), u, P3, 0, MatNormOptions::fast());
  expect_contains(b, 1.0, 1e-9);
  EXPECT_LE(b.upper - b.lower, 1e-6);
}

TEST(MaxLpNorm, DominatesMin) {
  for (std::uint64_t s = 0; s < 3; ++s) {
    const auto u = random_u(60 + s, 2, 2);
    const auto o = MatNormOptions::fast(s);
    const auto mn = min_matrix_norm(l1_space(2), u, P3, o);
    const auto mx = maxlp_matrix_norm(l1_space(2), u, P3, 0, o);
    EXPECT_GE(mx.lower, mn.lower - 1e-12);
    EXPECT_LE(mn.lower, mx.upper + 1e-9);
    EXPECT_LE(mx.lower, mx.upper);
  }
}

TEST(QuotientNorm, IdentityMapKeepsParent) {
  const auto parent = POStructure::min(FiniteNormedSpace::lp(2, 3.0), P3);
  const auto Q = POStructure::quotient(parent, Mat::Identity(2, 2));
  const auto u = random_u(70, 2, 2);
  const auto a = matrix_norm(parent, u), b = matrix_norm(Q, u);
  EXPECT_TRUE(a.overlaps(b, 1e-9));
}

TEST(QuotientNorm, ZeroIsZero) {
  const auto parent = POStructure::min(FiniteNormedSpace::lp(3, 3.0), P3);
  Mat q(2, 3);
  q << 1, 0, 1, 0, 1, 0;
  const auto b = matrix_norm(POStructure::quotient(parent, q), MatrixOverSpace(2, 2, 2));
  EXPECT_EQ(b.upper, 0.0);
}

TEST(QuotientNorm, NuclearOntoL1) {
  // diagonal of N(l^3(2)) = l^{3/2}(2) (x)^gamma l^3(2) is l^1(2)
  const auto N = FiniteNormedSpace::projective(FiniteNormedSpace::lp(2, 1.5), FiniteNormedSpace::lp(2, 3.0));
  Mat q = Mat::Zero(2, 4);
  q(0, 0) = 1.0;
  q(1, 3) = 1.0;
  const auto Q = POStructure::quotient(POStructure::maxlp(N, P3), q, l1_space(2));
  MatNormOptions o = MatNormOptions::fast();
  o.quotient_evals = 0;
  const auto b = matrix_norm(Q, MatrixOverSpace::scalar_times(Mat::Ones(1, 1), Vec::Unit(2, 0)), o);
  expect_contains(b, 1.0, 1e-9);
  EXPECT_LE(b.upper - b.lower, 1e-9);
}

TEST(QuotientNorm, RejectsNonSurjective) {
  const auto parent = POStructure::min(l1_space(2), P3);
  EXPECT_THROW(POStructure::quotient(parent, Mat::Ones(2, 2)), std::invalid_argument);
}

TEST(DualNorm, LevelOneIsDualBanachNorm) {
  const auto X = FiniteNormedSpace::lp(2, 3.0);
  const auto D = POStructure::dual(POStructure::min(X, P3));
  const Vec phi = rand_vec(80, 2);
  MatNormOptions o;
  o.cb_levels = 1;
  const auto b = matrix_norm(D, MatrixOverSpace::scalar_times(Mat::Ones(1, 1), phi), o);
  expect_contains(b, dual_norm(X, phi).upper, 1e-6);
}

TEST(DualNorm, RankOneContainsProduct) {
  const auto X = FiniteNormedSpace::lp(2, 3.0);
  const auto D = POStructure::dual(POStructure::min(X, P2));
  const Mat a = rand_mat(81, 2, 2);
  const Vec phi = rand_vec(82, 2);
  MatNormOptions o;
  o.cb_levels = 2;
  o.cb_evals = 100;
  const auto b = matrix_norm(D, MatrixOverSpace::scalar_times(a, phi), o);
  expect_contains(b, spectral(a) * dual_norm(X, phi).upper, 3e-2);
}

TEST(Axioms, MinLinfPasses) {
  AxiomOptions o;
  o.samples = 5;
  o.seed = 3;
  for (const auto& c : check_axioms(POStructure::min(linf_space(2), P3), o)) EXPECT_TRUE(c.pass) << c.id;
}

TEST(Axioms, ConcreteDiagonalPasses) {
  AxiomOptions o;
  o.samples = 5;
  o.seed = 4;
  const auto S = POStructure::concrete(linf_space(2), diagonal_images(2), P3);
  for (const auto& c : check_axioms(S, o)) EXPECT_TRUE(c.pass) << c.id;
}

TEST(Axioms, ThreeChecksPerSample) {
  AxiomOptions o;
  o.samples = 2;
  const auto checks = check_axioms(POStructure::min(l1_space(2), P2), o);
  EXPECT_EQ(checks.size(), 6u);
}
