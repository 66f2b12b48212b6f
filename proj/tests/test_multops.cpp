#include "pops/multops.hpp"
#include "test_util.hpp"

using namespace pops;
using pops::testing::mat2;
using pops::testing::rand_mat;
using pops::testing::rand_vec;

namespace {

const PExponent P3(3.0);

MatrixOverSpace random_F(std::uint64_t seed, Eigen::Index n, Eigen::Index k) {
  Rng rng = make_rng(seed, 9);
  return random_matrix_over(rng, n, n, k);
}

// J^(n)(f) = I_n (x) diag(f)
Mat amplified_mult(Eigen::Index n, const Vec& f) { return kron(Mat::Identity(n, n), Mat(f.asDiagonal())); }

}  // namespace

TEST(MultRep, EmbedIsDiagonalAndUnital) {
  const MultRep rep(DiscreteMeasure(RealVec::Constant(3, 0.5)), P3);
  const Vec f = rand_vec(1, 3);
  EXPECT_EQ(rep.embed(f), Mat(f.asDiagonal()));
  EXPECT_EQ(rep.embed(Vec::Ones(3)), Mat::Identity(3, 3));
  EXPECT_NEAR(rep.conjugation()[0], std::pow(0.5, 1.0 / 3.0), 1e-15);
  EXPECT_THROW(rep.embed(Vec::Ones(2)), std::invalid_argument);
}

TEST(MultAmplified, LevelOneIsDiag) {
  const MultRep rep(DiscreteMeasure::counting(3), P3);
  const Vec f = rand_vec(2, 3);
  const auto F = MatrixOverSpace::scalar_times(Mat::Ones(1, 1), f);
  EXPECT_EQ(mult_amplified(F, rep), Mat(f.asDiagonal()));
}

TEST(MultAmplified, ConstantInAtomIsKronecker) {
  const MultRep rep(DiscreteMeasure::counting(2), P3);
  const Mat a = rand_mat(3, 2, 2);
  const auto F = MatrixOverSpace::scalar_times(a, Vec::Ones(2));
  EXPECT_EQ(mult_amplified(F, rep), kron(a, Mat::Identity(2, 2)));
}

TEST(MultAmplified, NormIsMaxOverAtomBlocks) {
  const MultRep rep(DiscreteMeasure::counting(2), P3);
  for (std::uint64_t s = 0; s < 3; ++s) {
    const auto F = random_F(10 + s, 2, 2);
    Bounds blocks;
    blocks.lower = 0.0;
    blocks.upper = 0.0;
    for (Eigen::Index a = 0; a < 2; ++a) {
      const auto b = opnorm_bounds(atom_block(F, a), P3);
      blocks.lower = std::max(blocks.lower, b.lower);
      blocks.upper = std::max(blocks.upper, b.upper);
    }
    EXPECT_TRUE(opnorm_bounds(mult_amplified(F, rep), P3).overlaps(blocks, 1e-9));
  }
}

TEST(LinftyIsometry, BracketsOverlap) {
  for (const auto& c : verify_linfty_isometry(2, 2, P3, 5, 7)) EXPECT_TRUE(c.overlap) << c.sample;
  for (const auto& c : verify_linfty_isometry(2, 1, P3, 3, 8)) EXPECT_TRUE(c.overlap) << c.sample;
}

TEST(Expectation, KillsOffDiagonalAtoms) {
  const MultRep rep(DiscreteMeasure::counting(2), P3);
  EXPECT_EQ(expectation(mat2(1, 2, 3, 4), rep, 1), mat2(1, 0, 0, 4));
  EXPECT_THROW(expectation(Mat::Zero(3, 3), rep, 1), std::invalid_argument);
}

TEST(Expectation, IdempotentUnitalModuleMap) {
  for (Eigen::Index k = 1; k <= 3; ++k)
    for (Eigen::Index n = 1; n <= 2; ++n) {
      const MultRep rep(DiscreteMeasure::counting(k), P3);
      const Mat T = rand_mat(20 + 3 * k + n, n * k, n * k);
      const Mat E = expectation(T, rep, n);
      EXPECT_EQ(expectation(E, rep, n), E);
      EXPECT_EQ(expectation(Mat::Identity(n * k, n * k), rep, n), Mat::Identity(n * k, n * k));
      const Mat Jf = amplified_mult(n, rand_vec(30 + k, k)), Jg = amplified_mult(n, rand_vec(40 + k, k));
      EXPECT_LE((expectation(Jf * T * Jg, rep, n) - Jf * E * Jg).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Expectation, ContractiveAtLevelTwo) {
  const PExponent p(2.5);
  const MultRep rep(DiscreteMeasure::counting(2), p);
  for (std::uint64_t s = 0; s < 3; ++s) {
    const Mat T = rand_mat(50 + s, 4, 4);
    EXPECT_LE(opnorm_bounds(expectation(T, rep, 2), p).lower, opnorm_bounds(T, p).upper);
  }
}

TEST(Commutant, DimensionIsK) {
  for (Eigen::Index k = 1; k <= 5; ++k) {
    const auto r = commutant_check(k, P3, 5, 60 + k);
    EXPECT_EQ(r.nullity, k);
    EXPECT_TRUE(r.solutions_diagonal);
    EXPECT_TRUE(r.diagonal_commutes);
    EXPECT_TRUE(r.off_diagonal_detected);
  }
}

TEST(FiniteEmbed, FullPartitionIsIsometry) {
  const DiscreteMeasure mu(RealVec::LinSpaced(4, 0.5, 2.0));
  const std::vector<Vec> F = {rand_vec(70, 4), rand_vec(71, 4)};
  const auto r = finite_embed(F, mu, 4, P3);
  EXPECT_LE(r.worst, 1e-12);
  EXPECT_LE(r.norm.lower, 1.0 + 1e-9);
  EXPECT_GE(r.norm.upper, 1.0 - 1e-9);
}

TEST(FiniteEmbed, ConstantsAreKept) {
  const DiscreteMeasure mu(RealVec::LinSpaced(5, 0.2, 1.0));
  const auto r = finite_embed({Vec::Constant(5, Complex(2.0, -1.0))}, mu, 2, P3);
  EXPECT_LE(r.worst, 1e-12);
  EXPECT_LE(r.norm.lower, 1.0 + 1e-9);
}

TEST(FiniteEmbed, RefinementShrinksDistortion) {
  const DiscreteMeasure mu(RealVec::LinSpaced(4, 0.5, 1.5));
  const std::vector<Vec> F = {rand_vec(80, 4), rand_vec(81, 4), rand_vec(82, 4)};
  const auto coarse = finite_embed(F, mu, {{0, 1, 2, 3}}, P3);
  const auto mid = finite_embed(F, mu, {{0, 1}, {2, 3}}, P3);
  const auto fine = finite_embed(F, mu, {{0}, {1}, {2, 3}}, P3);
  for (std::size_t i = 0; i < F.size(); ++i) {
    EXPECT_GE(coarse.distortion[i], mid.distortion[i] - 1e-12);
    EXPECT_GE(mid.distortion[i], fine.distortion[i] - 1e-12);
  }
  EXPECT_LE(mid.norm.lower, 1.0 + 1e-9);
}

TEST(FiniteEmbed, Errors) {
  const DiscreteMeasure mu = DiscreteMeasure::counting(3);
  EXPECT_THROW(finite_embed({}, mu, {{0, 1}, {}}, P3), std::invalid_argument);
  EXPECT_THROW(finite_embed({}, mu, {{0, 1}}, P3), std::invalid_argument);
  EXPECT_THROW(finite_embed({}, mu, 4, P3), std::invalid_argument);
}
