#pragma once
// Multiplication representations of l^inf(k) on L^p(mu) for a discrete
// measure mu with k atoms.
//
// Conjugating by diag(mu^{1/p}) identifies L^p(mu) with l^p(k) and leaves
// multiplication operators diagonal, so J(f) = diag(f).  At level n the
// space l^p(n) (x) l^p(k) is ordered as i * k + atom, matching
// MatrixOverSpace::amplify.

#include "pops/postructure.hpp"

#include <vector>

namespace pops {

class MultRep {
 public:
  MultRep(DiscreteMeasure mu, PExponent p);
  Eigen::Index atoms() const { return mu_.atoms(); }
  const DiscreteMeasure& measure() const { return mu_; }
  PExponent p() const { return p_; }
  /// mu^{1/p}: L^p(mu) -> l^p(k) is multiplication by this vector
  RealVec conjugation() const;
  Mat embed(const Vec& f) const;
  std::vector<Mat> images() const;  // J(e_1), ..., J(e_k)
  /// l^inf(k) with the structure induced by J
  POStructure structure() const;

 private:
  DiscreteMeasure mu_;
  PExponent p_;
};

/// [J(f_ij)], nk by nk.
Mat mult_amplified(const MatrixOverSpace& F, const MultRep& rep);
/// The n by n block F(a) = [f_ij(a)] at atom a.
Mat atom_block(const MatrixOverSpace& F, Eigen::Index atom);

struct IsometryCheck {
  int sample = 0;
  Bounds min_norm, rep_norm;
  bool overlap = false;
};
/// Random F in M_n(l^inf(k)): min_matrix_norm(F) against ||[J(f_ij)]||.
std::vector<IsometryCheck> verify_linfty_isometry(Eigen::Index n, Eigen::Index k, PExponent p, int samples,
                                                  std::uint64_t seed, double tol = 1e-6);

/// Average of (I (x) J(u)) T (I (x) J(u)^*) over the k-torus: entries
/// coupling different atoms are set to zero.
Mat expectation(const Mat& T, const MultRep& rep, Eigen::Index n);

struct CommutantReport {
  Eigen::Index k = 0;
  Eigen::Index nullity = 0;            // dim {T : T J(e_i) = J(e_i) T for all i}
  bool solutions_diagonal = false;     // every solution is diagonal
  bool diagonal_commutes = true;       // random diagonal T commute
  bool off_diagonal_detected = true;   // random non-diagonal T fail to commute
  double max_residual = 0.0;
};
CommutantReport commutant_check(Eigen::Index k, PExponent p, int trials, std::uint64_t seed);

struct EmbedReport {
  Mat V;                          // m by k, from L^p(mu) to l^p(m)
  Bounds norm;                    // ||V||, should be <= 1
  std::vector<double> distortion; // 1 - ||Vf|| / ||f|| per input
  double worst = 0.0;
};
/// Conditional expectation onto the cells of `partition`, rescaled by
/// mu(cell)^{1/p}: (Vf)_c = mu(c)^{1/p - 1} sum_{a in c} mu_a f_a.
EmbedReport finite_embed(const std::vector<Vec>& F, const DiscreteMeasure& mu,
                         const std::vector<std::vector<Eigen::Index>>& partition, PExponent p);
/// Same with m cells of consecutive atoms (sizes differ by at most one).
EmbedReport finite_embed(const std::vector<Vec>& F, const DiscreteMeasure& mu, Eigen::Index m, PExponent p);

}  // namespace pops
