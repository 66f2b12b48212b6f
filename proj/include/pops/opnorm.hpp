#pragma once
// Two-sided bounds for the operator norm ||A||_{B(l^p)}, 1 < p < inf.
//
// Lower bounds come from a multi-start fixed-point iteration (Boyd's power
// method for p-norms); upper bounds from Riesz-Thorin interpolation, a
// weighted Schur test on |A|, and a certified branch-and-bound over the unit
// sphere for small column counts.

#include "pops/bounds.hpp"
#include "pops/core.hpp"

#include <cstdint>
#include <span>

namespace pops {

struct OpnormConfig {
  int starts = 32;
  int max_iter = 500;
  double stall_tol = 1e-12;
  std::uint64_t seed = 0;
  bool split_blocks = true;  // reduce to connected blocks (direct sums)
  int bnb_max_dim = 3;       // sphere search only when cols <= this
  int bnb_max_evals = 20000;
  double bnb_rel_tol = 1e-7;

  /// Cheap settings for inner loops of larger searches.
  static OpnormConfig fast(std::uint64_t seed = 0) {
    OpnormConfig c;
    c.starts = 4;
    c.max_iter = 200;
    c.seed = seed;
    c.bnb_max_dim = 0;
    return c;
  }
};

/// Best ||Ax||_p / ||x||_p over the iterates of the fixed-point map
/// x <- Phi_{p'}(A^* Phi_p(Ax)) from `starts` starting points.  Upper is +inf.
Bounds boyd_lower(const Mat& A, const PExponent& p, int starts, std::uint64_t seed,
                  int max_iter = 500, double stall_tol = 1e-12);

/// ||A||_1^{1/p} * ||A||_inf^{1/p'}.
double interp_upper(const Mat& A, const PExponent& p);

/// min of Riesz-Thorin bounds through (1, inf), (1, 2) or (2, inf), and the
/// weighted Schur test on |A|.
double analytic_upper(const Mat& A, const PExponent& p);

/// Schur test: for entrywise nonnegative K and positive x,
///   ||K||_p <= max_j [ (K^T (Kx)^{p-1})_j / x_j^{p-1} ]^{1/p}.
double schur_upper(const Eigen::MatrixXd& K, const PExponent& p, const RealVec& x);

/// Brute-force oracle: exhaustive net of the unit l^p sphere (one phase
/// fixed), mesh `mesh` in magnitude and phase.  Requires 2 * cols <= 6.
Bounds grid_oracle(const Mat& A, const PExponent& p, double mesh);

/// Certified bracket for ||A||_{B(l^p)}.  Rectangular A is allowed.
Bounds opnorm_bounds(const Mat& A, const PExponent& p, const OpnormConfig& cfg = {});

/// Norm of A : L^p(w_dom) -> L^p(w_cod), via conjugation by the weight roots.
Bounds opnorm_weighted(const Mat& A, const PExponent& p, std::span<const double> w_dom,
                       std::span<const double> w_cod, const OpnormConfig& cfg = {});

/// Row/column index sets of the connected blocks of A's nonzero pattern.
struct Block {
  std::vector<Eigen::Index> rows, cols;
};
std::vector<Block> connected_blocks(const Mat& A);

}  // namespace pops
