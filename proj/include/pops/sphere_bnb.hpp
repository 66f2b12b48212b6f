#pragma once
// Certified maximisation over a product of complex unit spheres.
//
// The objective h(x_1, ..., x_F) must be absolutely homogeneous and
// subadditive in every factor separately (a "multi-seminorm", e.g.
// ||A x||, ||sum_k phi_k U_k||, |phi^T C psi|).  Then for points x, c on the
// spheres
//
//     h(x) <= h(c) + S * sum_f ||x_f - c_f||,     S = sup h,
//
// so every parameter cell C with centre c and covering radii eta_f obeys
// sup_C h <= h(c) + G * sum_f eta_f for any G >= S.  Cells are boxes in a
// (face, magnitude, phase) parametrisation:
//   face k   : |y_k| is maximal; the cube point r' has r'_k = 1, 0 <= r'_j <= 1
//   magnitude: y = r' / ||r'||_q (no normalisation for q = inf)
//   phase    : y_j = |y_j| e^{i theta_j}, theta_k = 0 (h is phase invariant)
// Covering radius of a cell with half-widths h_j (magnitude) and t_j (phase):
//   eta <= 2 ||h||_q / max(1, ||c'||_q) + max_j t_j      (q < inf)
//   eta <= max_j h_j + max_j t_j                           (q = inf)
// using ||a/|a| - b/|b||| <= 2||a-b|| / max(|a|,|b|), |r'| >= 1 on a face,
// and |r e^{i a} - s e^{i b}| <= |r - s| + s |a - b|.
// For q = inf only the torus |y_j| = 1 is searched: a function that is convex
// in each coordinate attains its sup over the polydisc there.
// Weighted spheres are reduced to unweighted ones through y = w^{1/q} x.

#include "pops/core.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace pops::bnb {

struct SphereFactor {
  Eigen::Index dim = 1;
  double q = 2.0;    // in [1, inf]
  RealVec weights;   // empty: unweighted
};

struct Options {
  double rel_tol = 1e-6;
  double abs_tol = 1e-14;
  int max_evals = 20000;
  int mag_splits = 2;    // initial subdivisions per magnitude coordinate
  int phase_splits = 4;  // initial subdivisions per phase coordinate
};

struct Result {
  double lower = 0.0;
  double upper = kInf;
  std::vector<Vec> witness;
  int evals = 0;
  bool converged = false;
};

/// Returns (certified lower, certified upper) of h at a point.
using Objective = std::function<std::pair<double, double>(const std::vector<Vec>&)>;

/// `a_priori_upper` must be a certified upper bound of sup h.
Result maximize(const std::vector<SphereFactor>& factors, const Objective& h,
                double a_priori_upper, const Options& opts);

/// Number of real parameters of the cell parametrisation.
int parameter_count(const std::vector<SphereFactor>& factors);

/// Maps a cube-face point and phases to the unit sphere of the factor.
Vec sphere_point(const SphereFactor& f, Eigen::Index face, const RealVec& mags,
                 const RealVec& phases);

/// Covering radius of a box cell (see header comment).
double covering_radius(const SphereFactor& f, const RealVec& mag_center, const RealVec& mag_half,
                       const RealVec& phase_half, Eigen::Index face);

}  // namespace pops::bnb
