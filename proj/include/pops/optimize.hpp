#pragma once
// Small derivative-free local optimisers used by the bracket searches.  All
// of them are heuristics: any value they return is re-evaluated by the
// caller through a certified path before it enters a Bounds.

#include "pops/core.hpp"
#include "pops/random.hpp"

#include <functional>
#include <optional>

namespace pops::opt {

struct SearchOptions {
  double initial_step = 0.5;
  double min_step = 1e-10;
  int max_evals = 4000;
  int random_dirs = -1;  // -1: same as dimension
};

struct SearchResult {
  RealVec x;
  double value = 0.0;
  int evals = 0;
};

/// Minimises f by an adaptive pattern search mixing coordinate and random
/// directions.  Converges on convex (including polyhedral) objectives in low
/// dimension; on nonconvex ones it is a local hill climber.
SearchResult pattern_search(const std::function<double(const RealVec&)>& f, RealVec x0,
                            const SearchOptions& opts, Rng& rng);

/// Real parameter vector <-> complex vector (re, im interleaved blocks).
RealVec pack(const Vec& z);
Vec unpack(const RealVec& x);
RealVec pack(const Mat& z);
Mat unpack(const RealVec& x, Eigen::Index rows, Eigen::Index cols);

/// min over t of a norm-like function of (z0 + D t).  `norm` must return a
/// certified upper bound of the norm of its argument.  Returns the best
/// value found (itself an upper bound of the infimum) and the minimiser.
struct AffineMinResult {
  double value = kInf;
  Vec t;
};
AffineMinResult affine_min(const std::function<double(const Vec&)>& norm, const Vec& z0,
                           const Mat& D, Rng& rng, int max_evals = 6000,
                           const std::optional<Vec>& t_init = std::nullopt);

/// Specialisation for weighted l^q norms (q in [1, inf)): iteratively
/// reweighted least squares followed by a pattern-search polish.
AffineMinResult affine_min_lq(const Vec& z0, const Mat& D, double q, const RealVec& weights,
                              Rng& rng);

/// min over t of max_i |a_i + (B t)_i| by Lawson's iteration (weighted least
/// squares with multiplicative weight updates).  Stops once the weighted
/// residual, a lower bound for the optimum, is within rel_tol of the best max.
AffineMinResult minimax_lawson(const Vec& a, const Mat& B, int max_iter = 4000,
                               double rel_tol = 1e-10);

}  // namespace pops::opt
