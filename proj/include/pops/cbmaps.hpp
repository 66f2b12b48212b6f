#pragma once
// Amplification norms ||T^(n)|| of linear maps out of p-operator spaces.
// The cb-norm sup_n ||T^(n)|| is only estimated from below: lower bounds at
// each level come from searches over the unit ball of M_n(V).

#include "pops/postructure.hpp"

namespace pops {

/// T : V -> W, coefficient matrix dim W by dim V.
struct LinearMap {
  POStructure source, target;
  Mat coeffs;
  LinearMap(POStructure v, POStructure w, Mat t);
};

/// x -> sum_k x_k images[k] from V into B(l^p(N)), N = images[k].rows().
struct OperatorMap {
  POStructure source;
  std::vector<Mat> images;
  OperatorMap(POStructure v, std::vector<Mat> imgs);
};

struct CbOptions {
  std::uint64_t seed = 0;
  int starts = 3;       // random starts per level (besides the embedded lower level)
  int evals = 400;      // pattern-search budget per start
  MatNormOptions inner = MatNormOptions::fast();  // norms inside the search
  MatNormOptions outer;                           // certification of the best point
};

/// Lower: best ||T^(n) u|| / ||u|| found.  Upper: n^2 ||T|| (submultiplicative
/// bound from the row/column decomposition of u), or the decomposition bound
/// for operator maps; +inf when the source norm at level 1 is not X's norm.
/// Witness: the slices of the best u, stacked.
Bounds level_norm(const LinearMap& T, int n, const CbOptions& opts = {});
Bounds level_norm(const OperatorMap& T, int n, const CbOptions& opts = {});

struct CbEstimate {
  std::vector<Bounds> levels;  // levels[n-1] for n = 1..N
  bool monotone = true;        // lower bounds non-decreasing (within tol)
  double sup_lower = 0.0;      // running sup of the level lower bounds
  double upper = kInf;         // certified cb upper bound when known
};
CbEstimate cb_estimate(const LinearMap& T, int levels, const CbOptions& opts = {});
CbEstimate cb_estimate(const OperatorMap& T, int levels, const CbOptions& opts = {});

}  // namespace pops
