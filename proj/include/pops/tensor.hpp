#pragma once
// Injective and projective tensor norms on X (x) Y.  An element is its
// coefficient matrix c (dim X by dim Y) in the coordinate bases:
//   t = sum_ij c_ij e_i (x) e_j,   <t, T> = sum_ij c_ij T_ij  for T in X* (x) Y*.

#include "pops/bounds.hpp"
#include "pops/cbmaps.hpp"
#include "pops/spaces.hpp"

#include <cstdint>

namespace pops {

struct TensorElem {
  FiniteNormedSpace X, Y;
  Mat c;
  TensorElem(FiniteNormedSpace x, FiniteNormedSpace y, Mat coeffs);
  static TensorElem elementary(const FiniteNormedSpace& x_space, const Vec& x,
                               const FiniteNormedSpace& y_space, const Vec& y);
};

/// sup over unit functionals phi, psi of |(phi (x) psi)(t)|.  Witness: the
/// maximising phi stacked over psi.
Bounds inj_norm(const TensorElem& t, const SupOptions& opts = {});

struct ProjOptions {
  std::uint64_t seed = 0;
  int max_rounds = 8;       // column-generation rounds
  double rel_tol = 1e-5;    // stop when the bracket is this tight
  int refine_evals = 400;   // local search on the dual tensor, per round
  int atom_starts = 8;      // random starts for new atoms, per round
  int polish_evals = 3000;  // final local search on the decomposition
  int certify_evals = 200000;  // sphere search budget for the final certificate
  SupOptions sup;           // for the injective norms of dual witnesses
};

/// inf over decompositions t = sum_k x_k (x) y_k of sum_k ||x_k|| ||y_k||.
/// Upper: best decomposition found; lower: |<t, T>| / ||T||_inj(X* (x) Y*)
/// for the dual tensor T of that decomposition.  Witness: vec of T.
Bounds proj_norm(const TensorElem& t, const ProjOptions& opts = {});

/// p-projective norm of t in V (x) W for structures V, W on t.X, t.Y.
/// Upper: proj_norm upper.  Lower: |<t, T>| / s for the dual witness T of
/// proj_norm read as a map V -> W*, where s is the largest amplification
/// norm of T over levels 1..levels: certified at level 1, best found above
/// (method tag "cb-levels<=N/searched").
Bounds pproj_norm_level1(const TensorElem& t, const POStructure& V, const POStructure& W, int levels = 3,
                         const ProjOptions& popts = {}, const CbOptions& cb = {});

/// N(l^p(m)) = l^{p'}(m) (x)^gamma l^p(m); t given as an m by m matrix.
struct NuclearSpace {
  Eigen::Index m;
  PExponent p;
  NuclearSpace(Eigen::Index m_, PExponent p_);
  FiniteNormedSpace left() const;   // l^{p'}(m)
  FiniteNormedSpace right() const;  // l^p(m)
};
Bounds nuclear_norm(const NuclearSpace& N, const Mat& t, const ProjOptions& opts = {});

}  // namespace pops
