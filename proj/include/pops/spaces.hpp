#pragma once
// Finite-dimensional complex normed spaces.
//
// Functionals act through the bilinear pairing phi(x) = sum_i phi_i x_i, so
// the dual of a space of dimension d is again C^d.  Every norm evaluation
// returns a certified Bounds.  Witness conventions:
//   norm(X, x).witness       functional phi with ||phi||_{X*} <= 1, |phi(x)| >= lower
//   dual_norm(X, phi).witness vector x with ||x||_X <= 1,        |phi(x)| >= lower

#include "pops/bounds.hpp"
#include "pops/core.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

namespace pops {

enum class SpaceKind { WeightedLp, NormingSet, Quotient, Subspace, Dual, Projective };

class FiniteNormedSpace {
 public:
  /// (sum_i w_i |x_i|^p)^{1/p}, p in [1, inf]; for p = inf the weights are ignored.
  static FiniteNormedSpace weighted_lp(double p, RealVec weights);
  static FiniteNormedSpace lp(Eigen::Index dim, double p);
  /// max_j |omega_j(x)| over the rows of `omega`; rows must span the dual.
  static FiniteNormedSpace norming_set(Mat omega);
  /// X / span(kernel columns).  Coordinates are those of the orthogonal
  /// complement of the kernel (an orthonormal basis of it, see lift()).
  static FiniteNormedSpace quotient(const FiniteNormedSpace& parent, const Mat& kernel);
  /// Quotient by a surjection q (rows = quotient dimension).  Coordinates are q(x).
  static FiniteNormedSpace quotient_by_map(const FiniteNormedSpace& parent, const Mat& q);
  /// span(basis columns) with the restricted norm; coordinates in that basis.
  static FiniteNormedSpace subspace(const FiniteNormedSpace& parent, const Mat& basis);
  static FiniteNormedSpace dual(const FiniteNormedSpace& parent);
  /// X (x)^gamma Y; coordinates vec(c) (column-major, c is dim X by dim Y).
  /// Norms go through proj_norm / inj_norm; sups over its balls are sampled.
  static FiniteNormedSpace projective(const FiniteNormedSpace& x, const FiniteNormedSpace& y);

  Eigen::Index dim() const;
  SpaceKind kind() const;
  std::string describe() const;

  // kind-specific data; each throws std::logic_error on the wrong kind
  double p() const;
  const RealVec& weights() const;
  const Mat& functionals() const;
  const FiniteNormedSpace& parent() const;
  const Mat& quotient_map() const;  // Q : parent -> this
  const Mat& lift() const;          // section of Q (pseudo-inverse)
  const Mat& kernel() const;        // orthonormal basis of ker Q
  const Mat& basis() const;         // subspace basis
  const FiniteNormedSpace& left() const;   // projective: X
  const FiniteNormedSpace& right() const;  // projective: Y

 private:
  struct Node;
  explicit FiniteNormedSpace(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct DiscreteMeasure {
  RealVec weights;
  explicit DiscreteMeasure(RealVec w);
  Eigen::Index atoms() const { return weights.size(); }
  static DiscreteMeasure counting(Eigen::Index k) { return DiscreteMeasure(RealVec::Ones(k)); }
};

FiniteNormedSpace l1_space(Eigen::Index k);
FiniteNormedSpace linf_space(Eigen::Index k);
FiniteNormedSpace lp_space(const DiscreteMeasure& mu, double p);

struct SpaceOptions {
  std::uint64_t seed = 0;
  int search_evals = 6000;
};

/// ||x||_X.  For quotient spaces x may also be given as a representative in
/// the parent (length = parent dimension).
Bounds norm(const FiniteNormedSpace& X, const Vec& x, const SpaceOptions& opts = {});

/// ||phi||_{X*} = sup_{||x|| <= 1} |phi(x)|.
Bounds dual_norm(const FiniteNormedSpace& X, const Vec& phi, const SpaceOptions& opts = {});

/// Lower bound for ||phi||_{X*} by direct search over the unit ball of X,
/// independent of the closed forms used by dual_norm.
Bounds dual_norm_search(const FiniteNormedSpace& X, const Vec& phi, int starts,
                        std::uint64_t seed);

/// Functional of certified dual norm <= 1 with phi(x) real and close to ||x||.
Vec norming_functional(const FiniteNormedSpace& X, const Vec& x, const SpaceOptions& opts = {});

/// Finite set (rows) whose absolute convex hull is the unit ball of X*, when known.
std::optional<Mat> finite_norming_set(const FiniteNormedSpace& X);

/// Finite set (rows) whose absolute convex hull is the unit ball of X, when known.
std::optional<Mat> finite_ball_generators(const FiniteNormedSpace& X);

/// Functionals (rows) each of certified dual norm <= 1.  Contains the
/// canonical norming set when one is known, then fills up to `count`.
Mat dual_ball_sample(const FiniteNormedSpace& X, int count, std::uint64_t seed);

/// Vectors (rows) each of certified norm <= 1.
Mat ball_sample(const FiniteNormedSpace& X, int count, std::uint64_t seed);

/// The norm of X as (sum_i w_i |x_i|^q)^{1/q} with q in [1, inf] (weights
/// all one when q = inf), when it has that form: weighted l^p spaces and
/// duals of them.
struct LpForm {
  double q;
  RealVec w;
};
std::optional<LpForm> weighted_lp_form(const FiniteNormedSpace& X);

/// (lower, upper) of an absolutely homogeneous, subadditive function.
using Seminorm = std::function<std::pair<double, double>(const Vec&)>;

struct SupOptions {
  std::uint64_t seed = 0;
  int samples = 24;
  int bnb_max_dim = 3;
  int bnb_max_evals = 20000;
  double bnb_rel_tol = 1e-4;
  int local_evals = 400;
};

/// sup of h over the unit ball of X* (resp. of X).  Witness: the maximiser.
Bounds sup_dual_ball(const FiniteNormedSpace& X, const Seminorm& h, const SupOptions& opts = {});
Bounds sup_ball(const FiniteNormedSpace& X, const Seminorm& h, const SupOptions& opts = {});

}  // namespace pops
