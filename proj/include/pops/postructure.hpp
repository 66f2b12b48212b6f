#pragma once
// p-operator space structures on a finite-dimensional space X and their
// matrix norms.
//
// An element u of M_{r,c}(X) is stored through its coefficient slices: with
// d = dim X, u_ij = sum_k (U_k)_ij e_k for r by c scalar matrices U_1..U_d.
// Then [phi(u_ij)] = sum_k phi_k U_k and, for a map pi: X -> B(l^p(m)),
// [pi(u_ij)] = sum_k U_k (x) pi(e_k) (block (i, j) is pi(u_ij)).

#include "pops/bounds.hpp"
#include "pops/opnorm.hpp"
#include "pops/random.hpp"
#include "pops/spaces.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace pops {

class MatrixOverSpace {
 public:
  MatrixOverSpace(Eigen::Index rows, Eigen::Index cols, Eigen::Index dim);
  explicit MatrixOverSpace(std::vector<Mat> slices);
  /// entries row-major, each of length dim
  static MatrixOverSpace from_entries(Eigen::Index rows, Eigen::Index cols,
                                      const std::vector<Vec>& entries);
  /// alpha (x) v: every entry alpha_ij v
  static MatrixOverSpace scalar_times(const Mat& alpha, const Vec& v);

  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }
  Eigen::Index dim() const { return static_cast<Eigen::Index>(slices_.size()); }
  const std::vector<Mat>& slices() const { return slices_; }

  Vec entry(Eigen::Index i, Eigen::Index j) const;
  void set_entry(Eigen::Index i, Eigen::Index j, const Vec& v);

  /// [phi(u_ij)]
  Mat apply(const Vec& phi) const;
  /// [pi(u_ij)] for pi(e_k) = images[k]
  Mat amplify(const std::vector<Mat>& images) const;
  /// u (+) v, block diagonal
  MatrixOverSpace direct_sum(const MatrixOverSpace& v) const;
  /// alpha u beta
  MatrixOverSpace compress(const Mat& alpha, const Mat& beta) const;
  /// [T u_ij] for a linear map T given as a matrix (new dim = T.rows())
  MatrixOverSpace mapped(const Mat& T) const;
  MatrixOverSpace operator+(const MatrixOverSpace& v) const;
  MatrixOverSpace operator*(Complex s) const;
  bool is_zero() const;

 private:
  Eigen::Index rows_, cols_;
  std::vector<Mat> slices_;
};

enum class StructureKind { Min, Concrete, MaxLp, Quotient, Dual };

class POStructure {
 public:
  static POStructure min(const FiniteNormedSpace& X, PExponent p);
  /// X realised inside B(l^p(N)) by J(e_k) = images[k]; J must be injective.
  static POStructure concrete(const FiniteNormedSpace& X, std::vector<Mat> images, PExponent p);
  /// max_{L^p}: sup over contractions X -> B(l^p(m)), m <= cap_m
  /// (0: rows * dim X at evaluation time).
  static POStructure maxlp(const FiniteNormedSpace& X, PExponent p, int cap_m = 0);
  /// parent / ker q, coordinates q(x); q must be surjective.
  static POStructure quotient(const POStructure& parent, const Mat& q);
  /// Same, with the quotient Banach space given explicitly (its norm must be
  /// the quotient norm; used when the parent's coset problem is not solvable).
  static POStructure quotient(const POStructure& parent, const Mat& q, const FiniteNormedSpace& Z);
  /// M_n(X*) = CB(X, B(l^p(n))).
  static POStructure dual(const POStructure& parent);

  StructureKind kind() const;
  const FiniteNormedSpace& space() const;
  PExponent p() const;
  std::string describe() const;

  const std::vector<Mat>& images() const;  // Concrete
  int cap_m() const;                       // MaxLp
  const POStructure& parent() const;       // Quotient, Dual
  const Mat& quotient_map() const;         // Quotient

 private:
  struct Node;
  explicit POStructure(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct MatNormOptions {
  std::uint64_t seed = 0;
  OpnormConfig op;       // scalar operator norms
  SupOptions sup;        // sups over the balls of X and X*
  int maxlp_starts = 4;  // random starts per representation dimension
  int maxlp_evals = 400; // pattern-search budget per start
  int upper_evals = 300; // factorisation-bound search
  int quotient_evals = 300;
  int cb_levels = 3;     // dual structures: amplification levels searched
  int cb_starts = 2;
  int cb_evals = 300;

  /// Settings for norms evaluated inside other searches.
  static MatNormOptions fast(std::uint64_t seed = 0);
};

Bounds matrix_norm(const POStructure& S, const MatrixOverSpace& u, const MatNormOptions& opts = {});

/// sup over phi in the unit ball of X* of ||[phi(u_ij)]||_{B(l^p)}.
Bounds min_matrix_norm(const FiniteNormedSpace& X, const MatrixOverSpace& u, PExponent p,
                       const MatNormOptions& opts = {});
/// ||[J(u_ij)]|| in B(l^p(n N)).
Bounds concrete_matrix_norm(const std::vector<Mat>& images, const MatrixOverSpace& u, PExponent p,
                            const MatNormOptions& opts = {});
/// Lower: contractive representations found by search (m <= cap); upper:
/// decomposition and diagonal factorisation bounds.
Bounds maxlp_matrix_norm(const FiniteNormedSpace& X, const MatrixOverSpace& u, PExponent p,
                         int cap_m = 0, const MatNormOptions& opts = {});
/// cb-norm bracket of x -> [u_ij(x)] on the parent structure.
Bounds dual_matrix_norm(const POStructure& parent, const MatrixOverSpace& u,
                        const MatNormOptions& opts = {});
/// inf over preimages under q of the parent matrix norm.
Bounds quotient_matrix_norm(const POStructure& parent, const Mat& q, const MatrixOverSpace& u,
                            const MatNormOptions& opts = {});
Bounds quotient_matrix_norm(const POStructure& parent, const Mat& q, const FiniteNormedSpace& Z,
                            const MatrixOverSpace& u, const MatNormOptions& opts = {});
/// Upper bound only (skips lower-bound searches where they are separate).
double matrix_norm_upper(const POStructure& S, const MatrixOverSpace& u, const MatNormOptions& opts = {});

/// Upper bounds valid in every p-operator space structure whose level-1
/// norm is that of X: inf over u = sum_r W_r (x) y_r of sum_r ||W_r|| ||y_r||,
/// and inf over u = alpha diag(x_1..x_r) beta of ||alpha|| max ||x_k|| ||beta||.
double decomposition_upper(const FiniteNormedSpace& X, const MatrixOverSpace& u, PExponent p,
                           int search_evals, std::uint64_t seed, const OpnormConfig& op = {});
double factorization_upper(const FiniteNormedSpace& X, const MatrixOverSpace& u, PExponent p,
                           int search_evals, std::uint64_t seed);

/// One axiom check at bracket level.
struct AxiomCheck {
  std::string id;
  bool pass = true;
  Bounds lhs, rhs;
  double tol = 0.0;
};
struct AxiomOptions {
  int samples = 50;
  std::uint64_t seed = 0;
  Eigen::Index max_level = 2;  // u in M_n, v in M_m with n, m <= max_level
  double tol = 1e-6;
  MatNormOptions norms;
};
/// (D_inf): lower(u (+) v) <= max(upper u, upper v) + tol and
/// max(lower u, lower v) <= upper(u (+) v) + tol;
/// (M_p): lower(alpha u beta) <= ||alpha|| upper(u) ||beta|| + tol.
std::vector<AxiomCheck> check_axioms(const POStructure& S, const AxiomOptions& opts = {});

/// Random element of M_{r,c}(X) with Gaussian coefficients.
MatrixOverSpace random_matrix_over(Rng& rng, Eigen::Index rows, Eigen::Index cols, Eigen::Index dim);

}  // namespace pops
