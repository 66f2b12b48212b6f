#pragma once
// Dense complex linear algebra primitives: weighted l^p norms, closed-form
// operator norms, block assembly.

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace pops {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RealVec = Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Exponent p in the open interval (1, inf) together with its conjugate.
class PExponent {
 public:
  explicit PExponent(double p);

  double value() const { return p_; }
  double conjugate() const { return q_; }
  PExponent dual() const { return PExponent(q_); }

  friend bool operator==(const PExponent&, const PExponent&) = default;

 private:
  double p_;
  double q_;
};

/// Closed-form endpoints for operator norms.
enum class ClosedP { One, Two, Inf };

/// (sum_i w_i |v_i|^p)^(1/p) for p in [1, inf]; p = inf ignores weights.
double lp_norm(const Vec& v, double p, std::span<const double> weights = {});
inline double lp_norm(const Vec& v, const PExponent& p, std::span<const double> weights = {}) {
  return lp_norm(v, p.value(), weights);
}

/// Operator norm of A on l^1, l^2 or l^inf.  The l^2 norm is the square
/// root of the top eigenvalue of A*A.
double opnorm_closed(const Mat& A, ClosedP p);

/// Bilinear pairing phi(x) = sum_i phi_i x_i.
inline Complex pairing(const Vec& phi, const Vec& x) { return phi.cwiseProduct(x).sum(); }

/// Block-diagonal u (+) v.
Mat direct_sum(const Mat& A, const Mat& B);

/// Kronecker product with A indexing the outer blocks.
Mat kron(const Mat& A, const Mat& B);

/// Entrywise modulus.
Eigen::MatrixXd abs_matrix(const Mat& A);

/// Phi_p(y)_i = |y_i|^(p-1) * sign(y_i): the duality map of l^p (unnormalised).
Vec duality_map(const Vec& y, double p);

/// Diagonal w^(1/p); conjugating by it turns L^p(w) into plain l^p.
RealVec weight_root(std::span<const double> weights, double p);

/// Throws std::invalid_argument when any weight is not strictly positive.
void require_positive_weights(std::span<const double> weights);

/// Matrix of eps-rank tolerance null space (columns orthonormal).
Mat null_space(const Mat& A, double rel_tol = 1e-10);

}  // namespace pops
