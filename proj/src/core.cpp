#include "pops/core.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace pops {

PExponent::PExponent(double p) : p_(p), q_(0.0) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::invalid_argument("p must lie in (1, inf), got " + std::to_string(p));
  q_ = p / (p - 1.0);
}

void require_positive_weights(std::span<const double> weights) {
  for (double w : weights)
    if (!(w > 0.0) || !std::isfinite(w))
      throw std::invalid_argument("weights must be finite and strictly positive");
}

double lp_norm(const Vec& v, double p, std::span<const double> weights) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  if (!weights.empty()) {
    if (weights.size() != static_cast<std::size_t>(v.size()))
      throw std::invalid_argument("lp_norm: weight dimension mismatch");
    require_positive_weights(weights);
  }
  if (std::isinf(p)) return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();

  // scale by the max modulus so large/small entries do not overflow
  const double scale = v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    acc += w * std::pow(std::abs(v[i]) / scale, p);
  }
  return scale * std::pow(acc, 1.0 / p);
}

double opnorm_closed(const Mat& A, ClosedP p) {
  if (A.size() == 0) return 0.0;
  switch (p) {
    case ClosedP::One:
      return A.cwiseAbs().colwise().sum().maxCoeff();
    case ClosedP::Inf:
      return A.cwiseAbs().rowwise().sum().maxCoeff();
    case ClosedP::Two: {
      const Mat G = A.rows() >= A.cols() ? Mat(A.adjoint() * A) : Mat(A * A.adjoint());
      Eigen::SelfAdjointEigenSolver<Mat> es(G, Eigen::EigenvaluesOnly);
      return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
    }
  }
  return 0.0;
}

Mat direct_sum(const Mat& A, const Mat& B) {
  Mat out = Mat::Zero(A.rows() + B.rows(), A.cols() + B.cols());
  out.topLeftCorner(A.rows(), A.cols()) = A;
  out.bottomRightCorner(B.rows(), B.cols()) = B;
  return out;
}

Mat kron(const Mat& A, const Mat& B) {
  Mat out(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return out;
}

Eigen::MatrixXd abs_matrix(const Mat& A) { return A.cwiseAbs(); }

Vec duality_map(const Vec& y, double p) {
  Vec out(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double r = std::abs(y[i]);
    out[i] = r == 0.0 ? Complex(0.0) : std::pow(r, p - 1.0) * (y[i] / r);
  }
  return out;
}

RealVec weight_root(std::span<const double> weights, double p) {
  require_positive_weights(weights);
  RealVec d(static_cast<Eigen::Index>(weights.size()));
  for (std::size_t i = 0; i < weights.size(); ++i) d[i] = std::pow(weights[i], 1.0 / p);
  return d;
}

Mat null_space(const Mat& A, double rel_tol) {
  if (A.rows() == 0) return Mat::Identity(A.cols(), A.cols());
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() ? s[0] : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > rel_tol * std::max(1.0, smax)) ++rank;
  return svd.matrixV().rightCols(A.cols() - rank);
}

}  // namespace pops
