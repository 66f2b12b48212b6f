#include "pops/spaces.hpp"

#include "pops/optimize.hpp"
#include "pops/random.hpp"
#include "pops/sphere_bnb.hpp"
#include "pops/tensor.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pops {

struct FiniteNormedSpace::Node {
  SpaceKind kind = SpaceKind::WeightedLp;
  Eigen::Index dim = 0;
  double p = 1.0;
  RealVec w;
  Mat omega;
  std::optional<FiniteNormedSpace> parent, right;
  Mat Q, L, K, B;
};

namespace {

constexpr double kSlack = 1e-12;
double inflate(double u) { return u * (1.0 + kSlack) + 1e-300; }

Eigen::Index numeric_rank(const Mat& A) {
  if (A.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(A);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > 1e-10 * s[0]) ++r;
  return r;
}

Mat pinv(const Mat& A) {
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(A);
  return cod.pseudoInverse();
}

Complex phase_of(Complex z) {
  const double r = std::abs(z);
  return r == 0.0 ? Complex(1.0) : z / r;
}

Mat as_coeffs(const FiniteNormedSpace& X, const Vec& v) {
  return Eigen::Map<const Mat>(v.data(), X.left().dim(), X.right().dim());
}

void require_dim(const FiniteNormedSpace& X, Eigen::Index n, const char* what) {
  if (n != X.dim())
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (space " +
                                std::to_string(X.dim()) + ", got " + std::to_string(n) + ")");
}

// Norm of X (or X*) as a weighted l^q norm with q < inf, when it is one.
struct LqForm {
  double q;
  RealVec w;
};
std::optional<LqForm> dual_lq_form(const FiniteNormedSpace& X);

std::optional<LqForm> lq_form(const FiniteNormedSpace& X) {
  if (X.kind() == SpaceKind::WeightedLp && !std::isinf(X.p())) return LqForm{X.p(), X.weights()};
  if (X.kind() == SpaceKind::Dual) return dual_lq_form(X.parent());
  return std::nullopt;
}

std::optional<LqForm> dual_lq_form(const FiniteNormedSpace& X) {
  if (X.kind() == SpaceKind::WeightedLp) {
    if (std::isinf(X.p())) return LqForm{1.0, RealVec::Ones(X.dim())};
    if (X.p() > 1.0) {
      const double q = X.p() / (X.p() - 1.0);
      return LqForm{q, X.weights().array().pow(1.0 - q).matrix()};
    }
    return std::nullopt;
  }
  if (X.kind() == SpaceKind::Dual) return lq_form(X.parent());
  return std::nullopt;
}


// argmin over t of ||z0 + D t|| in X (dual_side: in X*).  Every kind reduces
// to a weighted l^q problem (IRLS) or a max-modulus problem (Lawson), possibly
// after adjoining auxiliary variables for quotients, extensions and
// l^1-decompositions over a norming set.
Vec argmin_affine(const FiniteNormedSpace& X, bool dual_side, const Vec& z0, const Mat& D,
                  Rng& rng) {
  const Eigen::Index k = D.cols();
  if (k == 0) return Vec(0);
  switch (X.kind()) {
    case SpaceKind::Dual:
      return argmin_affine(X.parent(), !dual_side, z0, D, rng);
    case SpaceKind::WeightedLp: {
      const double p = X.p();
      const RealVec& w = X.weights();
      const RealVec ones = RealVec::Ones(X.dim());
      if (!dual_side) {
        if (std::isinf(p)) return opt::minimax_lawson(z0, D).t;
        return opt::affine_min_lq(z0, D, p, w, rng).t;
      }
      if (std::isinf(p)) return opt::affine_min_lq(z0, D, 1.0, ones, rng).t;
      if (p == 1.0) {
        const Mat Wi = w.cwiseInverse().cast<Complex>().asDiagonal();
        return opt::minimax_lawson(Wi * z0, Wi * D).t;
      }
      const double q = p / (p - 1.0);
      return opt::affine_min_lq(z0, D, q, w.array().pow(1.0 - q).matrix(), rng).t;
    }
    case SpaceKind::NormingSet: {
      const Mat& Om = X.functionals();
      if (!dual_side) return opt::minimax_lawson(Om * z0, Om * D).t;
      // min ||c||_1 subject to Om^T c = z0 + D t, jointly in (c, t)
      const Eigen::Index m = Om.rows();
      Mat A(X.dim(), m + k);
      A << Om.transpose(), -D;
      const Vec u0 = pinv(A) * z0;
      const Mat N = null_space(A);
      if (N.cols() == 0) return u0.tail(k);
      auto r = opt::affine_min_lq(u0.head(m), N.topRows(m), 1.0, RealVec::Ones(m), rng);
      return (u0 + N * r.t).tail(k);
    }
    case SpaceKind::Subspace: {
      const auto& P = X.parent();
      const Mat& B = X.basis();
      if (!dual_side) return argmin_affine(P, false, B * z0, B * D, rng);
      // extension psi with B^T psi = z0 + D t, jointly in (psi, t)
      const Eigen::Index n = P.dim();
      Mat A(X.dim(), n + k);
      A << B.transpose(), -D;
      const Vec u0 = pinv(A) * z0;
      const Mat N = null_space(A);
      if (N.cols() == 0) return u0.tail(k);
      const Vec s = argmin_affine(P, true, u0.head(n), N.topRows(n), rng);
      return (u0 + N * s).tail(k);
    }
    case SpaceKind::Quotient: {
      const auto& P = X.parent();
      const Mat& Q = X.quotient_map();
      if (dual_side) return argmin_affine(P, true, Q.transpose() * z0, Q.transpose() * D, rng);
      const Mat& K = X.kernel();
      Mat DD(P.dim(), k + K.cols());
      DD << X.lift() * D, K;
      return argmin_affine(P, false, X.lift() * z0, DD, rng).head(k);
    }
    case SpaceKind::Projective:
      throw std::logic_error("argmin_affine: not available on projective tensor products");
  }
  throw std::logic_error("argmin_affine: unknown space kind");
}

double lp_formula(const Vec& x, double p, const RealVec& w) {
  return std::isinf(p) ? lp_norm(x, p) : lp_norm(x, p, {w.data(), std::size_t(w.size())});
}

// dual norm of a weighted l^p space under the bilinear pairing
double lp_dual_formula(const Vec& phi, double p, const RealVec& w) {
  if (std::isinf(p)) return phi.cwiseAbs().sum();
  if (p == 1.0) return phi.cwiseAbs().cwiseQuotient(w).maxCoeff();
  const double q = p / (p - 1.0);
  const RealVec dw = w.array().pow(1.0 - q);
  return lp_norm(phi, q, {dw.data(), std::size_t(dw.size())});
}

// A particular solution of phi^T x = 1 and a basis of {x : phi^T x = 0}.
std::pair<Vec, Mat> level_set(const Vec& phi) {
  const Vec x0 = phi.conjugate() / phi.squaredNorm();
  Mat row = phi.transpose();
  return {x0, null_space(row)};
}

}  // namespace

// ---------------------------------------------------------------------------
// construction

FiniteNormedSpace FiniteNormedSpace::weighted_lp(double p, RealVec weights) {
  if (!(p >= 1.0)) throw std::invalid_argument("weighted_lp: p must be >= 1");
  if (weights.size() < 1) throw std::invalid_argument("weighted_lp: dimension must be >= 1");
  require_positive_weights(std::span<const double>(weights.data(), weights.size()));
  auto n = std::make_shared<Node>();
  n->kind = SpaceKind::WeightedLp;
  n->dim = weights.size();
  n->p = p;
  n->w = std::move(weights);
  return FiniteNormedSpace(n);
}

FiniteNormedSpace FiniteNormedSpace::lp(Eigen::Index dim, double p) {
  return weighted_lp(p, RealVec::Ones(dim));
}

FiniteNormedSpace FiniteNormedSpace::norming_set(Mat omega) {
  if (omega.rows() < 1 || omega.cols() < 1)
    throw std::invalid_argument("norming_set: empty functional list");
  if (numeric_rank(omega) < omega.cols())
    throw std::invalid_argument("norming_set: functionals do not span the dual");
  auto n = std::make_shared<Node>();
  n->kind = SpaceKind::NormingSet;
  n->dim = omega.cols();
  n->omega = std::move(omega);
  return FiniteNormedSpace(n);
}

FiniteNormedSpace FiniteNormedSpace::quotient(const FiniteNormedSpace& parent, const Mat& kernel) {
  if (kernel.rows() != parent.dim())
    throw std::invalid_argument("quotient: kernel vectors have the wrong length");
  const Eigen::Index r = numeric_rank(kernel);
  if (r >= parent.dim()) throw std::invalid_argument("quotient: kernel must be a strict subspace");
  // orthogonal complement of the kernel, orthonormal columns
  const Mat C = kernel.cols() == 0 ? Mat(Mat::Identity(parent.dim(), parent.dim()))
                                   : null_space(Mat(kernel.adjoint()));
  return quotient_by_map(parent, C.adjoint());
}

FiniteNormedSpace FiniteNormedSpace::quotient_by_map(const FiniteNormedSpace& parent,
                                                     const Mat& q) {
  if (q.cols() != parent.dim()) throw std::invalid_argument("quotient: map has wrong domain");
  if (q.rows() < 1 || numeric_rank(q) != q.rows())
    throw std::invalid_argument("quotient: map must be surjective");
  auto n = std::make_shared<Node>();
  n->kind = SpaceKind::Quotient;
  n->dim = q.rows();
  n->parent = parent;
  n->Q = q;
  n->L = pinv(q);
  n->K = null_space(q);
  return FiniteNormedSpace(n);
}

FiniteNormedSpace FiniteNormedSpace::subspace(const FiniteNormedSpace& parent, const Mat& basis) {
  if (basis.rows() != parent.dim()) throw std::invalid_argument("subspace: basis has wrong length");
  if (basis.cols() < 1 || numeric_rank(basis) != basis.cols())
    throw std::invalid_argument("subspace: basis must be linearly independent");
  auto n = std::make_shared<Node>();
  n->kind = SpaceKind::Subspace;
  n->dim = basis.cols();
  n->parent = parent;
  n->B = basis;
  return FiniteNormedSpace(n);
}

FiniteNormedSpace FiniteNormedSpace::dual(const FiniteNormedSpace& parent) {
  auto n = std::make_shared<Node>();
  n->kind = SpaceKind::Dual;
  n->dim = parent.dim();
  n->parent = parent;
  return FiniteNormedSpace(n);
}

FiniteNormedSpace FiniteNormedSpace::projective(const FiniteNormedSpace& x, const FiniteNormedSpace& y) {
  auto n = std::make_shared<Node>();
  n->kind = SpaceKind::Projective;
  n->dim = x.dim() * y.dim();
  n->parent = x;
  n->right = y;
  return FiniteNormedSpace(n);
}

Eigen::Index FiniteNormedSpace::dim() const { return node_->dim; }
SpaceKind FiniteNormedSpace::kind() const { return node_->kind; }

namespace {
void need(bool ok, const char* what) {
  if (!ok) throw std::logic_error(std::string("FiniteNormedSpace: not a ") + what);
}
}  // namespace

double FiniteNormedSpace::p() const {
  need(kind() == SpaceKind::WeightedLp, "weighted_lp space");
  return node_->p;
}
const RealVec& FiniteNormedSpace::weights() const {
  need(kind() == SpaceKind::WeightedLp, "weighted_lp space");
  return node_->w;
}
const Mat& FiniteNormedSpace::functionals() const {
  need(kind() == SpaceKind::NormingSet, "norming_set space");
  return node_->omega;
}
const FiniteNormedSpace& FiniteNormedSpace::parent() const {
  need(node_->parent.has_value(), "derived space");
  return *node_->parent;
}
const Mat& FiniteNormedSpace::quotient_map() const {
  need(kind() == SpaceKind::Quotient, "quotient space");
  return node_->Q;
}
const Mat& FiniteNormedSpace::lift() const {
  need(kind() == SpaceKind::Quotient, "quotient space");
  return node_->L;
}
const Mat& FiniteNormedSpace::kernel() const {
  need(kind() == SpaceKind::Quotient, "quotient space");
  return node_->K;
}
const Mat& FiniteNormedSpace::basis() const {
  need(kind() == SpaceKind::Subspace, "subspace");
  return node_->B;
}

const FiniteNormedSpace& FiniteNormedSpace::left() const {
  need(kind() == SpaceKind::Projective, "projective tensor product");
  return *node_->parent;
}
const FiniteNormedSpace& FiniteNormedSpace::right() const {
  need(kind() == SpaceKind::Projective, "projective tensor product");
  return *node_->right;
}

std::string FiniteNormedSpace::describe() const {
  std::ostringstream os;
  switch (kind()) {
    case SpaceKind::WeightedLp:
      if ((node_->w.array() == 1.0).all())
        os << "l^" << node_->p << "(" << dim() << ")";
      else
        os << "L^" << node_->p << "(w," << dim() << ")";
      break;
    case SpaceKind::NormingSet:
      os << "norming_set(" << node_->omega.rows() << " on C^" << dim() << ")";
      break;
    case SpaceKind::Quotient:
      os << parent().describe() << "/ker(" << parent().dim() - dim() << ")";
      break;
    case SpaceKind::Subspace:
      os << "span_" << dim() << "(" << parent().describe() << ")";
      break;
    case SpaceKind::Dual:
      os << "(" << parent().describe() << ")*";
      break;
    case SpaceKind::Projective:
      os << left().describe() << " (x)^gamma " << right().describe();
      break;
  }
  return os.str();
}

DiscreteMeasure::DiscreteMeasure(RealVec w) : weights(std::move(w)) {
  if (weights.size() < 1) throw std::invalid_argument("DiscreteMeasure: need at least one atom");
  require_positive_weights(std::span<const double>(weights.data(), weights.size()));
}

FiniteNormedSpace l1_space(Eigen::Index k) {
  if (k < 1) throw std::invalid_argument("l1_space: k must be >= 1");
  return FiniteNormedSpace::lp(k, 1.0);
}

FiniteNormedSpace linf_space(Eigen::Index k) {
  if (k < 1) throw std::invalid_argument("linf_space: k must be >= 1");
  return FiniteNormedSpace::norming_set(Mat::Identity(k, k));
}

FiniteNormedSpace lp_space(const DiscreteMeasure& mu, double p) {
  return FiniteNormedSpace::weighted_lp(p, mu.weights);
}

// ---------------------------------------------------------------------------
// norms

Bounds norm(const FiniteNormedSpace& X, const Vec& x_in, const SpaceOptions& o) {
  Vec x = x_in;
  if (X.kind() == SpaceKind::Quotient && x.size() == X.parent().dim() && x.size() != X.dim())
    x = X.quotient_map() * x;
  require_dim(X, x.size(), "norm");
  const Eigen::Index d = X.dim();

  switch (X.kind()) {
    case SpaceKind::WeightedLp: {
      const double p = X.p();
      const auto& w = X.weights();
      const double v = lp_formula(x, p, w);
      Bounds b = Bounds::exact(v, "formula");
      Vec phi = Vec::Zero(d);
      if (v > 0.0) {
        if (std::isinf(p)) {
          Eigen::Index j;
          x.cwiseAbs().maxCoeff(&j);
          phi[j] = std::conj(phase_of(x[j]));
        } else if (p == 1.0) {
          for (Eigen::Index i = 0; i < d; ++i)
            if (x[i] != Complex(0.0)) phi[i] = w[i] * std::conj(phase_of(x[i]));
        } else {
          for (Eigen::Index i = 0; i < d; ++i)
            phi[i] = w[i] * std::pow(std::abs(x[i]) / v, p - 1.0) * std::conj(phase_of(x[i]));
        }
        // renormalise so the dual norm is certainly <= 1
        const double dn = lp_dual_formula(phi, p, w);
        if (dn > 1.0) phi /= dn;
      }
      b.witness = phi;
      return b;
    }
    case SpaceKind::NormingSet: {
      const Vec vals = X.functionals() * x;
      Eigen::Index j;
      const double v = vals.cwiseAbs().maxCoeff(&j);
      Bounds b = Bounds::exact(v, "norming-set");
      b.witness = Vec(X.functionals().row(j).transpose() * std::conj(phase_of(vals[j])));
      return b;
    }
    case SpaceKind::Subspace: {
      Bounds b = norm(X.parent(), X.basis() * x, o);
      if (b.witness) b.witness = Vec(X.basis().transpose() * *b.witness);
      return b;
    }
    case SpaceKind::Dual:
      return dual_norm(X.parent(), x, o);
    case SpaceKind::Projective: {
      ProjOptions po;
      po.seed = o.seed;
      return proj_norm(TensorElem(X.left(), X.right(), as_coeffs(X, x)), po);
    }
    case SpaceKind::Quotient: {
      if (x.cwiseAbs().maxCoeff() == 0.0) {
        Bounds b = Bounds::exact(0.0, "zero");
        b.witness = Vec::Zero(d);
        return b;
      }
      const auto& P = X.parent();
      const Mat& Q = X.quotient_map();
      Rng rng = make_rng(o.seed, 0x71);
      Bounds b;
      // upper: best representative of the coset
      const Vec rep = X.lift() * x + X.kernel() * argmin_affine(P, false, X.lift() * x, X.kernel(), rng);
      b.upper = norm(P, rep, o).upper;
      b.upper_method = "coset-min";
      // lower: functional on the quotient (annihilating the kernel) with
      // certified dual norm, from inf{ ||Q^T psi||_* : psi(x) = 1 }
      auto [psi0, N] = level_set(x);
      Vec psi = psi0;
      if (N.cols() > 0) psi += N * argmin_affine(X, true, psi0, N, rng);
      const double dn = dual_norm(P, Q.transpose() * psi, o).upper;
      b.lower = std::min(b.upper, std::abs(pairing(psi, x)) / dn);
      b.lower_method = "annihilator-functional";
      b.witness = Vec(psi / dn);
      return b;
    }
  }
  throw std::logic_error("norm: unknown space kind");
}

Bounds dual_norm(const FiniteNormedSpace& X, const Vec& phi, const SpaceOptions& o) {
  require_dim(X, phi.size(), "dual_norm");
  const Eigen::Index d = X.dim();
  if (phi.size() == 0 || phi.cwiseAbs().maxCoeff() == 0.0) {
    Bounds b = Bounds::exact(0.0, "zero");
    b.witness = Vec::Zero(d);
    return b;
  }

  switch (X.kind()) {
    case SpaceKind::WeightedLp: {
      const double p = X.p();
      const auto& w = X.weights();
      Vec x = Vec::Zero(d);
      double v;
      if (std::isinf(p)) {
        v = phi.cwiseAbs().sum();
        for (Eigen::Index i = 0; i < d; ++i) x[i] = std::conj(phase_of(phi[i]));
      } else if (p == 1.0) {
        const RealVec r = phi.cwiseAbs().cwiseQuotient(w);
        Eigen::Index j;
        v = r.maxCoeff(&j);
        x[j] = std::conj(phase_of(phi[j])) / w[j];
      } else {
        const double q = p / (p - 1.0);
        const RealVec dw = w.array().pow(1.0 - q);
        v = lp_norm(phi, q, {dw.data(), std::size_t(d)});
        for (Eigen::Index i = 0; i < d; ++i)
          x[i] = std::pow(std::abs(phi[i]) / (w[i] * v), q - 1.0) * std::conj(phase_of(phi[i]));
        const double nx = lp_formula(x, p, w);
        if (nx > 1.0) x /= nx;
      }
      Bounds b = Bounds::exact(v, "formula");
      b.witness = x;
      return b;
    }
    case SpaceKind::NormingSet: {
      const Mat& Om = X.functionals();
      Bounds b;
      // upper: phi = Om^T c  =>  ||phi||_* <= ||c||_1
      const Mat OmT = Om.transpose();
      const Mat pOmT = pinv(OmT);
      Rng rng = make_rng(o.seed, 0x72);
      const Vec c0 = pOmT * phi;
      const Mat N = null_space(OmT);
      Vec c = c0;
      if (N.cols() > 0) {
        auto r = opt::affine_min_lq(c0, N, 1.0, RealVec::Ones(c0.size()), rng);
        c = c0 + N * r.t;
      }
      const Vec resid = pOmT * (phi - OmT * c);
      b.upper = inflate(c.cwiseAbs().sum() + resid.cwiseAbs().sum());
      b.upper_method = "l1-decomposition";
      // lower: x with phi(x) = 1 and small max |omega(x)|
      auto [x0, M] = level_set(phi);
      Vec x = x0;
      if (M.cols() > 0) x += M * argmin_affine(X, false, x0, M, rng);
      const double nx = (Om * x).cwiseAbs().maxCoeff();
      b.lower = std::min(b.upper, std::abs(pairing(phi, x)) / nx);
      b.lower_method = "level-set-search";
      b.witness = Vec(x / nx);
      return b;
    }
    case SpaceKind::Subspace: {
      const auto& P = X.parent();
      const Mat& B = X.basis();
      const Mat BT = B.transpose();
      const Mat pBT = pinv(BT);
      Rng rng = make_rng(o.seed, 0x73);
      Bounds b;
      // upper: Hahn-Banach extension psi with B^T psi = phi
      const Mat NB = null_space(BT);
      Vec psi = pBT * phi;
      if (NB.cols() > 0) psi += NB * argmin_affine(P, true, psi, NB, rng);
      const Vec corr = pBT * (phi - BT * psi);
      b.upper = inflate(dual_norm(P, psi, o).upper +
                        (corr.cwiseAbs().maxCoeff() > 0.0 ? dual_norm(P, corr, o).upper : 0.0));
      b.upper_method = "extension";
      // lower: y with phi(y) = 1 and small ||B y||
      auto [y0, M] = level_set(phi);
      Vec y = y0;
      if (M.cols() > 0) y += M * argmin_affine(X, false, y0, M, rng);
      const double ny = norm(P, B * y, o).upper;
      b.lower = std::min(b.upper, std::abs(pairing(phi, y)) / ny);
      b.lower_method = "level-set-search";
      b.witness = Vec(y / ny);
      return b;
    }
    case SpaceKind::Quotient: {
      Bounds b = dual_norm(X.parent(), X.quotient_map().transpose() * phi, o);
      if (b.witness) b.witness = Vec(X.quotient_map() * *b.witness);
      return b;
    }
    case SpaceKind::Dual:
      return norm(X.parent(), phi, o);
    case SpaceKind::Projective: {
      SupOptions so;
      so.seed = o.seed;
      Bounds b = inj_norm(TensorElem(FiniteNormedSpace::dual(X.left()),
                                     FiniteNormedSpace::dual(X.right()), as_coeffs(X, phi)),
                          so);
      // (x, y) stacked -> vec(x y^T)
      if (b.witness) {
        const Eigen::Index dx = X.left().dim();
        b.witness = Vec(kron(b.witness->tail(X.right().dim()), b.witness->head(dx)));
      }
      return b;
    }
  }
  throw std::logic_error("dual_norm: unknown space kind");
}

Bounds dual_norm_search(const FiniteNormedSpace& X, const Vec& phi, int starts,
                        std::uint64_t seed) {
  require_dim(X, phi.size(), "dual_norm_search");
  const Eigen::Index d = X.dim();
  Bounds b;
  b.lower_method = "ball-search";
  b.witness = Vec::Zero(d);
  if (phi.cwiseAbs().maxCoeff() == 0.0) return b;
  Rng rng = make_rng(seed, 0x74);
  auto ratio = [&](const Vec& x) {
    const double n = norm(X, x).upper;
    return n > 0.0 ? std::abs(pairing(phi, x)) / n : 0.0;
  };
  std::vector<Vec> init;
  Vec aligned(d);
  for (Eigen::Index i = 0; i < d; ++i) aligned[i] = std::conj(phase_of(phi[i]));
  init.push_back(aligned);
  init.push_back(phi.conjugate());
  for (Eigen::Index i = 0; i < d; ++i) init.push_back(Vec::Unit(d, i));
  for (int s = static_cast<int>(init.size()); s < starts; ++s) init.push_back(random_vec(rng, d));
  opt::SearchOptions so;
  so.max_evals = 400;
  for (std::size_t s = 0; s < init.size() && static_cast<int>(s) < std::max(starts, 1); ++s) {
    const Vec x0 = init[s] / norm(X, init[s]).upper;
    auto r = opt::pattern_search([&](const RealVec& v) { return -ratio(opt::unpack(v)); },
                                 opt::pack(x0), so, rng);
    const Vec x = opt::unpack(r.x);
    const double val = ratio(x);
    if (val > b.lower) {
      b.lower = val;
      b.witness = Vec(x / norm(X, x).upper);
    }
  }
  return b;
}

Vec norming_functional(const FiniteNormedSpace& X, const Vec& x, const SpaceOptions& o) {
  const Bounds b = norm(X, x, o);
  Vec phi = b.witness ? *b.witness : Vec::Zero(X.dim());
  Vec xx = x;
  if (X.kind() == SpaceKind::Quotient && x.size() != X.dim()) xx = X.quotient_map() * x;
  const Complex val = pairing(phi, xx);
  return phi * std::conj(phase_of(val));
}

std::optional<LpForm> weighted_lp_form(const FiniteNormedSpace& X) {
  if (X.kind() == SpaceKind::WeightedLp) {
    if (std::isinf(X.p())) return LpForm{kInf, RealVec::Ones(X.dim())};
    return LpForm{X.p(), X.weights()};
  }
  if (X.kind() != SpaceKind::Dual) return std::nullopt;
  const auto inner = weighted_lp_form(X.parent());
  if (!inner) return std::nullopt;
  if (std::isinf(inner->q)) return LpForm{1.0, RealVec::Ones(X.dim())};
  if (inner->q == 1.0) {
    if ((inner->w.array() != 1.0).any()) return std::nullopt;
    return LpForm{kInf, inner->w};
  }
  const double q = inner->q / (inner->q - 1.0);
  return LpForm{q, inner->w.array().pow(1.0 - q).matrix()};
}

// ---------------------------------------------------------------------------
// norming data and samples

std::optional<Mat> finite_norming_set(const FiniteNormedSpace& X) {
  switch (X.kind()) {
    case SpaceKind::NormingSet:
      return X.functionals();
    case SpaceKind::WeightedLp:
      if (std::isinf(X.p())) return Mat(Mat::Identity(X.dim(), X.dim()));
      return std::nullopt;
    case SpaceKind::Dual:
      return finite_ball_generators(X.parent());
    case SpaceKind::Subspace: {
      auto om = finite_norming_set(X.parent());
      if (!om) return std::nullopt;
      return Mat(*om * X.basis());
    }
    case SpaceKind::Quotient:
    case SpaceKind::Projective:
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<Mat> finite_ball_generators(const FiniteNormedSpace& X) {
  switch (X.kind()) {
    case SpaceKind::WeightedLp:
      if (X.p() == 1.0)
        return Mat(X.weights().cwiseInverse().cast<Complex>().asDiagonal());
      return std::nullopt;
    case SpaceKind::Dual:
      return finite_norming_set(X.parent());
    case SpaceKind::Quotient: {
      auto g = finite_ball_generators(X.parent());
      if (!g) return std::nullopt;
      return Mat(*g * X.quotient_map().transpose());
    }
    default:
      return std::nullopt;
  }
}

namespace {

// Rows: canonical generators (if any), coordinate directions, then random
// points, each scaled into the unit ball of X (dual_side: of X*).
Mat sample_ball(const FiniteNormedSpace& X, bool dual_side, int count, std::uint64_t seed) {
  const Eigen::Index d = X.dim();
  std::vector<Vec> rows;
  const auto gens = dual_side ? finite_norming_set(X) : finite_ball_generators(X);
  if (gens)
    for (Eigen::Index i = 0; i < gens->rows(); ++i) rows.push_back(gens->row(i).transpose());
  auto n_of = [&](const Vec& v) { return dual_side ? dual_norm(X, v).upper : norm(X, v).upper; };
  auto push_scaled = [&](const Vec& v) {
    const double n = n_of(v);
    if (n > 0.0 && std::isfinite(n)) rows.push_back(v / n);
  };
  if (!gens)
    for (Eigen::Index i = 0; i < d; ++i) push_scaled(Vec::Unit(d, i));
  Rng rng = make_rng(seed, dual_side ? 0x81 : 0x82);
  int k = 0;
  while (static_cast<int>(rows.size()) < count) {
    const Vec v = random_vec(rng, d);
    if (k++ % 2 == 0) {
      // witness of the opposite norm points at an extreme region of the ball
      const Bounds b = dual_side ? norm(X, v) : dual_norm(X, v);
      if (b.witness && b.witness->cwiseAbs().maxCoeff() > 0.0) {
        push_scaled(*b.witness);
        continue;
      }
    }
    push_scaled(v);
  }
  Mat out(rows.size(), d);
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(i) = rows[i].transpose();
  return out;
}

}  // namespace

Mat dual_ball_sample(const FiniteNormedSpace& X, int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("dual_ball_sample: count must be >= 1");
  return sample_ball(X, true, count, seed);
}

Mat ball_sample(const FiniteNormedSpace& X, int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("ball_sample: count must be >= 1");
  return sample_ball(X, false, count, seed);
}

// ---------------------------------------------------------------------------
// sup of a seminorm over a ball

namespace {

Bounds sup_side(const FiniteNormedSpace& X, bool dual_side, const Seminorm& h,
                const SupOptions& o);

Bounds max_over_rows(const Mat& gens, const Seminorm& h, const char* method) {
  Bounds b;
  b.lower = 0.0;
  b.upper = 0.0;
  b.lower_method = b.upper_method = method;
  for (Eigen::Index i = 0; i < gens.rows(); ++i) {
    const Vec g = gens.row(i).transpose();
    auto [lo, hi] = h(g);
    if (lo > b.lower || !b.witness) {
      b.lower = std::max(b.lower, lo);
      b.witness = g;
    }
    b.upper = std::max(b.upper, hi);
  }
  return b;
}

// sup_{|x_j| <= ...} h(x) <= sum_j |x_j| h(e_j) with |x_j| bounded by the
// norm of the j-th coordinate functional on the ball.
double coarse_upper(const FiniteNormedSpace& X, bool dual_side, const Seminorm& h) {
  const Eigen::Index d = X.dim();
  double acc = 0.0;
  for (Eigen::Index j = 0; j < d; ++j) {
    const Vec e = Vec::Unit(d, j);
    const double hj = h(e).second;
    if (hj == 0.0) continue;
    const double cj = dual_side ? norm(X, e).upper : dual_norm(X, e).upper;
    acc += cj * hj;
  }
  return inflate(acc);
}

// local ascent of h(v) / ||v|| from `start`; improves b in place
void ascend(const FiniteNormedSpace& X, bool dual_side, const Seminorm& h, const Vec& start,
            const SupOptions& o, Bounds& b) {
  if (o.local_evals <= 0) return;
  auto n_of = [&](const Vec& v) { return dual_side ? dual_norm(X, v).upper : norm(X, v).upper; };
  auto f = [&](const RealVec& r) {
    const Vec v = opt::unpack(r);
    const double n = n_of(v);
    return n > 0.0 ? -h(v).first / n : 0.0;
  };
  Rng rng = make_rng(o.seed, 0x91);
  opt::SearchOptions so;
  so.max_evals = o.local_evals;
  so.initial_step = 0.1 * std::max(1e-3, start.norm());
  auto r = opt::pattern_search(f, opt::pack(start), so, rng);
  const Vec v = opt::unpack(r.x);
  const double n = n_of(v);
  if (!(n > 0.0)) return;
  const Vec u = v / n;
  const double lo = h(u).first;
  if (lo > b.lower) {
    b.lower = std::min(lo, b.upper);
    b.witness = u;
    b.lower_method += "+ascent";
  }
}

Bounds sampled_lower(const FiniteNormedSpace& X, bool dual_side, const Seminorm& h,
                     const SupOptions& o) {
  const Mat S = sample_ball(X, dual_side, o.samples, o.seed);
  Bounds b = max_over_rows(S, h, "ball-sample");
  b.upper = kInf;
  if (b.witness) ascend(X, dual_side, h, *b.witness, o, b);
  return b;
}

Bounds sphere_bnb(const bnb::SphereFactor& f, const std::function<Vec(const Vec&)>& embed,
                  const Seminorm& h, double a_priori, const SupOptions& o) {
  bnb::Options bo;
  bo.rel_tol = o.bnb_rel_tol;
  bo.max_evals = o.bnb_max_evals;
  auto hh = [&](const std::vector<Vec>& y) { return h(embed(y[0])); };
  auto r = bnb::maximize({f}, hh, a_priori, bo);
  Bounds b;
  b.lower = r.lower;
  b.upper = std::max(r.lower, inflate(r.upper));
  b.lower_method = b.upper_method = "sphere-bnb";
  if (!r.witness.empty()) b.witness = embed(r.witness[0]);
  return b;
}

Bounds sup_side(const FiniteNormedSpace& X, bool dual_side, const Seminorm& h,
                const SupOptions& o) {
  const Eigen::Index d = X.dim();
  if (auto gens = dual_side ? finite_norming_set(X) : finite_ball_generators(X))
    return max_over_rows(*gens, h, "generators");

  switch (X.kind()) {
    case SpaceKind::Dual:
      return sup_side(X.parent(), !dual_side, h, o);
    case SpaceKind::Subspace:
      if (dual_side) {
        // the dual ball of a subspace is the restriction of the parent's
        const Mat BT = X.basis().transpose();
        Bounds b = sup_side(X.parent(), true, [&](const Vec& v) { return h(BT * v); }, o);
        if (b.witness) b.witness = Vec(BT * *b.witness);
        return b;
      }
      break;
    case SpaceKind::Quotient:
      if (!dual_side) {
        // the ball of a quotient is the image of the parent's ball
        const Mat& Q = X.quotient_map();
        Bounds b = sup_side(X.parent(), false, [&](const Vec& v) { return h(Q * v); }, o);
        if (b.witness) b.witness = Vec(Q * *b.witness);
        return b;
      }
      break;
    case SpaceKind::WeightedLp:
      if (d <= o.bnb_max_dim) {
        const double p = X.p();
        const RealVec& w = X.weights();
        const double a_priori = coarse_upper(X, dual_side, h);
        Bounds b;
        if (!dual_side) {
          bnb::SphereFactor f{d, p, std::isinf(p) ? RealVec() : w};
          b = sphere_bnb(f, [](const Vec& y) { return y; }, h, a_priori, o);
        } else if (p == 1.0) {
          // dual ball: polydisc |phi_i| <= w_i
          bnb::SphereFactor f{d, kInf, {}};
          const Vec wc = w.cast<Complex>();
          b = sphere_bnb(f, [wc](const Vec& y) { return Vec(wc.cwiseProduct(y)); }, h, a_priori,
                         o);
        } else {
          const double q = p / (p - 1.0);
          bnb::SphereFactor f{d, q, w.array().pow(1.0 - q).matrix()};
          b = sphere_bnb(f, [](const Vec& y) { return y; }, h, a_priori, o);
        }
        if (b.witness) ascend(X, dual_side, h, *b.witness, o, b);
        return b;
      }
      break;
    case SpaceKind::NormingSet:
      if (!dual_side && d <= o.bnb_max_dim && X.functionals().rows() == d) {
        // square invertible norming set: the ball is Omega^{-1} (polydisc)
        Eigen::FullPivLU<Mat> lu(X.functionals());
        if (!lu.isInvertible()) break;
        const Mat Oi = lu.inverse();
        Bounds b = sphere_bnb(bnb::SphereFactor{d, kInf, {}}, [&Oi](const Vec& y) { return Vec(Oi * y); },
                              h, coarse_upper(X, dual_side, h), o);
        if (b.witness) ascend(X, dual_side, h, *b.witness, o, b);
        return b;
      }
      break;
    default:
      break;
  }
  Bounds b = sampled_lower(X, dual_side, h, o);
  b.upper = std::max(b.lower, coarse_upper(X, dual_side, h));
  b.upper_method = "coordinate-bound";
  return b;
}

}  // namespace

Bounds sup_dual_ball(const FiniteNormedSpace& X, const Seminorm& h, const SupOptions& o) {
  return sup_side(X, true, h, o);
}

Bounds sup_ball(const FiniteNormedSpace& X, const Seminorm& h, const SupOptions& o) {
  return sup_side(X, false, h, o);
}

}  // namespace pops
