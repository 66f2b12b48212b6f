#include "pops/postructure.hpp"

#include "pops/cbmaps.hpp"
#include "pops/optimize.hpp"
#include "pops/sphere_bnb.hpp"

#include <Eigen/LU>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace pops {

// ---------------------------------------------------------------------------
// MatrixOverSpace

MatrixOverSpace::MatrixOverSpace(Eigen::Index rows, Eigen::Index cols, Eigen::Index dim)
    : rows_(rows), cols_(cols), slices_(static_cast<std::size_t>(dim), Mat::Zero(rows, cols)) {
  if (rows < 1 || cols < 1 || dim < 1)
    throw std::invalid_argument("MatrixOverSpace: sizes must be positive");
}

MatrixOverSpace::MatrixOverSpace(std::vector<Mat> slices) : slices_(std::move(slices)) {
  if (slices_.empty()) throw std::invalid_argument("MatrixOverSpace: no slices");
  rows_ = slices_[0].rows();
  cols_ = slices_[0].cols();
  if (rows_ < 1 || cols_ < 1) throw std::invalid_argument("MatrixOverSpace: empty slices");
  for (const auto& s : slices_)
    if (s.rows() != rows_ || s.cols() != cols_)
      throw std::invalid_argument("MatrixOverSpace: slices differ in shape");
}

MatrixOverSpace MatrixOverSpace::from_entries(Eigen::Index rows, Eigen::Index cols,
                                              const std::vector<Vec>& entries) {
  if (static_cast<Eigen::Index>(entries.size()) != rows * cols || entries.empty())
    throw std::invalid_argument("MatrixOverSpace: need rows * cols entries");
  MatrixOverSpace u(rows, cols, entries[0].size());
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) u.set_entry(i, j, entries[i * cols + j]);
  return u;
}

MatrixOverSpace MatrixOverSpace::scalar_times(const Mat& alpha, const Vec& v) {
  std::vector<Mat> s;
  for (Eigen::Index k = 0; k < v.size(); ++k) s.push_back(v[k] * alpha);
  return MatrixOverSpace(std::move(s));
}

Vec MatrixOverSpace::entry(Eigen::Index i, Eigen::Index j) const {
  Vec v(dim());
  for (Eigen::Index k = 0; k < dim(); ++k) v[k] = slices_[k](i, j);
  return v;
}

void MatrixOverSpace::set_entry(Eigen::Index i, Eigen::Index j, const Vec& v) {
  if (v.size() != dim()) throw std::invalid_argument("MatrixOverSpace: entry has wrong dimension");
  for (Eigen::Index k = 0; k < dim(); ++k) slices_[k](i, j) = v[k];
}

Mat MatrixOverSpace::apply(const Vec& phi) const {
  if (phi.size() != dim()) throw std::invalid_argument("MatrixOverSpace: functional has wrong dimension");
  Mat out = Mat::Zero(rows_, cols_);
  for (Eigen::Index k = 0; k < dim(); ++k) out += phi[k] * slices_[k];
  return out;
}

Mat MatrixOverSpace::amplify(const std::vector<Mat>& images) const {
  if (static_cast<Eigen::Index>(images.size()) != dim())
    throw std::invalid_argument("MatrixOverSpace: need one image per basis vector");
  const Eigen::Index r = images[0].rows(), c = images[0].cols();
  Mat out = Mat::Zero(rows_ * r, cols_ * c);
  for (Eigen::Index k = 0; k < dim(); ++k) {
    if (images[k].rows() != r || images[k].cols() != c)
      throw std::invalid_argument("MatrixOverSpace: images differ in shape");
    out += kron(slices_[k], images[k]);
  }
  return out;
}

MatrixOverSpace MatrixOverSpace::direct_sum(const MatrixOverSpace& v) const {
  if (v.dim() != dim()) throw std::invalid_argument("MatrixOverSpace: dimension mismatch");
  std::vector<Mat> s;
  for (Eigen::Index k = 0; k < dim(); ++k) s.push_back(pops::direct_sum(slices_[k], v.slices_[k]));
  return MatrixOverSpace(std::move(s));
}

MatrixOverSpace MatrixOverSpace::compress(const Mat& alpha, const Mat& beta) const {
  if (alpha.cols() != rows_ || beta.rows() != cols_)
    throw std::invalid_argument("MatrixOverSpace: compression shape mismatch");
  std::vector<Mat> s;
  for (const auto& U : slices_) s.push_back(alpha * U * beta);
  return MatrixOverSpace(std::move(s));
}

MatrixOverSpace MatrixOverSpace::mapped(const Mat& T) const {
  if (T.cols() != dim()) throw std::invalid_argument("MatrixOverSpace: map has wrong source dimension");
  std::vector<Mat> s(static_cast<std::size_t>(T.rows()), Mat::Zero(rows_, cols_));
  for (Eigen::Index l = 0; l < T.rows(); ++l)
    for (Eigen::Index k = 0; k < dim(); ++k)
      if (T(l, k) != Complex(0.0)) s[l] += T(l, k) * slices_[k];
  return MatrixOverSpace(std::move(s));
}

MatrixOverSpace MatrixOverSpace::operator+(const MatrixOverSpace& v) const {
  if (v.dim() != dim() || v.rows_ != rows_ || v.cols_ != cols_)
    throw std::invalid_argument("MatrixOverSpace: shape mismatch");
  std::vector<Mat> s;
  for (Eigen::Index k = 0; k < dim(); ++k) s.push_back(slices_[k] + v.slices_[k]);
  return MatrixOverSpace(std::move(s));
}

MatrixOverSpace MatrixOverSpace::operator*(Complex a) const {
  std::vector<Mat> s;
  for (const auto& U : slices_) s.push_back(a * U);
  return MatrixOverSpace(std::move(s));
}

bool MatrixOverSpace::is_zero() const {
  for (const auto& U : slices_)
    if (U.cwiseAbs().maxCoeff() != 0.0) return false;
  return true;
}

MatrixOverSpace random_matrix_over(Rng& rng, Eigen::Index rows, Eigen::Index cols, Eigen::Index dim) {
  std::vector<Mat> s;
  for (Eigen::Index k = 0; k < dim; ++k) s.push_back(random_mat(rng, rows, cols));
  return MatrixOverSpace(std::move(s));
}

// ---------------------------------------------------------------------------
// POStructure

struct POStructure::Node {
  StructureKind kind;
  FiniteNormedSpace X;
  PExponent p;
  std::vector<Mat> images;
  int cap_m = 0;
  std::optional<POStructure> parent;
  Mat q;
};

namespace {

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

}  // namespace

POStructure POStructure::min(const FiniteNormedSpace& X, PExponent p) {
  return POStructure(std::make_shared<const Node>(Node{StructureKind::Min, X, p, {}, 0, std::nullopt, {}}));
}

POStructure POStructure::concrete(const FiniteNormedSpace& X, std::vector<Mat> images, PExponent p) {
  if (static_cast<Eigen::Index>(images.size()) != X.dim())
    throw std::invalid_argument("POStructure::concrete: need one image per basis vector");
  const Eigen::Index N = images[0].rows();
  Mat stacked(N * N, X.dim());
  for (std::size_t k = 0; k < images.size(); ++k) {
    if (images[k].rows() != N || images[k].cols() != N)
      throw std::invalid_argument("POStructure::concrete: images must be square of equal size");
    stacked.col(Eigen::Index(k)) = Eigen::Map<const Vec>(images[k].data(), N * N);
  }
  if (numeric_rank(stacked) < X.dim())
    throw std::invalid_argument("POStructure::concrete: embedding is not injective");
  return POStructure(std::make_shared<const Node>(
      Node{StructureKind::Concrete, X, p, std::move(images), 0, std::nullopt, {}}));
}

POStructure POStructure::maxlp(const FiniteNormedSpace& X, PExponent p, int cap_m) {
  if (cap_m < 0) throw std::invalid_argument("POStructure::maxlp: cap must be >= 0");
  return POStructure(std::make_shared<const Node>(Node{StructureKind::MaxLp, X, p, {}, cap_m, std::nullopt, {}}));
}

POStructure POStructure::quotient(const POStructure& parent, const Mat& q) {
  if (q.cols() != parent.space().dim() || q.rows() < 1 || numeric_rank(q) < q.rows())
    throw std::invalid_argument("POStructure::quotient: map must be surjective from the parent");
  return POStructure(std::make_shared<const Node>(
      Node{StructureKind::Quotient, FiniteNormedSpace::quotient_by_map(parent.space(), q), parent.p(),
           {}, 0, parent, q}));
}

POStructure POStructure::quotient(const POStructure& parent, const Mat& q, const FiniteNormedSpace& Z) {
  if (q.cols() != parent.space().dim() || q.rows() < 1 || numeric_rank(q) < q.rows())
    throw std::invalid_argument("POStructure::quotient: map must be surjective from the parent");
  if (Z.dim() != q.rows()) throw std::invalid_argument("POStructure::quotient: target has wrong dimension");
  return POStructure(std::make_shared<const Node>(
      Node{StructureKind::Quotient, Z, parent.p(), {}, 0, parent, q}));
}

POStructure POStructure::dual(const POStructure& parent) {
  return POStructure(std::make_shared<const Node>(Node{
      StructureKind::Dual, FiniteNormedSpace::dual(parent.space()), parent.p(), {}, 0, parent, {}}));
}

StructureKind POStructure::kind() const { return node_->kind; }
const FiniteNormedSpace& POStructure::space() const { return node_->X; }
PExponent POStructure::p() const { return node_->p; }

const std::vector<Mat>& POStructure::images() const {
  if (kind() != StructureKind::Concrete) throw std::logic_error("POStructure: not concrete");
  return node_->images;
}
int POStructure::cap_m() const {
  if (kind() != StructureKind::MaxLp) throw std::logic_error("POStructure: not max_{L^p}");
  return node_->cap_m;
}
const POStructure& POStructure::parent() const {
  if (!node_->parent) throw std::logic_error("POStructure: no parent");
  return *node_->parent;
}
const Mat& POStructure::quotient_map() const {
  if (kind() != StructureKind::Quotient) throw std::logic_error("POStructure: not a quotient");
  return node_->q;
}

std::string POStructure::describe() const {
  std::ostringstream os;
  switch (kind()) {
    case StructureKind::Min: os << "min(" << space().describe() << ")"; break;
    case StructureKind::Concrete: os << "concrete(" << space().describe() << " in B(l^p(" << images()[0].rows() << ")))"; break;
    case StructureKind::MaxLp: os << "maxlp(" << space().describe() << ")"; break;
    case StructureKind::Quotient: os << "quotient(" << parent().describe() << ")"; break;
    case StructureKind::Dual: os << "dual(" << parent().describe() << ")"; break;
  }
  os << " p=" << p().value();
  return os.str();
}

MatNormOptions MatNormOptions::fast(std::uint64_t seed) {
  MatNormOptions o;
  o.seed = seed;
  o.op = OpnormConfig::fast(seed);
  o.sup.seed = seed;
  o.sup.samples = 8;
  o.sup.bnb_max_dim = 0;
  o.sup.local_evals = 100;
  o.maxlp_starts = 1;
  o.maxlp_evals = 60;
  o.upper_evals = 0;
  o.quotient_evals = 40;
  o.cb_levels = 1;
  o.cb_starts = 1;
  o.cb_evals = 40;
  return o;
}

// ---------------------------------------------------------------------------
// matrix norms

namespace {

Bounds zero_bounds() { return Bounds::exact(0.0, "zero"); }

void require_dim(const FiniteNormedSpace& X, const MatrixOverSpace& u) {
  if (u.dim() != X.dim()) throw std::invalid_argument("matrix norm: entries do not live in the space");
}

double op_upper(const Mat& A, PExponent p, const OpnormConfig& cfg) {
  return opnorm_bounds(A, p, cfg).upper;
}

std::vector<Mat> unpack_images(const RealVec& v, Eigen::Index d, Eigen::Index r, Eigen::Index c) {
  const Vec z = opt::unpack(v);
  std::vector<Mat> out;
  for (Eigen::Index k = 0; k < d; ++k) out.push_back(Eigen::Map<const Mat>(z.data() + k * r * c, r, c));
  return out;
}

RealVec pack_images(const std::vector<Mat>& A) {
  Eigen::Index total = 0;
  for (const auto& a : A) total += a.size();
  Vec z(total);
  Eigen::Index off = 0;
  for (const auto& a : A) {
    z.segment(off, a.size()) = Eigen::Map<const Vec>(a.data(), a.size());
    off += a.size();
  }
  return opt::pack(z);
}

// certified upper bound of ||pi|| = sup_{x in B(X)} ||sum_k x_k A_k||
double contraction_upper(const FiniteNormedSpace& X, const std::vector<Mat>& A, PExponent p,
                         const OpnormConfig& cfg, const SupOptions& sup) {
  auto at = [&](const Vec& x) {
    Mat S = Mat::Zero(A[0].rows(), A[0].cols());
    for (Eigen::Index k = 0; k < x.size(); ++k) S += x[k] * A[k];
    return S;
  };
  if (const auto gens = finite_ball_generators(X)) {
    double best = 0.0;
    for (Eigen::Index g = 0; g < gens->rows(); ++g)
      best = std::max(best, op_upper(at(gens->row(g).transpose()), p, cfg));
    return best;
  }
  auto h = [&](const Vec& x) {
    const Bounds b = opnorm_bounds(at(x), p, cfg);
    return std::pair{b.lower, b.upper};
  };
  return sup_ball(X, h, sup).upper;
}

// ||u||_min = sup over x in B(l^p(c)), y in B(l^{p'}(r)) of ||sum_ij y_i x_j u_ij||_X,
// one branch and bound over both spheres when the norm of X is a formula
Bounds min_norm_joint(const FiniteNormedSpace& X, const MatrixOverSpace& u, PExponent p,
                      const MatNormOptions& o) {
  const Eigen::Index d = u.dim();
  auto v_of = [&](const Vec& x, const Vec& y) {
    Vec v(d);
    for (Eigen::Index k = 0; k < d; ++k) v[k] = (y.transpose() * u.slices()[k] * x)(0, 0);
    return v;
  };
  auto h = [&](const std::vector<Vec>& xy) {
    const Bounds b = norm(X, v_of(xy[0], xy[1]));
    return std::pair{b.lower, b.upper};
  };
  double a_priori = 0.0;
  for (Eigen::Index k = 0; k < d; ++k)
    if (!u.slices()[k].isZero()) a_priori += op_upper(u.slices()[k], p, o.op) * norm(X, Vec::Unit(d, k)).upper;
  bnb::Options bo;
  bo.rel_tol = o.sup.bnb_rel_tol;
  bo.max_evals = o.sup.bnb_max_evals;
  const std::vector<bnb::SphereFactor> f = {{u.cols(), p.value(), {}}, {u.rows(), p.conjugate(), {}}};
  const auto res = bnb::maximize(f, h, a_priori * (1.0 + 1e-12), bo);
  Bounds b;
  b.lower = res.lower;
  Vec bx, by;
  if (res.witness.size() == 2) {
    // local polish of the best cell centre
    const Eigen::Index c = u.cols();
    auto split = [&](const RealVec& z, Vec& x, Vec& y) {
      const Vec w = opt::unpack(z);
      x = w.head(c);
      y = w.tail(u.rows());
      const double nx = lp_norm(x, p.value()), ny = lp_norm(y, p.conjugate());
      if (nx > 0.0) x /= nx;
      if (ny > 0.0) y /= ny;
    };
    Vec z0(c + u.rows());
    z0 << res.witness[0], res.witness[1];
    Rng rng = make_rng(o.seed, 0x313);
    opt::SearchOptions so;
    so.max_evals = o.sup.local_evals;
    so.initial_step = 0.1;
    const auto pr = opt::pattern_search(
        [&](const RealVec& z) {
          Vec x, y;
          split(z, x, y);
          return -norm(X, v_of(x, y)).lower;
        },
        opt::pack(z0), so, rng);
    split(pr.x, bx, by);
    const double lo = norm(X, v_of(bx, by)).lower * (1.0 - 1e-14);  // rounding in the normalisation
    if (lo <= b.lower) {
      bx = res.witness[0];
      by = res.witness[1];
    }
    b.lower = std::max(b.lower, lo);
  }
  b.upper = std::max(res.lower, std::min(a_priori * (1.0 + 1e-12), res.upper * (1.0 + 1e-12)));
  b.lower_method = "min/joint-sphere-bnb";
  b.upper_method = res.upper * (1.0 + 1e-12) < a_priori ? "min/joint-sphere-bnb" : "min/decomposition";
  if (bx.size() > 0) b.witness = norming_functional(X, v_of(bx, by));
  return b;
}

}  // namespace

Bounds min_matrix_norm(const FiniteNormedSpace& X, const MatrixOverSpace& u, PExponent p,
                       const MatNormOptions& o) {
  require_dim(X, u);
  if (u.is_zero()) return zero_bounds();
  if (u.rows() == 1 && u.cols() == 1) {
    // Hahn-Banach: sup_phi |phi(x)| = ||x||
    SpaceOptions so;
    so.seed = o.seed;
    Bounds b = norm(X, u.entry(0, 0), so);
    b.lower_method = "min/level-one/" + b.lower_method;
    b.upper_method = "min/level-one/" + b.upper_method;
    return b;
  }
  const Eigen::Index r = u.rows(), c = u.cols();
  if (!finite_norming_set(X) && weighted_lp_form(X) && std::max(r, c) <= o.sup.bnb_max_dim)
    return min_norm_joint(X, u, p, o);
  // over a continuous ball the outer search refines, so each node gets a smaller inner budget
  OpnormConfig inner = o.op;
  if (!finite_norming_set(X)) inner.bnb_max_evals = std::min(inner.bnb_max_evals, 300);
  auto h = [&](const Vec& phi) {
    const Bounds b = opnorm_bounds(u.apply(phi), p, inner);
    return std::pair{b.lower, b.upper};
  };
  SupOptions so = o.sup;
  so.seed = o.seed;
  Bounds b = sup_dual_ball(X, h, so);
  b.lower_method = "min/" + b.lower_method;
  b.upper_method = "min/" + b.upper_method;
  return b;
}

Bounds concrete_matrix_norm(const std::vector<Mat>& images, const MatrixOverSpace& u, PExponent p,
                            const MatNormOptions& o) {
  if (static_cast<Eigen::Index>(images.size()) != u.dim())
    throw std::invalid_argument("concrete_matrix_norm: need one image per basis vector");
  if (u.is_zero()) return zero_bounds();
  Bounds b = opnorm_bounds(u.amplify(images), p, o.op);
  b.lower_method = "concrete/" + b.lower_method;
  b.upper_method = "concrete/" + b.upper_method;
  return b;
}

double decomposition_upper(const FiniteNormedSpace& X, const MatrixOverSpace& u, PExponent p,
                           int search_evals, std::uint64_t seed, const OpnormConfig& full) {
  require_dim(X, u);
  if (u.is_zero()) return 0.0;
  const Eigen::Index d = u.dim();
  const OpnormConfig cheap = OpnormConfig::fast(seed);
  // u = sum_r W_r (x) y_r with y_r the columns of Y, W_r = sum_k (Y^{-1})_{rk} U_k
  auto bound = [&](const Mat& Y, const OpnormConfig& cfg) {
    Eigen::FullPivLU<Mat> lu(Y);
    if (!lu.isInvertible()) return kInf;
    const Mat Yinv = lu.inverse();
    if (!Yinv.allFinite()) return kInf;
    double acc = 0.0;
    for (Eigen::Index r = 0; r < d; ++r) {
      Mat W = Mat::Zero(u.rows(), u.cols());
      for (Eigen::Index k = 0; k < d; ++k) W += Yinv(r, k) * u.slices()[k];
      if (W.cwiseAbs().maxCoeff() == 0.0) continue;
      acc += op_upper(W, p, cfg) * norm(X, Y.col(r)).upper;
    }
    return acc * (1.0 + 1e-12);
  };
  const Mat I = Mat::Identity(d, d);
  double best = bound(I, full);
  if (search_evals > 0 && d > 1) {
    Rng rng = make_rng(seed, 0xdec);
    auto f = [&](const RealVec& v) { return bound(opt::unpack(v, d, d), cheap); };
    opt::SearchOptions so;
    so.max_evals = search_evals;
    so.initial_step = 0.2;
    const auto res = opt::pattern_search(f, opt::pack(I), so, rng);
    best = std::min(best, bound(opt::unpack(res.x, d, d), full));
  }
  return best;
}

double factorization_upper(const FiniteNormedSpace& X, const MatrixOverSpace& u, PExponent p,
                           int search_evals, std::uint64_t seed) {
  require_dim(X, u);
  if (u.is_zero()) return 0.0;
  const Eigen::Index r = u.rows(), c = u.cols();
  // u = alpha diag(x_ij) beta with alpha_{i,(ij)} = a_ij, beta_{(ij),j} = b_ij,
  // x_ij = u_ij / (a_ij b_ij); ||alpha|| = max_i ||a_i.||_{p'}, ||beta|| = max_j ||b_.j||_p
  Eigen::MatrixXd nu(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) nu(i, j) = norm(X, u.entry(i, j)).upper;
  const double pp = p.value(), qq = p.conjugate();
  auto bound = [&](const Eigen::MatrixXd& la, const Eigen::MatrixXd& lb) {
    double amax = 0.0, bmax = 0.0, xmax = 0.0;
    for (Eigen::Index i = 0; i < r; ++i) {
      double s = 0.0;
      for (Eigen::Index j = 0; j < c; ++j)
        if (nu(i, j) > 0.0) s += std::exp(qq * la(i, j));
      amax = std::max(amax, std::pow(s, 1.0 / qq));
    }
    for (Eigen::Index j = 0; j < c; ++j) {
      double s = 0.0;
      for (Eigen::Index i = 0; i < r; ++i)
        if (nu(i, j) > 0.0) s += std::exp(pp * lb(i, j));
      bmax = std::max(bmax, std::pow(s, 1.0 / pp));
    }
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < c; ++j)
        if (nu(i, j) > 0.0) xmax = std::max(xmax, nu(i, j) * std::exp(-la(i, j) - lb(i, j)));
    return amax * bmax * xmax * (1.0 + 1e-12);
  };
  Eigen::MatrixXd half = Eigen::MatrixXd::Zero(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j)
      if (nu(i, j) > 0.0) half(i, j) = 0.5 * std::log(nu(i, j));
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(r, c);
  double best = std::min(bound(zero, zero), bound(half, half));
  if (search_evals > 0 && r * c > 1) {
    Rng rng = make_rng(seed, 0xfac);
    auto f = [&](const RealVec& v) {
      return bound(Eigen::Map<const Eigen::MatrixXd>(v.data(), r, c),
                   Eigen::Map<const Eigen::MatrixXd>(v.data() + r * c, r, c));
    };
    RealVec x0(2 * r * c);
    x0 << Eigen::Map<const RealVec>(half.data(), r * c), Eigen::Map<const RealVec>(half.data(), r * c);
    opt::SearchOptions so;
    so.max_evals = search_evals;
    so.initial_step = 0.5;
    best = std::min(best, opt::pattern_search(f, x0, so, rng).value);
  }
  return best;
}

Bounds maxlp_matrix_norm(const FiniteNormedSpace& X, const MatrixOverSpace& u, PExponent p,
                         int cap_m, const MatNormOptions& o) {
  require_dim(X, u);
  if (u.is_zero()) return zero_bounds();
  const Eigen::Index d = X.dim();
  const Eigen::Index n = std::max(u.rows(), u.cols());
  const Eigen::Index M = cap_m > 0 ? cap_m : n * d;

  // level-1 representations (functionals) give the min norm
  Bounds out = min_matrix_norm(X, u, p, o);
  out.lower_method = "maxlp/m=1/" + out.lower_method;
  if (u.rows() == 1 && u.cols() == 1) {  // every structure has the norm of X at level 1
    out.upper_method = "maxlp/level-one/" + out.upper_method;
    return out;
  }

  const OpnormConfig cheap = OpnormConfig::fast(o.seed);
  SupOptions cheap_sup = o.sup;
  cheap_sup.bnb_max_dim = 0;
  cheap_sup.samples = std::min(cheap_sup.samples, 8);
  Rng rng = make_rng(o.seed, 0x3a7);
  for (Eigen::Index m = 2; m <= M; ++m) {
    auto ratio = [&](const std::vector<Mat>& A, const OpnormConfig& cfg, const SupOptions& so, int starts) {
      const double cu = contraction_upper(X, A, p, cfg, so);
      if (!(cu > 0.0) || !std::isfinite(cu)) return 0.0;
      return boyd_lower(u.amplify(A), p, starts, o.seed).lower / cu;
    };
    std::vector<std::vector<Mat>> starts;
    if (m == u.rows() && m == u.cols()) {
      std::vector<Mat> A;
      for (const auto& U : u.slices()) A.push_back(U.adjoint());
      starts.push_back(A);
    }
    for (int s = 0; s < o.maxlp_starts; ++s) {
      std::vector<Mat> A;
      for (Eigen::Index k = 0; k < d; ++k) A.push_back(random_mat(rng, m, m));
      starts.push_back(A);
    }
    for (const auto& A0 : starts) {
      auto f = [&](const RealVec& v) { return -ratio(unpack_images(v, d, m, m), cheap, cheap_sup, 2); };
      opt::SearchOptions so;
      so.max_evals = o.maxlp_evals;
      so.initial_step = 0.2 * A0[0].cwiseAbs().maxCoeff() + 1e-3;
      const auto res = o.maxlp_evals > 0 ? opt::pattern_search(f, pack_images(A0), so, rng)
                                         : opt::SearchResult{pack_images(A0), f(pack_images(A0)), 1};
      const auto A = unpack_images(res.x, d, m, m);
      const double lo = ratio(A, o.op, o.sup, o.op.starts);
      if (lo > out.lower) {
        out.lower = lo;
        out.lower_method = "maxlp/m=" + std::to_string(m) + "/contractive-representation";
        out.witness.reset();
      }
    }
  }
  const double dec = decomposition_upper(X, u, p, o.upper_evals, o.seed, o.op);
  const double fac = factorization_upper(X, u, p, o.upper_evals, o.seed);
  out.upper = std::min(dec, fac);
  out.upper_method = dec <= fac ? "maxlp/decomposition" : "maxlp/diagonal-factorization";
  out.upper = std::max(out.upper, out.lower);
  return out;
}

Bounds quotient_matrix_norm(const POStructure& parent, const Mat& q, const MatrixOverSpace& u,
                            const MatNormOptions& o) {
  return quotient_matrix_norm(parent, q, FiniteNormedSpace::quotient_by_map(parent.space(), q), u, o);
}

Bounds quotient_matrix_norm(const POStructure& parent, const Mat& q, const FiniteNormedSpace& Z,
                            const MatrixOverSpace& u, const MatNormOptions& o) {
  require_dim(Z, u);
  if (u.is_zero()) return zero_bounds();
  const Mat L = q.completeOrthogonalDecomposition().pseudoInverse();
  const Mat K = null_space(q);
  const MatrixOverSpace v0 = u.mapped(L);
  if (K.cols() == 0) {  // q injective: the preimage is unique
    Bounds up = matrix_norm(parent, v0, o);
    up.lower_method = "quotient/unique-preimage/" + up.lower_method;
    up.upper_method = "quotient/unique-preimage/" + up.upper_method;
    return up;
  }
  Bounds up;
  up.upper = matrix_norm_upper(parent, v0, o);
  Bounds out;
  out.upper = up.upper;
  out.upper_method = "quotient/preimage";
  if (o.quotient_evals > 0) {
    const MatNormOptions inner = MatNormOptions::fast(o.seed);
    const Eigen::Index kd = K.cols(), r = u.rows(), c = u.cols();
    auto preimage = [&](const RealVec& v) {
      return v0 + MatrixOverSpace(unpack_images(v, kd, r, c)).mapped(K);
    };
    auto f = [&](const RealVec& v) { return matrix_norm_upper(parent, preimage(v), inner); };
    Rng rng = make_rng(o.seed, 0x9e7);
    opt::SearchOptions so;
    so.max_evals = o.quotient_evals;
    so.initial_step = 0.1 * std::max(1e-3, up.upper);
    const auto res = opt::pattern_search(f, RealVec::Zero(2 * kd * r * c), so, rng);
    const double cand = matrix_norm_upper(parent, preimage(res.x), o);
    if (cand < out.upper) out.upper = cand;
  }
  // any structure on Z dominates min(Z); quotients of max_{L^p} dominate max_{L^p}(Z)
  Bounds lo = parent.kind() == StructureKind::MaxLp ? maxlp_matrix_norm(Z, u, parent.p(), parent.cap_m(), o)
                                                    : min_matrix_norm(Z, u, parent.p(), o);
  out.lower = lo.lower;
  out.lower_method = "quotient/" + lo.lower_method;
  out.witness = lo.witness;
  out.upper = std::max(out.upper, out.lower);
  return out;
}

Bounds dual_matrix_norm(const POStructure& parent, const MatrixOverSpace& u, const MatNormOptions& o) {
  const auto Xs = FiniteNormedSpace::dual(parent.space());
  require_dim(Xs, u);
  if (u.is_zero()) return zero_bounds();
  if (u.rows() == 1 && u.cols() == 1) {
    // a functional is completely bounded with the same norm
    SpaceOptions so;
    so.seed = o.seed;
    Bounds b = dual_norm(parent.space(), u.entry(0, 0), so);
    b.lower_method = "dual/functional/" + b.lower_method;
    b.upper_method = "dual/functional/" + b.upper_method;
    return b;
  }
  CbOptions co;
  co.seed = o.seed;
  co.starts = o.cb_starts;
  co.evals = o.cb_evals;
  co.outer = o;
  co.outer.cb_levels = 1;
  co.inner = MatNormOptions::fast(o.seed);
  const CbEstimate est = cb_estimate(OperatorMap(parent, u.slices()), std::max(1, o.cb_levels), co);
  Bounds b;
  b.lower = est.sup_lower;
  b.upper = std::max(est.upper, b.lower);
  for (const auto& l : est.levels)
    if (l.lower == est.sup_lower) {
      b.lower_method = "dual/" + l.lower_method;
      b.witness = l.witness;
    }
  b.upper_method = "dual/decomposition";
  return b;
}

Bounds matrix_norm(const POStructure& S, const MatrixOverSpace& u, const MatNormOptions& o) {
  require_dim(S.space(), u);
  switch (S.kind()) {
    case StructureKind::Min: return min_matrix_norm(S.space(), u, S.p(), o);
    case StructureKind::Concrete: return concrete_matrix_norm(S.images(), u, S.p(), o);
    case StructureKind::MaxLp: return maxlp_matrix_norm(S.space(), u, S.p(), S.cap_m(), o);
    case StructureKind::Quotient: return quotient_matrix_norm(S.parent(), S.quotient_map(), S.space(), u, o);
    case StructureKind::Dual: return dual_matrix_norm(S.parent(), u, o);
  }
  throw std::logic_error("matrix_norm: unknown structure kind");
}

double matrix_norm_upper(const POStructure& S, const MatrixOverSpace& u, const MatNormOptions& o) {
  require_dim(S.space(), u);
  if (u.is_zero()) return 0.0;
  if (S.kind() == StructureKind::MaxLp) {
    const double dec = decomposition_upper(S.space(), u, S.p(), o.upper_evals, o.seed, o.op);
    return std::min(dec, factorization_upper(S.space(), u, S.p(), o.upper_evals, o.seed));
  }
  return matrix_norm(S, u, o).upper;
}

// ---------------------------------------------------------------------------
// axioms

std::vector<AxiomCheck> check_axioms(const POStructure& S, const AxiomOptions& o) {
  std::vector<AxiomCheck> out;
  Rng rng = make_rng(o.seed, 0xa1);
  const Eigen::Index d = S.space().dim();
  const PExponent p = S.p();
  auto within = [&](double lhs, double rhs) { return lhs <= rhs + o.tol * std::max(1.0, std::abs(rhs)); };
  for (int s = 0; s < o.samples; ++s) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(o.max_level));
    const Eigen::Index m = 1 + static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(o.max_level));
    const MatrixOverSpace u = random_matrix_over(rng, n, n, d);
    const MatrixOverSpace v = random_matrix_over(rng, m, m, d);
    const Mat alpha = random_mat(rng, n, n), beta = random_mat(rng, n, n);
    MatNormOptions no = o.norms;
    no.seed = o.norms.seed + static_cast<std::uint64_t>(s);
    const Bounds bu = matrix_norm(S, u, no);
    const Bounds bv = matrix_norm(S, v, no);
    const Bounds bs = matrix_norm(S, u.direct_sum(v), no);
    const Bounds bc = matrix_norm(S, u.compress(alpha, beta), no);
    const double na = opnorm_bounds(alpha, p).upper, nb = opnorm_bounds(beta, p).upper;
    const std::string tag = "/" + std::to_string(s);

    Bounds mx;
    mx.lower = std::max(bu.lower, bv.lower);
    mx.upper = std::max(bu.upper, bv.upper);
    out.push_back({"D_inf/sum-below-max" + tag, within(bs.lower, mx.upper), bs, mx, o.tol});
    out.push_back({"D_inf/max-below-sum" + tag, within(mx.lower, bs.upper), mx, bs, o.tol});
    Bounds rhs;
    rhs.lower = 0.0;
    rhs.upper = na * bu.upper * nb;
    out.push_back({"M_p/compression" + tag, within(bc.lower, rhs.upper), bc, rhs, o.tol});
  }
  return out;
}

}  // namespace pops
