#include "pops/tensor.hpp"

#include "pops/opnorm.hpp"
#include "pops/optimize.hpp"
#include "pops/random.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <optional>

namespace pops {

namespace {

constexpr double kSlack = 1e-12;
double inflate(double u) { return u * (1.0 + kSlack); }

Vec vec_of(const Mat& M) { return Eigen::Map<const Vec>(M.data(), M.size()); }
Mat mat_of(const Vec& v, Eigen::Index r, Eigen::Index c) { return Eigen::Map<const Mat>(v.data(), r, c); }

bool is_zero(const Mat& c) { return c.size() == 0 || c.cwiseAbs().maxCoeff() == 0.0; }

}  // namespace

TensorElem::TensorElem(FiniteNormedSpace x, FiniteNormedSpace y, Mat coeffs)
    : X(std::move(x)), Y(std::move(y)), c(std::move(coeffs)) {
  if (c.rows() != X.dim() || c.cols() != Y.dim())
    throw std::invalid_argument("TensorElem: coefficient shape does not match the spaces");
}

TensorElem TensorElem::elementary(const FiniteNormedSpace& xs, const Vec& x,
                                  const FiniteNormedSpace& ys, const Vec& y) {
  return TensorElem(xs, ys, x * y.transpose());
}

Bounds inj_norm(const TensorElem& t, const SupOptions& o) {
  const auto& X = t.X;
  const auto& Y = t.Y;
  if (is_zero(t.c)) {
    Bounds b = Bounds::exact(0.0, "zero");
    b.witness = Vec::Zero(X.dim() + Y.dim());
    return b;
  }
  // sup_phi ||C^T phi||_Y  or  sup_psi ||C psi||_X, whichever side is exact
  const bool use_x = finite_norming_set(X).has_value() || !finite_norming_set(Y).has_value();
  const Mat C = use_x ? Mat(t.c.transpose()) : t.c;
  const auto& A = use_x ? X : Y;  // outer sup over the dual ball of A
  const auto& B = use_x ? Y : X;
  // both sides weighted l^q with the same q: an operator norm on l^q
  const auto fa = weighted_lp_form(FiniteNormedSpace::dual(A));
  const auto fb = weighted_lp_form(B);
  if (fa && fb && fa->q == fb->q && fa->q > 1.0 && std::isfinite(fa->q)) {
    OpnormConfig cfg;
    cfg.seed = o.seed;
    cfg.bnb_max_dim = o.bnb_max_dim;
    cfg.bnb_max_evals = o.bnb_max_evals;
    if (o.bnb_max_dim == 0) cfg.starts = 8;
    Bounds s = opnorm_weighted(C, PExponent(fa->q), {fa->w.data(), std::size_t(fa->w.size())},
                               {fb->w.data(), std::size_t(fb->w.size())}, cfg);
    const Vec phi = *s.witness / lp_norm(*s.witness, fa->q, {fa->w.data(), std::size_t(fa->w.size())});
    const Vec psi = norming_functional(B, C * phi);
    Vec w(X.dim() + Y.dim());
    if (use_x)
      w << phi, psi;
    else
      w << psi, phi;
    s.witness = w;
    s.lower_method = "inj/opnorm-" + s.lower_method;
    s.upper_method = "inj/opnorm-" + s.upper_method;
    return s;
  }
  auto h = [&](const Vec& phi) {
    const Bounds nb = norm(B, C * phi);
    return std::pair{nb.lower, nb.upper};
  };
  Bounds s = sup_dual_ball(A, h, o);
  if (s.witness) {
    const Vec phi = *s.witness;
    const Vec psi = norming_functional(B, C * phi);
    Vec w(X.dim() + Y.dim());
    if (use_x)
      w << phi, psi;
    else
      w << psi, phi;
    s.witness = w;
  }
  s.lower_method = "inj/" + s.lower_method;
  s.upper_method = "inj/" + s.upper_method;
  return s;
}

namespace {

struct Atom {
  Vec x, y;
  double cost;  // certified upper bound of ||x|| ||y||
};

Atom make_atom(const FiniteNormedSpace& X, const Vec& x, const FiniteNormedSpace& Y,
               const Vec& y) {
  const double nx = norm(X, x).upper, ny = norm(Y, y).upper;
  return {x / nx, y / ny, inflate(inflate(norm(X, x / nx).upper * norm(Y, y / ny).upper))};
}

}  // namespace

Bounds proj_norm(const TensorElem& t, const ProjOptions& o) {
  const auto& X = t.X;
  const auto& Y = t.Y;
  const Eigen::Index dx = X.dim(), dy = Y.dim();
  if (is_zero(t.c)) {
    Bounds b = Bounds::exact(0.0, "zero");
    b.witness = Vec::Zero(dx * dy);
    return b;
  }
  const Vec cvec = vec_of(t.c);
  {
    // rank one up to rounding: c = x y^T + r
    Eigen::Index pi, pj;
    t.c.cwiseAbs().maxCoeff(&pi, &pj);
    const Vec x = t.c.col(pj);
    const Vec y = t.c.row(pi).transpose() / t.c(pi, pj);
    const Mat r = t.c - x * y.transpose();
    if (r.cwiseAbs().maxCoeff() <= 1e-13 * std::abs(t.c(pi, pj))) {
      const Bounds bx = norm(X, x), by = norm(Y, y);
      double slack = 0.0;
      for (Eigen::Index i = 0; i < dx; ++i)
        for (Eigen::Index j = 0; j < dy; ++j)
          if (r(i, j) != Complex(0.0))
            slack += std::abs(r(i, j)) * norm(X, Vec::Unit(dx, i)).upper * norm(Y, Vec::Unit(dy, j)).upper;
      if (bx.witness && by.witness) {
        const Mat T = *bx.witness * by.witness->transpose();
        Bounds b;
        b.upper = bx.upper * by.upper + slack;
        b.lower = std::min(b.upper, std::abs(t.c.cwiseProduct(T).sum()));
        b.upper_method = "rank-one";
        b.lower_method = "rank-one/norming-functionals";
        b.witness = vec_of(T);
        return b;
      }
    }
  }
  const TensorElem dual_shell(FiniteNormedSpace::dual(X), FiniteNormedSpace::dual(Y),
                              Mat::Zero(dx, dy));

  // initial dictionary: coordinate atoms and the singular pairs of c
  std::vector<Atom> atoms;
  for (Eigen::Index i = 0; i < dx; ++i)
    for (Eigen::Index j = 0; j < dy; ++j)
      atoms.push_back(make_atom(X, Vec::Unit(dx, i), Y, Vec::Unit(dy, j)));
  {
    Eigen::JacobiSVD<Mat> svd(t.c, Eigen::ComputeThinU | Eigen::ComputeThinV);
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k)
      if (svd.singularValues()[k] > 1e-12 * svd.singularValues()[0])
        atoms.push_back(make_atom(X, svd.matrixU().col(k), Y, svd.matrixV().col(k).conjugate()));
  }

  Rng rng = make_rng(o.seed, 0x51);
  Bounds best;
  best.upper = kInf;
  best.lower = 0.0;
  best.upper_method = "atomic-decomposition";
  best.lower_method = "dual-tensor";

  // searches use a cheap injective norm; certificates use the full one
  SupOptions cheap = o.sup;
  cheap.bnb_max_dim = 0;
  cheap.samples = std::min(cheap.samples, 12);
  auto inj_of = [&](const Mat& T, const SupOptions& so) {
    TensorElem dt = dual_shell;
    dt.c = T;
    return inj_norm(dt, so);
  };
  auto certify = [&](const Mat& T, const SupOptions& so) {
    const Bounds ib = inj_of(T, so);
    if (ib.upper <= 0.0) return;
    const double lo = std::min(std::abs(pairing(vec_of(T), cvec)) / ib.upper, best.upper);
    if (lo > best.lower) {
      best.lower = lo;
      best.witness = Vec(vec_of(T) / ib.upper);
    }
  };
  // optimistic ratio: pairing over a lower bound of the injective norm
  auto ratio = [&](const Mat& T) {
    const double il = inj_of(T, cheap).lower;
    return il > 0.0 ? std::abs(pairing(vec_of(T), cvec)) / il : 0.0;
  };
  auto tight = [&] { return best.upper - best.lower <= o.rel_tol * best.upper; };

  Mat best_T;
  double best_ratio = 0.0;
  std::vector<std::pair<Vec, Vec>> active;  // scaled atoms of the best decomposition
  for (int round = 0; round < o.max_rounds; ++round) {
    const Eigen::Index K = static_cast<Eigen::Index>(atoms.size());
    Mat A(dx * dy, K);
    RealVec cost(K);
    for (Eigen::Index k = 0; k < K; ++k) {
      A.col(k) = vec_of(atoms[k].x * atoms[k].y.transpose());
      cost[k] = atoms[k].cost;
    }
    // master: min sum_k cost_k |a_k|  s.t.  A a = vec(c)
    const Vec a0 = A.completeOrthogonalDecomposition().solve(cvec);
    const Mat N = null_space(A);
    Vec a = a0;
    if (N.cols() > 0) a += N * opt::affine_min_lq(a0, N, 1.0, cost, rng).t;

    // certified upper: the decomposition plus a crude bound on the residual
    const Mat R = t.c - mat_of(A * a, dx, dy);
    double resid = 0.0;
    for (Eigen::Index i = 0; i < dx; ++i)
      for (Eigen::Index j = 0; j < dy; ++j)
        if (R(i, j) != Complex(0.0))
          resid += std::abs(R(i, j)) * norm(X, Vec::Unit(dx, i)).upper * norm(Y, Vec::Unit(dy, j)).upper;
    const double up = inflate((a.cwiseAbs().cwiseProduct(cost)).sum() + resid);
    if (up < best.upper) {
      best.upper = up;
      active.clear();
      for (Eigen::Index k = 0; k < K; ++k)
        if (a[k] != Complex(0.0)) active.emplace_back(a[k] * atoms[k].x, atoms[k].y);
    }

    // dual candidates: complementary slackness on the active atoms,
    // <atom_k, T> = cost_k conj(sgn a_k), and the reweighted normal equations
    // T = conj(lambda), (A W^{-1} A^*) lambda = vec(c), W = diag(cost_k / |a_k|)
    const double amax = a.cwiseAbs().maxCoeff();
    std::vector<Eigen::Index> act;
    for (Eigen::Index k = 0; k < K; ++k)
      if (std::abs(a[k]) > 1e-6 * amax) act.push_back(k);
    Mat AS(dx * dy, Eigen::Index(act.size()));
    Vec rhs(Eigen::Index(act.size()));
    for (std::size_t i = 0; i < act.size(); ++i) {
      AS.col(Eigen::Index(i)) = A.col(act[i]);
      rhs[Eigen::Index(i)] = cost[act[i]] * std::conj(a[act[i]] / std::abs(a[act[i]]));
    }
    const Vec slack = AS.transpose().completeOrthogonalDecomposition().solve(rhs);
    RealVec winv(K);
    for (Eigen::Index k = 0; k < K; ++k)
      winv[k] = std::max(std::abs(a[k]), 1e-12 * amax) / cost[k];
    const Mat G = A * winv.cast<Complex>().asDiagonal() * A.adjoint();
    const Vec lam = G.completeOrthogonalDecomposition().solve(cvec);
    for (const Vec& cand : {slack, Vec(lam.conjugate())}) {
      if (!cand.allFinite() || cand.cwiseAbs().maxCoeff() == 0.0) continue;
      const Mat Tc = mat_of(cand, dx, dy);
      const double r = ratio(Tc);
      if (r > best_ratio) {
        best_ratio = r;
        best_T = Tc;
      }
    }
    if (best_T.size() == 0) break;
    if (round == 0) {
      certify(best_T, o.sup);
      if (tight()) break;
    }
    if (best_ratio >= best.upper * (1.0 - o.rel_tol)) break;

    // local search on the dual tensor
    if (o.refine_evals > 0) {
      auto f = [&](const RealVec& v) { return -ratio(opt::unpack(v, dx, dy)); };
      opt::SearchOptions so;
      so.max_evals = o.refine_evals;
      so.initial_step = 0.05 * best_T.cwiseAbs().maxCoeff();
      const auto res = opt::pattern_search(f, opt::pack(best_T), so, rng);
      if (-res.value > best_ratio) {
        best_ratio = -res.value;
        best_T = opt::unpack(res.x, dx, dy);
      }
    }

    // new atoms: near-norming pairs of T from alternating maximisation of
    // |x^T T y| over the unit balls, started at the injective witness and at
    // random points
    std::vector<Vec> starts;
    if (const auto w = inj_of(best_T, cheap).witness) starts.push_back(w->head(dx));
    const Mat bs = ball_sample(X, o.atom_starts, o.seed + 1000 * std::uint64_t(round + 1));
    for (Eigen::Index i = 0; i < bs.rows(); ++i) starts.push_back(bs.row(i).transpose());
    for (Vec x : starts) {
      Vec y;
      bool ok = true;
      for (int it = 0; it < 30 && ok; ++it) {
        const auto wy = dual_norm(Y, best_T.transpose() * x).witness;
        if (!wy) ok = false;
        else y = *wy;
        const auto wx = ok ? dual_norm(X, best_T * y).witness : std::nullopt;
        if (!wx) ok = false;
        else x = *wx;
      }
      if (ok && x.cwiseAbs().maxCoeff() > 0.0 && y.cwiseAbs().maxCoeff() > 0.0)
        atoms.push_back(make_atom(X, x, Y, y));
    }
  }
  if (!tight() && o.polish_evals > 0 && !active.empty()) {
    // local search over the atoms themselves; what they miss of c is paid
    // for through its singular value or coordinate decomposition
    const Eigen::Index r = static_cast<Eigen::Index>(active.size());
    std::vector<double> ex(dx), ey(dy);
    for (Eigen::Index i = 0; i < dx; ++i) ex[i] = norm(X, Vec::Unit(dx, i)).upper;
    for (Eigen::Index j = 0; j < dy; ++j) ey[j] = norm(Y, Vec::Unit(dy, j)).upper;
    auto rest = [&](const Mat& Rm) {
      double coord = 0.0;
      for (Eigen::Index i = 0; i < dx; ++i)
        for (Eigen::Index j = 0; j < dy; ++j) coord += std::abs(Rm(i, j)) * ex[i] * ey[j];
      if (coord == 0.0) return 0.0;
      Eigen::JacobiSVD<Mat> svd(Rm, Eigen::ComputeThinU | Eigen::ComputeThinV);
      double sv = 0.0;
      for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k)
        if (svd.singularValues()[k] > 0.0)
          sv += svd.singularValues()[k] * norm(X, svd.matrixU().col(k)).upper *
                norm(Y, svd.matrixV().col(k).conjugate()).upper;
      return std::min(coord, sv);
    };
    auto total = [&](const RealVec& v) {
      const Vec z = opt::unpack(v);
      Mat Rm = t.c;
      double acc = 0.0;
      for (Eigen::Index k = 0; k < r; ++k) {
        const Vec x = z.segment(k * (dx + dy), dx), y = z.segment(k * (dx + dy) + dx, dy);
        Rm -= x * y.transpose();
        acc += norm(X, x).upper * norm(Y, y).upper;
      }
      return inflate(inflate(acc + rest(Rm)));
    };
    Vec z0(r * (dx + dy));
    for (Eigen::Index k = 0; k < r; ++k) {
      // balance the scale between the two factors
      const double nx = norm(X, active[k].first).upper, ny = norm(Y, active[k].second).upper;
      const double g = std::sqrt(nx * ny);
      z0.segment(k * (dx + dy), dx) = active[k].first * (g / nx);
      z0.segment(k * (dx + dy) + dx, dy) = active[k].second * (g / ny);
    }
    opt::SearchOptions so;
    so.max_evals = o.polish_evals;
    so.initial_step = 0.05 * z0.cwiseAbs().maxCoeff();
    const auto res = opt::pattern_search(total, opt::pack(z0), so, rng);
    best.upper = std::min(best.upper, total(res.x));
  }
  if (best_T.size() > 0 && !tight()) {
    SupOptions fine = o.sup;
    fine.bnb_max_evals = std::max(fine.bnb_max_evals, o.certify_evals);
    certify(best_T, fine);
  }
  best.upper = std::max(best.upper, best.lower);
  return best;
}

NuclearSpace::NuclearSpace(Eigen::Index m_, PExponent p_) : m(m_), p(p_) {
  if (m < 1) throw std::invalid_argument("NuclearSpace: m must be >= 1");
}

FiniteNormedSpace NuclearSpace::left() const { return FiniteNormedSpace::lp(m, p.conjugate()); }
FiniteNormedSpace NuclearSpace::right() const { return FiniteNormedSpace::lp(m, p.value()); }

Bounds nuclear_norm(const NuclearSpace& N, const Mat& t, const ProjOptions& o) {
  if (t.rows() != N.m || t.cols() != N.m)
    throw std::invalid_argument("nuclear_norm: element must be m by m");
  return proj_norm(TensorElem(N.left(), N.right(), t), o);
}

Bounds pproj_norm_level1(const TensorElem& t, const POStructure& V, const POStructure& W, int levels,
                         const ProjOptions& po, const CbOptions& cb) {
  if (V.space().dim() != t.X.dim() || W.space().dim() != t.Y.dim())
    throw std::invalid_argument("pproj_norm_level1: structures do not match the tensor");
  if (V.p() != W.p()) throw std::invalid_argument("pproj_norm_level1: structures use different p");
  if (levels < 1) throw std::invalid_argument("pproj_norm_level1: need at least one level");
  const Bounds pb = proj_norm(t, po);
  Bounds b;
  b.upper = pb.upper;
  b.upper_method = "pproj/" + pb.upper_method;
  b.lower = 0.0;
  b.lower_method = "pproj/zero";
  if (pb.upper == 0.0 || !pb.witness) return b;
  // (T e_i)(f_j) = T_ij, so T : V -> W* has coefficient matrix T^T
  const Mat T = Eigen::Map<const Mat>(pb.witness->data(), t.X.dim(), t.Y.dim());
  // target norms in M_n(W*) only need lower bounds: search them at level 1
  CbOptions co = cb;
  co.outer.cb_levels = 1;
  co.inner.cb_levels = 1;
  const CbEstimate est = cb_estimate(LinearMap(V, POStructure::dual(W), T.transpose()), levels, co);
  double s = est.levels[0].upper;
  for (std::size_t n = 1; n < est.levels.size(); ++n) s = std::max(s, est.levels[n].lower);
  if (!(s > 0.0) || !std::isfinite(s)) return b;
  b.lower = std::min(b.upper, std::abs(t.c.cwiseProduct(T).sum()) / s);
  b.lower_method = "pproj/cb-levels<=" + std::to_string(levels) + "/searched";
  b.witness = Vec(Eigen::Map<const Vec>(T.data(), T.size()) / s);
  return b;
}

}  // namespace pops
