#include "pops/cbmaps.hpp"

#include "pops/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace pops {

LinearMap::LinearMap(POStructure v, POStructure w, Mat t)
    : source(std::move(v)), target(std::move(w)), coeffs(std::move(t)) {
  if (coeffs.rows() != target.space().dim() || coeffs.cols() != source.space().dim())
    throw std::invalid_argument("LinearMap: coefficient matrix must be dim W by dim V");
  if (source.p() != target.p()) throw std::invalid_argument("LinearMap: structures use different p");
}

OperatorMap::OperatorMap(POStructure v, std::vector<Mat> imgs)
    : source(std::move(v)), images(std::move(imgs)) {
  if (static_cast<Eigen::Index>(images.size()) != source.space().dim())
    throw std::invalid_argument("OperatorMap: need one image per basis vector");
  for (const auto& A : images)
    if (A.rows() != images[0].rows() || A.cols() != images[0].cols() || A.size() == 0)
      throw std::invalid_argument("OperatorMap: images must share a nonempty shape");
}

namespace {

using TargetNorm = std::function<Bounds(const MatrixOverSpace&, const MatNormOptions&)>;

struct Problem {
  POStructure source;
  TargetNorm target;
  double cb_upper = kInf;  // certified upper bound valid at every level
};

// the level-1 matrix norm of the source is the norm of its space
bool banach_level_one(const POStructure& S) { return S.kind() != StructureKind::Concrete; }

Vec to_witness(const MatrixOverSpace& u) {
  Eigen::Index total = 0;
  for (const auto& s : u.slices()) total += s.size();
  Vec w(total);
  Eigen::Index off = 0;
  for (const auto& s : u.slices()) {
    w.segment(off, s.size()) = Eigen::Map<const Vec>(s.data(), s.size());
    off += s.size();
  }
  return w;
}

MatrixOverSpace from_flat(const Vec& z, Eigen::Index d, Eigen::Index n) {
  std::vector<Mat> s;
  for (Eigen::Index k = 0; k < d; ++k) s.push_back(Eigen::Map<const Mat>(z.data() + k * n * n, n, n));
  return MatrixOverSpace(std::move(s));
}

struct Level {
  Bounds b;
  std::optional<MatrixOverSpace> best;
};

Level level_one_banach(const Problem& P, const CbOptions& o) {
  const auto& X = P.source.space();
  auto single = [](const Vec& x) { return MatrixOverSpace::scalar_times(Mat::Ones(1, 1), x); };
  auto h = [&](const Vec& x) {
    const Bounds b = P.target(single(x), o.outer);
    return std::pair{b.lower, b.upper};
  };
  SupOptions so = o.outer.sup;
  so.seed = o.seed;
  Level L;
  L.b = sup_ball(X, h, so);
  if (L.b.witness) L.best = single(*L.b.witness);
  if (L.best) L.b.witness = to_witness(*L.best);
  L.b.lower_method = "level1/" + L.b.lower_method;
  L.b.upper_method = "level1/" + L.b.upper_method;
  return L;
}

Level search_level(const Problem& P, int n, const std::vector<MatrixOverSpace>& seeds, const CbOptions& o) {
  const Eigen::Index d = P.source.space().dim();
  auto value = [&](const MatrixOverSpace& u, const MatNormOptions& no) {
    if (u.is_zero()) return 0.0;
    const double su = matrix_norm_upper(P.source, u, no);
    if (!(su > 0.0) || !std::isfinite(su)) return 0.0;
    return P.target(u, no).lower / su;
  };
  Rng rng = make_rng(o.seed, 0xcb00 + static_cast<std::uint64_t>(n));
  std::vector<MatrixOverSpace> starts = seeds;
  for (int s = 0; s < o.starts; ++s) starts.push_back(random_matrix_over(rng, n, n, d));

  std::optional<MatrixOverSpace> best_inner;
  double best_inner_val = -1.0;
  for (const auto& u0 : starts) {
    auto f = [&](const RealVec& v) { return -value(from_flat(opt::unpack(v), d, n), o.inner); };
    opt::SearchOptions so;
    so.max_evals = o.evals;
    double scale = 0.0;
    for (const auto& s : u0.slices()) scale = std::max(scale, s.cwiseAbs().maxCoeff());
    so.initial_step = 0.2 * std::max(scale, 1e-3);
    const auto res = opt::pattern_search(f, opt::pack(to_witness(u0)), so, rng);
    if (-res.value > best_inner_val) {
      best_inner_val = -res.value;
      best_inner = from_flat(opt::unpack(res.x), d, n);
    }
  }
  Level L;
  L.b.lower = 0.0;
  L.b.lower_method = "level" + std::to_string(n) + "/search";
  std::vector<MatrixOverSpace> cands = seeds;
  if (best_inner) cands.push_back(*best_inner);
  for (const auto& u : cands) {
    const double v = value(u, o.outer);
    if (v > L.b.lower || !L.best) {
      L.b.lower = std::max(v, L.b.lower);
      L.best = u;
    }
  }
  if (L.best) L.b.witness = to_witness(*L.best);
  return L;
}

CbEstimate estimate(const Problem& P, int N, const CbOptions& o) {
  if (N < 1) throw std::invalid_argument("cb_estimate: need at least one level");
  CbEstimate est;
  const bool banach = banach_level_one(P.source);
  Level prev = banach ? level_one_banach(P, o) : search_level(P, 1, {}, o);
  if (!banach) prev.b.upper = P.cb_upper;
  prev.b.upper = std::min(prev.b.upper, P.cb_upper);
  est.levels.push_back(prev.b);
  const double norm_upper = banach ? prev.b.upper : kInf;
  for (int n = 2; n <= N; ++n) {
    std::vector<MatrixOverSpace> seeds;
    if (prev.best) seeds.push_back(prev.best->direct_sum(MatrixOverSpace(1, 1, prev.best->dim())));
    Level cur = search_level(P, n, seeds, o);
    // ||T^(n)|| <= n^2 ||T||: split u into its n^2 entries
    cur.b.upper = std::min(static_cast<double>(n) * n * norm_upper, P.cb_upper);
    cur.b.upper_method = std::isfinite(P.cb_upper) && P.cb_upper <= n * n * norm_upper
                             ? "cb-decomposition"
                             : "entrywise";
    cur.b.upper = std::max(cur.b.upper, cur.b.lower);
    est.levels.push_back(cur.b);
    prev = std::move(cur);
  }
  double run = 0.0;
  for (std::size_t i = 0; i < est.levels.size(); ++i) {
    const double lo = est.levels[i].lower;
    if (i > 0 && lo < est.levels[i - 1].lower - 1e-9 * std::max(1.0, est.levels[i - 1].lower))
      est.monotone = false;
    run = std::max(run, lo);
  }
  est.sup_lower = run;
  est.upper = std::max(P.cb_upper, run);
  return est;
}

Problem problem_of(const LinearMap& T) {
  Problem P{T.source, [T](const MatrixOverSpace& u, const MatNormOptions& no) {
              return matrix_norm(T.target, u.mapped(T.coeffs), no);
            }};
  return P;
}

Problem problem_of(const OperatorMap& T, const CbOptions& o) {
  const PExponent p = T.source.p();
  Problem P{T.source, [T, p](const MatrixOverSpace& u, const MatNormOptions& no) {
              return opnorm_bounds(u.amplify(T.images), p, no.op);
            }};
  if (banach_level_one(T.source)) {
    // x -> sum_r phi_r(x) W_r has cb norm at most sum_r ||phi_r|| ||W_r||
    const auto Xs = FiniteNormedSpace::dual(T.source.space());
    const MatrixOverSpace imgs(T.images);
    P.cb_upper = decomposition_upper(Xs, imgs, p, o.outer.upper_evals, o.seed, o.outer.op);
    if (T.images[0].rows() == 1 && T.images[0].cols() == 1) {
      Vec phi(static_cast<Eigen::Index>(T.images.size()));
      for (std::size_t k = 0; k < T.images.size(); ++k) phi[Eigen::Index(k)] = T.images[k](0, 0);
      P.cb_upper = std::min(P.cb_upper, dual_norm(T.source.space(), phi).upper);
    }
  }
  return P;
}

}  // namespace

CbEstimate cb_estimate(const LinearMap& T, int levels, const CbOptions& o) {
  return estimate(problem_of(T), levels, o);
}

CbEstimate cb_estimate(const OperatorMap& T, int levels, const CbOptions& o) {
  return estimate(problem_of(T, o), levels, o);
}

Bounds level_norm(const LinearMap& T, int n, const CbOptions& o) {
  if (n < 1) throw std::invalid_argument("level_norm: n must be >= 1");
  return cb_estimate(T, n, o).levels.back();
}

Bounds level_norm(const OperatorMap& T, int n, const CbOptions& o) {
  if (n < 1) throw std::invalid_argument("level_norm: n must be >= 1");
  return cb_estimate(T, n, o).levels.back();
}

}  // namespace pops
