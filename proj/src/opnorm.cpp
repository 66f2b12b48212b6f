#include "pops/opnorm.hpp"

#include "pops/random.hpp"
#include "pops/sphere_bnb.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace pops {

namespace {

// relative slack applied to every floating-point upper bound
constexpr double kRoundSlack = 1e-12;

double inflate(double u) { return u * (1.0 + kRoundSlack); }

Vec normalized(const Vec& x, double p) {
  const double n = lp_norm(x, p);
  return n > 0.0 ? Vec(x / n) : x;
}

bool is_zero(const Mat& A) { return A.size() == 0 || A.cwiseAbs().maxCoeff() == 0.0; }

}  // namespace

std::vector<Block> connected_blocks(const Mat& A) {
  const Eigen::Index r = A.rows(), c = A.cols();
  // union-find over rows [0, r) and cols [r, r + c)
  std::vector<Eigen::Index> parent(r + c);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Eigen::Index i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i)
      if (A(i, j) != Complex(0.0)) parent[find(i)] = find(r + j);

  std::vector<Block> blocks;
  std::vector<Eigen::Index> slot(r + c, -1);
  for (Eigen::Index i = 0; i < r + c; ++i) {
    const auto root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<Eigen::Index>(blocks.size());
      blocks.emplace_back();
    }
    auto& b = blocks[slot[root]];
    if (i < r)
      b.rows.push_back(i);
    else
      b.cols.push_back(i - r);
  }
  // zero rows/cols form blocks with an empty side; they carry no norm
  std::erase_if(blocks, [](const Block& b) { return b.rows.empty() || b.cols.empty(); });
  return blocks;
}

Bounds boyd_lower(const Mat& A, const PExponent& p, int starts, std::uint64_t seed,
                  int max_iter, double stall_tol) {
  if (starts < 1) throw std::invalid_argument("boyd_lower: starts must be >= 1");
  const Eigen::Index n = A.cols();
  Bounds out;
  out.upper = kInf;
  out.lower_method = "boyd-multistart";
  if (is_zero(A)) {
    out.lower = 0.0;
    out.witness = Vec::Zero(n);
    return out;
  }
  const double pp = p.value(), qq = p.conjugate();
  Rng rng = make_rng(seed, 0xb01d);

  // deterministic starts first: l^2 top singular vector, the ones vector and
  // the coordinate vectors; then seeded random starts
  std::vector<Vec> init;
  {
    Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinV);
    init.push_back(svd.matrixV().col(0));
  }
  init.push_back(Vec::Ones(n));
  for (Eigen::Index j = 0; j < n; ++j) init.push_back(Vec::Unit(n, j));

  double best = -1.0;
  Vec best_x;
  for (int s = 0; s < starts; ++s) {
    Vec x = s < static_cast<int>(init.size()) ? init[s] : random_vec(rng, n);
    x = normalized(x, pp);
    double prev = -1.0;
    for (int it = 0; it <= max_iter; ++it) {
      const Vec y = A * x;
      const double val = lp_norm(y, pp);
      if (val > best) {
        best = val;
        best_x = x;
      }
      if (val == 0.0 || std::abs(val - prev) <= stall_tol * val) break;
      prev = val;
      const Vec z = A.adjoint() * duality_map(y, pp);
      const Vec xn = duality_map(z, qq);
      if (lp_norm(xn, pp) == 0.0) break;
      x = normalized(xn, pp);
    }
  }
  out.lower = best;
  out.witness = best_x;
  return out;
}

double interp_upper(const Mat& A, const PExponent& p) {
  const double n1 = opnorm_closed(A, ClosedP::One);
  const double ni = opnorm_closed(A, ClosedP::Inf);
  return inflate(std::pow(n1, 1.0 / p.value()) * std::pow(ni, 1.0 / p.conjugate()));
}

double schur_upper(const Eigen::MatrixXd& K, const PExponent& p, const RealVec& x) {
  const double pp = p.value();
  const RealVec y = K * x;
  RealVec yp(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) yp[i] = std::pow(y[i], pp - 1.0);
  const RealVec num = K.transpose() * yp;
  double c2 = 0.0;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (num[j] == 0.0) continue;
    if (!(x[j] > 0.0)) return kInf;
    c2 = std::max(c2, num[j] / std::pow(x[j], pp - 1.0));
  }
  return inflate(std::pow(c2, 1.0 / pp));
}

double analytic_upper(const Mat& A, const PExponent& p) {
  if (is_zero(A)) return 0.0;
  const double pp = p.value();
  const double n1 = opnorm_closed(A, ClosedP::One);
  const double ni = opnorm_closed(A, ClosedP::Inf);
  const double n2 = opnorm_closed(A, ClosedP::Two);
  double best = inflate(std::pow(n1, 1.0 / pp) * std::pow(ni, 1.0 - 1.0 / pp));
  if (pp >= 2.0)
    best = std::min(best, inflate(std::pow(n2, 2.0 / pp) * std::pow(ni, 1.0 - 2.0 / pp)));
  else
    best = std::min(best, inflate(std::pow(n1, 2.0 / pp - 1.0) * std::pow(n2, 2.0 - 2.0 / pp)));

  // Schur test with the Perron-type vector of |A|
  const Eigen::MatrixXd K = abs_matrix(A);
  const auto perron = boyd_lower(K.cast<Complex>(), p, 3, 7, 300, 1e-13);
  RealVec x = perron.witness->cwiseAbs();
  const double xmax = x.maxCoeff();
  for (double floor : {1e-2, 1e-4, 1e-7, 1e-10}) {
    RealVec xf = x.cwiseMax(floor * xmax);
    best = std::min(best, schur_upper(K, p, xf));
  }
  return best;
}

Bounds grid_oracle(const Mat& A, const PExponent& p, double mesh) {
  const Eigen::Index n = A.cols();
  if (2 * n > 6) throw std::invalid_argument("grid_oracle: real dimension 2n exceeds 6");
  if (!(mesh > 0.0)) throw std::invalid_argument("grid_oracle: mesh must be positive");
  const double pp = p.value();
  Bounds out;
  out.lower_method = out.upper_method = "grid-oracle";
  if (is_zero(A)) {
    out.lower = out.upper = 0.0;
    return out;
  }
  if (n == 1) {
    const double v = lp_norm(A.col(0), pp);
    out.lower = v;
    out.upper = inflate(v);
    out.witness = Vec::Ones(1);
    return out;
  }

  const int nm = static_cast<int>(std::ceil(1.0 / mesh));
  const int np = static_cast<int>(std::ceil(2.0 * std::numbers::pi / mesh));
  const double hm = 1.0 / nm;
  const double hp = 2.0 * std::numbers::pi / np;

  double best = 0.0;
  Vec best_x;
  Vec x(n);
  std::vector<int> im(n, 0), ip(n, 0);
  for (Eigen::Index face = 0; face < n; ++face) {
    // odometer over (magnitude, phase) indices of the free coordinates
    std::fill(im.begin(), im.end(), 0);
    std::fill(ip.begin(), ip.end(), 0);
    while (true) {
      for (Eigen::Index j = 0; j < n; ++j)
        x[j] = j == face ? Complex(1.0) : std::polar(im[j] * hm, ip[j] * hp);
      const double nx = lp_norm(x, pp);
      const double v = lp_norm(A * x, pp) / nx;
      if (v > best) {
        best = v;
        best_x = x / nx;
      }
      Eigen::Index j = 0;
      for (; j < n; ++j) {
        if (j == face) continue;
        if (++ip[j] < np) break;
        ip[j] = 0;
        if (++im[j] <= nm) break;
        im[j] = 0;
      }
      if (j == n) break;
    }
  }
  // A unit x, rotated so x_face = max |x_j| > 0, is r/||r|| for a face point r.
  // Its nearest net point c has |r_j - c_j| <= (hm + hp)/2, and
  // ||r/||r|| - c/||c|| || <= 2 ||r - c|| since ||r||, ||c|| >= 1.  With
  // eta = (n-1)^{1/p} (hm + hp) and U >= ||A||:
  //   ||A|| <= best + U * eta   and   ||A|| <= best / (1 - eta).
  const double eta = std::pow(double(n - 1), 1.0 / pp) * (hm + hp);
  const double U = interp_upper(A, p);
  double upper = best + U * eta;
  if (eta < 1.0) upper = std::min(upper, best / (1.0 - eta));
  out.lower = best;
  out.upper = std::max(inflate(upper), best);
  out.witness = best_x;
  return out;
}

Bounds opnorm_bounds(const Mat& A, const PExponent& p, const OpnormConfig& cfg) {
  if (is_zero(A)) {
    Bounds b = Bounds::exact(0.0, "zero");
    b.witness = Vec::Zero(A.cols());
    return b;
  }
  if (p.value() == 2.0) {
    Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinV);
    const double s = opnorm_closed(A, ClosedP::Two);
    Vec v = svd.matrixV().col(0);
    Bounds b;
    b.lower = std::min(s, (A * v).norm() / v.norm());
    b.upper = inflate(std::max(s, svd.singularValues()[0]));
    b.witness = v / v.norm();
    b.lower_method = "l2-witness";
    b.upper_method = "l2-closed";
    return b;
  }
  if (A.cols() == 1 || A.rows() == 1) {
    // a column maps C -> l^p, a row is a functional on l^p
    const bool col = A.cols() == 1;
    const Vec a = col ? Vec(A.col(0)) : Vec(A.row(0).transpose());
    const double pp = col ? p.value() : p.conjugate();
    const double v = lp_norm(a, pp);
    Vec w = Vec::Ones(1);
    if (!col) {
      w = Vec(a.size());
      for (Eigen::Index j = 0; j < a.size(); ++j)
        w[j] = a[j] == Complex(0.0) ? Complex(0.0)
                                    : std::pow(std::abs(a[j]) / v, pp - 1.0) * std::conj(a[j]) / std::abs(a[j]);
      w /= std::max(1.0, lp_norm(w, p.value()));
    }
    Bounds b;
    b.lower = std::min(v, lp_norm(A * w, p.value()));
    b.upper = inflate(v);
    b.witness = w;
    b.lower_method = "vector-witness";
    b.upper_method = col ? "column" : "row";
    return b;
  }

  if (cfg.split_blocks) {
    const auto blocks = connected_blocks(A);
    if (blocks.size() > 1 ||
        (blocks.size() == 1 && (blocks[0].rows.size() < static_cast<std::size_t>(A.rows()) ||
                                blocks[0].cols.size() < static_cast<std::size_t>(A.cols())))) {
      Bounds out;
      out.lower = 0.0;
      out.upper = 0.0;
      OpnormConfig inner = cfg;
      inner.split_blocks = false;
      for (const auto& b : blocks) {
        Mat sub(b.rows.size(), b.cols.size());
        for (std::size_t i = 0; i < b.rows.size(); ++i)
          for (std::size_t j = 0; j < b.cols.size(); ++j) sub(i, j) = A(b.rows[i], b.cols[j]);
        Bounds bb = opnorm_bounds(sub, p, inner);
        if (bb.lower > out.lower || !out.witness) {
          out.lower = std::max(out.lower, bb.lower);
          Vec w = Vec::Zero(A.cols());
          for (std::size_t j = 0; j < b.cols.size(); ++j) w[b.cols[j]] = (*bb.witness)[j];
          out.witness = w;
          out.lower_method = "blocks/" + bb.lower_method;
        }
        if (bb.upper >= out.upper) out.upper_method = "blocks/" + bb.upper_method;
        out.upper = std::max(out.upper, bb.upper);
      }
      return out;
    }
  }

  Bounds out = boyd_lower(A, p, cfg.starts, cfg.seed, cfg.max_iter, cfg.stall_tol);
  out.upper = analytic_upper(A, p);
  out.upper_method = "interp/schur";
  if (A.cols() == 1) {
    const double v = lp_norm(A.col(0), p.value());
    out.upper = inflate(v);
    out.upper_method = "column";
  }
  if (A.cols() > 1 && A.cols() <= cfg.bnb_max_dim &&
      out.upper > out.lower * (1.0 + cfg.bnb_rel_tol)) {
    bnb::SphereFactor f{A.cols(), p.value(), {}};
    bnb::Options o;
    o.rel_tol = cfg.bnb_rel_tol;
    o.max_evals = cfg.bnb_max_evals;
    const double pp = p.value();
    auto h = [&](const std::vector<Vec>& x) {
      const double v = lp_norm(A * x[0], pp);
      return std::pair{v, inflate(v)};
    };
    // seed the global bound with what we already know
    auto r = bnb::maximize({f}, h, out.upper, o);
    if (r.lower > out.lower) {
      out.lower = r.lower;
      out.witness = r.witness[0];
      out.lower_method = "sphere-bnb";
    }
    if (r.upper < out.upper) {
      out.upper = inflate(r.upper);
      out.upper_method = "sphere-bnb";
    }
  }
  out.upper = std::max(out.upper, out.lower);
  return out;
}

Bounds opnorm_weighted(const Mat& A, const PExponent& p, std::span<const double> w_dom,
                       std::span<const double> w_cod, const OpnormConfig& cfg) {
  if (w_dom.size() != static_cast<std::size_t>(A.cols()) ||
      w_cod.size() != static_cast<std::size_t>(A.rows()))
    throw std::invalid_argument("opnorm_weighted: weight dimension mismatch");
  const RealVec dd = weight_root(w_dom, p.value());
  const RealVec dc = weight_root(w_cod, p.value());
  const Mat C = dc.cast<Complex>().asDiagonal() * A * dd.cwiseInverse().cast<Complex>().asDiagonal();
  Bounds b = opnorm_bounds(C, p, cfg);
  if (b.witness) b.witness = Vec(dd.cwiseInverse().cast<Complex>().asDiagonal() * *b.witness);
  return b;
}

}  // namespace pops
