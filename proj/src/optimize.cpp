#include "pops/optimize.hpp"

#include <algorithm>
#include <cmath>

namespace pops::opt {

SearchResult pattern_search(const std::function<double(const RealVec&)>& f, RealVec x0,
                            const SearchOptions& opts, Rng& rng) {
  SearchResult res{std::move(x0), 0.0, 0};
  const Eigen::Index dim = res.x.size();
  res.value = f(res.x);
  res.evals = 1;
  if (dim == 0) return res;

  const int nrand = opts.random_dirs < 0 ? static_cast<int>(dim) : opts.random_dirs;
  std::normal_distribution<double> gauss(0.0, 1.0);
  double step = opts.initial_step;
  RealVec dir(dim);

  auto try_dir = [&](const RealVec& d) {
    RealVec y = res.x + step * d;
    double fy = f(y);
    ++res.evals;
    if (fy < res.value) {
      // extrapolate while it keeps improving
      for (int k = 0; k < 4 && res.evals < opts.max_evals; ++k) {
        RealVec z = res.x + 2.0 * (y - res.x);
        double fz = f(z);
        ++res.evals;
        if (fz < fy) {
          y = std::move(z);
          fy = fz;
        } else {
          break;
        }
      }
      res.x = std::move(y);
      res.value = fy;
      return true;
    }
    return false;
  };

  while (res.evals < opts.max_evals && step > opts.min_step) {
    bool improved = false;
    for (Eigen::Index i = 0; i < dim && res.evals < opts.max_evals; ++i) {
      dir.setZero();
      dir[i] = 1.0;
      if (try_dir(dir)) {
        improved = true;
        continue;
      }
      dir[i] = -1.0;
      if (try_dir(dir)) improved = true;
    }
    for (int r = 0; r < nrand && res.evals < opts.max_evals; ++r) {
      for (Eigen::Index i = 0; i < dim; ++i) dir[i] = gauss(rng);
      dir /= std::max(dir.norm(), 1e-300);
      if (try_dir(dir) || try_dir(-dir)) improved = true;
    }
    if (!improved) step *= 0.5;
  }
  return res;
}

RealVec pack(const Vec& z) {
  RealVec x(2 * z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    x[2 * i] = z[i].real();
    x[2 * i + 1] = z[i].imag();
  }
  return x;
}

Vec unpack(const RealVec& x) {
  Vec z(x.size() / 2);
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = Complex(x[2 * i], x[2 * i + 1]);
  return z;
}

RealVec pack(const Mat& z) {
  return pack(Vec(Eigen::Map<const Vec>(z.data(), z.size())));
}

Mat unpack(const RealVec& x, Eigen::Index rows, Eigen::Index cols) {
  Vec v = unpack(x);
  return Eigen::Map<const Mat>(v.data(), rows, cols);
}

AffineMinResult affine_min(const std::function<double(const Vec&)>& norm, const Vec& z0,
                           const Mat& D, Rng& rng, int max_evals,
                           const std::optional<Vec>& t_init) {
  AffineMinResult out;
  if (D.cols() == 0) {
    out.value = norm(z0);
    out.t = Vec(0);
    return out;
  }
  // least-squares start: the Euclidean projection of z0 onto the coset
  Vec t0 = t_init ? *t_init : Vec(D.colPivHouseholderQr().solve(-z0));
  auto f = [&](const RealVec& x) { return norm(z0 + D * unpack(x)); };
  const double scale = std::max(1.0, z0.norm());
  SearchOptions so;
  so.initial_step = 0.25 * scale;
  so.min_step = 1e-12 * scale;
  so.max_evals = max_evals;
  auto r = pattern_search(f, pack(t0), so, rng);
  out.value = r.value;
  out.t = unpack(r.x);
  return out;
}

AffineMinResult affine_min_lq(const Vec& z0, const Mat& D, double q, const RealVec& weights,
                              Rng& rng) {
  auto wnorm = [&](const Vec& z) {
    double acc = 0.0;
    const double s = z.size() ? z.cwiseAbs().maxCoeff() : 0.0;
    if (s == 0.0) return 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) acc += weights[i] * std::pow(std::abs(z[i]) / s, q);
    return s * std::pow(acc, 1.0 / q);
  };
  AffineMinResult best;
  best.value = wnorm(z0);
  best.t = Vec::Zero(D.cols());
  if (D.cols() == 0) return best;

  Vec t = D.colPivHouseholderQr().solve(-z0);
  double eps = std::max(1e-3, z0.cwiseAbs().maxCoeff());
  for (int it = 0; it < 200; ++it) {
    Vec z = z0 + D * t;
    const double v = wnorm(z);
    if (v < best.value) {
      best.value = v;
      best.t = t;
    }
    RealVec om(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i)
      om[i] = weights[i] * std::pow(std::norm(z[i]) + eps * eps, 0.5 * (q - 2.0));
    const Mat WD = om.cast<Complex>().asDiagonal() * D;
    const Mat H = D.adjoint() * WD;
    Vec tn = H.ldlt().solve(-(WD.adjoint() * z0));
    if (!tn.allFinite()) break;
    const double change = (tn - t).norm();
    t = tn;
    eps = std::max(eps * 0.5, 1e-14);
    if (change < 1e-15 * std::max(1.0, t.norm()) && eps <= 1e-13) break;
  }
  if (D.cols() > 8) return best;
  auto polished = affine_min(wnorm, z0, D, rng, 400, best.t);
  if (polished.value < best.value) {
    best.value = polished.value;
    best.t = polished.t;
  }
  return best;
}

AffineMinResult minimax_lawson(const Vec& a, const Mat& B, int max_iter, double rel_tol) {
  AffineMinResult best;
  best.t = Vec::Zero(B.cols());
  best.value = a.size() ? a.cwiseAbs().maxCoeff() : 0.0;
  if (B.cols() == 0 || best.value == 0.0) return best;
  const Eigen::Index m = a.size();
  RealVec w = RealVec::Constant(m, 1.0 / m);
  for (int it = 0; it < max_iter; ++it) {
    const RealVec sw = w.cwiseSqrt();
    const Mat WB = sw.cast<Complex>().asDiagonal() * B;
    const Vec Wa = sw.cast<Complex>().asDiagonal() * a;
    const Vec t = WB.completeOrthogonalDecomposition().solve(-Wa);
    const Vec r = a + B * t;
    const double mx = r.cwiseAbs().maxCoeff();
    if (mx < best.value) {
      best.value = mx;
      best.t = t;
    }
    const double lo = std::sqrt((w.array() * r.cwiseAbs2().array()).sum());
    if (lo >= (1.0 - rel_tol) * best.value) break;
    RealVec wn = w.cwiseProduct(r.cwiseAbs());
    const double s = wn.sum();
    if (!(s > 0.0)) break;
    w = wn / s;
  }
  return best;
}

}  // namespace pops::opt
