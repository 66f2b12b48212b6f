#include "pops/sphere_bnb.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

namespace pops::bnb {

namespace {

struct FactorBox {
  Eigen::Index face = 0;
  RealVec mag_lo, mag_hi, ph_lo, ph_hi;  // full length; face entries pinned
};

struct Cell {
  std::vector<FactorBox> boxes;
  double center_hi = 0.0;
  double eta = 0.0;
  double upper = 0.0;
};

struct CellOrder {
  bool operator()(const Cell& a, const Cell& b) const { return a.upper < b.upper; }
};

RealVec centre(const RealVec& lo, const RealVec& hi) { return 0.5 * (lo + hi); }

}  // namespace

int parameter_count(const std::vector<SphereFactor>& factors) {
  int n = 0;
  for (const auto& f : factors) n += 2 * static_cast<int>(f.dim - 1);
  return n;
}

Vec sphere_point(const SphereFactor& f, Eigen::Index face, const RealVec& mags,
                 const RealVec& phases) {
  Vec y(f.dim);
  for (Eigen::Index j = 0; j < f.dim; ++j) {
    const double r = j == face ? 1.0 : mags[j];
    const double th = j == face ? 0.0 : phases[j];
    y[j] = std::polar(r, th);
  }
  if (!std::isinf(f.q)) y /= lp_norm(y, f.q);
  if (f.weights.size() > 0 && !std::isinf(f.q))
    for (Eigen::Index j = 0; j < f.dim; ++j) y[j] /= std::pow(f.weights[j], 1.0 / f.q);
  return y;
}

double covering_radius(const SphereFactor& f, const RealVec& mag_center, const RealVec& mag_half,
                       const RealVec& phase_half, Eigen::Index face) {
  double phase = 0.0;
  double mag = 0.0;
  for (Eigen::Index j = 0; j < f.dim; ++j) {
    if (j == face) continue;
    phase = std::max(phase, phase_half[j]);
    if (std::isinf(f.q))
      mag = std::max(mag, mag_half[j]);
    else
      mag += std::pow(mag_half[j], f.q);
  }
  if (!std::isinf(f.q)) {
    RealVec c = mag_center;
    c[face] = 1.0;
    const double cn = lp_norm(c.cast<Complex>(), f.q);
    mag = 2.0 * std::pow(mag, 1.0 / f.q) / std::max(1.0, cn);
  }
  return mag + phase;
}

Result maximize(const std::vector<SphereFactor>& factors, const Objective& h,
                double a_priori_upper, const Options& opts) {
  Result res;
  double G = a_priori_upper;

  auto evaluate = [&](Cell& c) {
    std::vector<Vec> pts;
    pts.reserve(factors.size());
    c.eta = 0.0;
    for (std::size_t f = 0; f < factors.size(); ++f) {
      const auto& b = c.boxes[f];
      const RealVec mc = centre(b.mag_lo, b.mag_hi);
      const RealVec pc = centre(b.ph_lo, b.ph_hi);
      pts.push_back(sphere_point(factors[f], b.face, mc, pc));
      c.eta += covering_radius(factors[f], mc, 0.5 * (b.mag_hi - b.mag_lo),
                               0.5 * (b.ph_hi - b.ph_lo), b.face);
    }
    auto [lo, hi] = h(pts);
    ++res.evals;
    if (lo > res.lower) {
      res.lower = lo;
      res.witness = pts;
    }
    c.center_hi = hi;
    c.upper = hi + G * c.eta;
  };

  // initial cover: every face combination, uniformly subdivided
  std::vector<Cell> seeds(1);
  for (std::size_t f = 0; f < factors.size(); ++f) {
    const auto d = factors[f].dim;
    std::vector<Cell> next;
    for (const auto& s : seeds) {
      // q = inf: a seminorm attains its sup over the polydisc on the torus
      // |y_j| = 1, so one face with all magnitudes pinned suffices
      const bool torus = std::isinf(factors[f].q);
      for (Eigen::Index face = 0; face < (torus ? 1 : d); ++face) {
        // enumerate the initial grid of this factor
        const int nm = d > 1 && !torus ? opts.mag_splits : 1;
        const int np = d > 1 ? opts.phase_splits : 1;
        const Eigen::Index free = d - 1;
        long total = 1;
        for (Eigen::Index j = 0; j < free; ++j) total *= static_cast<long>(nm) * np;
        for (long idx = 0; idx < total; ++idx) {
          FactorBox b;
          b.face = face;
          b.mag_lo = RealVec::Zero(d);
          b.mag_hi = RealVec::Ones(d);
          b.ph_lo = RealVec::Zero(d);
          b.ph_hi = RealVec::Constant(d, 2.0 * std::numbers::pi);
          b.ph_hi[face] = 0.0;
          long r = idx;
          for (Eigen::Index j = 0; j < d; ++j) {
            if (j == face) continue;
            const int im = static_cast<int>(r % nm);
            r /= nm;
            const int ip = static_cast<int>(r % np);
            r /= np;
            b.mag_lo[j] = torus ? 1.0 : double(im) / nm;
            b.mag_hi[j] = torus ? 1.0 : double(im + 1) / nm;
            b.ph_lo[j] = 2.0 * std::numbers::pi * ip / np;
            b.ph_hi[j] = 2.0 * std::numbers::pi * (ip + 1) / np;
          }
          Cell c = s;
          c.boxes.push_back(std::move(b));
          next.push_back(std::move(c));
        }
      }
    }
    seeds = std::move(next);
  }

  std::priority_queue<Cell, std::vector<Cell>, CellOrder> heap;
  for (auto& c : seeds) {
    evaluate(c);
    heap.push(std::move(c));
  }

  while (!heap.empty()) {
    Cell top = heap.top();
    // refresh with the current global bound (cells are only ever tightened)
    const double refreshed = top.center_hi + G * top.eta;
    if (refreshed < top.upper - 1e-15 * std::abs(top.upper)) {
      heap.pop();
      top.upper = refreshed;
      heap.push(std::move(top));
      continue;
    }
    G = std::min(G, top.upper);
    if (G <= res.lower * (1.0 + opts.rel_tol) + opts.abs_tol) {
      res.converged = true;
      break;
    }
    if (res.evals + 2 > opts.max_evals) break;
    heap.pop();

    // split the coordinate with the widest contribution to the radius
    std::size_t best_f = 0;
    Eigen::Index best_j = -1;
    bool best_is_phase = false;
    double best_w = -1.0;
    for (std::size_t f = 0; f < factors.size(); ++f) {
      const auto& b = top.boxes[f];
      for (Eigen::Index j = 0; j < factors[f].dim; ++j) {
        if (j == b.face) continue;
        const double wm = b.mag_hi[j] > b.mag_lo[j] ? 2.0 * (b.mag_hi[j] - b.mag_lo[j]) : -1.0;
        const double wp = b.ph_hi[j] - b.ph_lo[j];
        if (wm > best_w) {
          best_w = wm;
          best_f = f;
          best_j = j;
          best_is_phase = false;
        }
        if (wp > best_w) {
          best_w = wp;
          best_f = f;
          best_j = j;
          best_is_phase = true;
        }
      }
    }
    if (best_j < 0) {  // zero-dimensional parameter space: the cell is a point
      res.converged = true;
      G = std::min(G, top.center_hi);
      break;
    }
    Cell a = top, b = top;
    auto& ba = a.boxes[best_f];
    auto& bb = b.boxes[best_f];
    if (best_is_phase) {
      const double mid = 0.5 * (ba.ph_lo[best_j] + ba.ph_hi[best_j]);
      ba.ph_hi[best_j] = mid;
      bb.ph_lo[best_j] = mid;
    } else {
      const double mid = 0.5 * (ba.mag_lo[best_j] + ba.mag_hi[best_j]);
      ba.mag_hi[best_j] = mid;
      bb.mag_lo[best_j] = mid;
    }
    evaluate(a);
    evaluate(b);
    heap.push(std::move(a));
    heap.push(std::move(b));
  }
  if (!heap.empty()) G = std::min(G, heap.top().upper);
  res.upper = std::max(G, res.lower);
  return res;
}

}  // namespace pops::bnb
