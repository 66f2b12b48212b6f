#include "pops/multops.hpp"

#include <cmath>
#include <stdexcept>

namespace pops {

MultRep::MultRep(DiscreteMeasure mu, PExponent p) : mu_(std::move(mu)), p_(p) {
  require_positive_weights(std::span<const double>(mu_.weights.data(), mu_.weights.size()));
}

RealVec MultRep::conjugation() const { return mu_.weights.array().pow(1.0 / p_.value()); }

Mat MultRep::embed(const Vec& f) const {
  if (f.size() != atoms()) throw std::invalid_argument("MultRep::embed: need one value per atom");
  return f.asDiagonal();
}

std::vector<Mat> MultRep::images() const {
  std::vector<Mat> out;
  for (Eigen::Index a = 0; a < atoms(); ++a) out.push_back(embed(Vec::Unit(atoms(), a)));
  return out;
}

POStructure MultRep::structure() const { return POStructure::concrete(linf_space(atoms()), images(), p_); }

Mat mult_amplified(const MatrixOverSpace& F, const MultRep& rep) {
  if (F.dim() != rep.atoms()) throw std::invalid_argument("mult_amplified: entries must live in l^inf(k)");
  return F.amplify(rep.images());
}

Mat atom_block(const MatrixOverSpace& F, Eigen::Index atom) {
  if (atom < 0 || atom >= F.dim()) throw std::invalid_argument("atom_block: no such atom");
  return F.slices()[static_cast<std::size_t>(atom)];
}

std::vector<IsometryCheck> verify_linfty_isometry(Eigen::Index n, Eigen::Index k, PExponent p, int samples,
                                                  std::uint64_t seed, double tol) {
  const MultRep rep(DiscreteMeasure::counting(k), p);
  const auto X = linf_space(k);
  MatNormOptions o;
  o.seed = seed;
  o.op.seed = seed;
  Rng rng = make_rng(seed, 0x11f);
  std::vector<IsometryCheck> out;
  for (int s = 0; s < samples; ++s) {
    const auto F = random_matrix_over(rng, n, n, k);
    IsometryCheck c;
    c.sample = s;
    c.min_norm = min_matrix_norm(X, F, p, o);
    c.rep_norm = opnorm_bounds(mult_amplified(F, rep), p, o.op);
    c.overlap = c.min_norm.overlaps(c.rep_norm, tol * std::max(1.0, c.rep_norm.upper));
    out.push_back(std::move(c));
  }
  return out;
}

Mat expectation(const Mat& T, const MultRep& rep, Eigen::Index n) {
  const Eigen::Index k = rep.atoms();
  if (n < 1 || T.rows() != n * k || T.cols() != n * k)
    throw std::invalid_argument("expectation: T must be nk by nk");
  Mat E = Mat::Zero(T.rows(), T.cols());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index a = 0; a < k; ++a) E(i * k + a, j * k + a) = T(i * k + a, j * k + a);
  return E;
}

CommutantReport commutant_check(Eigen::Index k, PExponent p, int trials, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("commutant_check: k must be >= 1");
  const MultRep rep(DiscreteMeasure::counting(k), p);
  const auto D = rep.images();
  const Eigen::Index kk = k * k;
  // vec(T D - D T) = (D^T (x) I - I (x) D) vec(T), stacked over the basis
  Mat A(k * kk, kk);
  const Mat I = Mat::Identity(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    A.middleRows(i * kk, kk) = kron(D[i].transpose(), I) - kron(I, D[i]);
  const Mat N = null_space(A);

  CommutantReport r;
  r.k = k;
  r.nullity = N.cols();
  r.solutions_diagonal = true;
  for (Eigen::Index c = 0; c < N.cols(); ++c) {
    const Mat S = Eigen::Map<const Mat>(N.col(c).data(), k, k);
    const Mat off = S - Mat(S.diagonal().asDiagonal());
    if (off.cwiseAbs().maxCoeff() > 1e-12) r.solutions_diagonal = false;
  }
  auto commutator = [&](const Mat& T) {
    double m = 0.0;
    for (const auto& d : D) m = std::max(m, (T * d - d * T).cwiseAbs().maxCoeff());
    return m;
  };
  Rng rng = make_rng(seed, 0xc0);
  for (int t = 0; t < trials; ++t) {
    const Mat diag = Mat(random_vec(rng, k).asDiagonal());
    const double res = commutator(diag);
    r.max_residual = std::max(r.max_residual, res);
    if (res > 1e-12) r.diagonal_commutes = false;
    if (k > 1) {
      Mat T = random_mat(rng, k, k);
      if (commutator(T) <= 1e-12) r.off_diagonal_detected = false;
    }
  }
  return r;
}

EmbedReport finite_embed(const std::vector<Vec>& F, const DiscreteMeasure& mu,
                         const std::vector<std::vector<Eigen::Index>>& partition, PExponent p) {
  const Eigen::Index k = mu.atoms(), m = static_cast<Eigen::Index>(partition.size());
  if (m < 1 || m > k) throw std::invalid_argument("finite_embed: need 1 <= m <= k cells");
  std::vector<int> seen(static_cast<std::size_t>(k), 0);
  for (const auto& cell : partition) {
    if (cell.empty()) throw std::invalid_argument("finite_embed: empty partition cell");
    for (Eigen::Index a : cell) {
      if (a < 0 || a >= k) throw std::invalid_argument("finite_embed: atom out of range");
      ++seen[static_cast<std::size_t>(a)];
    }
  }
  for (int s : seen)
    if (s != 1) throw std::invalid_argument("finite_embed: cells must partition the atoms");

  const double pp = p.value();
  EmbedReport r;
  r.V = Mat::Zero(m, k);
  for (Eigen::Index c = 0; c < m; ++c) {
    double mc = 0.0;
    for (Eigen::Index a : partition[c]) mc += mu.weights[a];
    for (Eigen::Index a : partition[c]) r.V(c, a) = std::pow(mc, 1.0 / pp - 1.0) * mu.weights[a];
  }
  const RealVec ones = RealVec::Ones(m);
  r.norm = opnorm_weighted(r.V, p, {mu.weights.data(), std::size_t(k)}, {ones.data(), std::size_t(m)});
  for (const auto& f : F) {
    if (f.size() != k) throw std::invalid_argument("finite_embed: vector has wrong dimension");
    const double nf = lp_norm(f, pp, {mu.weights.data(), std::size_t(k)});
    const double d = nf > 0.0 ? std::max(0.0, 1.0 - lp_norm(Vec(r.V * f), pp) / nf) : 0.0;
    r.distortion.push_back(d);
    r.worst = std::max(r.worst, d);
  }
  return r;
}

EmbedReport finite_embed(const std::vector<Vec>& F, const DiscreteMeasure& mu, Eigen::Index m, PExponent p) {
  const Eigen::Index k = mu.atoms();
  if (m < 1 || m > k) throw std::invalid_argument("finite_embed: need 1 <= m <= k cells");
  std::vector<std::vector<Eigen::Index>> cells(static_cast<std::size_t>(m));
  for (Eigen::Index a = 0; a < k; ++a) cells[static_cast<std::size_t>(a * m / k)].push_back(a);
  return finite_embed(F, mu, cells, p);
}

}  // namespace pops
