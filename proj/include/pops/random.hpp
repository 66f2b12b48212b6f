#pragma once

#include "pops/core.hpp"

#include <cstdint>
#include <random>

namespace pops {

using Rng = std::mt19937_64;

/// Derives an independent stream for (seed, stream index); used so that
/// multi-start runs and suite checks are reproducible in any order.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x9e3779b9u};
  return Rng(seq);
}

inline double uniform(Rng& rng, double a = 0.0, double b = 1.0) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}

inline Complex complex_gauss(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

inline Vec random_vec(Rng& rng, Eigen::Index n) {
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = complex_gauss(rng);
  return v;
}

inline Mat random_mat(Rng& rng, Eigen::Index r, Eigen::Index c) {
  Mat m(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = complex_gauss(rng);
  return m;
}

}  // namespace pops
