#pragma once
// Seeded generators shared by the property tests.

#include "pops/core.hpp"
#include "pops/random.hpp"

#include <gtest/gtest.h>

namespace pops::testing {

inline Mat rand_mat(std::uint64_t seed, Eigen::Index r, Eigen::Index c) {
  Rng rng = make_rng(seed, 101);
  return random_mat(rng, r, c);
}

inline Vec rand_vec(std::uint64_t seed, Eigen::Index n) {
  Rng rng = make_rng(seed, 102);
  return random_vec(rng, n);
}

inline Mat mat2(Complex a, Complex b, Complex c, Complex d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace pops::testing
