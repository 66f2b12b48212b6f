#pragma once

#include "pops/core.hpp"

#include <algorithm>
#include <optional>
#include <string>

namespace pops {

/// Certified interval [lower, upper] around a quantity that is generally
/// not computable exactly.  Every norm evaluation in the library returns one.
struct Bounds {
  double lower = 0.0;
  double upper = kInf;
  std::optional<Vec> witness;  // attains `lower` when present
  std::string lower_method;
  std::string upper_method;

  static Bounds exact(double v, std::string method) {
    Bounds b{v, v, std::nullopt, method, method};
    return b;
  }

  double width() const { return upper - lower; }
  double mid() const { return 0.5 * (lower + upper); }

  bool contains(double v, double tol = 0.0) const {
    return lower - tol <= v && v <= upper + tol;
  }
  bool overlaps(const Bounds& o, double tol = 0.0) const {
    return lower <= o.upper + tol && o.lower <= upper + tol;
  }

  /// Intersection of two certified brackets for the same quantity.
  Bounds& tighten(const Bounds& o) {
    if (o.lower > lower) {
      lower = o.lower;
      lower_method = o.lower_method;
      if (o.witness) witness = o.witness;
    }
    if (o.upper < upper) {
      upper = o.upper;
      upper_method = o.upper_method;
    }
    return *this;
  }

  Bounds scaled(double c) const {
    Bounds b = *this;
    b.lower *= c;
    b.upper *= c;
    return b;
  }
};

}  // namespace pops
