#pragma once
// JSON readers and writers for spaces, structures, measures and brackets.
//
// Complex numbers are [re, im] pairs (a bare number is read as real);
// matrices are lists of rows.

#include "pops/multops.hpp"
#include "pops/postructure.hpp"

#include <json.hpp>

namespace pops {

using Json = nlohmann::json;

Complex complex_from_json(const Json& j);
Json to_json(Complex z);
Vec vec_from_json(const Json& j);
Json to_json(const Vec& v);
Mat mat_from_json(const Json& j);
Json to_json(const Mat& m);
RealVec real_vec_from_json(const Json& j);

/// {"kind": "lp"|"weighted_lp"|"norming_set"|"quotient"|"dual"|"l1"|"linf"
///  |"subspace"|"projective", ...}
FiniteNormedSpace space_from_json(const Json& j);
Json to_json(const FiniteNormedSpace& X);

/// {"kind": "min"|"concrete"|"maxlp"|"quotient"|"dual", "p", "space", ...}
POStructure structure_from_json(const Json& j);

DiscreteMeasure measure_from_json(const Json& j);
std::vector<std::vector<Eigen::Index>> partition_from_json(const Json& j);

/// {"rows", "cols", "entries": [[v_11, v_12, ...], ...]} with v_ij vectors.
MatrixOverSpace matrix_over_from_json(const Json& j);

/// [lower, upper]; infinite ends become null.
Json bracket_json(const Bounds& b);

}  // namespace pops
