#include "pops/io.hpp"

#include <cmath>
#include <stdexcept>

namespace pops {

namespace {

[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument("json: " + what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

Eigen::Index index_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 1) bad(std::string("\"") + key + "\" must be a positive integer");
  return v.get<Eigen::Index>();
}

double exponent(const Json& j) {
  const Json& v = field(j, "p");
  if (v.is_string() && (v == "inf" || v == "infinity")) return kInf;
  if (!v.is_number()) bad("\"p\" must be a number or \"inf\"");
  return v.get<double>();
}

Json exponent_json(double p) { return std::isinf(p) ? Json("inf") : Json(p); }

}  // namespace

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  bad("complex numbers are [re, im] pairs");
}

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Vec vec_from_json(const Json& j) {
  if (!j.is_array()) bad("vector must be a list");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = complex_from_json(j[i]);
  return v;
}

Json to_json(const Vec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v[i]));
  return out;
}

Mat mat_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) bad("matrix must be a non-empty list of rows");
  const auto r = static_cast<Eigen::Index>(j.size());
  const auto c = static_cast<Eigen::Index>(j[0].size());
  Mat m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != c) bad("ragged matrix");
    for (Eigen::Index k = 0; k < c; ++k) m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
  }
  return m;
}

Json to_json(const Mat& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
    out.push_back(std::move(row));
  }
  return out;
}

RealVec real_vec_from_json(const Json& j) {
  if (!j.is_array()) bad("weights must be a list of numbers");
  RealVec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) bad("weights must be numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

FiniteNormedSpace space_from_json(const Json& j) {
  const std::string kind = field(j, "kind").get<std::string>();
  FiniteNormedSpace X = [&]() -> FiniteNormedSpace {
    if (kind == "l1") return l1_space(index_field(j, "dim"));
    if (kind == "linf") return linf_space(index_field(j, "dim"));
    if (kind == "lp") return FiniteNormedSpace::lp(index_field(j, "dim"), exponent(j));
    if (kind == "weighted_lp") return FiniteNormedSpace::weighted_lp(exponent(j), real_vec_from_json(field(j, "weights")));
    if (kind == "norming_set") return FiniteNormedSpace::norming_set(mat_from_json(field(j, "functionals")));
    if (kind == "dual") return FiniteNormedSpace::dual(space_from_json(field(j, "parent")));
    if (kind == "quotient") {
      const auto parent = space_from_json(field(j, "parent"));
      if (j.contains("map")) return FiniteNormedSpace::quotient_by_map(parent, mat_from_json(j.at("map")));
      // kernel given as a list of kernel vectors
      return FiniteNormedSpace::quotient(parent, mat_from_json(field(j, "kernel")).transpose());
    }
    if (kind == "subspace")
      return FiniteNormedSpace::subspace(space_from_json(field(j, "parent")),
                                         mat_from_json(field(j, "basis")).transpose());
    if (kind == "projective")
      return FiniteNormedSpace::projective(space_from_json(field(j, "left")), space_from_json(field(j, "right")));
    bad("unknown space kind \"" + kind + "\"");
  }();
  if (j.contains("dim") && j.at("dim").get<Eigen::Index>() != X.dim())
    bad("\"dim\" does not match the space (" + std::to_string(X.dim()) + ")");
  return X;
}

Json to_json(const FiniteNormedSpace& X) {
  Json j;
  switch (X.kind()) {
    case SpaceKind::WeightedLp: {
      j["kind"] = "weighted_lp";
      j["p"] = exponent_json(X.p());
      j["weights"] = std::vector<double>(X.weights().data(), X.weights().data() + X.weights().size());
      break;
    }
    case SpaceKind::NormingSet:
      j["kind"] = "norming_set";
      j["functionals"] = to_json(X.functionals());
      break;
    case SpaceKind::Quotient:
      j["kind"] = "quotient";
      j["parent"] = to_json(X.parent());
      j["map"] = to_json(X.quotient_map());
      break;
    case SpaceKind::Subspace:
      j["kind"] = "subspace";
      j["parent"] = to_json(X.parent());
      j["basis"] = to_json(Mat(X.basis().transpose()));
      break;
    case SpaceKind::Dual:
      j["kind"] = "dual";
      j["parent"] = to_json(X.parent());
      break;
    case SpaceKind::Projective:
      j["kind"] = "projective";
      j["left"] = to_json(X.left());
      j["right"] = to_json(X.right());
      break;
  }
  j["dim"] = X.dim();
  return j;
}

POStructure structure_from_json(const Json& j) {
  const std::string kind = field(j, "kind").get<std::string>();
  if (kind == "quotient") {
    const auto parent = structure_from_json(field(j, "parent"));
    const Mat q = mat_from_json(field(j, "map"));
    if (j.contains("space")) return POStructure::quotient(parent, q, space_from_json(j.at("space")));
    return POStructure::quotient(parent, q);
  }
  if (kind == "dual") return POStructure::dual(structure_from_json(field(j, "parent")));
  const PExponent p(exponent(j));
  const auto X = space_from_json(field(j, "space"));
  if (kind == "min") return POStructure::min(X, p);
  if (kind == "maxlp") return POStructure::maxlp(X, p, j.value("cap_m", 0));
  if (kind == "concrete") {
    const Json& imgs = field(j, "images");
    if (!imgs.is_array()) bad("\"images\" must be a list of matrices");
    std::vector<Mat> images;
    for (const auto& m : imgs) images.push_back(mat_from_json(m));
    return POStructure::concrete(X, std::move(images), p);
  }
  bad("unknown structure kind \"" + kind + "\"");
}

DiscreteMeasure measure_from_json(const Json& j) { return DiscreteMeasure(real_vec_from_json(field(j, "weights"))); }

std::vector<std::vector<Eigen::Index>> partition_from_json(const Json& j) {
  if (!j.is_array()) bad("partition must be a list of atom-index lists");
  std::vector<std::vector<Eigen::Index>> out;
  for (const auto& cell : j) {
    if (!cell.is_array()) bad("partition cells must be lists");
    out.push_back(cell.get<std::vector<Eigen::Index>>());
  }
  return out;
}

MatrixOverSpace matrix_over_from_json(const Json& j) {
  const Eigen::Index r = index_field(j, "rows"), c = index_field(j, "cols");
  const Json& e = field(j, "entries");
  if (!e.is_array() || static_cast<Eigen::Index>(e.size()) != r) bad("\"entries\" must have one list per row");
  std::vector<Vec> entries;
  for (const auto& row : e) {
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != c) bad("\"entries\" row has the wrong length");
    for (const auto& v : row) entries.push_back(vec_from_json(v));
  }
  return MatrixOverSpace::from_entries(r, c, entries);
}

Json bracket_json(const Bounds& b) {
  auto end = [](double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); };
  return Json::array({end(b.lower), end(b.upper)});
}

}  // namespace pops
