#pragma once
// Verification suites and JSON reports.
//
// Every check compares two brackets.  A check fails only when the brackets
// certify a violation of the claimed relation beyond tol * max(1, scale);
// it is inconclusive when a bracket is missing an end (or wider than the
// requested resolution) and passes otherwise.

#include "pops/io.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pops {

inline constexpr const char* kReportSchema = "pops-report/1";
inline constexpr const char* kVersion = "0.1.0";

enum class Status { Pass, Fail, Inconclusive };
std::string to_string(Status s);

enum class Relation { Equal, AtMost };  // lhs = rhs, lhs <= rhs

/// Three-valued verdict.  `resolution` is a relative bracket width above
/// which agreement is not counted as confirmation.
Status verdict(const Bounds& lhs, const Bounds& rhs, Relation rel, double tol, double resolution = kInf);

struct CheckRecord {
  std::string id;
  Status status = Status::Inconclusive;
  Relation relation = Relation::Equal;
  Bounds lhs, rhs;
  double tol = 0.0;
  Json witness;          // methods and (when present) the lhs witness vector
  double seconds = 0.0;  // not part of the hashed section
};

/// Fills status from the brackets.
CheckRecord make_check(std::string id, Relation rel, Bounds lhs, Bounds rhs, double tol, double resolution = kInf);

struct SuiteSpec {
  std::string id;
  Eigen::Index n = 2;
  Eigen::Index k = 2;
  Eigen::Index k2 = 2;          // second factor (inj-min, l1-tensor)
  double p = 3.0;
  int samples = 10;
  std::uint64_t seed = 0;
  double tol = -1.0;            // < 0: the suite default
  double resolution = kInf;
  int starts = 4;               // representation-search starts
  int cap_m = 0;                // representation dimension cap (0: automatic)
  int levels = 1;               // amplification levels for cb estimates
  std::string structure = "min-linf";  // axioms, cross-norm

  Json params() const;
};

const std::vector<std::string>& suite_ids();
/// Structures accepted by SuiteSpec::structure.
const std::vector<std::string>& structure_names();
POStructure named_structure(const std::string& name, Eigen::Index k, PExponent p, int cap_m = 0);
/// Default slack: 1e-6 for closed-form paths, 3e-2 for search-based ones.
double default_tol(const SuiteSpec& spec);

struct Report {
  std::uint64_t seed = 0;
  std::string version = kVersion;
  Json params = Json::object();
  std::vector<CheckRecord> checks;
  double seconds = 0.0;

  void sort();
  int count(Status s) const;
  /// {"meta", "checks"}: the deterministic part
  Json hashed_section() const;
  std::string digest() const;  // FNV-1a 64 of hashed_section().dump(), hex
  /// hashed section plus "digest", "summary" and "timings"
  Json to_json() const;
  /// 1 iff some check failed (or, when strict, was inconclusive)
  int exit_code(bool strict = false) const;
};

Report run_suite(const SuiteSpec& spec);
/// maxlp brackets on l^1(k1 k2) against the quotient of N(l^p(k1 k2)).
Report suite_l1_tensor(Eigen::Index k1, Eigen::Index k2, Eigen::Index n, double p, int samples,
                       std::uint64_t seed = 0);
/// Concatenation of reports (meta of the first, params merged under "runs").
Report merge_reports(const std::vector<Report>& parts);

void emit_report(const Report& r, const std::string& path);

}  // namespace pops
