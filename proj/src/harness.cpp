#include "pops/harness.hpp"

#include "pops/tensor.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <thread>

namespace pops {

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

double finite_abs_max(std::initializer_list<double> xs) {
  double m = 1.0;
  for (double x : xs)
    if (std::isfinite(x)) m = std::max(m, std::abs(x));
  return m;
}

bool has_nan(const Bounds& b) { return std::isnan(b.lower) || std::isnan(b.upper); }
bool closed(const Bounds& b) { return std::isfinite(b.lower) && std::isfinite(b.upper); }

}  // namespace

Status verdict(const Bounds& lhs, const Bounds& rhs, Relation rel, double tol, double resolution) {
  if (has_nan(lhs) || has_nan(rhs)) return Status::Inconclusive;
  const double scale = finite_abs_max({lhs.lower, lhs.upper, rhs.lower, rhs.upper});
  const double t = tol * scale;
  bool violated = lhs.lower > rhs.upper + t;
  if (rel == Relation::Equal) violated = violated || rhs.lower > lhs.upper + t;
  if (violated) return Status::Fail;
  if (!closed(lhs) || !closed(rhs)) return Status::Inconclusive;
  if (lhs.width() > resolution * scale || rhs.width() > resolution * scale) return Status::Inconclusive;
  return Status::Pass;
}

CheckRecord make_check(std::string id, Relation rel, Bounds lhs, Bounds rhs, double tol, double resolution) {
  CheckRecord c;
  c.id = std::move(id);
  c.relation = rel;
  c.status = verdict(lhs, rhs, rel, tol, resolution);
  c.tol = tol;
  c.witness = Json::object();
  if (!lhs.lower_method.empty()) c.witness["lhs_lower"] = lhs.lower_method;
  if (!lhs.upper_method.empty()) c.witness["lhs_upper"] = lhs.upper_method;
  if (!rhs.lower_method.empty()) c.witness["rhs_lower"] = rhs.lower_method;
  if (!rhs.upper_method.empty()) c.witness["rhs_upper"] = rhs.upper_method;
  if (lhs.witness) c.witness["vector"] = to_json(*lhs.witness);
  c.lhs = std::move(lhs);
  c.rhs = std::move(rhs);
  return c;
}

Json SuiteSpec::params() const {
  Json j;
  j["suite"] = id;
  j["n"] = n;
  j["k"] = k;
  j["k2"] = k2;
  j["p"] = p;
  j["samples"] = samples;
  j["tol"] = tol >= 0.0 ? tol : default_tol(*this);
  j["resolution"] = std::isfinite(resolution) ? Json(resolution) : Json(nullptr);
  j["starts"] = starts;
  j["cap_m"] = cap_m;
  j["levels"] = levels;
  j["structure"] = structure;
  return j;
}

const std::vector<std::string>& suite_ids() {
  static const std::vector<std::string> ids = {"axioms",     "linfty",  "expectation", "commutant",
                                               "dual-min-max", "bidual", "inj-min",     "l1-max",
                                               "l1-quotient",  "l1-tensor", "cross-norm"};
  return ids;
}

const std::vector<std::string>& structure_names() {
  static const std::vector<std::string> names = {"min-linf", "min-l1", "concrete-mult", "maxlp-l1"};
  return names;
}

POStructure named_structure(const std::string& name, Eigen::Index k, PExponent p, int cap_m) {
  if (name == "min-linf") return POStructure::min(linf_space(k), p);
  if (name == "min-l1") return POStructure::min(l1_space(k), p);
  if (name == "concrete-mult") return MultRep(DiscreteMeasure::counting(k), p).structure();
  if (name == "maxlp-l1") return POStructure::maxlp(l1_space(k), p, cap_m);
  throw std::invalid_argument("unknown structure \"" + name + "\"");
}

double default_tol(const SuiteSpec& s) {
  if (s.id == "axioms" || s.id == "cross-norm") return s.structure.rfind("maxlp", 0) == 0 ? 3e-2 : 1e-6;
  if (s.id == "linfty" || s.id == "expectation" || s.id == "commutant" || s.id == "inj-min") return 1e-6;
  return 3e-2;
}

// ---------------------------------------------------------------------------
// report

void Report::sort() {
  std::stable_sort(checks.begin(), checks.end(), [](const CheckRecord& a, const CheckRecord& b) { return a.id < b.id; });
}

int Report::count(Status s) const {
  return static_cast<int>(std::count_if(checks.begin(), checks.end(), [s](const CheckRecord& c) { return c.status == s; }));
}

Json Report::hashed_section() const {
  Json meta;
  meta["schema"] = kReportSchema;
  meta["seed"] = seed;
  meta["version"] = version;
  meta["params"] = params;
  Json cs = Json::array();
  for (const auto& c : checks) {
    Json j;
    j["id"] = c.id;
    j["status"] = to_string(c.status);
    j["relation"] = c.relation == Relation::Equal ? "=" : "<=";
    j["lhs"] = bracket_json(c.lhs);
    j["rhs"] = bracket_json(c.rhs);
    j["tol"] = c.tol;
    j["witness"] = c.witness;
    cs.push_back(std::move(j));
  }
  Json out;
  out["meta"] = std::move(meta);
  out["checks"] = std::move(cs);
  return out;
}

std::string Report::digest() const {
  const std::string s = hashed_section().dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json Report::to_json() const {
  Json j = hashed_section();
  j["digest"] = digest();
  j["summary"] = {{"pass", count(Status::Pass)},
                  {"fail", count(Status::Fail)},
                  {"inconclusive", count(Status::Inconclusive)}};
  Json per = Json::object();
  for (const auto& c : checks) per[c.id] = c.seconds;
  j["timings"] = {{"total_seconds", seconds}, {"checks", std::move(per)}};
  return j;
}

int Report::exit_code(bool strict) const {
  if (count(Status::Fail) > 0) return 1;
  if (strict && count(Status::Inconclusive) > 0) return 1;
  return 0;
}

void emit_report(const Report& r, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("emit_report: cannot open " + path);
  f << r.to_json().dump(2) << '\n';
  if (!f) throw std::runtime_error("emit_report: write failed for " + path);
}

Report merge_reports(const std::vector<Report>& parts) {
  Report out;
  if (parts.empty()) return out;
  out.seed = parts.front().seed;
  out.version = parts.front().version;
  out.params = {{"runs", Json::array()}};
  for (const auto& r : parts) {
    out.params["runs"].push_back(r.params);
    out.checks.insert(out.checks.end(), r.checks.begin(), r.checks.end());
    out.seconds += r.seconds;
  }
  out.sort();
  return out;
}

// ---------------------------------------------------------------------------
// suites

namespace {

using Clock = std::chrono::steady_clock;
using SampleFn = std::function<std::vector<CheckRecord>(int)>;

// runs f(0..samples-1) on a small pool; output order does not depend on scheduling
std::vector<CheckRecord> per_sample(int samples, const SampleFn& f) {
  std::vector<std::vector<CheckRecord>> parts(static_cast<std::size_t>(std::max(samples, 0)));
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(parts.size());
  auto worker = [&] {
    for (int s; (s = next++) < samples;) {
      const auto t0 = Clock::now();
      try {
        parts[std::size_t(s)] = f(s);
      } catch (...) {
        errors[std::size_t(s)] = std::current_exception();
      }
      const double sec = std::chrono::duration<double>(Clock::now() - t0).count();
      for (auto& c : parts[std::size_t(s)]) c.seconds = sec / double(parts[std::size_t(s)].size());
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned nthreads = std::min<unsigned>(hw, static_cast<unsigned>(std::max(samples, 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<CheckRecord> out;
  for (auto& p : parts) out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
  return out;
}

std::string sample_id(const std::string& prefix, int s, const std::string& check) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "s%03d", s);
  return prefix + "/" + buf + "/" + check;
}

int cap(const SuiteSpec& s) { return s.cap_m > 0 ? s.cap_m : 4; }

std::uint64_t sample_seed(const SuiteSpec& s, int sample) {
  return s.seed * 0x9e3779b97f4a7c15ull + static_cast<std::uint64_t>(sample);
}

MatNormOptions norm_options(const SuiteSpec& s, std::uint64_t seed) {
  MatNormOptions o = MatNormOptions::fast(seed);
  o.op = OpnormConfig{};
  o.op.seed = seed;
  o.op.starts = 4;
  o.op.max_iter = 200;
  o.op.bnb_max_evals = 2000;
  o.sup = SupOptions{};
  o.sup.seed = seed;
  o.sup.bnb_max_evals = 1500;
  o.maxlp_starts = s.starts;
  o.maxlp_evals = 60;
  o.cb_levels = s.levels;
  return o;
}

// for cb estimates whose level-1 sup runs over a polydisc
MatNormOptions dual_options(const SuiteSpec& s, std::uint64_t seed) {
  MatNormOptions o = norm_options(s, seed);
  o.op = OpnormConfig::fast(seed);
  o.sup.bnb_max_dim = 0;
  return o;
}

Bounds exact(double v, const std::string& how) { return Bounds::exact(v, how); }

Bounds product(const Bounds& a, const Bounds& b) {
  Bounds r;
  r.lower = a.lower * b.lower;
  r.upper = a.upper * b.upper;
  r.lower_method = a.lower_method + " * " + b.lower_method;
  r.upper_method = a.upper_method + " * " + b.upper_method;
  return r;
}

double sum_abs(const Vec& v) { return v.cwiseAbs().sum(); }

// diagonal extraction N(l^p(k)) -> l^1(k), coordinates vec(c) column-major
Mat diagonal_map(Eigen::Index k) {
  Mat q = Mat::Zero(k, k * k);
  for (Eigen::Index a = 0; a < k; ++a) q(a, a * k + a) = 1.0;
  return q;
}

Bounds nuclear_route(const MatrixOverSpace& u, Eigen::Index k, PExponent p, const MatNormOptions& base) {
  const auto N = FiniteNormedSpace::projective(FiniteNormedSpace::lp(k, p.conjugate()), FiniteNormedSpace::lp(k, p.value()));
  MatNormOptions o = base;
  o.quotient_evals = 0;
  o.upper_evals = 0;
  return quotient_matrix_norm(POStructure::maxlp(N, p), diagonal_map(k), l1_space(k), u, o);
}

std::vector<CheckRecord> run_axioms(const SuiteSpec& s, double tol) {
  const PExponent p(s.p);
  const auto S = named_structure(s.structure, s.k, p, cap(s));
  const std::string prefix = "axioms/" + s.structure;
  return per_sample(s.samples, [&](int i) {
    AxiomOptions ao;
    ao.samples = 1;
    ao.seed = sample_seed(s, i);
    ao.max_level = s.n;
    ao.tol = tol;
    ao.norms = norm_options(s, ao.seed);
    std::vector<CheckRecord> out;
    for (const auto& a : check_axioms(S, ao)) {
      std::string name = a.id.substr(0, a.id.rfind('/'));
      out.push_back(make_check(sample_id(prefix, i, name), Relation::AtMost, a.lhs, a.rhs, tol, s.resolution));
    }
    return out;
  });
}

std::vector<CheckRecord> run_cross_norm(const SuiteSpec& s, double tol) {
  const PExponent p(s.p);
  const auto S = named_structure(s.structure, s.k, p, cap(s));
  const std::string prefix = "cross-norm/" + s.structure;
  return per_sample(s.samples, [&](int i) {
    Rng rng = make_rng(sample_seed(s, i), 0xc5);
    const Mat alpha = random_mat(rng, s.n, s.n);
    const Vec v = random_vec(rng, s.k);
    const auto o = norm_options(s, sample_seed(s, i));
    const Bounds lhs = matrix_norm(S, MatrixOverSpace::scalar_times(alpha, v), o);
    const Bounds rhs = product(opnorm_bounds(alpha, p, o.op), norm(S.space(), v));
    return std::vector{make_check(sample_id(prefix, i, "alpha-times-v"), Relation::AtMost, lhs, rhs, tol, s.resolution)};
  });
}

std::vector<CheckRecord> run_linfty(const SuiteSpec& s, double tol) {
  char tag[48];
  std::snprintf(tag, sizeof tag, "linfty/n%ld-k%ld-p%g", long(s.n), long(s.k), s.p);
  const auto res = verify_linfty_isometry(s.n, s.k, PExponent(s.p), s.samples, s.seed, tol);
  std::vector<CheckRecord> out;
  for (const auto& c : res)
    out.push_back(make_check(sample_id(tag, c.sample, "isometry"), Relation::Equal, c.min_norm, c.rep_norm, tol, s.resolution));
  return out;
}

std::vector<CheckRecord> run_expectation(const SuiteSpec& s, double tol) {
  const PExponent p(s.p);
  const MultRep rep(DiscreteMeasure::counting(s.k), p);
  char tag[48];
  std::snprintf(tag, sizeof tag, "expectation/n%ld-k%ld", long(s.n), long(s.k));
  return per_sample(s.samples, [&](int i) {
    Rng rng = make_rng(sample_seed(s, i), 0xe7);
    const Eigen::Index N = s.n * s.k;
    const Mat T = random_mat(rng, N, N);
    const Mat E = expectation(T, rep, s.n);
    const Mat A = mult_amplified(random_matrix_over(rng, s.n, s.n, s.k), rep);
    const Mat B = mult_amplified(random_matrix_over(rng, s.n, s.n, s.k), rep);
    const double scale = std::max(1.0, T.cwiseAbs().maxCoeff() * A.cwiseAbs().maxCoeff() * B.cwiseAbs().maxCoeff() * double(N * N));
    const double idem = (expectation(E, rep, s.n) - E).cwiseAbs().maxCoeff();
    const double mod = (expectation(A * T * B, rep, s.n) - A * E * B).cwiseAbs().maxCoeff() / scale;
    OpnormConfig op;
    op.seed = sample_seed(s, i);
    std::vector<CheckRecord> out;
    out.push_back(make_check(sample_id(tag, i, "idempotent"), Relation::AtMost, exact(idem, "residual"), exact(0.0, "zero"), 1e-12));
    out.push_back(make_check(sample_id(tag, i, "module-map"), Relation::AtMost, exact(mod, "relative-residual"), exact(0.0, "zero"), 1e-12));
    out.push_back(make_check(sample_id(tag, i, "contractive"), Relation::AtMost, opnorm_bounds(E, p, op),
                             opnorm_bounds(T, p, op), tol, s.resolution));
    return out;
  });
}

std::vector<CheckRecord> run_commutant(const SuiteSpec& s) {
  const auto r = commutant_check(s.k, PExponent(s.p), std::max(1, s.samples), s.seed);
  const std::string tag = "commutant/k" + std::to_string(s.k);
  const double kk = double(s.k);
  return {
      make_check(tag + "/nullity", Relation::Equal, exact(double(r.nullity), "nullspace"), exact(kk, "k"), 0.0),
      make_check(tag + "/solutions-diagonal", Relation::Equal, exact(r.solutions_diagonal ? 1 : 0, "nullspace-basis"),
                 exact(1, "true"), 0.0),
      make_check(tag + "/diagonal-commutes", Relation::AtMost, exact(r.max_residual, "residual"), exact(0.0, "zero"), 1e-12),
      make_check(tag + "/off-diagonal-detected", Relation::Equal, exact(r.off_diagonal_detected ? 1 : 0, "random-trials"),
                 exact(1, "true"), 0.0),
  };
}

std::vector<CheckRecord> run_dual_min_max(const SuiteSpec& s, double tol) {
  const PExponent p(s.p);
  const auto maxl1 = POStructure::maxlp(l1_space(s.k), p, cap(s));
  const auto minlinf = POStructure::min(linf_space(s.k), p);
  return per_sample(s.samples, [&](int i) {
    const auto seed = sample_seed(s, i);
    Rng rng = make_rng(seed, 0xd1);
    const auto u = random_matrix_over(rng, s.n, s.n, s.k);
    const auto o = norm_options(s, seed);
    const auto od = dual_options(s, seed);
    std::vector<CheckRecord> out;
    out.push_back(make_check(sample_id("dual-min-max/max-dual", i, "l1"), Relation::Equal, dual_matrix_norm(maxl1, u, o),
                             min_matrix_norm(linf_space(s.k), u, p, o), tol, s.resolution));
    out.push_back(make_check(sample_id("dual-min-max/min-dual", i, "linf"), Relation::Equal, dual_matrix_norm(minlinf, u, od),
                             maxlp_matrix_norm(l1_space(s.k), u, p, cap(s), o), tol, s.resolution));
    return out;
  });
}

std::vector<CheckRecord> run_bidual(const SuiteSpec& s, double tol) {
  const PExponent p(s.p);
  const auto X = FiniteNormedSpace::lp(s.k, 1.0);
  const auto bi = POStructure::dual(POStructure::dual(POStructure::min(X, p)));
  return per_sample(s.samples, [&](int i) {
    const auto seed = sample_seed(s, i);
    Rng rng = make_rng(seed, 0xb1);
    const auto u = random_matrix_over(rng, s.n, s.n, s.k);
    MatNormOptions od = dual_options(s, seed);
    od.cb_levels = 1;
    return std::vector{make_check(sample_id("bidual/min-l1", i, "bidual"), Relation::Equal, matrix_norm(bi, u, od),
                                  min_matrix_norm(X, u, p, norm_options(s, seed)), tol, s.resolution)};
  });
}

std::vector<CheckRecord> run_inj_min(const SuiteSpec& s, double tol) {
  const PExponent p(s.p);
  Rng grng = make_rng(s.seed, 0x1e);
  const Mat omx = Mat::Identity(s.k, s.k);
  const Mat omy = random_mat(grng, s.k2 + 1, s.k2);
  const auto Y = FiniteNormedSpace::norming_set(omy);
  const auto XY = FiniteNormedSpace::norming_set(kron(omy, omx));
  const Eigen::Index d = s.k * s.k2;
  return per_sample(s.samples, [&](int i) {
    const auto seed = sample_seed(s, i);
    Rng rng = make_rng(seed, 0x1f);
    const auto u = random_matrix_over(rng, s.n, s.n, d);
    const auto o = norm_options(s, seed);
    // iterated: functionals on the first factor, then min over the second
    Bounds lhs{0.0, 0.0, std::nullopt, "iterated", "iterated"};
    for (Eigen::Index r = 0; r < omx.rows(); ++r) {
      std::vector<Mat> red(static_cast<std::size_t>(s.k2), Mat::Zero(s.n, s.n));
      for (Eigen::Index j = 0; j < s.k2; ++j)
        for (Eigen::Index a = 0; a < s.k; ++a) red[std::size_t(j)] += omx(r, a) * u.slices()[std::size_t(a + s.k * j)];
      const Bounds b = min_matrix_norm(Y, MatrixOverSpace(red), p, o);
      lhs.lower = std::max(lhs.lower, b.lower);
      lhs.upper = std::max(lhs.upper, b.upper);
    }
    return std::vector{make_check(sample_id("inj-min/linf-normset", i, "identity"), Relation::Equal, lhs,
                                  min_matrix_norm(XY, u, p, o), tol, s.resolution)};
  });
}

std::vector<CheckRecord> run_l1_max(const SuiteSpec& s, double tol) {
  const PExponent p(s.p);
  const auto minlinf = POStructure::min(linf_space(s.k), p);
  return per_sample(s.samples, [&](int i) {
    const auto seed = sample_seed(s, i);
    Rng rng = make_rng(seed, 0x11);
    const auto u = random_matrix_over(rng, s.n, s.n, s.k);
    const auto o = norm_options(s, seed);
    const Bounds mx = maxlp_matrix_norm(l1_space(s.k), u, p, cap(s), o);
    std::vector<CheckRecord> out;
    out.push_back(make_check(sample_id("l1-max", i, "dual-embedding"), Relation::Equal, mx,
                             dual_matrix_norm(minlinf, u, dual_options(s, seed)), tol, s.resolution));
    // a bounded map l^1(k) -> B(l^p(m)) is contractive after scaling by max ||A_i||
    const Eigen::Index m = std::max<Eigen::Index>(2, s.n);
    std::vector<Mat> A;
    double c = 0.0;
    for (Eigen::Index a = 0; a < s.k; ++a) {
      A.push_back(random_mat(rng, m, m));
      c = std::max(c, opnorm_bounds(A.back(), p, o.op).upper);
    }
    for (auto& M : A) M /= c;
    out.push_back(make_check(sample_id("l1-max", i, "bounded-is-cb"), Relation::AtMost,
                             opnorm_bounds(u.amplify(A), p, o.op), mx, tol, s.resolution));
    const Vec x = random_vec(rng, s.k);
    out.push_back(make_check(sample_id("l1-max", i, "level-one"), Relation::Equal,
                             maxlp_matrix_norm(l1_space(s.k), MatrixOverSpace::scalar_times(Mat::Ones(1, 1), x), p, cap(s), o),
                             exact(sum_abs(x), "sum-abs"), 1e-6, s.resolution));
    return out;
  });
}

std::vector<CheckRecord> run_l1_quotient(const SuiteSpec& s, double tol) {
  const PExponent p(s.p);
  return per_sample(s.samples, [&](int i) {
    const auto seed = sample_seed(s, i);
    Rng rng = make_rng(seed, 0x12);
    const auto u = random_matrix_over(rng, s.n, s.n, s.k);
    const auto o = norm_options(s, seed);
    return std::vector{make_check(sample_id("l1-quotient", i, "nuclear"), Relation::Equal,
                                  maxlp_matrix_norm(l1_space(s.k), u, p, cap(s), o), nuclear_route(u, s.k, p, o), tol,
                                  s.resolution)};
  });
}

std::vector<CheckRecord> run_l1_tensor(const SuiteSpec& s, double tol) {
  const PExponent p(s.p);
  const Eigen::Index K = s.k * s.k2;
  return per_sample(s.samples, [&](int i) {
    const auto seed = sample_seed(s, i);
    Rng rng = make_rng(seed, 0x13);
    const auto o = norm_options(s, seed);
    std::vector<CheckRecord> out;
    // l^1(k1) (x) l^1(k2) = l^1(k1 k2), coordinates vec(c)
    const auto u = random_matrix_over(rng, s.n, s.n, K);
    out.push_back(make_check(sample_id("l1-tensor", i, "product-vs-nuclear"), Relation::Equal,
                             maxlp_matrix_norm(l1_space(K), u, p, cap(s), o), nuclear_route(u, K, p, o), tol,
                             s.resolution));
    const Mat c = random_mat(rng, s.k, s.k2);
    ProjOptions po;
    po.seed = seed;
    out.push_back(make_check(sample_id("l1-tensor", i, "projective-collapse"), Relation::Equal,
                             proj_norm(TensorElem(l1_space(s.k), l1_space(s.k2), c), po),
                             exact(c.cwiseAbs().sum(), "sum-abs"), 1e-3, s.resolution));
    const Mat alpha = random_mat(rng, s.n, s.n);
    const Eigen::Index at = static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(K));
    out.push_back(make_check(sample_id("l1-tensor", i, "rank-one"), Relation::Equal,
                             maxlp_matrix_norm(l1_space(K), MatrixOverSpace::scalar_times(alpha, Vec::Unit(K, at)), p,
                                               cap(s), o),
                             opnorm_bounds(alpha, p, o.op), tol, s.resolution));
    return out;
  });
}

void validate(const SuiteSpec& s) {
  if (std::find(suite_ids().begin(), suite_ids().end(), s.id) == suite_ids().end())
    throw std::invalid_argument("unknown suite \"" + s.id + "\"");
  if (s.n < 1 || s.k < 1 || s.k2 < 1) throw std::invalid_argument("suite: n, k, k2 must be >= 1");
  if (s.samples < 0) throw std::invalid_argument("suite: samples must be >= 0");
  if (s.levels < 1) throw std::invalid_argument("suite: levels must be >= 1");
  if (s.starts < 0 || s.cap_m < 0) throw std::invalid_argument("suite: starts and cap_m must be >= 0");
  if (!(s.resolution > 0.0)) throw std::invalid_argument("suite: resolution must be positive");
  PExponent check(s.p);
  (void)check;
}

}  // namespace

Report run_suite(const SuiteSpec& s) {
  validate(s);
  const auto t0 = Clock::now();
  const double tol = s.tol >= 0.0 ? s.tol : default_tol(s);
  Report r;
  r.seed = s.seed;
  r.params = s.params();
  if (s.id == "axioms") r.checks = run_axioms(s, tol);
  else if (s.id == "cross-norm") r.checks = run_cross_norm(s, tol);
  else if (s.id == "linfty") r.checks = run_linfty(s, tol);
  else if (s.id == "expectation") r.checks = run_expectation(s, tol);
  else if (s.id == "commutant") r.checks = run_commutant(s);
  else if (s.id == "dual-min-max") r.checks = run_dual_min_max(s, tol);
  else if (s.id == "bidual") r.checks = run_bidual(s, tol);
  else if (s.id == "inj-min") r.checks = run_inj_min(s, tol);
  else if (s.id == "l1-max") r.checks = run_l1_max(s, tol);
  else if (s.id == "l1-quotient") r.checks = run_l1_quotient(s, tol);
  else if (s.id == "l1-tensor") r.checks = run_l1_tensor(s, tol);
  r.sort();
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return r;
}

Report suite_l1_tensor(Eigen::Index k1, Eigen::Index k2, Eigen::Index n, double p, int samples, std::uint64_t seed) {
  SuiteSpec s;
  s.id = "l1-tensor";
  s.k = k1;
  s.k2 = k2;
  s.n = n;
  s.p = p;
  s.samples = samples;
  s.seed = seed;
  return run_suite(s);
}

}  // namespace pops
