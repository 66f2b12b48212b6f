// pops: certified norms of p-operator space constructions and the
// verification suites.  JSON arguments are literal JSON or @path.

#include "pops/harness.hpp"
#include "pops/io.hpp"
#include "pops/tensor.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace pops;

namespace {

Json read_json_arg(const std::string& arg) {
  if (!arg.empty() && arg[0] == '@') {
    std::ifstream f(arg.substr(1));
    if (!f) throw std::runtime_error("cannot read " + arg.substr(1));
    return Json::parse(f);
  }
  return Json::parse(arg);
}

void write_out(const Json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(out);
  if (!f) throw std::runtime_error("cannot write " + out);
  f << j.dump(2) << '\n';
}

Json bounds_json(const Bounds& b) {
  Json j;
  j["bracket"] = bracket_json(b);
  j["lower_method"] = b.lower_method;
  j["upper_method"] = b.upper_method;
  if (b.witness) j["witness"] = to_json(*b.witness);
  return j;
}

void print_summary(const Report& r, std::ostream& os) {
  os << "pass " << r.count(Status::Pass) << "  fail " << r.count(Status::Fail) << "  inconclusive "
     << r.count(Status::Inconclusive) << "  digest " << r.digest() << '\n';
  for (const auto& c : r.checks)
    if (c.status != Status::Pass) os << "  " << to_string(c.status) << "  " << c.id << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certified norms for finite-dimensional p-operator spaces"};
  app.require_subcommand(1);
  app.fallthrough();

  double p = 2.0;
  std::uint64_t seed = 0;
  int starts = 4, cap_m = 0;
  std::string out;
  app.add_option("--p", p, "exponent p in (1, inf)")->capture_default_str();
  app.add_option("--seed", seed, "random seed")->capture_default_str();
  app.add_option("--starts", starts, "random starts for searches")->capture_default_str();
  app.add_option("--cap-m", cap_m, "representation dimension cap (0: automatic)")->capture_default_str();
  app.add_option("--out", out, "write JSON here instead of stdout");

  auto* op = app.add_subcommand("opnorm", "bracket for ||A||_{p -> p}");
  std::string matrix;
  op->add_option("matrix", matrix, "matrix JSON, rows of [re, im]")->required();

  auto* sn = app.add_subcommand("space-norm", "bracket for ||x||_X (or ||phi||_{X*})");
  std::string space, vec;
  bool dual = false;
  sn->add_option("space", space, "space JSON")->required();
  sn->add_option("vector", vec, "vector JSON")->required();
  sn->add_flag("--dual", dual, "evaluate the dual norm");

  auto* mn = app.add_subcommand("matnorm", "bracket for ||u||_n in a structure");
  std::string structure, element;
  mn->add_option("structure", structure, "structure JSON")->required();
  mn->add_option("element", element, "{rows, cols, entries} JSON")->required();

  auto* tn = app.add_subcommand("tensor", "injective, projective or nuclear norm of a tensor");
  std::string kind = "proj", xs, ys, coeffs;
  tn->add_option("--kind", kind, "inj | proj | nuclear")->check(CLI::IsMember({"inj", "proj", "nuclear"}));
  tn->add_option("--x", xs, "first factor space JSON (inj, proj)");
  tn->add_option("--y", ys, "second factor space JSON (inj, proj)");
  tn->add_option("coeffs", coeffs, "coefficient matrix JSON")->required();

  auto* vf = app.add_subcommand("verify", "run a verification suite and write a report");
  SuiteSpec spec;
  std::string suite = "axioms";
  bool strict = false;
  double tol = -1.0, resolution = 0.0;
  vf->add_option("--suite", suite, "suite id or \"all\"")->capture_default_str();
  vf->add_option("--n", spec.n, "matrix level")->capture_default_str();
  vf->add_option("--k", spec.k, "dimension / atoms")->capture_default_str();
  vf->add_option("--k2", spec.k2, "second factor dimension")->capture_default_str();
  vf->add_option("--samples", spec.samples, "samples per suite")->capture_default_str();
  vf->add_option("--levels", spec.levels, "amplification levels for cb estimates")->capture_default_str();
  vf->add_option("--structure", spec.structure, "structure for axioms / cross-norm")
      ->check(CLI::IsMember(structure_names()))
      ->capture_default_str();
  vf->add_option("--tol", tol, "overlap slack (default per suite)");
  vf->add_option("--resolution", resolution, "relative width above which agreement is inconclusive");
  vf->add_flag("--strict", strict, "inconclusive checks also give exit code 1");

  auto* rp = app.add_subcommand("report", "summarise a report file and check its digest");
  std::string in;
  rp->add_option("file", in, "report JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*op) {
      OpnormConfig cfg;
      cfg.seed = seed;
      cfg.starts = std::max(1, starts);
      write_out(bounds_json(opnorm_bounds(mat_from_json(read_json_arg(matrix)), PExponent(p), cfg)), out);
    } else if (*sn) {
      const auto X = space_from_json(read_json_arg(space));
      const Vec v = vec_from_json(read_json_arg(vec));
      SpaceOptions so;
      so.seed = seed;
      write_out(bounds_json(dual ? dual_norm(X, v, so) : norm(X, v, so)), out);
    } else if (*mn) {
      const auto S = structure_from_json(read_json_arg(structure));
      const auto u = matrix_over_from_json(read_json_arg(element));
      MatNormOptions o;
      o.seed = seed;
      o.op.seed = seed;
      o.sup.seed = seed;
      o.maxlp_starts = starts;
      if (cap_m > 0 && S.kind() == StructureKind::MaxLp)
        write_out(bounds_json(maxlp_matrix_norm(S.space(), u, S.p(), cap_m, o)), out);
      else
        write_out(bounds_json(matrix_norm(S, u, o)), out);
    } else if (*tn) {
      const Mat c = mat_from_json(read_json_arg(coeffs));
      ProjOptions po;
      po.seed = seed;
      if (kind == "nuclear") {
        if (c.rows() != c.cols()) throw std::invalid_argument("nuclear: coefficient matrix must be square");
        write_out(bounds_json(nuclear_norm(NuclearSpace(c.rows(), PExponent(p)), c, po)), out);
      } else {
        if (xs.empty() || ys.empty()) throw std::invalid_argument("tensor: --x and --y are required");
        const TensorElem t(space_from_json(read_json_arg(xs)), space_from_json(read_json_arg(ys)), c);
        write_out(bounds_json(kind == "inj" ? inj_norm(t) : proj_norm(t, po)), out);
      }
    } else if (*vf) {
      spec.p = p;
      spec.seed = seed;
      spec.starts = starts;
      spec.cap_m = cap_m;
      spec.tol = tol;
      if (resolution > 0.0) spec.resolution = resolution;
      std::vector<Report> parts;
      if (suite == "all") {
        for (const auto& id : suite_ids()) {
          spec.id = id;
          parts.push_back(run_suite(spec));
        }
      } else {
        spec.id = suite;
        parts.push_back(run_suite(spec));
      }
      const Report r = parts.size() == 1 ? parts.front() : merge_reports(parts);
      if (out.empty())
        std::cout << r.to_json().dump(2) << '\n';
      else
        emit_report(r, out);
      print_summary(r, std::cerr);
      return r.exit_code(strict);
    } else if (*rp) {
      const Json j = read_json_arg("@" + in);
      Report r;
      r.seed = j.at("meta").at("seed").get<std::uint64_t>();
      r.version = j.at("meta").at("version").get<std::string>();
      r.params = j.at("meta").at("params");
      for (const auto& c : j.at("checks")) {
        CheckRecord rec;
        rec.id = c.at("id").get<std::string>();
        const std::string st = c.at("status").get<std::string>();
        rec.status = st == "pass" ? Status::Pass : st == "fail" ? Status::Fail : Status::Inconclusive;
        rec.relation = c.value("relation", "=") == "<=" ? Relation::AtMost : Relation::Equal;
        auto end = [](const Json& v, double inf) { return v.is_null() ? inf : v.get<double>(); };
        rec.lhs.lower = end(c.at("lhs")[0], -kInf);
        rec.lhs.upper = end(c.at("lhs")[1], kInf);
        rec.rhs.lower = end(c.at("rhs")[0], -kInf);
        rec.rhs.upper = end(c.at("rhs")[1], kInf);
        rec.tol = c.at("tol").get<double>();
        rec.witness = c.at("witness");
        r.checks.push_back(std::move(rec));
      }
      print_summary(r, std::cout);
      const std::string stored = j.value("digest", "");
      if (!stored.empty() && stored != r.digest()) {
        std::cout << "digest mismatch: stored " << stored << '\n';
        return 2;
      }
      return r.exit_code(strict);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
