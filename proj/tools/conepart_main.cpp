#include <omp.h>

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "conepart/generator.hpp"
#include "conepart/oracle.hpp"
#include "conepart/problem_io.hpp"

namespace {

using namespace conepart;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitPartial = 2;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
}

int run_classify(const std::string& path, double eps, bool exact, const std::string& format,
                 int parallel, const std::string& out_path) {
  ProblemFile prob = load_problem(path);
  ConicSystem sys = prob.conic_system();
  SolverConfig config;
  config.classification_eps = eps;
  config.validate();

  double t0 = omp_get_wtime();
  ClassificationResult cls;
  if (exact) {
    if (!prob.all_orthant()) {
      std::cerr << "error: --exact requires all-orthant blocks\n";
      return kExitInputError;
    }
    cls = classify_exact(sys, prob.rational_matrix(), config);
  } else {
    cls = classify(sys, config, parallel);
  }

  ReportFile report;
  report.problem = prob;
  report.report = cls.report;
  report.verify_tol = config.feas_tol;
  if (cls.report.full) {
    report.certificates = build_certificates(sys, cls.report, cls.solutions);
    report.verified = verify_certificates(sys, cls.report, report.certificates, report.verify_tol).ok;
  } else {
    report.certificates.xbar = Eigen::VectorXd::Zero(sys.cone.dim());
    report.certificates.ybar = Eigen::VectorXd::Zero(sys.rows());
    report.certificates.primal_margins.assign(static_cast<size_t>(cls.report.block_count), 0.0);
    report.certificates.dual_margins.assign(static_cast<size_t>(cls.report.block_count), 0.0);
  }
  report.wall_seconds = omp_get_wtime() - t0;
  for (const IndexDiagnostics& d : cls.report.diagnostics)
    report.total_solver_iterations +=
        d.in_b.iterations + d.in_n.iterations + d.not_in_n0.iterations + d.not_in_b0.iterations;

  emit(format == "json" ? serialize_report(report) : format_report_text(report), out_path);
  return cls.report.full ? kExitOk : kExitPartial;
}

int run_certify(const std::string& path) {
  ReportFile report = load_report(path);
  ConicSystem sys = report.problem.conic_system();
  VerifyResult vr = verify_certificates(sys, report.report, report.certificates, report.verify_tol);
  if (vr.ok) {
    std::cout << "certificates verify at tol=" << report.verify_tol << "\n";
    return kExitOk;
  }
  std::cout << "certificate verification FAILED:\n";
  for (const std::string& v : vr.violations) std::cout << "  " << v << "\n";
  return kExitPartial;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"strict-complementarity partition of multifold conic systems"};
  app.require_subcommand(1);

  // classify
  std::string classify_path, classify_format = "text", classify_out;
  double classify_eps = 1e-6;
  bool classify_exact_flag = false;
  int classify_parallel = 1;
  std::uint64_t classify_seed = 0;
  CLI::App* c = app.add_subcommand("classify", "classify a problem file into B,B',N,N',C,O");
  c->add_option("file", classify_path, "problem JSON file")->required();
  c->add_option("--tol", classify_eps, "classification threshold epsilon (default 1e-6)");
  c->add_flag("--exact", classify_exact_flag, "use the exact rational path (all-orthant only)");
  c->add_option("--format", classify_format, "output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));
  c->add_option("--parallel", classify_parallel, "max concurrent auxiliary solves (default 1)");
  c->add_option("--seed", classify_seed, "reserved; classification is deterministic");
  c->add_option("--out", classify_out, "write the report here instead of stdout");

  // gen
  GenSpec gen_spec;
  std::string gen_blocks = "orthant:1*6", gen_planted = "none", gen_out;
  CLI::App* g = app.add_subcommand("gen", "generate a seeded random problem file");
  g->add_option("--seed", gen_spec.seed, "random seed (default 0)");
  g->add_option("--m", gen_spec.m, "row count (default 3)");
  g->add_option("--blocks", gen_blocks, "block spec, e.g. soc:3,orthant:1*6");
  g->add_option("--density", gen_spec.density, "nonzero fraction in [0,1] (default 1)");
  g->add_option("--planted", gen_planted, "none | lp-oracle (all-orthant, both B and N nonempty)")
      ->check(CLI::IsMember({"none", "lp-oracle"}));
  g->add_option("--out", gen_out, "write the problem here instead of stdout");

  // oracle-check
  std::uint64_t oc_seed = 7;
  int oc_count = 200, oc_m = 4, oc_n = 8;
  CLI::App* o = app.add_subcommand("oracle-check",
                                   "compare floating classification against the exact oracle");
  o->add_option("--count", oc_count, "number of instances (default 200)");
  o->add_option("--seed", oc_seed, "base seed (default 7)");
  o->add_option("--m", oc_m, "rows per instance (default 4)");
  o->add_option("--n", oc_n, "columns per instance (default 8)");

  // certify
  std::string certify_path;
  CLI::App* v = app.add_subcommand("certify", "re-verify a stored report file");
  v->add_option("file", certify_path, "report JSON file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (c->parsed())
      return run_classify(classify_path, classify_eps, classify_exact_flag, classify_format,
                          classify_parallel, classify_out);
    if (g->parsed()) {
      gen_spec.blocks = parse_block_spec(gen_blocks);
      gen_spec.planted =
          gen_planted == "lp-oracle" ? GenSpec::Planted::LpOracle : GenSpec::Planted::None;
      emit(serialize_problem(generate_instance(gen_spec)), gen_out);
      return kExitOk;
    }
    if (o->parsed()) {
      SolverConfig config;
      OracleSummary sum = oracle_check(oc_seed, oc_count, oc_m, oc_n, config);
      std::cout << "instances: " << sum.instances << "\nmismatches: " << sum.mismatches
                << "\nindeterminates: " << sum.indeterminates
                << "\nthree-way failures: " << sum.three_way_failures << "\n";
      for (const std::string& f : sum.failures) std::cout << f << "\n";
      return sum.clean() ? kExitOk : kExitPartial;
    }
    if (v->parsed()) return run_certify(certify_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
