#include "conepart/problem_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace conepart {

using nlohmann::json;

int ProblemFile::n() const {
  int total = 0;
  for (const ConeBlock& b : blocks) total += b.dim;
  return total;
}

RationalMatrix ProblemFile::rational_matrix() const {
  RationalMatrix A(m, n());
  A.entries = entries;
  return A;
}

ConicSystem ProblemFile::conic_system() const {
  const int cols = n();
  Eigen::MatrixXd A(m, cols);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < cols; ++c) A(r, c) = to_double(entries[static_cast<size_t>(r) * cols + c]);
  return ConicSystem(std::move(A), cone());
}

bool ProblemFile::all_orthant() const {
  for (const ConeBlock& b : blocks)
    if (b.kind != ConeKind::Orthant) return false;
  return true;
}

bool operator==(const ProblemFile& a, const ProblemFile& b) {
  return a.name == b.name && a.blocks == b.blocks && a.m == b.m && a.entries == b.entries;
}

namespace {

json rational_to_json(const Rational& q) {
  if (q.get_den() == 1 && q.get_num().fits_slong_p()) return json(q.get_num().get_si());
  return json(format_rational(q));
}

Rational rational_from_json(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<long long>()));
  if (j.is_number_float()) return Rational(j.get<double>());  // exact binary value
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const std::exception& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  throw ParseError(where + ": expected a number or a \"p/q\" string");
}

json blocks_to_json(const std::vector<ConeBlock>& blocks) {
  json arr = json::array();
  for (const ConeBlock& b : blocks)
    arr.push_back({{"type", b.kind == ConeKind::Orthant ? "orthant" : "soc"}, {"dim", b.dim}});
  return arr;
}

std::vector<ConeBlock> blocks_from_json(const json& arr) {
  if (!arr.is_array() || arr.empty()) throw ParseError("blocks: expected a nonempty array");
  std::vector<ConeBlock> blocks;
  for (size_t k = 0; k < arr.size(); ++k) {
    const json& b = arr[k];
    std::string where = "blocks[" + std::to_string(k) + "]";
    if (!b.is_object() || !b.contains("type") || !b.contains("dim"))
      throw ParseError(where + ": expected {type, dim}");
    std::string type = b["type"].get<std::string>();
    int dim = b["dim"].get<int>();
    if (dim < 1) throw ParseError(where + ": dim must be >= 1");
    if (type == "orthant")
      blocks.push_back(orthant_block(dim));
    else if (type == "soc")
      blocks.push_back(soc_block(dim));
    else
      throw ParseError(where + ": unknown block type \"" + type + "\"");
  }
  return blocks;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (long i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd vector_from_json(const json& arr, const std::string& where) {
  if (!arr.is_array()) throw ParseError(where + ": expected an array");
  Eigen::VectorXd v(static_cast<long>(arr.size()));
  for (size_t i = 0; i < arr.size(); ++i) v[static_cast<long>(i)] = arr[i].get<double>();
  return v;
}

json indices_to_json(const std::vector<int>& idx) {  // 1-based on disk
  json arr = json::array();
  for (int i : idx) arr.push_back(i + 1);
  return arr;
}

std::vector<int> indices_from_json(const json& arr, const std::string& where) {
  if (!arr.is_array()) throw ParseError(where + ": expected an array");
  std::vector<int> out;
  for (const json& j : arr) out.push_back(j.get<int>() - 1);
  return out;
}

const char* membership_str(Membership m) {
  switch (m) {
    case Membership::Member: return "member";
    case Membership::NonMember: return "nonmember";
    default: return "indeterminate";
  }
}

Membership membership_parse(const std::string& s) {
  if (s == "member") return Membership::Member;
  if (s == "nonmember") return Membership::NonMember;
  return Membership::Indeterminate;
}

SolveStatus status_parse(const std::string& s) {
  if (s == "Optimal") return SolveStatus::Optimal;
  if (s == "PrimalInfeasible") return SolveStatus::PrimalInfeasible;
  if (s == "DualInfeasible") return SolveStatus::DualInfeasible;
  if (s == "IterLimit") return SolveStatus::IterLimit;
  return SolveStatus::Numerical;
}

json test_to_json(const IndexTest& t) {
  return {{"value", t.value},
          {"verdict", membership_str(t.verdict)},
          {"status", to_string(t.status)},
          {"iterations", t.iterations}};
}

IndexTest test_from_json(const json& j) {
  IndexTest t;
  t.value = j.at("value").get<double>();
  t.verdict = membership_parse(j.at("verdict").get<std::string>());
  t.status = status_parse(j.at("status").get<std::string>());
  t.iterations = j.at("iterations").get<int>();
  return t;
}

IndexClass class_parse(const std::string& s, const std::string& where) {
  if (s == "B") return IndexClass::InB;
  if (s == "B'") return IndexClass::InBPrime;
  if (s == "N") return IndexClass::InN;
  if (s == "N'") return IndexClass::InNPrime;
  if (s == "C") return IndexClass::InC;
  if (s == "O") return IndexClass::InO;
  throw ParseError(where + ": unknown class label \"" + s + "\"");
}

std::string set_to_text(const std::vector<int>& idx) {
  std::string out = "{";
  for (size_t k = 0; k < idx.size(); ++k) {
    if (k) out += ",";
    out += std::to_string(idx[k] + 1);
  }
  return out + "}";
}

}  // namespace

ProblemFile parse_problem(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("problem file: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("problem file: expected a JSON object");
  ProblemFile p;
  p.name = j.value("name", "");
  if (!j.contains("blocks")) throw ParseError("problem file: missing \"blocks\"");
  p.blocks = blocks_from_json(j["blocks"]);
  if (!j.contains("A") || !j["A"].is_array()) throw ParseError("problem file: missing matrix \"A\"");
  const json& arr = j["A"];
  const int n = p.n();
  if (n <= 0 || arr.size() % static_cast<size_t>(n) != 0)
    throw ParseError("problem file: entry count " + std::to_string(arr.size()) +
                     " is not a multiple of the block dimension total " + std::to_string(n));
  p.m = static_cast<int>(arr.size()) / n;
  if (p.m < 1) throw ParseError("problem file: matrix has no rows");
  if (j.contains("m") && j["m"].get<int>() != p.m)
    throw ParseError("problem file: declared m = " + std::to_string(j["m"].get<int>()) +
                     " but entries imply m = " + std::to_string(p.m));
  p.entries.reserve(arr.size());
  for (size_t k = 0; k < arr.size(); ++k)
    p.entries.push_back(rational_from_json(arr[k], "A[" + std::to_string(k) + "]"));
  return p;
}

std::string serialize_problem(const ProblemFile& p) {
  json j;
  j["name"] = p.name;
  j["blocks"] = blocks_to_json(p.blocks);
  j["m"] = p.m;
  json arr = json::array();
  for (const Rational& q : p.entries) arr.push_back(rational_to_json(q));
  j["A"] = arr;
  return j.dump(2) + "\n";
}

ProblemFile load_problem(const std::string& path) { return parse_problem(read_file(path)); }

std::string serialize_report(const ReportFile& r) {
  json j;
  j["version"] = r.version;
  j["mode"] = r.report.mode == PartitionReport::Mode::Exact ? "exact" : "floating";
  j["problem"] = json::parse(serialize_problem(r.problem));
  j["tolerances"] = {{"feas_tol", r.report.config.feas_tol},
                     {"gap_tol", r.report.config.gap_tol},
                     {"max_iter", r.report.config.max_iter},
                     {"classification_eps", r.report.config.classification_eps}};
  json part;
  json classes = json::array();
  for (IndexClass c : r.report.classes) classes.push_back(class_label(c));
  part["classes"] = classes;
  part["B"] = indices_to_json(r.report.B);
  part["B'"] = indices_to_json(r.report.BPrime);
  part["N"] = indices_to_json(r.report.N);
  part["N'"] = indices_to_json(r.report.NPrime);
  part["C"] = indices_to_json(r.report.C);
  part["O"] = indices_to_json(r.report.O);
  part["B0"] = indices_to_json(r.report.B0);
  part["N0"] = indices_to_json(r.report.N0);
  j["partition"] = part;
  j["full"] = r.report.full;
  j["indeterminate"] = indices_to_json(r.report.indeterminate);
  json diags = json::array();
  for (const IndexDiagnostics& d : r.report.diagnostics)
    diags.push_back({{"in_B", test_to_json(d.in_b)},
                     {"in_N", test_to_json(d.in_n)},
                     {"not_in_N0", test_to_json(d.not_in_n0)},
                     {"not_in_B0", test_to_json(d.not_in_b0)}});
  j["diagnostics"] = diags;
  j["certificates"] = {{"xbar", vector_to_json(r.certificates.xbar)},
                       {"ybar", vector_to_json(r.certificates.ybar)},
                       {"primal_margins", r.certificates.primal_margins},
                       {"dual_margins", r.certificates.dual_margins}};
  j["verify"] = {{"tol", r.verify_tol}, {"passed", r.verified}};
  j["stats"] = {{"wall_seconds", r.wall_seconds},
                {"solver_iterations", r.total_solver_iterations}};
  return j.dump(2) + "\n";
}

ReportFile parse_report(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("report file: ") + e.what());
  }
  ReportFile r;
  r.version = j.value("version", "");
  r.problem = parse_problem(j.at("problem").dump());
  PartitionReport& rep = r.report;
  rep.mode = j.value("mode", "floating") == std::string("exact") ? PartitionReport::Mode::Exact
                                                                 : PartitionReport::Mode::Floating;
  const json& tol = j.at("tolerances");
  rep.config.feas_tol = tol.at("feas_tol").get<double>();
  rep.config.gap_tol = tol.at("gap_tol").get<double>();
  rep.config.max_iter = tol.at("max_iter").get<int>();
  rep.config.classification_eps = tol.at("classification_eps").get<double>();
  const json& part = j.at("partition");
  rep.classes.clear();
  for (const json& c : part.at("classes"))
    rep.classes.push_back(class_parse(c.get<std::string>(), "classes"));
  rep.block_count = static_cast<int>(rep.classes.size());
  rep.B = indices_from_json(part.at("B"), "B");
  rep.BPrime = indices_from_json(part.at("B'"), "B'");
  rep.N = indices_from_json(part.at("N"), "N");
  rep.NPrime = indices_from_json(part.at("N'"), "N'");
  rep.C = indices_from_json(part.at("C"), "C");
  rep.O = indices_from_json(part.at("O"), "O");
  rep.B0 = indices_from_json(part.at("B0"), "B0");
  rep.N0 = indices_from_json(part.at("N0"), "N0");
  rep.full = j.value("full", true);
  rep.indeterminate = indices_from_json(j.value("indeterminate", json::array()), "indeterminate");
  rep.diagnostics.clear();
  if (j.contains("diagnostics"))
    for (const json& d : j["diagnostics"])
      rep.diagnostics.push_back({test_from_json(d.at("in_B")), test_from_json(d.at("in_N")),
                                 test_from_json(d.at("not_in_N0")), test_from_json(d.at("not_in_B0"))});
  const json& certs = j.at("certificates");
  r.certificates.xbar = vector_from_json(certs.at("xbar"), "xbar");
  r.certificates.ybar = vector_from_json(certs.at("ybar"), "ybar");
  r.certificates.primal_margins = certs.at("primal_margins").get<std::vector<double>>();
  r.certificates.dual_margins = certs.at("dual_margins").get<std::vector<double>>();
  r.verify_tol = j.at("verify").at("tol").get<double>();
  r.verified = j.at("verify").at("passed").get<bool>();
  if (j.contains("stats")) {
    r.wall_seconds = j["stats"].value("wall_seconds", 0.0);
    r.total_solver_iterations = j["stats"].value("solver_iterations", 0);
  }
  return r;
}

ReportFile load_report(const std::string& path) { return parse_report(read_file(path)); }

std::string format_report_text(const ReportFile& r) {
  std::ostringstream out;
  const PartitionReport& rep = r.report;
  out << "problem: " << (r.problem.name.empty() ? "(unnamed)" : r.problem.name) << "  (" << r.problem.m
      << "x" << r.problem.n() << ", " << rep.block_count << " blocks, mode="
      << (rep.mode == PartitionReport::Mode::Exact ? "exact" : "floating") << ")\n";
  out << "O=" << set_to_text(rep.O) << " B=" << set_to_text(rep.B) << " N=" << set_to_text(rep.N)
      << " N'=" << set_to_text(rep.NPrime) << " B'=" << set_to_text(rep.BPrime)
      << " C=" << set_to_text(rep.C) << "\n";
  out << "B0=" << set_to_text(rep.B0) << " N0=" << set_to_text(rep.N0) << "\n";
  out << "certificates: " << (r.verified ? "verified" : "NOT verified") << " at tol=" << r.verify_tol
      << " (required margins >= " << rep.config.classification_eps << ")\n";
  if (rep.full) {
    out << "status: full classification\n";
  } else {
    out << "status: partial classification, indeterminate blocks:";
    for (int i : rep.indeterminate) out << " " << (i + 1);
    out << "\n";
  }
  return out.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open for writing: " + path);
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace conepart
