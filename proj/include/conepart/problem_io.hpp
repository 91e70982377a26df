#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "conepart/partition.hpp"

namespace conepart {

inline constexpr const char* kToolVersion = "conepart 0.1.0";

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// On-disk problem: block list plus the dense row-major matrix. Entries are
/// JSON numbers or exact "p/q" strings; integers round-trip bit-exactly.
struct ProblemFile {
  std::string name;
  std::vector<ConeBlock> blocks;
  int m = 0;
  std::vector<Rational> entries;  // m x n, row-major

  int n() const;
  MultifoldCone cone() const { return MultifoldCone(blocks); }
  RationalMatrix rational_matrix() const;
  ConicSystem conic_system() const;
  bool all_orthant() const;
};

bool operator==(const ProblemFile& a, const ProblemFile& b);

ProblemFile parse_problem(const std::string& text);
std::string serialize_problem(const ProblemFile& p);
ProblemFile load_problem(const std::string& path);

/// Full classification artifact: report, certificates, tolerances, stats and
/// the problem itself so the file re-verifies on its own.
struct ReportFile {
  std::string version = kToolVersion;
  ProblemFile problem;
  PartitionReport report;
  CertificatePair certificates;
  double verify_tol = 1e-8;
  bool verified = false;
  double wall_seconds = 0.0;
  int total_solver_iterations = 0;
};

std::string serialize_report(const ReportFile& r);
ReportFile parse_report(const std::string& text);
ReportFile load_report(const std::string& path);

/// One-line set listing plus diagnostics, the CLI's text format.
std::string format_report_text(const ReportFile& r);

void write_file(const std::string& path, const std::string& text);
std::string read_file(const std::string& path);

}  // namespace conepart
