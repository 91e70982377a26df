#include "conepart/oracle.hpp"

#include <sstream>

#include "conepart/generator.hpp"
#include "conepart/geometry.hpp"

namespace conepart {

namespace {

std::string set_str(const std::vector<int>& v) {
  std::string s = "{";
  for (size_t k = 0; k < v.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(v[k] + 1);
  }
  return s + "}";
}

}  // namespace

OracleSummary oracle_check(std::uint64_t seed, int count, int m, int n, const SolverConfig& config) {
  if (count < 0 || (count > 0 && (m < 1 || n < 1)))
    throw std::invalid_argument("oracle_check: need m, n >= 1");
  OracleSummary sum;
  for (int k = 0; k < count; ++k) {
    GenSpec spec;
    spec.seed = seed + static_cast<std::uint64_t>(k);
    spec.m = m;
    spec.blocks.assign(static_cast<size_t>(n), orthant_block(1));
    ProblemFile prob = generate_instance(spec);
    RationalMatrix A = prob.rational_matrix();
    ConicSystem sys = prob.conic_system();
    ++sum.instances;

    GtPartition gt = gt_partition_exact(A);
    GtPartition geo = geometric_classify_polyhedral(A);
    bool three = three_way_check(A);
    ClassificationResult cls = classify(sys, config);
    const PartitionReport& rep = cls.report;

    std::ostringstream why;
    if (geo.B != gt.B || geo.N != gt.N)
      why << " geometric " << set_str(geo.B) << "/" << set_str(geo.N) << " vs exact " << set_str(gt.B)
          << "/" << set_str(gt.N) << ";";
    if (!three) {
      why << " three-way descriptions disagree;";
      ++sum.three_way_failures;
    }
    if (!rep.full) {
      why << " floating classification indeterminate on " << set_str(rep.indeterminate) << ";";
      ++sum.indeterminates;
    }
    bool mismatch = false;
    if (rep.B != gt.B || rep.N != gt.N) {
      why << " floating " << set_str(rep.B) << "/" << set_str(rep.N) << " vs exact " << set_str(gt.B)
          << "/" << set_str(gt.N) << ";";
      mismatch = true;
    }
    if (rep.B0 != rep.B || rep.N0 != rep.N) {
      why << " polyhedral base sets differ from B/N;";
      mismatch = true;
    }
    if (!rep.BPrime.empty() || !rep.NPrime.empty() || !rep.O.empty()) {
      why << " polyhedral B'/N'/O not empty;";
      mismatch = true;
    }
    if (geo.B != gt.B || geo.N != gt.N) mismatch = true;
    if (mismatch) ++sum.mismatches;
    if (!why.str().empty())
      sum.failures.push_back("instance " + std::to_string(k) + " (seed " + std::to_string(spec.seed) +
                             "):" + why.str());
  }
  return sum;
}

}  // namespace conepart
