#pragma once

#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

#include "conepart/cone.hpp"
#include "conepart/conic_solver.hpp"
#include "conepart/exact_lp.hpp"

namespace conepart {

/// The homogeneous pair under study: Ax = 0, x in K and A^T y in K*.
struct ConicSystem {
  Eigen::MatrixXd matrix;  // m x n, columns grouped into blocks A_1 ... A_r
  MultifoldCone cone;

  ConicSystem(Eigen::MatrixXd A, MultifoldCone K) : matrix(std::move(A)), cone(std::move(K)) {
    if (matrix.cols() != cone.dim())
      throw std::invalid_argument("conic system: column count does not match cone dimension");
    if (matrix.rows() < 1) throw std::invalid_argument("conic system: need at least one row");
  }

  int rows() const { return static_cast<int>(matrix.rows()); }
  Eigen::MatrixXd block_cols(int i) const {
    return matrix.middleCols(cone.offset(i), cone.block(i).dim);
  }
};

enum class IndexClass { InB, InBPrime, InN, InNPrime, InC, InO };
const char* class_label(IndexClass c);  // "B", "B'", "N", "N'", "C", "O"

enum class Membership { Member, NonMember, Indeterminate };

/// Outcome of one auxiliary program. The optimal value sits in [0, 1-ish] by
/// construction; values inside (eps/10, 10*eps) are refused rather than
/// rounded.
struct IndexTest {
  double value = 0.0;
  Membership verdict = Membership::Indeterminate;
  SolveStatus status = SolveStatus::Optimal;
  int iterations = 0;
};

struct IndexDiagnostics {
  IndexTest in_b, in_n, not_in_n0, not_in_b0;
};

struct PartitionReport {
  enum class Mode { Exact, Floating };
  Mode mode = Mode::Floating;
  int block_count = 0;
  std::vector<IndexClass> classes;                 // one label per block index
  std::vector<int> B, BPrime, N, NPrime, C, O;     // the six sets, 0-based, sorted
  std::vector<int> B0, N0;                         // base sets behind Eq-style assembly
  std::vector<IndexDiagnostics> diagnostics;
  SolverConfig config;
  bool full = true;                                // false => PartialClassification
  std::vector<int> indeterminate;                  // affected indices when partial
};

/// Maximizers retained from the index tests, mapped back to the original
/// variables; used to assemble the certificate pair.
struct PerIndexSolutions {
  std::vector<Eigen::VectorXd> x_interior;  // B test: solves (P), block i interior
  std::vector<Eigen::VectorXd> x_nonzero;   // N0 test: solves (P), block i nonzero
  std::vector<Eigen::VectorXd> y_interior;  // N test: solves (D), block i dual-interior
  std::vector<Eigen::VectorXd> y_nonzero;   // B0 test: solves (D), A_i^T y nonzero
};

struct ClassificationResult {
  PartitionReport report;
  PerIndexSolutions solutions;
};

// The four membership tests (0-based block index). Each solves one bounded
// auxiliary conic program; non-convergence surfaces as Indeterminate, never
// as a guess.
IndexTest test_in_B(const ConicSystem& system, int i, const SolverConfig& config);
IndexTest test_in_N(const ConicSystem& system, int i, const SolverConfig& config);
IndexTest test_not_in_N0(const ConicSystem& system, int i, const SolverConfig& config);
IndexTest test_not_in_B0(const ConicSystem& system, int i, const SolverConfig& config);

/// Runs all 4r tests (optionally OpenMP-parallel; results are identical to
/// the serial run), assembles the base sets and the six-set partition
/// B' = B0\(B u N0), N' = N0\(N u B0), O = B0 n N0, C = I\(B0 u N0).
ClassificationResult classify(const ConicSystem& system, const SolverConfig& config, int threads = 1);

/// Same tests decided by the exact rational simplex; only valid when every
/// block is an orthant. A_exact must agree with system.matrix.
ClassificationResult classify_exact(const ConicSystem& system, const RationalMatrix& A_exact,
                                    const SolverConfig& config);

/// Strictly complementary witness pair for the computed partition.
struct CertificatePair {
  Eigen::VectorXd xbar;  // length n, solves (P)
  Eigen::VectorXd ybar;  // length m, solves (D)
  // per block: interior margin for B (resp. N), canonical pairing for
  // B'|C (resp. N'|C), and the block sup-norm for the zero classes
  std::vector<double> primal_margins;
  std::vector<double> dual_margins;
};

/// Sums the retained per-index maximizers over I\N0 and B (primal side) and
/// over I\B0 and N (dual side), each summand normalized to unit canonical
/// pairing, then rescales so the smallest required margin equals
/// max(eps, margin/2).
CertificatePair build_certificates(const ConicSystem& system, const PartitionReport& report,
                                   const PerIndexSolutions& solutions);

struct VerifyResult {
  bool ok = true;
  std::vector<std::string> violations;
};

/// Pure recomputation: feasibility residuals, per-class margin and zero
/// checks, and blockwise complementarity <xbar_i, A_i^T ybar>.
VerifyResult verify_certificates(const ConicSystem& system, const PartitionReport& report,
                                 const CertificatePair& certs, double tol);

}  // namespace conepart
