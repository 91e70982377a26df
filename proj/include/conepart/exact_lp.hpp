#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace conepart {

/// Arbitrary-precision rational, always canonical (lowest terms, positive
/// denominator). gmp keeps the invariant for us as long as values are built
/// through arithmetic; strings must go through parse_rational.
using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

Rational parse_rational(const std::string& text);  // "p/q", "p", or decimal
std::string format_rational(const Rational& q);    // "p/q" or "p"
double to_double(const Rational& q);

struct RationalMatrix {
  int rows = 0, cols = 0;
  std::vector<Rational> entries;  // dense row-major

  RationalMatrix() = default;
  RationalMatrix(int r, int c) : rows(r), cols(c), entries(static_cast<size_t>(r) * static_cast<size_t>(c)) {}

  Rational& at(int r, int c) { return entries[static_cast<size_t>(r) * cols + c]; }
  const Rational& at(int r, int c) const { return entries[static_cast<size_t>(r) * cols + c]; }

  RationalVector column(int c) const;
  RationalVector apply(const RationalVector& x) const;            // A x
  RationalVector apply_transpose(const RationalVector& y) const;  // A^T y
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rational optimal_value = 0;
  RationalVector primal;  // length n when Optimal
  RationalVector dual;    // length m when Optimal (multipliers of Ax = b)
};

/// Per-variable interval, either side possibly unbounded.
struct VarBound {
  bool has_lower = true;
  Rational lower = 0;
  bool has_upper = false;
  Rational upper = 0;

  static VarBound nonneg() { return {}; }
  static VarBound free_var() { return {false, 0, false, 0}; }
  static VarBound range(const Rational& lo, const Rational& hi) { return {true, lo, true, hi}; }
};

/// maximize c^T x  s.t.  A x = b,  bounds[j].lower <= x_j <= bounds[j].upper.
///
/// Bounded-variable primal simplex, two phases, Bland's pivoting rule
/// throughout (lowest eligible index), so the run is finite and fully
/// deterministic. Iterations are capped at C(n+m, m); exceeding the cap is a
/// defect and throws.
LpResult solve_lp_exact(const RationalVector& c, const RationalMatrix& A, const RationalVector& b,
                        const std::vector<VarBound>& bounds);

/// Feasibility of { A x = b, x >= 0 } (phase 1 only).
bool feasible_nonneg(const RationalMatrix& A, const RationalVector& b);

struct GtPartition {
  std::vector<int> B, N;  // 0-based column indices
};

/// Strictly complementary witnesses: A xbar = 0, xbar >= 0, xbar_B > 0 and
/// A^T ybar >= 0, (A^T ybar)_N > 0, all exact.
struct GtWitness {
  GtPartition partition;
  RationalVector xbar;  // length n
  RationalVector ybar;  // length m
  std::vector<RationalVector> primal_maximizers;  // per column in B
};

/// Goldman-Tucker partition of the columns of A for Ax = 0, x >= 0 versus
/// A^T y >= 0: column i is in B iff max{ x_i : Ax = 0, 0 <= x, x_i <= 1 }
/// equals 1 (the optimum is 0 or 1 by homogeneity).
GtPartition gt_partition_exact(const RationalMatrix& A);
GtWitness gt_partition_witnesses(const RationalMatrix& A);

/// v in Lin(A R^n_+), decided by two exact feasibility solves:
/// exists x >= 0 with Ax = v, and exists x >= 0 with Ax = -v.
bool lineality_membership(const RationalMatrix& A, const RationalVector& v);

/// Computes B, N three independent ways (feasibility form, implication form
/// via the dual LP, lineality form) and reports whether all three agree.
bool three_way_check(const RationalMatrix& A);

}  // namespace conepart
