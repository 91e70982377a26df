#pragma once

#include <Eigen/Dense>

#include <vector>

#include "conepart/cone.hpp"

namespace conepart {

/// min <c,x>  s.t.  A x = b,  x_cone in K,  trailing free_dims unconstrained.
struct ConicProgram {
  Eigen::VectorXd objective;        // c, length cone.dim() + free_dims
  Eigen::MatrixXd equality_matrix;  // A, m x n
  Eigen::VectorXd rhs;              // b, length m
  MultifoldCone cone;
  int free_dims = 0;

  int total_dim() const { return cone.dim() + free_dims; }
  void validate() const;
};

enum class SolveStatus { Optimal, PrimalInfeasible, DualInfeasible, IterLimit, Numerical };

const char* to_string(SolveStatus s);

struct Solution {
  SolveStatus status = SolveStatus::Numerical;
  Eigen::VectorXd x, y, s;  // s carries zeros on free components
  double primal_residual = 0.0;  // ||Ax - b||
  double dual_residual = 0.0;    // ||c - A^T y - s||
  double duality_gap = 0.0;      // |c'x - b'y| / (1 + |c'x| + |b'y|)
  int iterations = 0;
  std::vector<double> mu_trace;  // complementarity measure per iteration
};

struct SolverConfig {
  double feas_tol = 1e-8;
  double gap_tol = 1e-8;
  int max_iter = 200;
  double classification_eps = 1e-6;

  void validate() const;
};

/// Homogeneous self-dual embedding with Nesterov-Todd scaling and Mehrotra
/// predictor-corrector steps. Free variables are split into differences of
/// orthant pairs internally; the returned solution is in the original
/// variables. Deterministic for fixed inputs.
Solution solve(const ConicProgram& program, const SolverConfig& config);

struct ResidualTriple {
  double primal = 0.0;  // ||Ax - b||
  double dual = 0.0;    // ||c - A^T y - s||
  double gap = 0.0;     // |c'x - b'y|
};

/// Recomputes feasibility and gap violations from scratch; shares nothing
/// with the solver internals.
ResidualTriple residuals(const ConicProgram& program, const Solution& candidate);

}  // namespace conepart
