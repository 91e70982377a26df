#include "conepart/partition.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace conepart {

namespace {

constexpr double kTinyPairing = 1e-300;

Eigen::VectorXd embed_block(const MultifoldCone& cone, int i, const Eigen::VectorXd& v) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(cone.dim());
  out.segment(cone.offset(i), cone.block(i).dim) = v;
  return out;
}

Membership verdict_from_value(double v, double eps, SolveStatus status) {
  if (status != SolveStatus::Optimal) return Membership::Indeterminate;
  if (v <= eps / 10.0) return Membership::NonMember;  // value at the zero side
  if (v >= eps * 10.0) return Membership::Member;     // value clearly positive
  return Membership::Indeterminate;
}


struct TestOutcome {
  IndexTest test;
  Eigen::VectorXd maximizer;  // primal tests: length n; dual tests: length m
};

// One auxiliary program: maximize <objective, v> over M v = rhs, v in the
// given block cone. Every program is compact by construction.
struct AuxProgram {
  Eigen::VectorXd objective;
  Eigen::MatrixXd M;
  Eigen::VectorXd rhs;
  std::vector<ConeBlock> blocks;
  double objective_offset = 0.0;  // reported value = <objective, v> - offset
};

// Decide the program value. The plain solve carries the exact semantics;
// on the degenerate instances this partition is about the program can lack
// any interior point, the embedding heads to its ill-posed corner and the
// solve does not converge. The fallback then decides the value against the
// threshold beta0 = eps/10 through the dual side: a dual-feasible point with
// objective <= beta0 is a weak-duality certificate of value <= beta0 (that
// feasibility system is Slater whenever it is feasible), while its strong
// infeasibility certificate rescales to a feasible primal point with value
// above beta0, which is the membership witness itself.
struct AuxDecision {
  double value = 0.0;
  double uncertainty = 0.0;  // residual-weighted bias bound on the value
  SolveStatus status = SolveStatus::Numerical;
  int iterations = 0;
  bool usable = false;
  Eigen::VectorXd v;  // maximizer in aux coordinates (empty for the bound side)
};

bool determinate(const AuxDecision& d, double eps) {
  return d.usable &&
         (d.value + d.uncertainty <= eps / 10.0 || d.value - d.uncertainty >= eps * 10.0);
}

AuxDecision decide_aux(const AuxProgram& aux, const SolverConfig& cfg) {
  MultifoldCone cone(aux.blocks);
  AuxDecision out;
  ConicProgram prog{-aux.objective, aux.M, aux.rhs, cone, 0};
  Solution sol = solve(prog, cfg);
  out.iterations = sol.iterations;
  if (sol.status == SolveStatus::Optimal) {
    out.value = aux.objective.dot(sol.x) - aux.objective_offset;
    // the optimal value is only trusted up to the residual-weighted norms of
    // the returned pair; unattained duals can leave a visible bias here
    out.uncertainty = sol.primal_residual * sol.y.lpNorm<Eigen::Infinity>() +
                      sol.dual_residual * sol.x.lpNorm<Eigen::Infinity>() +
                      std::abs((-aux.objective).dot(sol.x) - aux.rhs.dot(sol.y));
    out.status = sol.status;
    out.usable = true;
    out.v = sol.x;
    if (determinate(out, cfg.classification_eps)) return out;
  }
  AuxDecision plain = out;

  // dual-side bound program: find w with M^T w - g in K_aux*, <h, w> <= beta0
  const double beta0 = cfg.classification_eps / 10.0;
  const int nr = static_cast<int>(aux.M.rows()), nc = static_cast<int>(aux.M.cols());
  Eigen::MatrixXd A2 = Eigen::MatrixXd::Zero(nc + 1, nc + 1 + nr);
  A2.topLeftCorner(nc, nc) = -Eigen::MatrixXd::Identity(nc, nc);
  A2.block(0, nc + 1, nc, nr) = aux.M.transpose();
  A2(nc, nc) = 1.0;
  A2.row(nc).tail(nr) = aux.rhs.transpose();
  Eigen::VectorXd b2 = Eigen::VectorXd::Zero(nc + 1);
  b2.head(nc) = aux.objective;
  b2[nc] = beta0 + aux.objective_offset;
  std::vector<ConeBlock> blocks2 = aux.blocks;
  blocks2.push_back(orthant_block(1));
  ConicProgram certprog{Eigen::VectorXd::Zero(nc + 1 + nr), A2, b2, MultifoldCone(blocks2), nr};
  Solution cert = solve(certprog, cfg);
  out.iterations += cert.iterations;
  out.status = cert.status;
  if (cert.status == SolveStatus::Optimal) {
    // value certified at or below beta0; report the achieved dual bound
    double bound = aux.rhs.dot(cert.x.tail(nr)) - aux.objective_offset;
    out.value = std::min(beta0, std::max(0.0, bound));
    out.uncertainty = 10.0 * cfg.feas_tol * (1.0 + cert.x.lpNorm<Eigen::Infinity>());
    out.usable = true;
    out.status = SolveStatus::Optimal;
    out.v.resize(0);
    if (determinate(out, cfg.classification_eps)) return out;
  } else if (cert.status == SolveStatus::PrimalInfeasible) {
    // Farkas certificate: M xi = rho0 h, xi in K_aux, <g, xi> = 1 + beta0 rho0
    Eigen::VectorXd xi = cert.y.head(nc);
    double rho0 = -cert.y[nc];
    if (rho0 > 1e-12) {
      Eigen::VectorXd v = xi / rho0;
      double feas = (aux.M * v - aux.rhs).lpNorm<Eigen::Infinity>();
      double viol = feas + std::max(0.0, -min_block_margin(cone, v));
      double value = aux.objective.dot(v) - aux.objective_offset;
      // a witness is only as good as its feasibility; demand the violation
      // stays two orders below the value it certifies
      if (value > 0 && viol <= 1e-2 * value) {
        out.value = value;
        out.uncertainty = 10.0 * viol;
        out.usable = true;
        out.status = SolveStatus::Optimal;
        out.v = v;
        if (determinate(out, cfg.classification_eps)) return out;
      }
    }
  }
  return plain.usable ? plain : out;
}

IndexTest make_test(const AuxDecision& d, double eps) {
  IndexTest t;
  t.value = d.value;
  t.status = d.status;
  t.iterations = d.iterations;
  if (!d.usable) {
    t.verdict = Membership::Indeterminate;
  } else if (d.value + d.uncertainty <= eps / 10.0) {
    t.verdict = Membership::NonMember;
  } else if (d.value - d.uncertainty >= eps * 10.0) {
    t.verdict = Membership::Member;
  } else {
    t.verdict = Membership::Indeterminate;
  }
  return t;
}

// max t  s.t.  A(z + t e_i) = 0, z in K, <u, z + t e_i> + r = 1, t, r >= 0,
// with e_i the canonical interior point of block i and u the concatenated
// canonical dual interior points. t* > 0 iff block i can be made interior.
TestOutcome run_in_B(const ConicSystem& sys, int i, const SolverConfig& cfg) {
  const int n = sys.cone.dim(), m = sys.rows();
  Eigen::VectorXd ehat = embed_block(sys.cone, i, canonical_interior_point(sys.cone.block(i)));
  Eigen::VectorXd u = canonical_interior_point(sys.cone);

  AuxProgram aux;
  aux.M = Eigen::MatrixXd::Zero(m + 1, n + 2);
  aux.M.topLeftCorner(m, n) = sys.matrix;
  aux.M.col(n).head(m) = sys.matrix * ehat;
  aux.M.row(m).head(n) = u.transpose();
  aux.M(m, n) = u.dot(ehat);
  aux.M(m, n + 1) = 1.0;
  aux.rhs = Eigen::VectorXd::Zero(m + 1);
  aux.rhs[m] = 1.0;
  aux.objective = Eigen::VectorXd::Zero(n + 2);
  aux.objective[n] = 1.0;
  aux.blocks = sys.cone.blocks();
  aux.blocks.push_back(orthant_block(1));
  aux.blocks.push_back(orthant_block(1));

  AuxDecision d = decide_aux(aux, cfg);
  TestOutcome out;
  out.test = make_test(d, cfg.classification_eps);
  if (out.test.verdict == Membership::Member && d.v.size()) out.maximizer = d.v.head(n) + d.v[n] * ehat;
  return out;
}

// max t  s.t.  A^T(a - 1) - t e_i in K*, a + d = 2, a, d, t >= 0 (the box
// -1 <= y <= 1 written with orthant blocks).
TestOutcome run_in_N(const ConicSystem& sys, int i, const SolverConfig& cfg) {
  const int n = sys.cone.dim(), m = sys.rows();
  Eigen::VectorXd chat = embed_block(sys.cone, i, canonical_interior_point(sys.cone.block(i)));
  Eigen::VectorXd ones_m = Eigen::VectorXd::Ones(m);

  const int cols = n + 2 * m + 1;  // w, a, d, t
  AuxProgram aux;
  aux.M = Eigen::MatrixXd::Zero(n + m, cols);
  aux.M.topLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
  aux.M.block(0, n, n, m) = sys.matrix.transpose();
  aux.M.col(n + 2 * m).head(n) = -chat;
  aux.M.block(n, n, m, m) = Eigen::MatrixXd::Identity(m, m);
  aux.M.block(n, n + m, m, m) = Eigen::MatrixXd::Identity(m, m);
  aux.rhs.resize(n + m);
  aux.rhs.head(n) = sys.matrix.transpose() * ones_m;
  aux.rhs.tail(m) = 2.0 * ones_m;
  aux.objective = Eigen::VectorXd::Zero(cols);
  aux.objective[n + 2 * m] = 1.0;
  aux.blocks = sys.cone.blocks();
  aux.blocks.push_back(orthant_block(m));
  aux.blocks.push_back(orthant_block(m));
  aux.blocks.push_back(orthant_block(1));

  AuxDecision d = decide_aux(aux, cfg);
  TestOutcome out;
  out.test = make_test(d, cfg.classification_eps);
  if (out.test.verdict == Membership::Member && d.v.size()) out.maximizer = d.v.segment(n, m) - ones_m;
  return out;
}

// max <e_i, x>  s.t.  Ax = 0, x in K, <u, x> + r = 1. The normalization
// pairs against the interior point of the whole cone so the feasible set is
// a compact slice; the optimum is 0 exactly when block i vanishes on every
// solution.
TestOutcome run_not_in_N0(const ConicSystem& sys, int i, const SolverConfig& cfg) {
  const int n = sys.cone.dim(), m = sys.rows();
  Eigen::VectorXd ehat = embed_block(sys.cone, i, canonical_interior_point(sys.cone.block(i)));
  Eigen::VectorXd u = canonical_interior_point(sys.cone);

  AuxProgram aux;
  aux.M = Eigen::MatrixXd::Zero(m + 1, n + 1);
  aux.M.topLeftCorner(m, n) = sys.matrix;
  aux.M.row(m).head(n) = u.transpose();
  aux.M(m, n) = 1.0;
  aux.rhs = Eigen::VectorXd::Zero(m + 1);
  aux.rhs[m] = 1.0;
  aux.objective = Eigen::VectorXd::Zero(n + 1);
  aux.objective.head(n) = ehat;
  aux.blocks = sys.cone.blocks();
  aux.blocks.push_back(orthant_block(1));

  AuxDecision d = decide_aux(aux, cfg);
  TestOutcome out;
  out.test = make_test(d, cfg.classification_eps);
  if (out.test.verdict == Membership::Member && d.v.size()) out.maximizer = d.v.head(n);
  return out;
}

// max <A_i e_i, y>  s.t.  A^T y in K*, -1 <= y <= 1, <A_i e_i, y> + r = 1,
// written with y = a - 1 so every variable is conic. The optimum is 0
// exactly when A_i^T y = 0 on every solution of (D).
TestOutcome run_not_in_B0(const ConicSystem& sys, int i, const SolverConfig& cfg) {
  const int n = sys.cone.dim(), m = sys.rows();
  Eigen::VectorXd ehat = embed_block(sys.cone, i, canonical_interior_point(sys.cone.block(i)));
  Eigen::VectorXd g = sys.matrix * ehat;
  Eigen::VectorXd ones_m = Eigen::VectorXd::Ones(m);

  const int cols = n + 2 * m + 1;  // w, a, d, r
  AuxProgram aux;
  aux.M = Eigen::MatrixXd::Zero(n + m + 1, cols);
  aux.M.topLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
  aux.M.block(0, n, n, m) = sys.matrix.transpose();
  aux.M.block(n, n, m, m) = Eigen::MatrixXd::Identity(m, m);
  aux.M.block(n, n + m, m, m) = Eigen::MatrixXd::Identity(m, m);
  aux.M.row(n + m).segment(n, m) = g.transpose();
  aux.M(n + m, n + 2 * m) = 1.0;
  aux.rhs.resize(n + m + 1);
  aux.rhs.head(n) = sys.matrix.transpose() * ones_m;
  aux.rhs.segment(n, m) = 2.0 * ones_m;
  aux.rhs[n + m] = 1.0 + g.dot(ones_m);
  aux.objective = Eigen::VectorXd::Zero(cols);
  aux.objective.segment(n, m) = g;
  aux.objective_offset = g.dot(ones_m);
  aux.blocks = sys.cone.blocks();
  aux.blocks.push_back(orthant_block(m));
  aux.blocks.push_back(orthant_block(m));
  aux.blocks.push_back(orthant_block(1));

  AuxDecision d = decide_aux(aux, cfg);
  TestOutcome out;
  out.test = make_test(d, cfg.classification_eps);
  if (out.test.verdict == Membership::Member && d.v.size()) out.maximizer = d.v.segment(n, m) - ones_m;
  return out;
}

// ---- exact counterparts (all-orthant systems, rational simplex) ----

struct ExactOutcome {
  IndexTest test;
  RationalVector maximizer;
  bool positive = false;
};

RationalVector block_indicator(const MultifoldCone& cone, int i) {
  RationalVector v(static_cast<size_t>(cone.dim()), Rational(0));
  for (int j = 0; j < cone.block(i).dim; ++j) v[static_cast<size_t>(cone.offset(i) + j)] = 1;
  return v;
}

ExactOutcome exact_in_B(const RationalMatrix& A, const MultifoldCone& cone, int i) {
  const int n = A.cols, m = A.rows, d = cone.block(i).dim, off = cone.offset(i);
  RationalMatrix G(m + 1, n + 2);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < n; ++c) G.at(r, c) = A.at(r, c);
    for (int j = 0; j < d; ++j) G.at(r, n) += A.at(r, off + j);
  }
  for (int c = 0; c < n; ++c) G.at(m, c) = 1;
  G.at(m, n) = d;
  G.at(m, n + 1) = 1;
  RationalVector b(static_cast<size_t>(m + 1), Rational(0));
  b[static_cast<size_t>(m)] = 1;
  RationalVector c(static_cast<size_t>(n + 2), Rational(0));
  c[static_cast<size_t>(n)] = 1;
  std::vector<VarBound> bounds(static_cast<size_t>(n + 2), VarBound::nonneg());
  LpResult r = solve_lp_exact(c, G, b, bounds);
  if (r.status != LpStatus::Optimal) throw std::logic_error("exact B test LP must be solvable");
  ExactOutcome out;
  out.positive = r.optimal_value > 0;
  out.test.value = to_double(r.optimal_value);
  out.test.verdict = out.positive ? Membership::Member : Membership::NonMember;
  out.maximizer.assign(static_cast<size_t>(n), Rational(0));
  for (int j = 0; j < n; ++j) out.maximizer[static_cast<size_t>(j)] = r.primal[static_cast<size_t>(j)];
  for (int j = 0; j < d; ++j)
    out.maximizer[static_cast<size_t>(off + j)] += r.primal[static_cast<size_t>(n)];
  return out;
}

ExactOutcome exact_in_N(const RationalMatrix& A, const MultifoldCone& cone, int i) {
  const int n = A.cols, m = A.rows, d = cone.block(i).dim, off = cone.offset(i);
  const int cols = n + 2 * m + 1;
  RationalMatrix G(n + m, cols);
  RationalVector b(static_cast<size_t>(n + m), Rational(0));
  for (int j = 0; j < n; ++j) {
    G.at(j, j) = -1;
    for (int k = 0; k < m; ++k) {
      G.at(j, n + k) = A.at(k, j);
      b[static_cast<size_t>(j)] += A.at(k, j);
    }
  }
  for (int j = 0; j < d; ++j) G.at(off + j, n + 2 * m) = -1;
  for (int k = 0; k < m; ++k) {
    G.at(n + k, n + k) = 1;
    G.at(n + k, n + m + k) = 1;
    b[static_cast<size_t>(n + k)] = 2;
  }
  RationalVector c(static_cast<size_t>(cols), Rational(0));
  c[static_cast<size_t>(cols - 1)] = 1;
  std::vector<VarBound> bounds(static_cast<size_t>(cols), VarBound::nonneg());
  LpResult r = solve_lp_exact(c, G, b, bounds);
  if (r.status != LpStatus::Optimal) throw std::logic_error("exact N test LP must be solvable");
  ExactOutcome out;
  out.positive = r.optimal_value > 0;
  out.test.value = to_double(r.optimal_value);
  out.test.verdict = out.positive ? Membership::Member : Membership::NonMember;
  out.maximizer.assign(static_cast<size_t>(m), Rational(0));
  for (int k = 0; k < m; ++k)
    out.maximizer[static_cast<size_t>(k)] = r.primal[static_cast<size_t>(n + k)] - 1;
  return out;
}

ExactOutcome exact_not_in_N0(const RationalMatrix& A, const MultifoldCone& cone, int i) {
  const int n = A.cols, m = A.rows, d = cone.block(i).dim, off = cone.offset(i);
  RationalMatrix G(m + 1, n + 1);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < n; ++c) G.at(r, c) = A.at(r, c);
  for (int j = 0; j < d; ++j) G.at(m, off + j) = 1;
  G.at(m, n) = 1;
  RationalVector b(static_cast<size_t>(m + 1), Rational(0));
  b[static_cast<size_t>(m)] = 1;
  RationalVector c(static_cast<size_t>(n + 1), Rational(0));
  for (int j = 0; j < d; ++j) c[static_cast<size_t>(off + j)] = 1;
  std::vector<VarBound> bounds(static_cast<size_t>(n + 1), VarBound::nonneg());
  LpResult r = solve_lp_exact(c, G, b, bounds);
  if (r.status != LpStatus::Optimal) throw std::logic_error("exact N0 test LP must be solvable");
  ExactOutcome out;
  out.positive = r.optimal_value > 0;
  out.test.value = to_double(r.optimal_value);
  out.test.verdict = out.positive ? Membership::Member : Membership::NonMember;
  out.maximizer.assign(r.primal.begin(), r.primal.begin() + n);
  return out;
}

ExactOutcome exact_not_in_B0(const RationalMatrix& A, const MultifoldCone& cone, int i) {
  const int n = A.cols, m = A.rows, d = cone.block(i).dim, off = cone.offset(i);
  const int cols = n + 1 + m;
  RationalMatrix G(n + 1, cols);
  RationalVector g(static_cast<size_t>(m), Rational(0));
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < d; ++j) g[static_cast<size_t>(k)] += A.at(k, off + j);
  for (int j = 0; j < n; ++j) {
    G.at(j, j) = -1;
    for (int k = 0; k < m; ++k) G.at(j, n + 1 + k) = A.at(k, j);
  }
  G.at(n, n) = 1;
  for (int k = 0; k < m; ++k) G.at(n, n + 1 + k) = g[static_cast<size_t>(k)];
  RationalVector b(static_cast<size_t>(n + 1), Rational(0));
  b[static_cast<size_t>(n)] = 1;
  RationalVector c(static_cast<size_t>(cols), Rational(0));
  for (int k = 0; k < m; ++k) c[static_cast<size_t>(n + 1 + k)] = g[static_cast<size_t>(k)];
  std::vector<VarBound> bounds(static_cast<size_t>(cols), VarBound::nonneg());
  for (int k = 0; k < m; ++k) bounds[static_cast<size_t>(n + 1 + k)] = VarBound::free_var();
  LpResult r = solve_lp_exact(c, G, b, bounds);
  if (r.status != LpStatus::Optimal) throw std::logic_error("exact B0 test LP must be solvable");
  ExactOutcome out;
  out.positive = r.optimal_value > 0;
  out.test.value = to_double(r.optimal_value);
  out.test.verdict = out.positive ? Membership::Member : Membership::NonMember;
  out.maximizer.assign(r.primal.begin() + n + 1, r.primal.end());
  return out;
}

bool zero_block(const ConicSystem& sys, int i) { return sys.block_cols(i).isZero(0.0); }

// A_i = 0 needs no solve: x = e_i solves (P) with block i interior, and
// A_i^T y is identically zero, so i lands in both B and B0.
void fill_zero_block(const ConicSystem& sys, int i, IndexDiagnostics& diag, PerIndexSolutions& sols) {
  Eigen::VectorXd e = canonical_interior_point(sys.cone.block(i));
  Eigen::VectorXd ehat = embed_block(sys.cone, i, e);
  double self = e.dot(e);
  diag.in_b = {1.0 / self, Membership::Member, SolveStatus::Optimal, 0};
  diag.in_n = {0.0, Membership::NonMember, SolveStatus::Optimal, 0};
  diag.not_in_n0 = {1.0, Membership::Member, SolveStatus::Optimal, 0};
  diag.not_in_b0 = {0.0, Membership::NonMember, SolveStatus::Optimal, 0};
  sols.x_interior[static_cast<size_t>(i)] = ehat / self;
  sols.x_nonzero[static_cast<size_t>(i)] = ehat / self;
}

// The summed witness pair reaches the relative interior of the solution
// faces of (P) and (D) (the construction in the partition theorem's proof),
// so a test left undecided by its own program can be read off the aggregate:
// an interior block margin certifies B (resp. N) membership, a vanishing
// block certifies the N0 (resp. B0) side, and a nonzero boundary block
// certifies the complement of N0 (resp. B0).
struct ReadoutSlots {
  std::vector<int> in_b, in_n, not_in_n0, not_in_b0;  // indices resolved by readout
  bool any() const { return !in_b.empty() || !in_n.empty() || !not_in_n0.empty() || !not_in_b0.empty(); }
};

ReadoutSlots resolve_from_witness_pair(const ConicSystem& sys, const SolverConfig& cfg,
                                       std::vector<IndexDiagnostics>& diags, PerIndexSolutions& sols) {
  ReadoutSlots slots;
  const int r = sys.cone.block_count();
  const int n = sys.cone.dim(), m = sys.rows();
  Eigen::VectorXd u = canonical_interior_point(sys.cone);

  Eigen::VectorXd xagg = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < r; ++i) {
    for (const Eigen::VectorXd* v : {&sols.x_interior[static_cast<size_t>(i)],
                                     &sols.x_nonzero[static_cast<size_t>(i)]}) {
      if (v->size() != n) continue;
      double pairing = u.dot(*v);
      if (pairing > 1e-250) xagg += *v / pairing;
    }
  }
  Eigen::VectorXd yagg = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < r; ++i) {
    for (const Eigen::VectorXd* v : {&sols.y_interior[static_cast<size_t>(i)],
                                     &sols.y_nonzero[static_cast<size_t>(i)]}) {
      if (v->size() != m) continue;
      double pairing = u.dot(sys.matrix.transpose() * (*v));
      if (pairing > 1e-250) yagg += *v / pairing;
    }
  }
  Eigen::VectorXd wagg = sys.matrix.transpose() * yagg;

  // witness accuracy degrades like the square root of the solve tolerance
  // near curved-boundary tangencies, so the readout separates supports at a
  // coarse scale and leaves the fine guarantee to the face polish below
  const double zx = 1e-3 * std::max(1.0, xagg.lpNorm<Eigen::Infinity>());
  const double zy = 1e-3 * std::max({1.0, yagg.lpNorm<Eigen::Infinity>(), wagg.lpNorm<Eigen::Infinity>()});

  auto readout = [&](double key, double zero_tol) {
    if (key >= 10.0 * zero_tol) return Membership::Member;
    if (key <= zero_tol) return Membership::NonMember;
    return Membership::Indeterminate;
  };

  for (int i = 0; i < r; ++i) {
    const ConeBlock& blk = sys.cone.block(i);
    Eigen::VectorXd e = canonical_interior_point(blk);
    Eigen::VectorXd xb = xagg.segment(sys.cone.offset(i), blk.dim);
    Eigen::VectorXd wb = wagg.segment(sys.cone.offset(i), blk.dim);
    IndexDiagnostics& d = diags[static_cast<size_t>(i)];
    if (d.in_b.verdict == Membership::Indeterminate) {
      double margin = cone_margin(blk, xb);
      d.in_b.verdict = readout(margin, zx);
      if (d.in_b.verdict != Membership::Indeterminate) {
        d.in_b.value = std::max(margin, 0.0);
        slots.in_b.push_back(i);
      }
    }
    if (d.in_n.verdict == Membership::Indeterminate) {
      double margin = cone_margin(blk, wb);
      d.in_n.verdict = readout(margin, zy);
      if (d.in_n.verdict != Membership::Indeterminate) {
        d.in_n.value = std::max(margin, 0.0);
        slots.in_n.push_back(i);
      }
    }
    if (d.not_in_n0.verdict == Membership::Indeterminate) {
      double pairing = e.dot(xb);
      d.not_in_n0.verdict = readout(pairing, zx);
      if (d.not_in_n0.verdict != Membership::Indeterminate) {
        d.not_in_n0.value = std::max(pairing, 0.0);
        slots.not_in_n0.push_back(i);
      }
    }
    if (d.not_in_b0.verdict == Membership::Indeterminate) {
      double pairing = e.dot(wb);
      d.not_in_b0.verdict = readout(pairing, zy);
      if (d.not_in_b0.verdict != Membership::Indeterminate) {
        d.not_in_b0.value = std::max(pairing, 0.0);
        slots.not_in_b0.push_back(i);
      }
    }
  }
  return slots;
}

// Uniform-margin witness program restricted to the identified face: blocks
// claimed zero are dropped outright (their zeros become exact), claimed
// interior blocks are shifted by t, the remaining nonzero blocks carry a
// canonical-pairing slack >= t. A solve with t* >= eps confirms the claimed
// support and returns a clean witness.
struct FacePolish {
  bool ok = false;
  double t = 0.0;
  Eigen::VectorXd point;
};

FacePolish polish_primal(const ConicSystem& sys, const std::vector<char>& zero_blk,
                         const std::vector<char>& interior_blk, const SolverConfig& cfg) {
  const int r = sys.cone.block_count(), m = sys.rows(), n = sys.cone.dim();
  FacePolish out;
  std::vector<int> kept, boundary;
  for (int i = 0; i < r; ++i) {
    if (zero_blk[static_cast<size_t>(i)]) continue;
    kept.push_back(i);
    if (!interior_blk[static_cast<size_t>(i)]) boundary.push_back(i);
  }
  if (kept.empty()) {
    out.ok = true;
    out.point = Eigen::VectorXd::Zero(n);
    return out;
  }

  std::vector<ConeBlock> blocks;
  std::vector<int> var_off(static_cast<size_t>(r), -1);
  int vars = 0;
  for (int i : kept) {
    var_off[static_cast<size_t>(i)] = vars;
    vars += sys.cone.block(i).dim;
    blocks.push_back(sys.cone.block(i));
  }
  const int nb = static_cast<int>(boundary.size());
  const int slack0 = vars;             // boundary pairing slacks
  const int rcol = vars + nb;          // normalization slack
  const int tcol = vars + nb + 1;
  const int cols = tcol + 1;
  if (nb > 0) blocks.push_back(orthant_block(nb));
  blocks.push_back(orthant_block(1));
  blocks.push_back(orthant_block(1));

  const int rows = m + nb + 1;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(rows, cols);
  Eigen::VectorXd h = Eigen::VectorXd::Zero(rows);
  for (int i : kept) {
    const ConeBlock& blk = sys.cone.block(i);
    M.block(0, var_off[static_cast<size_t>(i)], m, blk.dim) = sys.block_cols(i);
    if (interior_blk[static_cast<size_t>(i)])
      M.col(tcol).head(m) += sys.block_cols(i) * canonical_interior_point(blk);
  }
  for (int k = 0; k < nb; ++k) {
    int i = boundary[static_cast<size_t>(k)];
    const ConeBlock& blk = sys.cone.block(i);
    M.row(m + k).segment(var_off[static_cast<size_t>(i)], blk.dim) =
        canonical_interior_point(blk).transpose();
    M(m + k, tcol) = -1.0;
    M(m + k, slack0 + k) = -1.0;
  }
  for (int i : kept) {
    const ConeBlock& blk = sys.cone.block(i);
    M.row(m + nb).segment(var_off[static_cast<size_t>(i)], blk.dim) =
        canonical_interior_point(blk).transpose();
    if (interior_blk[static_cast<size_t>(i)])
      M(m + nb, tcol) += canonical_interior_point(blk).squaredNorm();
  }
  M(m + nb, rcol) = 1.0;
  h[m + nb] = 1.0;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(cols);
  c[tcol] = -1.0;

  ConicProgram prog{c, M, h, MultifoldCone(blocks), 0};
  Solution sol = solve(prog, cfg);
  if (sol.status != SolveStatus::Optimal || !(sol.x[tcol] >= cfg.classification_eps)) return out;
  out.ok = true;
  out.t = sol.x[tcol];
  out.point = Eigen::VectorXd::Zero(n);
  for (int i : kept) {
    const ConeBlock& blk = sys.cone.block(i);
    out.point.segment(sys.cone.offset(i), blk.dim) =
        sol.x.segment(var_off[static_cast<size_t>(i)], blk.dim);
    if (interior_blk[static_cast<size_t>(i)])
      out.point.segment(sys.cone.offset(i), blk.dim) += out.t * canonical_interior_point(blk);
  }
  // least-norm repair of A x = 0; the margin headroom t* absorbs the shift
  Eigen::VectorXd shift =
      sys.matrix.completeOrthogonalDecomposition().solve(sys.matrix * out.point);
  out.point -= shift;
  return out;
}

FacePolish polish_dual(const ConicSystem& sys, const std::vector<char>& zero_blk,
                       const std::vector<char>& interior_blk, const SolverConfig& cfg) {
  const int r = sys.cone.block_count(), m = sys.rows();
  FacePolish out;
  std::vector<int> interior, boundary, pinned;
  for (int i = 0; i < r; ++i) {
    if (zero_blk[static_cast<size_t>(i)])
      pinned.push_back(i);
    else if (interior_blk[static_cast<size_t>(i)])
      interior.push_back(i);
    else
      boundary.push_back(i);
  }
  if (interior.empty() && boundary.empty()) {
    out.ok = true;
    out.point = Eigen::VectorXd::Zero(m);
    return out;
  }

  // variables: a, d (box y = a - 1 in [-1,1]), w_j per interior block,
  // pairing slacks per boundary block, t
  std::vector<ConeBlock> blocks;
  blocks.push_back(orthant_block(m));
  blocks.push_back(orthant_block(m));
  int vars = 2 * m;
  std::vector<int> w_off(static_cast<size_t>(r), -1);
  for (int i : interior) {
    w_off[static_cast<size_t>(i)] = vars;
    vars += sys.cone.block(i).dim;
    blocks.push_back(sys.cone.block(i));
  }
  const int nb = static_cast<int>(boundary.size());
  const int slack0 = vars;
  const int tcol = vars + nb;
  const int cols = tcol + 1;
  if (nb > 0) blocks.push_back(orthant_block(nb));
  blocks.push_back(orthant_block(1));

  int pinned_rows = 0;
  for (int i : pinned) pinned_rows += sys.cone.block(i).dim;
  int interior_rows = 0;
  for (int i : interior) interior_rows += sys.cone.block(i).dim;
  const int rows = m + interior_rows + pinned_rows + nb;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(rows, cols);
  Eigen::VectorXd h = Eigen::VectorXd::Zero(rows);
  Eigen::VectorXd ones_m = Eigen::VectorXd::Ones(m);
  // box rows a + d = 2
  M.block(0, 0, m, m) = Eigen::MatrixXd::Identity(m, m);
  M.block(0, m, m, m) = Eigen::MatrixXd::Identity(m, m);
  h.head(m) = 2.0 * ones_m;
  int row = m;
  for (int i : interior) {
    const ConeBlock& blk = sys.cone.block(i);
    Eigen::MatrixXd Ait = sys.block_cols(i).transpose();
    M.block(row, 0, blk.dim, m) = Ait;
    M.block(row, w_off[static_cast<size_t>(i)], blk.dim, blk.dim) =
        -Eigen::MatrixXd::Identity(blk.dim, blk.dim);
    M.col(tcol).segment(row, blk.dim) = -canonical_interior_point(blk);
    h.segment(row, blk.dim) = Ait * ones_m;
    row += blk.dim;
  }
  for (int i : pinned) {
    const ConeBlock& blk = sys.cone.block(i);
    Eigen::MatrixXd Ait = sys.block_cols(i).transpose();
    M.block(row, 0, blk.dim, m) = Ait;
    h.segment(row, blk.dim) = Ait * ones_m;
    row += blk.dim;
  }
  for (int k = 0; k < nb; ++k) {
    int i = boundary[static_cast<size_t>(k)];
    const ConeBlock& blk = sys.cone.block(i);
    Eigen::VectorXd gi = sys.block_cols(i) * canonical_interior_point(blk);
    M.row(row + k).head(m) = gi.transpose();
    M(row + k, tcol) = -1.0;
    M(row + k, slack0 + k) = -1.0;
    h[row + k] = gi.dot(ones_m);
  }
  Eigen::VectorXd c = Eigen::VectorXd::Zero(cols);
  c[tcol] = -1.0;

  ConicProgram prog{c, M, h, MultifoldCone(blocks), 0};
  Solution sol = solve(prog, cfg);
  if (getenv("CONEPART_DEBUG_POLISH"))
    fprintf(stderr, "[polish dual] status=%s iters=%d t=%.3e pres=%.2e dres=%.2e\n",
            to_string(sol.status), sol.iterations, sol.x.size() ? sol.x[tcol] : -1.0,
            sol.primal_residual, sol.dual_residual);
  if (sol.status != SolveStatus::Optimal || !(sol.x[tcol] >= cfg.classification_eps)) return out;
  out.ok = true;
  out.t = sol.x[tcol];
  out.point = sol.x.head(m) - ones_m;
  if (!pinned.empty()) {
    // least-norm repair of the pinned rows A_i^T y = 0
    int prow = 0;
    for (int i : pinned) prow += sys.cone.block(i).dim;
    Eigen::MatrixXd G(prow, m);
    int at = 0;
    for (int i : pinned) {
      G.middleRows(at, sys.cone.block(i).dim) = sys.block_cols(i).transpose();
      at += sys.cone.block(i).dim;
    }
    out.point -= G.completeOrthogonalDecomposition().solve(G * out.point);
  }
  return out;
}

ClassificationResult assemble(const ConicSystem& sys, const SolverConfig& cfg,
                              PartitionReport::Mode mode, std::vector<IndexDiagnostics> diags,
                              PerIndexSolutions sols) {
  const int r = sys.cone.block_count();
  PartitionReport rep;
  rep.mode = mode;
  rep.block_count = r;
  rep.config = cfg;
  rep.classes.resize(static_cast<size_t>(r), IndexClass::InC);

  std::vector<bool> inB(static_cast<size_t>(r)), inN(static_cast<size_t>(r)),
      inB0(static_cast<size_t>(r)), inN0(static_cast<size_t>(r));
  for (int i = 0; i < r; ++i) {
    const IndexDiagnostics& d = diags[static_cast<size_t>(i)];
    bool ind = d.in_b.verdict == Membership::Indeterminate ||
               d.in_n.verdict == Membership::Indeterminate ||
               d.not_in_n0.verdict == Membership::Indeterminate ||
               d.not_in_b0.verdict == Membership::Indeterminate;
    inB[static_cast<size_t>(i)] = d.in_b.verdict == Membership::Member;
    inN[static_cast<size_t>(i)] = d.in_n.verdict == Membership::Member;
    inN0[static_cast<size_t>(i)] = d.not_in_n0.verdict == Membership::NonMember;
    inB0[static_cast<size_t>(i)] = d.not_in_b0.verdict == Membership::NonMember;
    // the theorem demands B within B0 minus N0, N within N0 minus B0;
    // numeric answers violating that are refused, not patched
    if (!ind) {
      bool bad_b = inB[static_cast<size_t>(i)] &&
                   (!inB0[static_cast<size_t>(i)] || inN0[static_cast<size_t>(i)]);
      bool bad_n = inN[static_cast<size_t>(i)] &&
                   (!inN0[static_cast<size_t>(i)] || inB0[static_cast<size_t>(i)]);
      ind = bad_b || bad_n;
    }
    if (ind) {
      rep.indeterminate.push_back(i);
      rep.full = false;
    }
  }

  for (int i = 0; i < r; ++i) {
    bool b = inB[static_cast<size_t>(i)], nn = inN[static_cast<size_t>(i)];
    bool b0 = inB0[static_cast<size_t>(i)], n0 = inN0[static_cast<size_t>(i)];
    if (b) rep.B.push_back(i);
    if (nn) rep.N.push_back(i);
    if (b0) rep.B0.push_back(i);
    if (n0) rep.N0.push_back(i);
    IndexClass cls;
    if (b)
      cls = IndexClass::InB;
    else if (nn)
      cls = IndexClass::InN;
    else if (b0 && n0)
      cls = IndexClass::InO;
    else if (b0)
      cls = IndexClass::InBPrime;
    else if (n0)
      cls = IndexClass::InNPrime;
    else
      cls = IndexClass::InC;
    rep.classes[static_cast<size_t>(i)] = cls;
    switch (cls) {
      case IndexClass::InBPrime: rep.BPrime.push_back(i); break;
      case IndexClass::InNPrime: rep.NPrime.push_back(i); break;
      case IndexClass::InO: rep.O.push_back(i); break;
      case IndexClass::InC: rep.C.push_back(i); break;
      default: break;
    }
  }
  rep.diagnostics = std::move(diags);
  return {std::move(rep), std::move(sols)};
}

}  // namespace

const char* class_label(IndexClass c) {
  switch (c) {
    case IndexClass::InB: return "B";
    case IndexClass::InBPrime: return "B'";
    case IndexClass::InN: return "N";
    case IndexClass::InNPrime: return "N'";
    case IndexClass::InC: return "C";
    default: return "O";
  }
}

IndexTest test_in_B(const ConicSystem& system, int i, const SolverConfig& config) {
  return run_in_B(system, i, config).test;
}
IndexTest test_in_N(const ConicSystem& system, int i, const SolverConfig& config) {
  return run_in_N(system, i, config).test;
}
IndexTest test_not_in_N0(const ConicSystem& system, int i, const SolverConfig& config) {
  return run_not_in_N0(system, i, config).test;
}
IndexTest test_not_in_B0(const ConicSystem& system, int i, const SolverConfig& config) {
  return run_not_in_B0(system, i, config).test;
}

ClassificationResult classify(const ConicSystem& system, const SolverConfig& config, int threads) {
  config.validate();
  const int r = system.cone.block_count();
  std::vector<IndexDiagnostics> diags(static_cast<size_t>(r));
  PerIndexSolutions sols;
  sols.x_interior.resize(static_cast<size_t>(r));
  sols.x_nonzero.resize(static_cast<size_t>(r));
  sols.y_interior.resize(static_cast<size_t>(r));
  sols.y_nonzero.resize(static_cast<size_t>(r));

  struct Task {
    int i, kind;
  };
  std::vector<Task> tasks;
  for (int i = 0; i < r; ++i) {
    if (zero_block(system, i)) {
      fill_zero_block(system, i, diags[static_cast<size_t>(i)], sols);
    } else {
      for (int kind = 0; kind < 4; ++kind) tasks.push_back({i, kind});
    }
  }

  auto run_task = [&](const Task& t) {
    TestOutcome out;
    switch (t.kind) {
      case 0: out = run_in_B(system, t.i, config); diags[static_cast<size_t>(t.i)].in_b = out.test;
              sols.x_interior[static_cast<size_t>(t.i)] = out.maximizer; break;
      case 1: out = run_in_N(system, t.i, config); diags[static_cast<size_t>(t.i)].in_n = out.test;
              sols.y_interior[static_cast<size_t>(t.i)] = out.maximizer; break;
      case 2: out = run_not_in_N0(system, t.i, config); diags[static_cast<size_t>(t.i)].not_in_n0 = out.test;
              sols.x_nonzero[static_cast<size_t>(t.i)] = out.maximizer; break;
      default: out = run_not_in_B0(system, t.i, config); diags[static_cast<size_t>(t.i)].not_in_b0 = out.test;
               sols.y_nonzero[static_cast<size_t>(t.i)] = out.maximizer; break;
    }
  };

  if (threads > 1) {
    const int ntasks = static_cast<int>(tasks.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (int t = 0; t < ntasks; ++t) {
      try {
        run_task(tasks[static_cast<size_t>(t)]);
      } catch (...) {
        // leave the slot Indeterminate; the report flags it
      }
    }
  } else {
    for (const Task& t : tasks) run_task(t);
  }
  ReadoutSlots slots = resolve_from_witness_pair(system, config, diags, sols);

  bool all_resolved = true;
  for (const IndexDiagnostics& d : diags)
    all_resolved = all_resolved && d.in_b.verdict != Membership::Indeterminate &&
                   d.in_n.verdict != Membership::Indeterminate &&
                   d.not_in_n0.verdict != Membership::Indeterminate &&
                   d.not_in_b0.verdict != Membership::Indeterminate;

  bool polished = false;
  if (all_resolved) {
    std::vector<char> zero_x(static_cast<size_t>(r)), int_x(static_cast<size_t>(r)),
        zero_y(static_cast<size_t>(r)), int_y(static_cast<size_t>(r));
    for (int i = 0; i < r; ++i) {
      const IndexDiagnostics& d = diags[static_cast<size_t>(i)];
      zero_x[static_cast<size_t>(i)] = d.not_in_n0.verdict == Membership::NonMember;
      int_x[static_cast<size_t>(i)] = d.in_b.verdict == Membership::Member;
      zero_y[static_cast<size_t>(i)] = d.not_in_b0.verdict == Membership::NonMember;
      int_y[static_cast<size_t>(i)] = d.in_n.verdict == Membership::Member;
    }
    FacePolish px = polish_primal(system, zero_x, int_x, config);
    FacePolish py = polish_dual(system, zero_y, int_y, config);
    if (getenv("CONEPART_DEBUG_POLISH"))
      fprintf(stderr, "[polish] primal ok=%d t=%.3e  dual ok=%d t=%.3e\n", px.ok, px.t, py.ok, py.t);
    if (px.ok && py.ok) {
      polished = true;
      for (int i = 0; i < r; ++i) {
        if (!zero_x[static_cast<size_t>(i)]) sols.x_nonzero[static_cast<size_t>(i)] = px.point;
        if (int_x[static_cast<size_t>(i)]) sols.x_interior[static_cast<size_t>(i)] = px.point;
        if (!zero_y[static_cast<size_t>(i)]) sols.y_nonzero[static_cast<size_t>(i)] = py.point;
        if (int_y[static_cast<size_t>(i)]) sols.y_interior[static_cast<size_t>(i)] = py.point;
      }
    }
  }
  if (!polished && slots.any()) {
    // readout guesses stay unconfirmed without the face polish
    for (int i : slots.in_b) diags[static_cast<size_t>(i)].in_b.verdict = Membership::Indeterminate;
    for (int i : slots.in_n) diags[static_cast<size_t>(i)].in_n.verdict = Membership::Indeterminate;
    for (int i : slots.not_in_n0)
      diags[static_cast<size_t>(i)].not_in_n0.verdict = Membership::Indeterminate;
    for (int i : slots.not_in_b0)
      diags[static_cast<size_t>(i)].not_in_b0.verdict = Membership::Indeterminate;
  }
  return assemble(system, config, PartitionReport::Mode::Floating, std::move(diags), std::move(sols));
}

ClassificationResult classify_exact(const ConicSystem& system, const RationalMatrix& A_exact,
                                    const SolverConfig& config) {
  config.validate();
  if (!system.cone.all_orthant())
    throw std::invalid_argument("exact classification requires all-orthant blocks");
  if (A_exact.rows != system.rows() || A_exact.cols != system.cone.dim())
    throw std::invalid_argument("exact matrix dimensions do not match the system");

  const int r = system.cone.block_count();
  std::vector<IndexDiagnostics> diags(static_cast<size_t>(r));
  PerIndexSolutions sols;
  sols.x_interior.resize(static_cast<size_t>(r));
  sols.x_nonzero.resize(static_cast<size_t>(r));
  sols.y_interior.resize(static_cast<size_t>(r));
  sols.y_nonzero.resize(static_cast<size_t>(r));

  auto to_eigen = [](const RationalVector& v) {
    Eigen::VectorXd out(static_cast<long>(v.size()));
    for (size_t k = 0; k < v.size(); ++k) out[static_cast<long>(k)] = to_double(v[k]);
    return out;
  };

  for (int i = 0; i < r; ++i) {
    bool zero = true;
    for (int j = 0; zero && j < system.cone.block(i).dim; ++j)
      for (int k = 0; zero && k < A_exact.rows; ++k)
        if (A_exact.at(k, system.cone.offset(i) + j) != 0) zero = false;
    if (zero) {
      fill_zero_block(system, i, diags[static_cast<size_t>(i)], sols);
      continue;
    }
    ExactOutcome b = exact_in_B(A_exact, system.cone, i);
    ExactOutcome nn = exact_in_N(A_exact, system.cone, i);
    ExactOutcome n0 = exact_not_in_N0(A_exact, system.cone, i);
    ExactOutcome b0 = exact_not_in_B0(A_exact, system.cone, i);
    diags[static_cast<size_t>(i)] = {b.test, nn.test, n0.test, b0.test};
    if (b.positive) sols.x_interior[static_cast<size_t>(i)] = to_eigen(b.maximizer);
    if (nn.positive) sols.y_interior[static_cast<size_t>(i)] = to_eigen(nn.maximizer);
    if (n0.positive) sols.x_nonzero[static_cast<size_t>(i)] = to_eigen(n0.maximizer);
    if (b0.positive) sols.y_nonzero[static_cast<size_t>(i)] = to_eigen(b0.maximizer);
  }
  return assemble(system, config, PartitionReport::Mode::Exact, std::move(diags), std::move(sols));
}

CertificatePair build_certificates(const ConicSystem& system, const PartitionReport& report,
                                   const PerIndexSolutions& solutions) {
  const int n = system.cone.dim(), m = system.rows(), r = system.cone.block_count();
  if (report.block_count != r)
    throw std::invalid_argument("build_certificates: report does not match the system");
  Eigen::VectorXd u = canonical_interior_point(system.cone);

  std::vector<bool> inN0(static_cast<size_t>(r), false), inB0(static_cast<size_t>(r), false);
  for (int i : report.N0) inN0[static_cast<size_t>(i)] = true;
  for (int i : report.B0) inB0[static_cast<size_t>(i)] = true;

  CertificatePair certs;
  certs.xbar = Eigen::VectorXd::Zero(n);
  certs.ybar = Eigen::VectorXd::Zero(m);

  auto add_primal = [&](int i, const Eigen::VectorXd& v) {
    if (v.size() != n)
      throw std::invalid_argument("missing primal maximizer for block " + std::to_string(i + 1));
    double pairing = u.dot(v);
    if (pairing > kTinyPairing) certs.xbar += v / pairing;
  };
  auto add_dual = [&](int i, const Eigen::VectorXd& y) {
    if (y.size() != m)
      throw std::invalid_argument("missing dual maximizer for block " + std::to_string(i + 1));
    double pairing = u.dot(system.matrix.transpose() * y);
    if (pairing > kTinyPairing) certs.ybar += y / pairing;
  };

  for (int i = 0; i < r; ++i)
    if (!inN0[static_cast<size_t>(i)]) add_primal(i, solutions.x_nonzero[static_cast<size_t>(i)]);
  for (int i : report.B) add_primal(i, solutions.x_interior[static_cast<size_t>(i)]);
  for (int i = 0; i < r; ++i)
    if (!inB0[static_cast<size_t>(i)]) add_dual(i, solutions.y_nonzero[static_cast<size_t>(i)]);
  for (int i : report.N) add_dual(i, solutions.y_interior[static_cast<size_t>(i)]);

  const double delta = report.config.classification_eps;
  auto required_min = [&](const Eigen::VectorXd& vec, bool primal) {
    double rho = std::numeric_limits<double>::infinity();
    bool any = false;
    for (int i = 0; i < r; ++i) {
      IndexClass cls = report.classes[static_cast<size_t>(i)];
      Eigen::VectorXd blockv = vec.segment(system.cone.offset(i), system.cone.block(i).dim);
      if (primal) {
        if (cls == IndexClass::InB) {
          rho = std::min(rho, cone_margin(system.cone.block(i), blockv));
          any = true;
        } else if (cls == IndexClass::InBPrime || cls == IndexClass::InC) {
          rho = std::min(rho, canonical_interior_point(system.cone.block(i)).dot(blockv));
          any = true;
        }
      } else {
        if (cls == IndexClass::InN) {
          rho = std::min(rho, cone_margin(system.cone.block(i), blockv));
          any = true;
        } else if (cls == IndexClass::InNPrime || cls == IndexClass::InC) {
          rho = std::min(rho, canonical_interior_point(system.cone.block(i)).dot(blockv));
          any = true;
        }
      }
    }
    return std::pair<bool, double>(any, rho);
  };

  auto [any_p, rho_p] = required_min(certs.xbar, true);
  if (any_p && rho_p > 0) certs.xbar *= std::max(delta, rho_p / 2.0) / rho_p;
  Eigen::VectorXd w = system.matrix.transpose() * certs.ybar;
  auto [any_d, rho_d] = required_min(w, false);
  if (any_d && rho_d > 0) certs.ybar *= std::max(delta, rho_d / 2.0) / rho_d;
  w = system.matrix.transpose() * certs.ybar;

  certs.primal_margins.resize(static_cast<size_t>(r));
  certs.dual_margins.resize(static_cast<size_t>(r));
  for (int i = 0; i < r; ++i) {
    IndexClass cls = report.classes[static_cast<size_t>(i)];
    Eigen::VectorXd xb = certs.xbar.segment(system.cone.offset(i), system.cone.block(i).dim);
    Eigen::VectorXd wb = w.segment(system.cone.offset(i), system.cone.block(i).dim);
    Eigen::VectorXd e = canonical_interior_point(system.cone.block(i));
    switch (cls) {
      case IndexClass::InB: certs.primal_margins[static_cast<size_t>(i)] = cone_margin(system.cone.block(i), xb); break;
      case IndexClass::InBPrime:
      case IndexClass::InC: certs.primal_margins[static_cast<size_t>(i)] = e.dot(xb); break;
      default: certs.primal_margins[static_cast<size_t>(i)] = xb.cwiseAbs().maxCoeff(); break;
    }
    switch (cls) {
      case IndexClass::InN: certs.dual_margins[static_cast<size_t>(i)] = cone_margin(system.cone.block(i), wb); break;
      case IndexClass::InNPrime:
      case IndexClass::InC: certs.dual_margins[static_cast<size_t>(i)] = e.dot(wb); break;
      default: certs.dual_margins[static_cast<size_t>(i)] = wb.cwiseAbs().maxCoeff(); break;
    }
  }
  return certs;
}

VerifyResult verify_certificates(const ConicSystem& system, const PartitionReport& report,
                                 const CertificatePair& certs, double tol) {
  const int r = system.cone.block_count();
  VerifyResult res;
  auto fail = [&](const std::string& msg) {
    res.ok = false;
    res.violations.push_back(msg);
  };
  if (certs.xbar.size() != system.cone.dim() || certs.ybar.size() != system.rows()) {
    fail("certificate dimensions do not match the system");
    return res;
  }
  char buf[160];
  const double delta = report.config.classification_eps;
  const double sx = std::max(1.0, certs.xbar.lpNorm<Eigen::Infinity>());
  Eigen::VectorXd w = system.matrix.transpose() * certs.ybar;
  const double sy = std::max({1.0, certs.ybar.lpNorm<Eigen::Infinity>(), w.lpNorm<Eigen::Infinity>()});

  double pres = (system.matrix * certs.xbar).lpNorm<Eigen::Infinity>();
  if (!(pres <= tol * sx)) {
    std::snprintf(buf, sizeof buf, "primal residual ||A xbar|| = %.3e exceeds %.3e", pres, tol * sx);
    fail(buf);
  }

  for (int i = 0; i < r; ++i) {
    const ConeBlock& blk = system.cone.block(i);
    Eigen::VectorXd xb = certs.xbar.segment(system.cone.offset(i), blk.dim);
    Eigen::VectorXd wb = w.segment(system.cone.offset(i), blk.dim);
    Eigen::VectorXd e = canonical_interior_point(blk);
    IndexClass cls = report.classes[static_cast<size_t>(i)];
    double xmargin = cone_margin(blk, xb);
    double wmargin = cone_margin(blk, wb);

    if (!(xmargin >= -tol * sx)) {
      std::snprintf(buf, sizeof buf, "i=%d xbar block outside the cone (margin %.3e)", i + 1, xmargin);
      fail(buf);
    }
    if (!(wmargin >= -tol * sy)) {
      std::snprintf(buf, sizeof buf, "i=%d A_i^T ybar outside the dual cone (margin %.3e)", i + 1, wmargin);
      fail(buf);
    }

    bool x_zero_class = cls == IndexClass::InN || cls == IndexClass::InNPrime || cls == IndexClass::InO;
    bool y_zero_class = cls == IndexClass::InB || cls == IndexClass::InBPrime || cls == IndexClass::InO;
    if (cls == IndexClass::InB && !(xmargin >= delta)) {
      std::snprintf(buf, sizeof buf, "i=%d expected interior margin >= %.1e, got %.3e", i + 1, delta, xmargin);
      fail(buf);
    }
    if ((cls == IndexClass::InBPrime || cls == IndexClass::InC) && !(e.dot(xb) >= delta)) {
      std::snprintf(buf, sizeof buf, "i=%d expected nonzero primal block pairing >= %.1e, got %.3e", i + 1,
                    delta, e.dot(xb));
      fail(buf);
    }
    if (x_zero_class && !(xb.lpNorm<Eigen::Infinity>() <= tol * sx)) {
      std::snprintf(buf, sizeof buf, "i=%d expected zero primal block, got ||.|| = %.3e", i + 1,
                    xb.lpNorm<Eigen::Infinity>());
      fail(buf);
    }
    if (cls == IndexClass::InN && !(wmargin >= delta)) {
      std::snprintf(buf, sizeof buf, "i=%d expected dual interior margin >= %.1e, got %.3e", i + 1, delta,
                    wmargin);
      fail(buf);
    }
    if ((cls == IndexClass::InNPrime || cls == IndexClass::InC) && !(e.dot(wb) >= delta)) {
      std::snprintf(buf, sizeof buf, "i=%d expected nonzero dual block pairing >= %.1e, got %.3e", i + 1,
                    delta, e.dot(wb));
      fail(buf);
    }
    if (y_zero_class && !(wb.lpNorm<Eigen::Infinity>() <= tol * sy)) {
      std::snprintf(buf, sizeof buf, "i=%d expected zero dual block, got ||.|| = %.3e", i + 1,
                    wb.lpNorm<Eigen::Infinity>());
      fail(buf);
    }

    double comp = std::abs(xb.dot(wb));
    double comp_scale = 10.0 * tol * std::max(1.0, xb.norm() * wb.norm());
    if (!(comp <= comp_scale)) {
      std::snprintf(buf, sizeof buf, "i=%d blockwise complementarity %.3e exceeds %.3e", i + 1, comp,
                    comp_scale);
      fail(buf);
    }
  }
  return res;
}

}  // namespace conepart
