#include "conepart/conic_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace conepart {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotFloor = 1e-12;
constexpr double kPivotReg = 1e-10;

// Internal block layout: the program's cone blocks followed by one orthant
// block holding the split free variables (p, q with x_free = p - q).
struct Layout {
  std::vector<ConeBlock> blocks;
  std::vector<int> offsets;
  int dim = 0;
  int barrier_degree = 0;  // orthant dims count 1 each, one per SOC block

  explicit Layout(const ConicProgram& prog) {
    for (const ConeBlock& b : prog.cone.blocks()) push(b);
    if (prog.free_dims > 0) push(orthant_block(2 * prog.free_dims));
  }

  void push(const ConeBlock& b) {
    blocks.push_back(b);
    offsets.push_back(dim);
    dim += b.dim;
    barrier_degree += (b.kind == ConeKind::Orthant) ? b.dim : 1;
  }
};

double min_margin(const Layout& lay, const Eigen::VectorXd& v) {
  double m = kInf;
  for (size_t k = 0; k < lay.blocks.size(); ++k) {
    int off = lay.offsets[k], d = lay.blocks[k].dim;
    if (lay.blocks[k].kind == ConeKind::Orthant)
      m = std::min(m, v.segment(off, d).minCoeff());
    else
      m = std::min(m, v[off] - v.segment(off + 1, d - 1).norm());
  }
  return m;
}

Eigen::VectorXd identity_point(const Layout& lay) {
  Eigen::VectorXd e(lay.dim);
  for (size_t k = 0; k < lay.blocks.size(); ++k)
    e.segment(lay.offsets[k], lay.blocks[k].dim) = canonical_interior_point(lay.blocks[k]);
  return e;
}

// Jordan product u o v per block.
Eigen::VectorXd jordan_product(const Layout& lay, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  Eigen::VectorXd out(lay.dim);
  for (size_t k = 0; k < lay.blocks.size(); ++k) {
    int off = lay.offsets[k], d = lay.blocks[k].dim;
    if (lay.blocks[k].kind == ConeKind::Orthant) {
      out.segment(off, d) = u.segment(off, d).cwiseProduct(v.segment(off, d));
    } else {
      auto ub = u.segment(off, d);
      auto vb = v.segment(off, d);
      out[off] = ub.dot(vb);
      out.segment(off + 1, d - 1) = ub[0] * vb.tail(d - 1) + vb[0] * ub.tail(d - 1);
    }
  }
  return out;
}

// Solve lambda o z = r per block (lambda interior).
Eigen::VectorXd jordan_divide(const Layout& lay, const Eigen::VectorXd& lambda, const Eigen::VectorXd& r) {
  Eigen::VectorXd z(lay.dim);
  for (size_t k = 0; k < lay.blocks.size(); ++k) {
    int off = lay.offsets[k], d = lay.blocks[k].dim;
    if (lay.blocks[k].kind == ConeKind::Orthant) {
      z.segment(off, d) = r.segment(off, d).cwiseQuotient(lambda.segment(off, d));
    } else {
      auto lb = lambda.segment(off, d);
      auto rb = r.segment(off, d);
      double detq = lb[0] * lb[0] - lb.tail(d - 1).squaredNorm();
      double z0 = (lb[0] * rb[0] - lb.tail(d - 1).dot(rb.tail(d - 1))) / detq;
      z[off] = z0;
      z.segment(off + 1, d - 1) = (rb.tail(d - 1) - z0 * lb.tail(d - 1)) / lb[0];
    }
  }
  return z;
}

// Largest alpha in [0, cap] with x + alpha*dx staying in the cone (x
// interior). Lorentz blocks bisect the concave margin x0 - ||xbar||, which
// stays stable when the block sits nearly on the boundary; the callers never
// need steps beyond the cap.
double max_step(const Layout& lay, const Eigen::VectorXd& x, const Eigen::VectorXd& dx, double cap) {
  double alpha = cap;
  for (size_t k = 0; k < lay.blocks.size(); ++k) {
    int off = lay.offsets[k], d = lay.blocks[k].dim;
    if (lay.blocks[k].kind == ConeKind::Orthant) {
      for (int j = 0; j < d; ++j)
        if (dx[off + j] < 0) alpha = std::min(alpha, -x[off + j] / dx[off + j]);
    } else {
      auto xb = x.segment(off, d);
      auto db = dx.segment(off, d);
      auto margin_at = [&](double a) {
        Eigen::VectorXd v = xb + a * db;
        return v[0] - v.tail(d - 1).norm();
      };
      if (margin_at(alpha) >= 0.0) continue;
      double lo = 0.0, hi = alpha;
      for (int it = 0; it < 90; ++it) {
        double mid = 0.5 * (lo + hi);
        (margin_at(mid) >= 0.0 ? lo : hi) = mid;
      }
      alpha = lo;
    }
  }
  return alpha;
}

// Nesterov-Todd scaling. For orthant entries W is diagonal sqrt(x/s); for a
// Lorentz block W = beta*(2 v v' - J) with v the scaled NT point. lambda is
// the common scaled variable W s = W^-1 x.
struct Scaling {
  const Layout* lay;
  Eigen::VectorXd diag;      // orthant entries of W (unused slots zero)
  Eigen::VectorXd diag_inv;
  std::vector<Eigen::MatrixXd> soc_w, soc_winv;  // one per block (empty for orthant)
  Eigen::VectorXd lambda;

  bool compute(const Layout& layout, const Eigen::VectorXd& x, const Eigen::VectorXd& s) {
    lay = &layout;
    diag = Eigen::VectorXd::Zero(layout.dim);
    diag_inv = Eigen::VectorXd::Zero(layout.dim);
    lambda.resize(layout.dim);
    soc_w.assign(layout.blocks.size(), Eigen::MatrixXd());
    soc_winv.assign(layout.blocks.size(), Eigen::MatrixXd());
    for (size_t k = 0; k < layout.blocks.size(); ++k) {
      int off = layout.offsets[k], d = layout.blocks[k].dim;
      if (layout.blocks[k].kind == ConeKind::Orthant) {
        for (int j = 0; j < d; ++j) {
          double xv = x[off + j], sv = s[off + j];
          if (!(xv > 0) || !(sv > 0)) return false;
          double w = std::sqrt(xv / sv);
          diag[off + j] = w;
          diag_inv[off + j] = 1.0 / w;
          lambda[off + j] = std::sqrt(xv * sv);
        }
      } else {
        auto xb = x.segment(off, d);
        auto sb = s.segment(off, d);
        double ax2 = xb[0] * xb[0] - xb.tail(d - 1).squaredNorm();
        double bs2 = sb[0] * sb[0] - sb.tail(d - 1).squaredNorm();
        if (!(ax2 > 0) || !(bs2 > 0) || !(xb[0] > 0) || !(sb[0] > 0)) return false;
        double ax = std::sqrt(ax2), bs = std::sqrt(bs2);
        Eigen::VectorXd xt = xb / ax, st = sb / bs;
        double gamma = std::sqrt((1.0 + xt.dot(st)) / 2.0);
        // raw NT point, then the hyperbolic Householder normalization
        Eigen::VectorXd w = st;
        w = -w;
        w[0] = st[0];
        w += xt;
        w /= (2.0 * gamma);
        w[0] += 1.0;
        Eigen::VectorXd v = w / std::sqrt(2.0 * w[0]);

        Eigen::MatrixXd J = -Eigen::MatrixXd::Identity(d, d);
        J(0, 0) = 1.0;
        double beta = std::sqrt(ax / bs);
        Eigen::MatrixXd W = beta * (2.0 * v * v.transpose() - J);
        Eigen::VectorXd jv = -v;
        jv[0] = v[0];
        Eigen::MatrixXd Winv = (1.0 / beta) * (2.0 * jv * jv.transpose() - J);
        soc_w[k] = W;
        soc_winv[k] = Winv;
        lambda.segment(off, d) = W * sb;
      }
    }
    return true;
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& u) const {  // W u
    Eigen::VectorXd out(lay->dim);
    for (size_t k = 0; k < lay->blocks.size(); ++k) {
      int off = lay->offsets[k], d = lay->blocks[k].dim;
      if (lay->blocks[k].kind == ConeKind::Orthant)
        out.segment(off, d) = diag.segment(off, d).cwiseProduct(u.segment(off, d));
      else
        out.segment(off, d) = soc_w[k] * u.segment(off, d);
    }
    return out;
  }

  Eigen::VectorXd apply_inv(const Eigen::VectorXd& u) const {  // W^-1 u
    Eigen::VectorXd out(lay->dim);
    for (size_t k = 0; k < lay->blocks.size(); ++k) {
      int off = lay->offsets[k], d = lay->blocks[k].dim;
      if (lay->blocks[k].kind == ConeKind::Orthant)
        out.segment(off, d) = diag_inv.segment(off, d).cwiseProduct(u.segment(off, d));
      else
        out.segment(off, d) = soc_winv[k] * u.segment(off, d);
    }
    return out;
  }
};

// The normal-equations matrix gets brutally ill-conditioned near degenerate
// optima, so the factorization and refinement run in extended precision.
using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LongVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

// In-place lower Cholesky; pivots below the floor get the fixed diagonal
// regularization instead of failing.
void cholesky_factor(LongMatrix& L) {
  const int n = static_cast<int>(L.rows());
  for (int j = 0; j < n; ++j) {
    long double d = L(j, j);
    for (int k = 0; k < j; ++k) d -= L(j, k) * L(j, k);
    if (d < kPivotFloor) d = std::max(d, 0.0L) + kPivotReg;
    d = std::sqrt(d);
    L(j, j) = d;
    for (int i = j + 1; i < n; ++i) {
      long double v = L(i, j);
      for (int k = 0; k < j; ++k) v -= L(i, k) * L(j, k);
      L(i, j) = v / d;
    }
  }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < j; ++i) L(i, j) = 0.0L;
}

LongVector cholesky_solve(const LongMatrix& L, LongVector rhs) {
  const int n = static_cast<int>(L.rows());
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < i; ++k) rhs[i] -= L(i, k) * rhs[k];
    rhs[i] /= L(i, i);
  }
  for (int i = n - 1; i >= 0; --i) {
    for (int k = i + 1; k < n; ++k) rhs[i] -= L(k, i) * rhs[k];
    rhs[i] /= L(i, i);
  }
  return rhs;
}

struct Direction {
  Eigen::VectorXd dx, dy, ds;
  double dtau = 0, dkappa = 0, dtheta = 0;
};

// Newton system of the theta-augmented self-dual embedding, reduced to the
// normal equations M = A W^2 A^T plus a 2x2 system in (dtau, dtheta).
struct KktContext {
  const Eigen::MatrixXd* A;
  const Eigen::VectorXd* c;
  const Eigen::VectorXd* b;
  const Eigen::VectorXd* rp;
  const Eigen::VectorXd* rd;
  double rg = 0;
  const Scaling* w;
  double tau = 1, kappa = 1;
  LongMatrix M;
  LongMatrix L;
  Eigen::VectorXd u1, u2;  // M^-1 (A W^2 c + b), M^-1 (A W^2 rd - rp)
  Eigen::VectorXd P, Q;    // dx = P dtau + Q dtheta + R(rhs)

  void prepare(const Eigen::MatrixXd& Amat, const Eigen::VectorXd& cvec, const Eigen::VectorXd& bvec,
               const Eigen::VectorXd& rbar_p, const Eigen::VectorXd& rbar_d, double rbar_g,
               const Scaling& scal, double tau_, double kappa_) {
    A = &Amat;
    c = &cvec;
    b = &bvec;
    rp = &rbar_p;
    rd = &rbar_d;
    rg = rbar_g;
    w = &scal;
    tau = tau_;
    kappa = kappa_;
    const int m = static_cast<int>(Amat.rows());
    const int n = static_cast<int>(Amat.cols());
    Eigen::MatrixXd AW(m, n);
    for (int i = 0; i < m; ++i) AW.row(i) = scal.apply(Amat.row(i).transpose()).transpose();
    LongMatrix AWl = AW.cast<long double>();
    M = AWl * AWl.transpose();
    L = M;
    cholesky_factor(L);
    u1 = solve_normal(Amat * scal.apply(scal.apply(cvec)) + bvec);
    u2 = solve_normal(Amat * scal.apply(scal.apply(rbar_d)) - rbar_p);
    P = scal.apply(scal.apply(Amat.transpose() * u1 - cvec));
    Q = scal.apply(scal.apply(Amat.transpose() * u2 - rbar_d));
  }

  Eigen::VectorXd solve_normal(const Eigen::VectorXd& rhs) const {
    LongVector r = rhs.cast<long double>();
    LongVector z = cholesky_solve(L, r);
    for (int round = 0; round < 3; ++round) {
      LongVector resid = r - M * z;
      z += cholesky_solve(L, resid);
    }
    return z.cast<double>();
  }

  bool solve(const Eigen::VectorXd& rho1, const Eigen::VectorXd& rho2, double rho3, double rho4,
             const Eigen::VectorXd& ds_target, double dkappa_target, const Eigen::VectorXd& lambda,
             Direction& out) const {
    Eigen::VectorXd dtilde = jordan_divide(*w->lay, lambda, ds_target);
    Eigen::VectorXd u3 =
        solve_normal(rho1 - (*A) * (w->apply(w->apply(rho2)) + w->apply(dtilde)));
    Eigen::VectorXd R = w->apply(w->apply(A->transpose() * u3 + rho2)) + w->apply(dtilde);

    // 2x2 system in (dtau, dtheta)
    double a11 = b->dot(u1) - c->dot(P) + kappa / tau;
    double a12 = b->dot(u2) - c->dot(Q) + rg;
    double h1 = rho3 + c->dot(R) - b->dot(u3) + dkappa_target / tau;
    double a21 = rp->dot(u1) + rd->dot(P) + rg;
    double a22 = rp->dot(u2) + rd->dot(Q);
    double h2 = rho4 - rp->dot(u3) - rd->dot(R);
    double det = a11 * a22 - a12 * a21;
    if (!std::isfinite(det) || std::abs(det) < 1e-300) return false;
    out.dtau = (h1 * a22 - h2 * a12) / det;
    out.dtheta = (a11 * h2 - a21 * h1) / det;
    out.dy = u1 * out.dtau + u2 * out.dtheta + u3;
    out.dx = P * out.dtau + Q * out.dtheta + R;
    out.ds = w->apply_inv(dtilde - w->apply_inv(out.dx));
    out.dkappa = (dkappa_target - kappa * out.dtau) / tau;
    return out.dx.allFinite() && out.dy.allFinite() && out.ds.allFinite() &&
           std::isfinite(out.dtau) && std::isfinite(out.dkappa) && std::isfinite(out.dtheta);
  }
};

}  // namespace

void ConicProgram::validate() const {
  const int n = total_dim();
  if (objective.size() != n) throw std::invalid_argument("conic program: objective length mismatch");
  if (equality_matrix.cols() != n) throw std::invalid_argument("conic program: matrix column mismatch");
  if (equality_matrix.rows() != rhs.size()) throw std::invalid_argument("conic program: rhs length mismatch");
  if (free_dims < 0) throw std::invalid_argument("conic program: negative free dimension count");
}

void SolverConfig::validate() const {
  if (!(feas_tol > 0) || !(gap_tol > 0) || !(classification_eps > 0))
    throw std::invalid_argument("solver config: tolerances must be positive");
  if (!(feas_tol < classification_eps) || !(gap_tol < classification_eps) || !(classification_eps < 1))
    throw std::invalid_argument("solver config: need feas/gap tol < classification eps < 1");
  if (max_iter <= 0) throw std::invalid_argument("solver config: max_iter must be positive");
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::PrimalInfeasible: return "PrimalInfeasible";
    case SolveStatus::DualInfeasible: return "DualInfeasible";
    case SolveStatus::IterLimit: return "IterLimit";
    default: return "Numerical";
  }
}

ResidualTriple residuals(const ConicProgram& program, const Solution& candidate) {
  program.validate();
  const int n = program.total_dim();
  if (candidate.x.size() != n || candidate.s.size() != n ||
      candidate.y.size() != program.equality_matrix.rows())
    throw std::invalid_argument("residuals: candidate dimensions do not match the program");
  ResidualTriple r;
  r.primal = (program.equality_matrix * candidate.x - program.rhs).norm();
  Eigen::VectorXd slack =
      program.objective - program.equality_matrix.transpose() * candidate.y - candidate.s;
  r.dual = slack.norm();
  r.gap = std::abs(program.objective.dot(candidate.x) - program.rhs.dot(candidate.y));
  return r;
}

Solution solve(const ConicProgram& program, const SolverConfig& config) {
  program.validate();
  config.validate();

  const int m = static_cast<int>(program.equality_matrix.rows());
  const int ncone = program.cone.dim();
  const int nfree = program.free_dims;
  Layout lay(program);

  // split free variables: columns [A_cone | A_free | -A_free]
  Eigen::MatrixXd A(m, lay.dim);
  Eigen::VectorXd c(lay.dim);
  A.leftCols(ncone) = program.equality_matrix.leftCols(ncone);
  c.head(ncone) = program.objective.head(ncone);
  if (nfree > 0) {
    A.middleCols(ncone, nfree) = program.equality_matrix.rightCols(nfree);
    A.rightCols(nfree) = -program.equality_matrix.rightCols(nfree);
    c.segment(ncone, nfree) = program.objective.tail(nfree);
    c.tail(nfree) = -program.objective.tail(nfree);
  }
  const Eigen::VectorXd& b = program.rhs;

  // Full self-dual embedding: the model carries the initial residuals as the
  // theta column, so every iterate satisfies the embedding equations exactly
  // and feasibility improves in lockstep with complementarity
  // (x's + tau*kappa = beta*theta along the iteration).
  Eigen::VectorXd e = identity_point(lay);
  Eigen::VectorXd x = e, s = e;
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
  double tau = 1.0, kappa = 1.0, theta = 1.0;
  const double nu = static_cast<double>(lay.barrier_degree) + 1.0;
  const Eigen::VectorXd rbar_p = b - A * e;
  const Eigen::VectorXd rbar_d = e - c;
  const double rbar_g = 1.0 + c.dot(e);
  const double beta = static_cast<double>(lay.barrier_degree) + 1.0;

  Solution sol;
  auto finish = [&](SolveStatus st) {
    sol.status = st;
    sol.x.resize(ncone + nfree);
    sol.s = Eigen::VectorXd::Zero(ncone + nfree);
    double t = (tau > 0) ? tau : 1.0;
    sol.x.head(ncone) = x.head(ncone) / t;
    sol.s.head(ncone) = s.head(ncone) / t;
    if (nfree > 0)
      sol.x.tail(nfree) = (x.segment(ncone, nfree) - x.tail(nfree)) / t;
    sol.y = y / t;
    if (st == SolveStatus::PrimalInfeasible) {
      double by = b.dot(y);
      if (by > 0) {
        sol.y = y / by;
        sol.x.setZero();
        sol.s.head(ncone) = s.head(ncone) / by;
      }
    } else if (st == SolveStatus::DualInfeasible) {
      double cx = c.dot(x);
      if (cx < 0) {
        sol.x *= t / (-cx);
        sol.y.setZero();
        sol.s.setZero();
      }
    }
    ResidualTriple r = residuals(program, sol);
    sol.primal_residual = r.primal;
    sol.dual_residual = r.dual;
    double pobj = program.objective.dot(sol.x), dobj = program.rhs.dot(sol.y);
    sol.duality_gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    return sol;
  };

  const double bnorm = b.norm();
  const double cnorm = program.objective.norm();

  for (int iter = 0; iter <= config.max_iter; ++iter) {
    sol.iterations = iter;
    double mu = (x.dot(s) + tau * kappa) / nu;
    sol.mu_trace.push_back(mu);

    // convergence tests on the de-homogenized point, in original variables
    {
      Eigen::VectorXd xh(ncone + nfree), sh = Eigen::VectorXd::Zero(ncone + nfree);
      xh.head(ncone) = x.head(ncone) / tau;
      if (nfree > 0) xh.tail(nfree) = (x.segment(ncone, nfree) - x.tail(nfree)) / tau;
      sh.head(ncone) = s.head(ncone) / tau;
      Eigen::VectorXd yh = y / tau;
      double pres = (program.equality_matrix * xh - program.rhs).norm();
      double dres =
          (program.objective - program.equality_matrix.transpose() * yh - sh).norm();
      double pobj = program.objective.dot(xh), dobj = program.rhs.dot(yh);
      double relgap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
      if (pres <= config.feas_tol * (1.0 + bnorm) && dres <= config.feas_tol * (1.0 + cnorm) &&
          relgap <= config.gap_tol)
        return finish(SolveStatus::Optimal);
    }
    // homogeneous infeasibility certificates
    if (iter > 0) {
      double by = b.dot(y);
      if (by > 0) {
        double viol = (A.transpose() * y + s).norm() / by;
        if (viol <= config.feas_tol * (1.0 + cnorm)) return finish(SolveStatus::PrimalInfeasible);
      }
      double cx = c.dot(x);
      if (cx < 0) {
        double viol = (A * x).norm() / (-cx);
        if (viol <= config.feas_tol * (1.0 + bnorm)) return finish(SolveStatus::DualInfeasible);
      }
    }
    if (iter == config.max_iter) return finish(SolveStatus::IterLimit);

    Scaling scal;
    if (!scal.compute(lay, x, s)) return finish(SolveStatus::Numerical);
    KktContext kkt;
    kkt.prepare(A, c, b, rbar_p, rbar_d, rbar_g, scal, tau, kappa);

    // drift-correcting right-hand sides (zero up to roundoff)
    Eigen::VectorXd rho1 = -(A * x - b * tau + rbar_p * theta);
    Eigen::VectorXd rho2 = -(c * tau - A.transpose() * y + rbar_d * theta - s);
    double rho3 = -(b.dot(y) - c.dot(x) + rbar_g * theta - kappa);
    double rho4 = beta - (rbar_p.dot(y) + rbar_d.dot(x) + rbar_g * tau);

    Eigen::VectorXd lam2 = jordan_product(lay, scal.lambda, scal.lambda);
    const double cap = 1.0 / 0.99;

    Direction aff;
    if (!kkt.solve(rho1, rho2, rho3, rho4, -lam2, -tau * kappa, scal.lambda, aff))
      return finish(SolveStatus::Numerical);
    Eigen::VectorXd du = scal.apply_inv(aff.dx);
    Eigen::VectorXd dv = scal.apply(aff.ds);
    double astep = std::min({max_step(lay, scal.lambda, du, cap), max_step(lay, scal.lambda, dv, cap),
                             aff.dtau < 0 ? -tau / aff.dtau : kInf,
                             aff.dkappa < 0 ? -kappa / aff.dkappa : kInf});
    double alpha_aff = std::min(1.0, astep);
    double mu_aff = ((x + alpha_aff * aff.dx).dot(s + alpha_aff * aff.ds) +
                     (tau + alpha_aff * aff.dtau) * (kappa + alpha_aff * aff.dkappa)) /
                    nu;
    double sigma = std::clamp(std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3), 1e-8, 1.0 - 1e-8);

    Eigen::VectorXd corr = jordan_product(lay, du, dv);
    Eigen::VectorXd ds_target = -lam2 - corr + sigma * mu * e;
    double dk_target = -tau * kappa - aff.dtau * aff.dkappa + sigma * mu;
    Direction dir;
    if (!kkt.solve(rho1, rho2, rho3, rho4, ds_target, dk_target, scal.lambda, dir))
      return finish(SolveStatus::Numerical);

    du = scal.apply_inv(dir.dx);
    dv = scal.apply(dir.ds);
    double bstep = std::min({max_step(lay, scal.lambda, du, cap), max_step(lay, scal.lambda, dv, cap),
                             dir.dtau < 0 ? -tau / dir.dtau : kInf,
                             dir.dkappa < 0 ? -kappa / dir.dkappa : kInf});
    double alpha = std::min(1.0, 0.99 * bstep);
    if (!(alpha > 1e-13)) return finish(SolveStatus::Numerical);

    x += alpha * dir.dx;
    y += alpha * dir.dy;
    tau += alpha * dir.dtau;
    theta += alpha * dir.dtheta;
    // s and kappa live on the embedding equalities; recomputing them from
    // (x, y, tau, theta) keeps the dual-side equations exact instead of
    // letting solve error accumulate across iterations
    Eigen::VectorXd s_exact = c * tau - A.transpose() * y + rbar_d * theta;
    double kappa_exact = b.dot(y) - c.dot(x) + rbar_g * theta;
    if (min_margin(lay, s_exact) > 0 && kappa_exact > 0) {
      s = s_exact;
      kappa = kappa_exact;
    } else {
      s += alpha * dir.ds;
      kappa += alpha * dir.dkappa;
    }
  }
  return finish(SolveStatus::IterLimit);
}

}  // namespace conepart
