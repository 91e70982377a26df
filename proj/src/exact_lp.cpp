#include "conepart/exact_lp.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <stdexcept>

namespace conepart {

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  auto dot = text.find('.');
  if (dot == std::string::npos) {
    mpq_class q;
    if (q.set_str(text, 10) != 0)
      throw std::invalid_argument("bad rational literal: " + text);
    q.canonicalize();
    if (q.get_den() <= 0) throw std::invalid_argument("rational with nonpositive denominator: " + text);
    return q;
  }
  // decimal form d.ddd -> integer / 10^k
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  size_t frac_len = text.size() - dot - 1;
  if (frac_len == 0 || digits.empty()) throw std::invalid_argument("bad decimal literal: " + text);
  mpz_class num;
  if (num.set_str(digits, 10) != 0) throw std::invalid_argument("bad decimal literal: " + text);
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

std::string format_rational(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

double to_double(const Rational& q) { return q.get_d(); }

RationalVector RationalMatrix::column(int c) const {
  RationalVector v(static_cast<size_t>(rows));
  for (int r = 0; r < rows; ++r) v[static_cast<size_t>(r)] = at(r, c);
  return v;
}

RationalVector RationalMatrix::apply(const RationalVector& x) const {
  if (static_cast<int>(x.size()) != cols) throw std::invalid_argument("matrix-vector dimension mismatch");
  RationalVector y(static_cast<size_t>(rows), Rational(0));
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      if (at(r, c) != 0) y[static_cast<size_t>(r)] += at(r, c) * x[static_cast<size_t>(c)];
  return y;
}

RationalVector RationalMatrix::apply_transpose(const RationalVector& y) const {
  if (static_cast<int>(y.size()) != rows) throw std::invalid_argument("matrix-vector dimension mismatch");
  RationalVector x(static_cast<size_t>(cols), Rational(0));
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      if (at(r, c) != 0) x[static_cast<size_t>(c)] += at(r, c) * y[static_cast<size_t>(r)];
  return x;
}

namespace {

enum class ColState { Basic, AtLower, AtUpper, FreeNonbasic };

// Full-tableau bounded-variable simplex over exact rationals. Sizes here are
// desk scale, so the dense tableau and recomputed reduced costs are fine.
class BoundedSimplex {
 public:
  BoundedSimplex(const RationalVector& c, const RationalMatrix& A, const RationalVector& b,
                 std::vector<VarBound> bounds)
      : n_(A.cols), m_(A.rows), cost_(c), bounds_(std::move(bounds)) {
    if (static_cast<int>(c.size()) != n_ || static_cast<int>(b.size()) != m_ ||
        static_cast<int>(bounds_.size()) != n_)
      throw std::invalid_argument("solve_lp_exact: inconsistent dimensions");
    for (const VarBound& bd : bounds_)
      if (bd.has_lower && bd.has_upper && bd.lower > bd.upper) infeasible_box_ = true;

    nt_ = n_ + m_;
    state_.assign(static_cast<size_t>(nt_), ColState::AtLower);
    for (int j = 0; j < n_; ++j) {
      if (bounds_[static_cast<size_t>(j)].has_lower)
        state_[static_cast<size_t>(j)] = ColState::AtLower;
      else if (bounds_[static_cast<size_t>(j)].has_upper)
        state_[static_cast<size_t>(j)] = ColState::AtUpper;
      else
        state_[static_cast<size_t>(j)] = ColState::FreeNonbasic;
    }
    // artificial bounds [0, +inf)
    bounds_.resize(static_cast<size_t>(nt_));
    for (int j = n_; j < nt_; ++j) bounds_[static_cast<size_t>(j)] = VarBound::nonneg();

    // residual of the starting point and signed artificial columns
    RationalVector x0(static_cast<size_t>(n_), Rational(0));
    for (int j = 0; j < n_; ++j) x0[static_cast<size_t>(j)] = nonbasic_value(j);
    RationalVector ax = A.apply(x0);
    art_sign_.assign(static_cast<size_t>(m_), 1);
    tab_.assign(static_cast<size_t>(m_) * nt_, Rational(0));
    xB_.assign(static_cast<size_t>(m_), Rational(0));
    basis_.assign(static_cast<size_t>(m_), 0);
    for (int i = 0; i < m_; ++i) {
      Rational r = b[static_cast<size_t>(i)] - ax[static_cast<size_t>(i)];
      int s = (r >= 0) ? 1 : -1;
      art_sign_[static_cast<size_t>(i)] = s;
      for (int j = 0; j < n_; ++j) tab(i, j) = s * A.at(i, j);
      tab(i, n_ + i) = 1;
      basis_[static_cast<size_t>(i)] = n_ + i;
      state_[static_cast<size_t>(n_ + i)] = ColState::Basic;
      xB_[static_cast<size_t>(i)] = s * r;
    }

    // Bland's rule is finite; cap at the number of possible bases as a
    // defect detector.
    mpz_class cap;
    mpz_bin_uiui(cap.get_mpz_t(), static_cast<unsigned long>(nt_ + m_), static_cast<unsigned long>(m_));
    iter_cap_ = cap.fits_ulong_p() ? cap.get_ui() : std::numeric_limits<unsigned long>::max();
  }

  LpResult run() {
    LpResult res;
    if (infeasible_box_) {
      res.status = LpStatus::Infeasible;
      return res;
    }

    // phase 1: maximize -sum(artificials)
    RationalVector phase1(static_cast<size_t>(nt_), Rational(0));
    for (int j = n_; j < nt_; ++j) phase1[static_cast<size_t>(j)] = -1;
    bool bounded = optimize(phase1, /*allow_artificial=*/true);
    assert(bounded);
    (void)bounded;
    Rational art_total = 0;
    for (int i = 0; i < m_; ++i)
      if (basis_[static_cast<size_t>(i)] >= n_) art_total += xB_[static_cast<size_t>(i)];
    for (int j = n_; j < nt_; ++j)
      if (state_[static_cast<size_t>(j)] == ColState::AtUpper)
        throw std::logic_error("artificial at upper bound");
    if (art_total > 0) {
      res.status = LpStatus::Infeasible;
      return res;
    }
    purge_artificials();

    // phase 2: the real objective, artificials locked out
    RationalVector phase2(static_cast<size_t>(nt_), Rational(0));
    for (int j = 0; j < n_; ++j) phase2[static_cast<size_t>(j)] = cost_[static_cast<size_t>(j)];
    if (!optimize(phase2, /*allow_artificial=*/false)) {
      res.status = LpStatus::Unbounded;
      return res;
    }

    res.status = LpStatus::Optimal;
    res.primal.assign(static_cast<size_t>(n_), Rational(0));
    for (int j = 0; j < n_; ++j)
      if (state_[static_cast<size_t>(j)] != ColState::Basic)
        res.primal[static_cast<size_t>(j)] = nonbasic_value(j);
    for (int i = 0; i < rows(); ++i)
      if (basis_[static_cast<size_t>(i)] < n_)
        res.primal[static_cast<size_t>(basis_[static_cast<size_t>(i)])] = xB_[static_cast<size_t>(i)];
    res.optimal_value = 0;
    for (int j = 0; j < n_; ++j)
      res.optimal_value += cost_[static_cast<size_t>(j)] * res.primal[static_cast<size_t>(j)];

    // y_i = sign_i * c_B^T tab[:, artificial_i]; valid for dropped rows too
    res.dual.assign(static_cast<size_t>(m_), Rational(0));
    for (int i = 0; i < m_; ++i) {
      Rational acc = 0;
      for (int k = 0; k < rows(); ++k) {
        const Rational& cb = phase2[static_cast<size_t>(basis_[static_cast<size_t>(k)])];
        if (cb != 0 && tab(k, n_ + i) != 0) acc += cb * tab(k, n_ + i);
      }
      res.dual[static_cast<size_t>(i)] = art_sign_[static_cast<size_t>(i)] * acc;
    }
    return res;
  }

 private:
  int rows() const { return static_cast<int>(basis_.size()); }
  Rational& tab(int r, int c) { return tab_[static_cast<size_t>(r) * nt_ + c]; }
  const Rational& tab(int r, int c) const { return tab_[static_cast<size_t>(r) * nt_ + c]; }

  Rational nonbasic_value(int j) const {
    switch (state_[static_cast<size_t>(j)]) {
      case ColState::AtLower:
        return bounds_[static_cast<size_t>(j)].lower;
      case ColState::AtUpper:
        return bounds_[static_cast<size_t>(j)].upper;
      default:
        return 0;  // free nonbasic rests at zero
    }
  }

  // One simplex phase; returns false when the objective is unbounded.
  bool optimize(const RationalVector& cost, bool allow_artificial) {
    unsigned long iters = 0;
    while (true) {
      if (++iters > iter_cap_)
        throw std::runtime_error("simplex exceeded the Bland iteration cap (defect)");

      RationalVector cB(static_cast<size_t>(rows()));
      for (int i = 0; i < rows(); ++i)
        cB[static_cast<size_t>(i)] = cost[static_cast<size_t>(basis_[static_cast<size_t>(i)])];

      // Bland entering: lowest-index eligible nonbasic column.
      int enter = -1, sigma = 0;
      for (int j = 0; j < nt_; ++j) {
        ColState st = state_[static_cast<size_t>(j)];
        if (st == ColState::Basic) continue;
        if (j >= n_ && !allow_artificial) continue;
        Rational d = cost[static_cast<size_t>(j)];
        for (int i = 0; i < rows(); ++i)
          if (cB[static_cast<size_t>(i)] != 0 && tab(i, j) != 0)
            d -= cB[static_cast<size_t>(i)] * tab(i, j);
        if ((st == ColState::AtLower || st == ColState::FreeNonbasic) && d > 0) {
          enter = j;
          sigma = 1;
        } else if ((st == ColState::AtUpper || st == ColState::FreeNonbasic) && d < 0) {
          enter = j;
          sigma = -1;
        }
        if (enter >= 0) break;
      }
      if (enter < 0) return true;  // optimal

      // ratio test: smallest step that drives some bound tight
      bool has_limit = false;
      Rational best;
      const VarBound& eb = bounds_[static_cast<size_t>(enter)];
      bool own_flip_possible = eb.has_lower && eb.has_upper;
      if (own_flip_possible) {
        best = eb.upper - eb.lower;
        has_limit = true;
      }
      for (int i = 0; i < rows(); ++i) {
        const Rational& coef = tab(i, enter);
        if (coef == 0) continue;
        const VarBound& bb = bounds_[static_cast<size_t>(basis_[static_cast<size_t>(i)])];
        Rational rate = sigma * coef;  // basic value moves by -rate * step
        if (rate > 0 && bb.has_lower) {
          Rational lim = (xB_[static_cast<size_t>(i)] - bb.lower) / rate;
          if (!has_limit || lim < best) {
            best = lim;
            has_limit = true;
          }
        } else if (rate < 0 && bb.has_upper) {
          Rational lim = (bb.upper - xB_[static_cast<size_t>(i)]) / (-rate);
          if (!has_limit || lim < best) {
            best = lim;
            has_limit = true;
          }
        }
      }
      if (!has_limit) return false;  // unbounded direction

      // Bland leaving: among blockers at the minimum step, lowest variable
      // index; the entering column's own bound flip competes with index
      // 'enter'.
      int leave_row = -1;
      int leave_var = std::numeric_limits<int>::max();
      if (own_flip_possible && eb.upper - eb.lower == best) leave_var = enter;
      for (int i = 0; i < rows(); ++i) {
        const Rational& coef = tab(i, enter);
        if (coef == 0) continue;
        const VarBound& bb = bounds_[static_cast<size_t>(basis_[static_cast<size_t>(i)])];
        Rational rate = sigma * coef;
        bool blocks = false;
        if (rate > 0 && bb.has_lower)
          blocks = (xB_[static_cast<size_t>(i)] - bb.lower) == best * rate;
        else if (rate < 0 && bb.has_upper)
          blocks = (bb.upper - xB_[static_cast<size_t>(i)]) == best * (-rate);
        if (blocks && basis_[static_cast<size_t>(i)] < leave_var) {
          leave_var = basis_[static_cast<size_t>(i)];
          leave_row = i;
        }
      }

      // move the entering variable by 'best'
      for (int i = 0; i < rows(); ++i)
        if (tab(i, enter) != 0) xB_[static_cast<size_t>(i)] -= sigma * best * tab(i, enter);

      if (leave_var == enter) {
        state_[static_cast<size_t>(enter)] = (sigma > 0) ? ColState::AtUpper : ColState::AtLower;
        continue;
      }
      Rational enter_value = nonbasic_value(enter) + sigma * best;
      ColState leave_state =
          (sigma * tab(leave_row, enter) > 0) ? ColState::AtLower : ColState::AtUpper;
      pivot(leave_row, enter);
      xB_[static_cast<size_t>(leave_row)] = enter_value;
      state_[static_cast<size_t>(leave_var)] = leave_state;
    }
  }

  void pivot(int row, int col) {
    Rational p = tab(row, col);
    assert(p != 0);
    for (int j = 0; j < nt_; ++j)
      if (tab(row, j) != 0) tab(row, j) /= p;
    for (int i = 0; i < rows(); ++i) {
      if (i == row) continue;
      Rational f = tab(i, col);
      if (f == 0) continue;
      for (int j = 0; j < nt_; ++j)
        if (tab(row, j) != 0) tab(i, j) -= f * tab(row, j);
    }
    state_[static_cast<size_t>(col)] = ColState::Basic;
    basis_[static_cast<size_t>(row)] = col;
  }

  // After phase 1: pivot zero-valued basic artificials onto structural
  // columns, or drop the tableau row when it has become redundant.
  void purge_artificials() {
    for (int i = rows() - 1; i >= 0; --i) {
      if (basis_[static_cast<size_t>(i)] < n_) continue;
      assert(xB_[static_cast<size_t>(i)] == 0);
      int piv = -1;
      for (int j = 0; j < n_; ++j) {
        if (state_[static_cast<size_t>(j)] == ColState::Basic) continue;
        if (tab(i, j) != 0) {
          piv = j;
          break;
        }
      }
      if (piv >= 0) {
        int old = basis_[static_cast<size_t>(i)];
        Rational value = nonbasic_value(piv);
        pivot(i, piv);
        xB_[static_cast<size_t>(i)] = value;
        state_[static_cast<size_t>(old)] = ColState::AtLower;
      } else {
        // dependent row: remove it from the working tableau
        int old = basis_[static_cast<size_t>(i)];
        state_[static_cast<size_t>(old)] = ColState::AtLower;
        tab_.erase(tab_.begin() + static_cast<long>(i) * nt_,
                   tab_.begin() + static_cast<long>(i + 1) * nt_);
        xB_.erase(xB_.begin() + i);
        basis_.erase(basis_.begin() + i);
      }
    }
  }

  int n_, m_, nt_;
  RationalVector cost_;
  std::vector<VarBound> bounds_;
  std::vector<Rational> tab_;
  RationalVector xB_;
  std::vector<int> basis_;
  std::vector<ColState> state_;
  std::vector<int> art_sign_;
  unsigned long iter_cap_ = 0;
  bool infeasible_box_ = false;
};

// LP behind Eq-(3)'s B test for one column: max x_i, Ax = 0, 0 <= x, x_i <= 1.
LpResult gt_primal_lp(const RationalMatrix& A, int i) {
  int n = A.cols;
  RationalVector c(static_cast<size_t>(n), Rational(0));
  c[static_cast<size_t>(i)] = 1;
  RationalVector b(static_cast<size_t>(A.rows), Rational(0));
  std::vector<VarBound> bounds(static_cast<size_t>(n), VarBound::nonneg());
  bounds[static_cast<size_t>(i)] = VarBound::range(0, 1);
  return solve_lp_exact(c, A, b, bounds);
}

// LP behind the implication-form test: max a_i^T y, A^T y >= 0, a_i^T y <= 1.
// Variables (y free, s >= 0, u >= 0); rows A^T y - s = 0 and a_i^T y + u = 1.
LpResult gt_dual_lp(const RationalMatrix& A, int i) {
  int m = A.rows, n = A.cols;
  RationalMatrix G(n + 1, m + n + 1);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < m; ++k) G.at(j, k) = A.at(k, j);
    G.at(j, m + j) = -1;
  }
  for (int k = 0; k < m; ++k) G.at(n, k) = A.at(k, i);
  G.at(n, m + n) = 1;
  RationalVector b(static_cast<size_t>(n + 1), Rational(0));
  b[static_cast<size_t>(n)] = 1;
  RationalVector c(static_cast<size_t>(m + n + 1), Rational(0));
  for (int k = 0; k < m; ++k) c[static_cast<size_t>(k)] = A.at(k, i);
  std::vector<VarBound> bounds(static_cast<size_t>(m + n + 1), VarBound::nonneg());
  for (int k = 0; k < m; ++k) bounds[static_cast<size_t>(k)] = VarBound::free_var();
  return solve_lp_exact(c, G, b, bounds);
}

}  // namespace

LpResult solve_lp_exact(const RationalVector& c, const RationalMatrix& A, const RationalVector& b,
                        const std::vector<VarBound>& bounds) {
  return BoundedSimplex(c, A, b, bounds).run();
}

bool feasible_nonneg(const RationalMatrix& A, const RationalVector& b) {
  RationalVector c(static_cast<size_t>(A.cols), Rational(0));
  std::vector<VarBound> bounds(static_cast<size_t>(A.cols), VarBound::nonneg());
  return solve_lp_exact(c, A, b, bounds).status == LpStatus::Optimal;
}

GtPartition gt_partition_exact(const RationalMatrix& A) {
  if (A.rows <= 0 || A.cols <= 0) throw std::invalid_argument("gt_partition_exact: empty matrix");
  GtPartition p;
  for (int i = 0; i < A.cols; ++i) {
    LpResult r = gt_primal_lp(A, i);
    if (r.status != LpStatus::Optimal) throw std::logic_error("gt primal test LP must be solvable");
    if (r.optimal_value > 0)
      p.B.push_back(i);
    else
      p.N.push_back(i);
  }
  return p;
}

GtWitness gt_partition_witnesses(const RationalMatrix& A) {
  GtWitness w;
  int n = A.cols, m = A.rows;
  w.xbar.assign(static_cast<size_t>(n), Rational(0));
  w.ybar.assign(static_cast<size_t>(m), Rational(0));
  for (int i = 0; i < n; ++i) {
    LpResult r = gt_primal_lp(A, i);
    if (r.status != LpStatus::Optimal) throw std::logic_error("gt primal test LP must be solvable");
    if (r.optimal_value > 0) {
      w.partition.B.push_back(i);
      w.primal_maximizers.push_back(r.primal);
      for (int j = 0; j < n; ++j) w.xbar[static_cast<size_t>(j)] += r.primal[static_cast<size_t>(j)];
    } else {
      w.partition.N.push_back(i);
      LpResult d = gt_dual_lp(A, i);
      if (d.status != LpStatus::Optimal || d.optimal_value != 1)
        throw std::logic_error("Goldman-Tucker dual witness LP did not attain 1");
      for (int k = 0; k < m; ++k) w.ybar[static_cast<size_t>(k)] += d.primal[static_cast<size_t>(k)];
    }
  }

  // substitution check: the theorem guarantees these hold exactly
  RationalVector ax = A.apply(w.xbar);
  for (const Rational& v : ax)
    if (v != 0) throw std::logic_error("gt witness violates A x = 0");
  RationalVector aty = A.apply_transpose(w.ybar);
  for (int j = 0; j < n; ++j) {
    if (w.xbar[static_cast<size_t>(j)] < 0 || aty[static_cast<size_t>(j)] < 0)
      throw std::logic_error("gt witness violates nonnegativity");
  }
  for (int j : w.partition.B)
    if (w.xbar[static_cast<size_t>(j)] == 0) throw std::logic_error("gt witness x not strict on B");
  for (int j : w.partition.N)
    if (aty[static_cast<size_t>(j)] == 0) throw std::logic_error("gt witness y not strict on N");
  return w;
}

bool lineality_membership(const RationalMatrix& A, const RationalVector& v) {
  if (static_cast<int>(v.size()) != A.rows)
    throw std::invalid_argument("lineality_membership: vector length != row count");
  RationalVector neg(v.size());
  for (size_t i = 0; i < v.size(); ++i) neg[i] = -v[i];
  return feasible_nonneg(A, neg) && feasible_nonneg(A, v);
}

bool three_way_check(const RationalMatrix& A) {
  if (A.rows <= 0 || A.cols <= 0) throw std::invalid_argument("three_way_check: empty matrix");
  int n = A.cols;
  std::vector<bool> primal_pos(static_cast<size_t>(n)), dual_pos(static_cast<size_t>(n)),
      lin_member(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    LpResult p = gt_primal_lp(A, i);
    LpResult d = gt_dual_lp(A, i);
    if (p.status != LpStatus::Optimal || d.status != LpStatus::Optimal)
      throw std::logic_error("three_way_check: auxiliary LP not solvable");
    primal_pos[static_cast<size_t>(i)] = p.optimal_value > 0;
    dual_pos[static_cast<size_t>(i)] = d.optimal_value > 0;
    lin_member[static_cast<size_t>(i)] = lineality_membership(A, A.column(i));
  }
  for (int i = 0; i < n; ++i) {
    bool b1 = primal_pos[static_cast<size_t>(i)];   // Eq. (3): exists x with x_i > 0
    bool b2 = !dual_pos[static_cast<size_t>(i)];    // Eq. (4): A^T y >= 0 forces a_i^T y = 0
    bool b3 = lin_member[static_cast<size_t>(i)];   // Eq. (5): a_i in Lin(A R^n_+)
    bool n1 = dual_pos[static_cast<size_t>(i)];     // Eq. (3): exists y with a_i^T y > 0
    bool n2 = !primal_pos[static_cast<size_t>(i)];  // Eq. (4): Ax = 0, x >= 0 forces x_i = 0
    bool n3 = !lin_member[static_cast<size_t>(i)];
    if (b1 != b2 || b1 != b3 || n1 != n2 || n1 != n3) return false;
  }
  return true;
}

}  // namespace conepart
