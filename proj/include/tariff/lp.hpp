#pragma once

// Exact small-scale linear programming over rationals: a dense two-phase
// simplex with Bland's rule. Intended for the menu pricing programs of this
// toolkit (at most a few dozen variables and rows), not for large LPs.

#include <cstddef>
#include <optional>
#include <vector>

#include "tariff/rational.hpp"

namespace tariff {

enum class Relation { le, eq, ge };
enum class LpStatus { optimal, infeasible, unbounded };

struct LpConstraint {
  std::vector<Rational> coeffs;
  Relation rel = Relation::le;
  Rational rhs;
};

struct LinearProgram {
  std::size_t num_vars = 0;
  std::vector<Rational> objective;  // maximized
  std::vector<LpConstraint> rows;
  std::vector<std::optional<Rational>> lower;  // nullopt = no bound
  std::vector<std::optional<Rational>> upper;

  explicit LinearProgram(std::size_t n)
      : num_vars(n), objective(n, Rational(0)), lower(n), upper(n) {}

  void add_row(std::vector<Rational> coeffs, Relation rel, Rational rhs) {
    if (coeffs.size() != num_vars) throw ValidationError("constraint row has wrong length");
    rows.push_back(LpConstraint{std::move(coeffs), rel, std::move(rhs)});
  }
};

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Rational value;
  std::vector<Rational> solution;
};

namespace detail {

// Dense tableau simplex (maximization, all variables >= 0, equality rows
// with nonnegative rhs after setup). Bland's rule: entering column is the
// lowest index with positive reduced cost, leaving row is the one whose
// basic variable has the lowest index among minimum-ratio rows.
class SimplexTableau {
 public:
  // rows: m x n coefficient matrix, rhs >= 0 required.
  SimplexTableau(std::vector<std::vector<Rational>> rows, std::vector<Rational> rhs, std::size_t n)
      : a_(std::move(rows)), b_(std::move(rhs)), m_(a_.size()), n_(n) {
    basis_.assign(m_, 0);
  }

  std::size_t num_rows() const { return m_; }
  std::size_t num_cols() const { return n_; }
  const std::vector<std::size_t>& basis() const { return basis_; }
  void set_basis(std::size_t row, std::size_t col) { basis_[row] = col; }

  // Maximize c·x given the current (feasible) basis. Returns false when the
  // problem is unbounded. cost_row_ holds reduced costs afterwards.
  bool optimize(const std::vector<Rational>& cost) {
    // Price out the basic columns: z_j = c_j - c_B B^{-1} A_j with the
    // tableau already in B^{-1}A form.
    cost_row_ = cost;
    obj_ = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      const Rational cb = cost[basis_[i]];
      if (cb == 0) continue;
      obj_ += cb * b_[i];
      for (std::size_t j = 0; j < n_; ++j)
        if (!a_[i][j].is_zero()) cost_row_[j] -= cb * a_[i][j];
    }
    for (;;) {
      std::size_t enter = n_;
      for (std::size_t j = 0; j < n_; ++j)
        if (cost_row_[j] > 0) { enter = j; break; }
      if (enter == n_) return true;

      std::size_t leave = m_;
      Rational ratio;
      for (std::size_t i = 0; i < m_; ++i) {
        if (a_[i][enter] <= 0) continue;
        Rational r = b_[i] / a_[i][enter];
        if (leave == m_ || r < ratio || (r == ratio && basis_[i] < basis_[leave])) {
          leave = i;
          ratio = r;
        }
      }
      if (leave == m_) return false;  // unbounded
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t row, std::size_t col) {
    const Rational inv = a_[row][col];
    for (std::size_t j = 0; j < n_; ++j) a_[row][j] /= inv;
    b_[row] /= inv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == row || a_[i][col].is_zero()) continue;
      const Rational f = a_[i][col];
      for (std::size_t j = 0; j < n_; ++j)
        if (!a_[row][j].is_zero()) a_[i][j] -= f * a_[row][j];
      b_[i] -= f * b_[row];
      a_[i][col] = 0;  // keep it exactly zero
    }
    const Rational f = cost_row_[col];
    if (!f.is_zero()) {
      for (std::size_t j = 0; j < n_; ++j)
        if (!a_[row][j].is_zero()) cost_row_[j] -= f * a_[row][j];
      obj_ += f * b_[row];
      cost_row_[col] = 0;
    }
    basis_[row] = col;
  }

  const Rational& objective() const { return obj_; }
  const Rational& row_entry(std::size_t i, std::size_t j) const { return a_[i][j]; }
  const Rational& rhs(std::size_t i) const { return b_[i]; }

  void clear_column(std::size_t j) {
    for (std::size_t i = 0; i < m_; ++i) a_[i][j] = 0;
  }

  std::vector<Rational> primal(std::size_t num_structural) const {
    std::vector<Rational> x(num_structural, Rational(0));
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < num_structural) x[basis_[i]] = b_[i];
    return x;
  }

 private:
  std::vector<std::vector<Rational>> a_;
  std::vector<Rational> b_;
  std::vector<Rational> cost_row_;
  Rational obj_;
  std::size_t m_, n_;
  std::vector<std::size_t> basis_;
};

}  // namespace detail

// Exact optimum of the given program. Deterministic: Bland's rule, fixed
// construction order. The returned solution satisfies every constraint
// exactly when status == optimal.
inline LpResult solve_lp(const LinearProgram& lp) {
  for (const auto& row : lp.rows)
    if (row.coeffs.size() != lp.num_vars) throw ValidationError("constraint row has wrong length");
  if (lp.objective.size() != lp.num_vars || lp.lower.size() != lp.num_vars ||
      lp.upper.size() != lp.num_vars)
    throw ValidationError("linear program has inconsistent dimensions");

  // Shift every variable to the nonnegative orthant:
  //   lower bound l:        x = l + y
  //   upper bound u only:   x = u - y
  //   free:                 x = y+ - y-
  // A variable with both bounds keeps the lower shift plus a row y <= u - l.
  struct VarMap {
    std::size_t col;          // first column
    bool negated = false;     // x = shift - y
    bool split = false;       // x = y(col) - y(col+1)
    Rational shift;
  };
  std::vector<VarMap> vmap(lp.num_vars);
  std::size_t cols = 0;
  for (std::size_t j = 0; j < lp.num_vars; ++j) {
    auto& vm = vmap[j];
    vm.col = cols;
    if (lp.lower[j]) {
      vm.shift = *lp.lower[j];
      cols += 1;
      if (lp.upper[j] && *lp.upper[j] < *lp.lower[j])
        return LpResult{LpStatus::infeasible, Rational(0), {}};
    } else if (lp.upper[j]) {
      vm.negated = true;
      vm.shift = *lp.upper[j];
      cols += 1;
    } else {
      vm.split = true;
      cols += 2;
    }
  }

  struct NormRow {
    std::vector<Rational> coeffs;
    Relation rel;
    Rational rhs;
  };
  std::vector<NormRow> norm;
  norm.reserve(lp.rows.size() + lp.num_vars);
  auto convert_row = [&](const std::vector<Rational>& coeffs, Relation rel, Rational rhs) {
    NormRow r{std::vector<Rational>(cols, Rational(0)), rel, std::move(rhs)};
    for (std::size_t j = 0; j < lp.num_vars; ++j) {
      const Rational& c = coeffs[j];
      if (c.is_zero()) continue;
      const auto& vm = vmap[j];
      if (vm.split) {
        r.coeffs[vm.col] += c;
        r.coeffs[vm.col + 1] -= c;
      } else if (vm.negated) {
        r.coeffs[vm.col] -= c;
        r.rhs -= c * vm.shift;
      } else {
        r.coeffs[vm.col] += c;
        r.rhs -= c * vm.shift;
      }
    }
    norm.push_back(std::move(r));
  };
  for (const auto& row : lp.rows) convert_row(row.coeffs, row.rel, row.rhs);
  for (std::size_t j = 0; j < lp.num_vars; ++j) {
    if (lp.lower[j] && lp.upper[j]) {
      std::vector<Rational> coeffs(lp.num_vars, Rational(0));
      coeffs[j] = 1;
      convert_row(coeffs, Relation::le, *lp.upper[j]);
    }
  }

  // Equality form with slack columns for inequalities, then nonnegative rhs.
  const std::size_t m = norm.size();
  std::size_t slack_count = 0;
  for (const auto& r : norm)
    if (r.rel != Relation::eq) ++slack_count;
  const std::size_t total = cols + slack_count + m;  // + artificials
  std::vector<std::vector<Rational>> a(m, std::vector<Rational>(total, Rational(0)));
  std::vector<Rational> b(m);
  std::size_t slack_at = cols;
  std::vector<std::size_t> artificial_col(m);
  for (std::size_t i = 0; i < m; ++i) {
    auto& r = norm[i];
    if (r.rel == Relation::ge) {
      for (auto& c : r.coeffs) c = -c;
      r.rhs = -r.rhs;
      r.rel = Relation::le;
    }
    for (std::size_t j = 0; j < cols; ++j) a[i][j] = r.coeffs[j];
    b[i] = r.rhs;
    if (r.rel == Relation::le) a[i][slack_at++] = 1;
    if (b[i] < 0) {
      for (std::size_t j = 0; j < total; ++j) a[i][j] = -a[i][j];
      b[i] = -b[i];
    }
    artificial_col[i] = cols + slack_count + i;
    a[i][artificial_col[i]] = 1;
  }

  detail::SimplexTableau tab(std::move(a), std::move(b), total);
  for (std::size_t i = 0; i < m; ++i) {
    // Prefer the slack as the starting basic variable when it carries +1.
    std::size_t col = artificial_col[i];
    for (std::size_t j = cols; j < cols + slack_count; ++j)
      if (tab.row_entry(i, j) == 1) { col = j; break; }
    tab.set_basis(i, col);
  }

  // Phase 1: drive the artificials to zero.
  std::vector<Rational> phase1(total, Rational(0));
  for (std::size_t i = 0; i < m; ++i) phase1[artificial_col[i]] = -1;
  tab.optimize(phase1);  // bounded by construction (objective <= 0)
  if (tab.objective() != 0) return LpResult{LpStatus::infeasible, Rational(0), {}};

  // Pivot any artificial still in the basis out on a nonzero structural or
  // slack entry; a fully zero row is redundant and harmless.
  for (std::size_t i = 0; i < m; ++i) {
    if (tab.basis()[i] < cols + slack_count) continue;
    for (std::size_t j = 0; j < cols + slack_count; ++j) {
      if (!tab.row_entry(i, j).is_zero()) {
        tab.pivot(i, j);
        break;
      }
    }
  }

  // Nonbasic artificial columns are erased so they can never re-enter; a
  // basic artificial at this point sits in a redundant all-zero row and is
  // inert (its reduced cost stays zero).
  for (std::size_t i = 0; i < m; ++i) {
    bool basic = false;
    for (std::size_t k = 0; k < m; ++k)
      if (tab.basis()[k] == artificial_col[i]) basic = true;
    if (!basic) tab.clear_column(artificial_col[i]);
  }

  // Phase 2: the real objective through the same variable mapping.
  std::vector<Rational> phase2(total, Rational(0));
  for (std::size_t j = 0; j < lp.num_vars; ++j) {
    const Rational& c = lp.objective[j];
    if (c.is_zero()) continue;
    const auto& vm = vmap[j];
    if (vm.split) {
      phase2[vm.col] += c;
      phase2[vm.col + 1] -= c;
    } else if (vm.negated) {
      phase2[vm.col] -= c;
    } else {
      phase2[vm.col] += c;
    }
  }
  if (!tab.optimize(phase2)) return LpResult{LpStatus::unbounded, Rational(0), {}};

  const std::vector<Rational> y = tab.primal(cols);
  LpResult result;
  result.status = LpStatus::optimal;
  result.solution.resize(lp.num_vars);
  for (std::size_t j = 0; j < lp.num_vars; ++j) {
    const auto& vm = vmap[j];
    if (vm.split)
      result.solution[j] = y[vm.col] - y[vm.col + 1];
    else if (vm.negated)
      result.solution[j] = vm.shift - y[vm.col];
    else
      result.solution[j] = vm.shift + y[vm.col];
  }
  result.value = 0;
  for (std::size_t j = 0; j < lp.num_vars; ++j) result.value += lp.objective[j] * result.solution[j];
  return result;
}

// Exact feasibility check of a solution vector against the program.
inline bool lp_solution_feasible(const LinearProgram& lp, const std::vector<Rational>& x) {
  if (x.size() != lp.num_vars) return false;
  for (std::size_t j = 0; j < lp.num_vars; ++j) {
    if (lp.lower[j] && x[j] < *lp.lower[j]) return false;
    if (lp.upper[j] && x[j] > *lp.upper[j]) return false;
  }
  for (const auto& row : lp.rows) {
    Rational lhs = 0;
    for (std::size_t j = 0; j < lp.num_vars; ++j) lhs += row.coeffs[j] * x[j];
    if (row.rel == Relation::le && lhs > row.rhs) return false;
    if (row.rel == Relation::ge && lhs < row.rhs) return false;
    if (row.rel == Relation::eq && lhs != row.rhs) return false;
  }
  return true;
}

}  // namespace tariff
