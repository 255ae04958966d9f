#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "fairsel/numeric.hpp"

namespace fairsel {

enum class LpSense { Le, Ge, Eq };
enum class LpStatus { Optimal, Infeasible, Unbounded };

/// Dense-tableau linear program: maximize c.x subject to rows, x >= 0.
/// Upper bounds on variables are expressed as Le rows by the callers; the
/// problems in this toolkit stay small enough that this is the simplest
/// correct choice for both scalar types.
template <class T>
struct LinearProgram {
  size_t num_vars = 0;
  std::vector<T> objective;  // size num_vars

  struct Row {
    std::vector<std::pair<size_t, T>> coeffs;
    LpSense sense = LpSense::Le;
    T rhs{};
  };
  std::vector<Row> rows;

  void set_objective(std::vector<T> c) {
    objective = std::move(c);
    num_vars = objective.size();
  }
  void add_row(std::vector<std::pair<size_t, T>> coeffs, LpSense sense, T rhs) {
    rows.push_back({std::move(coeffs), sense, std::move(rhs)});
  }
};

template <class T>
struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  T objective{};
  std::vector<T> x;  // structural variables only

  bool optimal() const { return status == LpStatus::Optimal; }
};

/// Two-phase primal simplex with Bland's rule. Exact over Rat; for double the
/// pivot tolerance is NumTraits<double>::tol. Returns a basic solution.
template <class T>
class SimplexSolver {
 public:
  explicit SimplexSolver(const LinearProgram<T>& lp) : lp_(lp) {}

  LpSolution<T> solve() {
    build_tableau();
    if (!phase1()) return {LpStatus::Infeasible, T(0), {}};
    if (!phase2()) return {LpStatus::Unbounded, T(0), {}};
    LpSolution<T> out;
    out.status = LpStatus::Optimal;
    out.x.assign(lp_.num_vars, T(0));
    for (size_t r = 0; r < m_; ++r) {
      if (basis_[r] < lp_.num_vars) out.x[basis_[r]] = tab_[r][total_cols_];
    }
    out.objective = T(0);
    for (size_t j = 0; j < lp_.num_vars; ++j) out.objective += lp_.objective[j] * out.x[j];
    return out;
  }

 private:
  static bool pos(const T& v) {
    if constexpr (NumTraits<T>::exact)
      return v > 0;
    else
      return v > NumTraits<T>::tol;
  }
  static bool neg(const T& v) { return pos(T(-v)); }

  void build_tableau() {
    m_ = lp_.rows.size();
    num_slack_ = 0;
    for (const auto& row : lp_.rows)
      if (row.sense != LpSense::Eq) ++num_slack_;
    num_art_ = 0;
    slack_col_.assign(m_, SIZE_MAX);
    art_col_.assign(m_, SIZE_MAX);

    // normalize rhs >= 0 first so the artificial pattern is decided correctly
    norm_rows_.clear();
    norm_rows_.reserve(m_);
    for (const auto& row : lp_.rows) {
      NormRow nr;
      nr.dense.assign(lp_.num_vars, T(0));
      for (const auto& [j, c] : row.coeffs) nr.dense[j] += c;
      nr.rhs = row.rhs;
      nr.sense = row.sense;
      if (neg(nr.rhs) || nr.rhs < 0) {
        for (auto& c : nr.dense) c = -c;
        nr.rhs = -nr.rhs;
        if (nr.sense == LpSense::Le)
          nr.sense = LpSense::Ge;
        else if (nr.sense == LpSense::Ge)
          nr.sense = LpSense::Le;
      }
      norm_rows_.push_back(std::move(nr));
    }

    size_t slack_base = lp_.num_vars;
    size_t next_slack = slack_base;
    for (size_t r = 0; r < m_; ++r)
      if (norm_rows_[r].sense != LpSense::Eq) slack_col_[r] = next_slack++;
    size_t art_base = next_slack;
    size_t next_art = art_base;
    for (size_t r = 0; r < m_; ++r)
      if (norm_rows_[r].sense != LpSense::Le) art_col_[r] = next_art++;
    num_art_ = next_art - art_base;
    art_base_ = art_base;
    total_cols_ = next_art;

    tab_.assign(m_, std::vector<T>(total_cols_ + 1, T(0)));
    basis_.assign(m_, SIZE_MAX);
    for (size_t r = 0; r < m_; ++r) {
      auto& row = tab_[r];
      for (size_t j = 0; j < lp_.num_vars; ++j) row[j] = norm_rows_[r].dense[j];
      row[total_cols_] = norm_rows_[r].rhs;
      if (slack_col_[r] != SIZE_MAX)
        row[slack_col_[r]] = (norm_rows_[r].sense == LpSense::Le) ? T(1) : T(-1);
      if (art_col_[r] != SIZE_MAX) {
        row[art_col_[r]] = T(1);
        basis_[r] = art_col_[r];
      } else {
        basis_[r] = slack_col_[r];
      }
    }
    row_active_.assign(m_, true);
  }

  // price out the basis from a dense cost vector; returns (reduced costs, z)
  void reduced_costs(const std::vector<T>& cost, std::vector<T>& red, T& z) const {
    red = cost;
    z = T(0);
    for (size_t r = 0; r < m_; ++r) {
      if (!row_active_[r]) continue;
      const T cb = cost[basis_[r]];
      if (NumTraits<T>::is_zero(cb)) continue;
      z += cb * tab_[r][total_cols_];
      for (size_t j = 0; j < total_cols_; ++j) red[j] -= cb * tab_[r][j];
    }
  }

  void pivot(size_t r, size_t c) {
    auto& prow = tab_[r];
    const T piv = prow[c];
    for (auto& v : prow) v = v / piv;
    for (size_t i = 0; i < m_; ++i) {
      if (i == r || !row_active_[i]) continue;
      const T factor = tab_[i][c];
      if (NumTraits<T>::is_zero(factor)) continue;
      auto& row = tab_[i];
      for (size_t j = 0; j <= total_cols_; ++j) row[j] -= factor * prow[j];
      row[c] = T(0);
    }
    basis_[r] = c;
  }

  // Bland: entering = lowest-index column with positive reduced cost;
  // leaving = ratio test, ties to the lowest basis variable index.
  // allow(j) filters candidate entering columns.
  template <class Allow>
  bool run_simplex(const std::vector<T>& cost, Allow allow) {
    std::vector<T> red;
    T z;
    for (;;) {
      reduced_costs(cost, red, z);
      size_t enter = SIZE_MAX;
      for (size_t j = 0; j < total_cols_; ++j) {
        if (!allow(j)) continue;
        if (pos(red[j])) {
          enter = j;
          break;
        }
      }
      if (enter == SIZE_MAX) return true;  // optimal
      size_t leave = SIZE_MAX;
      for (size_t r = 0; r < m_; ++r) {
        if (!row_active_[r]) continue;
        if (!pos(tab_[r][enter])) continue;
        if (leave == SIZE_MAX) {
          leave = r;
          continue;
        }
        const T lhs = tab_[r][total_cols_] * tab_[leave][enter];
        const T rhs = tab_[leave][total_cols_] * tab_[r][enter];
        if (lhs < rhs || (lhs == rhs && basis_[r] < basis_[leave])) leave = r;
      }
      if (leave == SIZE_MAX) return false;  // unbounded direction
      pivot(leave, enter);
    }
  }

  bool phase1() {
    if (num_art_ == 0) return true;
    std::vector<T> cost(total_cols_, T(0));
    for (size_t j = art_base_; j < total_cols_; ++j) cost[j] = T(-1);
    run_simplex(cost, [](size_t) { return true; });
    // feasible iff all artificials are zero
    T art_sum = T(0);
    for (size_t r = 0; r < m_; ++r)
      if (row_active_[r] && basis_[r] >= art_base_) art_sum += tab_[r][total_cols_];
    if (pos(art_sum)) return false;
    // drive artificials out of the basis, deactivating redundant rows
    for (size_t r = 0; r < m_; ++r) {
      if (!row_active_[r] || basis_[r] < art_base_) continue;
      size_t c = SIZE_MAX;
      for (size_t j = 0; j < art_base_; ++j) {
        if (!NumTraits<T>::is_zero(tab_[r][j])) {
          c = j;
          break;
        }
      }
      if (c == SIZE_MAX) {
        row_active_[r] = false;
      } else {
        pivot(r, c);
      }
    }
    return true;
  }

  bool phase2() {
    std::vector<T> cost(total_cols_, T(0));
    for (size_t j = 0; j < lp_.num_vars; ++j) cost[j] = lp_.objective[j];
    const size_t art_base = art_base_;
    return run_simplex(cost, [art_base](size_t j) { return j < art_base; });
  }

  struct NormRow {
    std::vector<T> dense;
    LpSense sense;
    T rhs;
  };

  const LinearProgram<T>& lp_;
  std::vector<NormRow> norm_rows_;
  std::vector<std::vector<T>> tab_;
  std::vector<size_t> basis_;
  std::vector<size_t> slack_col_, art_col_;
  std::vector<bool> row_active_;
  size_t m_ = 0, num_slack_ = 0, num_art_ = 0, art_base_ = 0, total_cols_ = 0;
};

template <class T>
LpSolution<T> solve_lp(const LinearProgram<T>& lp) {
  return SimplexSolver<T>(lp).solve();
}

}  // namespace fairsel
