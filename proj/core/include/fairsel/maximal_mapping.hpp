#pragma once

#include <vector>

#include "fairsel/policy.hpp"
#include "fairsel/simplex.hpp"

namespace fairsel {

/// Optimum of the maximal-mapping program for one agent and target interval
/// [lo, hi]: beta = max total mass routed to the in-interval signal, with the
/// routed mass averaging inside the interval.
template <class T>
struct MaximalMappingSolution {
  T beta{};
  std::vector<T> y;  // per support value, mass routed to the in-interval signal
};

template <class T>
MaximalMappingSolution<T> solve_maximal_mapping(const DiscreteDist& dist, const T& lo,
                                                const T& hi) {
  if (!(lo <= hi) || !(T(0) < lo))
    throw ValidationError("maximal mapping needs 0 < lo <= hi");
  const size_t nv = dist.support.size();
  LinearProgram<T> lp;
  lp.set_objective(std::vector<T>(nv, T(1)));
  typename LinearProgram<T>::Row mean_lo, mean_hi;
  for (size_t j = 0; j < nv; ++j) {
    const T v = num_from_rat<T>(dist.support[j].first);
    mean_lo.coeffs.emplace_back(j, v - lo);
    mean_hi.coeffs.emplace_back(j, v - hi);
    lp.add_row({{j, T(1)}}, LpSense::Le, num_from_rat<T>(dist.support[j].second));
  }
  mean_lo.sense = LpSense::Ge;
  mean_lo.rhs = T(0);
  mean_hi.sense = LpSense::Le;
  mean_hi.rhs = T(0);
  lp.rows.push_back(std::move(mean_lo));
  lp.rows.push_back(std::move(mean_hi));

  auto sol = solve_lp(lp);
  // y = 0 is always feasible and the objective is bounded by 1
  if (!sol.optimal()) throw std::logic_error("maximal-mapping LP must be solvable");
  return {sol.objective, std::move(sol.x)};
}

/// Realizes the two-signal mapping for one agent from the pQ solution:
/// in-interval signal `in_label` gets y_v / Pr[v] of each value, the rest
/// goes to `out_label`. Rows with zero residual drop the residual label.
inline std::vector<MappingRule::Row> two_signal_rows(const DiscreteDist& dist,
                                                     const std::vector<Rat>& y,
                                                     const std::string& in_label,
                                                     const std::string& out_label) {
  std::vector<MappingRule::Row> rows;
  for (size_t j = 0; j < dist.support.size(); ++j) {
    const auto& [v, p] = dist.support[j];
    MappingRule::Row row;
    row.value = v;
    Rat pa = (p == 0) ? Rat(0) : Rat(y[j] / p);
    if (pa > 1) pa = 1;  // guards float-mode rounding when y came from doubles
    if (pa < 0) pa = 0;
    if (pa > 0) row.out.emplace_back(in_label, pa);
    if (pa < 1) row.out.emplace_back(out_label, Rat(1) - pa);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace fairsel
