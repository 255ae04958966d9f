#include "fairsel/polymatroid.hpp"

#include <algorithm>
#include <numeric>

namespace fairsel {

RankingMixture decompose_to_rankings(const PolymatroidSpec& spec,
                                     const std::vector<Rat>& f_star) {
  spec.check_budget();
  const size_t n = spec.dim();
  if (n > 8) throw ValidationError("ranking decomposition supports up to 8 agents");
  if (f_star.size() != n) throw ValidationError("dimension mismatch");
  const auto feas = polymatroid_feasible(spec, f_star);
  if (!feas.feasible) throw ValidationError("target vector is not polymatroid-feasible");
  Rat total = std::accumulate(f_star.begin(), f_star.end(), Rat(0));
  if (total != spec.g((1u << n) - 1u))
    throw ValidationError("target vector is not in the base polytope");

  // one column per permutation, in lexicographic order
  std::vector<std::vector<size_t>> perms;
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  do {
    perms.push_back(order);
  } while (std::next_permutation(order.begin(), order.end()));

  std::vector<std::vector<Rat>> vertices;
  vertices.reserve(perms.size());
  for (const auto& perm : perms) vertices.push_back(greedy_vertex(spec, perm));

  // feasibility LP: sum_t w_t * vertex_t = f_star, sum_t w_t = 1, w >= 0
  LinearProgram<Rat> lp;
  lp.set_objective(std::vector<Rat>(perms.size(), Rat(0)));
  for (size_t i = 0; i < n; ++i) {
    LinearProgram<Rat>::Row row;
    for (size_t t = 0; t < perms.size(); ++t)
      if (vertices[t][i] != 0) row.coeffs.emplace_back(t, vertices[t][i]);
    row.sense = LpSense::Eq;
    row.rhs = f_star[i];
    lp.rows.push_back(std::move(row));
  }
  {
    LinearProgram<Rat>::Row convexity;
    for (size_t t = 0; t < perms.size(); ++t) convexity.coeffs.emplace_back(t, Rat(1));
    convexity.sense = LpSense::Eq;
    convexity.rhs = 1;
    lp.rows.push_back(std::move(convexity));
  }
  auto sol = solve_lp(lp);
  if (!sol.optimal())
    throw std::logic_error("base-polytope decomposition LP must be feasible");

  RankingMixture mix;
  for (size_t t = 0; t < perms.size(); ++t)
    if (sol.x[t] > 0) mix.atoms.emplace_back(sol.x[t], perms[t]);
  return mix;
}

}  // namespace fairsel
