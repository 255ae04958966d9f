#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "fairsel/dist.hpp"
#include "fairsel/simplex.hpp"

namespace fairsel {

/// Bernoulli-rank polymatroid: g(T) = 1 - prod_{i in T} (1 - p_i).
/// Feasible vectors are exactly the utility vectors of full-revelation
/// selection policies on Bernoulli(p) instances.
struct PolymatroidSpec {
  std::vector<Rat> p;

  size_t dim() const { return p.size(); }

  Rat g(uint32_t mask) const {
    Rat prod = 1;
    for (size_t i = 0; i < p.size(); ++i)
      if (mask & (1u << i)) prod *= Rat(1) - p[i];
    return Rat(1) - prod;
  }

  void check_budget() const {
    if (dim() == 0 || dim() > 20)
      throw ValidationError("polymatroid subset enumeration supports 1..20 dimensions");
    for (const Rat& pi : p)
      if (pi < 0 || pi > 1) throw ValidationError("Bernoulli probability outside [0,1]");
  }
};

struct PolymatroidFeasibility {
  bool feasible = false;
  Rat min_slack;                       // min over nonempty T of g(T) - f(T)
  uint32_t argmin_mask = 0;            // tightest (or most violated) set
  std::vector<uint32_t> tight_masks;   // sets with zero slack (feasible case)
};

/// Brute-force minimization of g(T) - f(T) over nonempty subsets.
inline PolymatroidFeasibility polymatroid_feasible(const PolymatroidSpec& spec,
                                                   const std::vector<Rat>& f) {
  spec.check_budget();
  if (f.size() != spec.dim()) throw ValidationError("dimension mismatch");
  const uint32_t full = (1u << spec.dim()) - 1u;
  PolymatroidFeasibility out;
  bool first = true;
  for (uint32_t mask = 1; mask <= full; ++mask) {
    Rat fsum = 0;
    for (size_t i = 0; i < spec.dim(); ++i)
      if (mask & (1u << i)) fsum += f[i];
    const Rat slack = spec.g(mask) - fsum;
    if (first || slack < out.min_slack) {
      out.min_slack = slack;
      out.argmin_mask = mask;
      first = false;
    }
    if (slack == 0) out.tight_masks.push_back(mask);
  }
  for (const Rat& fi : f)
    if (fi < 0) return {false, Rat(-1), 0, {}};
  out.feasible = out.min_slack >= 0;
  return out;
}

/// The 1-majorized point of the polymatroid: water-filling over subsets.
/// Each round raises the common floor of the unfrozen coordinates to
///   t* = min_T (g(T) - f(T ∩ frozen)) / |T ∩ unfrozen|
/// and freezes the unfrozen part of every tight set.
inline std::vector<Rat> polymatroid_lex_point(const PolymatroidSpec& spec) {
  spec.check_budget();
  const size_t n = spec.dim();
  const uint32_t full = (1u << n) - 1u;
  std::vector<Rat> level(n, Rat(0));
  uint32_t frozen = 0;

  // g over all subsets via subset DP on the survival products
  std::vector<Rat> surv(full + 1);
  surv[0] = 1;
  for (uint32_t mask = 1; mask <= full; ++mask) {
    const uint32_t low = mask & (~mask + 1u);
    const size_t i = static_cast<size_t>(std::countr_zero(low));
    surv[mask] = surv[mask ^ low] * (Rat(1) - spec.p[i]);
  }

  while (frozen != full) {
    Rat tstar;
    bool first = true;
    for (uint32_t mask = 1; mask <= full; ++mask) {
      const uint32_t umask = mask & ~frozen;
      if (umask == 0) continue;
      Rat fsum = 0;
      for (size_t i = 0; i < n; ++i)
        if (mask & frozen & (1u << i)) fsum += level[i];
      const Rat t = (Rat(1) - surv[mask] - fsum) / int(std::popcount(umask));
      if (first || t < tstar) {
        tstar = t;
        first = false;
      }
    }
    uint32_t freeze = 0;
    for (uint32_t mask = 1; mask <= full; ++mask) {
      const uint32_t umask = mask & ~frozen;
      if (umask == 0) continue;
      Rat fsum = 0;
      for (size_t i = 0; i < n; ++i)
        if (mask & frozen & (1u << i)) fsum += level[i];
      if (Rat(1) - surv[mask] - fsum == tstar * int(std::popcount(umask))) freeze |= umask;
    }
    for (size_t i = 0; i < n; ++i)
      if (freeze & (1u << i)) level[i] = tstar;
    frozen |= freeze;
  }
  return level;
}

/// Vertex of the base polytope for a visiting order: marginal gains of g.
inline std::vector<Rat> greedy_vertex(const PolymatroidSpec& spec,
                                      const std::vector<size_t>& order) {
  std::vector<Rat> v(spec.dim(), Rat(0));
  Rat prev = 0;
  uint32_t mask = 0;
  for (size_t i : order) {
    mask |= (1u << i);
    const Rat cur = spec.g(mask);
    v[i] = cur - prev;
    prev = cur;
  }
  return v;
}

/// Convex mixture of ranking permutations realizing a base-polytope point.
struct RankingMixture {
  std::vector<std::pair<Rat, std::vector<size_t>>> atoms;  // (weight, order)
};

/// Expresses f_star as a convex combination of at most n+1 greedy vertices by
/// a feasibility LP over all n! permutation columns (basic solutions carry at
/// most n+1 positive weights). f_star must lie in the base polytope.
RankingMixture decompose_to_rankings(const PolymatroidSpec& spec,
                                     const std::vector<Rat>& f_star);

}  // namespace fairsel
