#include "fairsel/dist.hpp"

#include <algorithm>
#include <set>

namespace fairsel {

Rat DiscreteDist::mean() const {
  Rat m = 0;
  for (const auto& [v, p] : support) m += v * p;
  return m;
}

Rat DiscreteDist::cdf(const Rat& v) const {
  Rat c = 0;
  for (const auto& [val, p] : support) {
    if (val <= v) c += p;
  }
  return c;
}

DiscreteDist::BernoulliView DiscreteDist::as_bernoulli() const {
  BernoulliView out;
  if (support.size() == 1) {
    const auto& [v, p] = support.front();
    out.ok = true;
    out.scale = v;          // degenerate: mu = 1 at c = v, or mu = 0 when v = 0
    out.mu = (v == 0) ? Rat(0) : Rat(1);
    return out;
  }
  if (support.size() == 2 && support[0].first == 0) {
    out.ok = true;
    out.scale = support[1].first;
    out.mu = support[1].second;
    return out;
  }
  return out;
}

DiscreteDist DiscreteDist::point(const Rat& v) { return from_pairs({{v, Rat(1)}}); }

DiscreteDist DiscreteDist::from_pairs(std::vector<std::pair<Rat, Rat>> pairs) {
  DiscreteDist d{std::move(pairs)};
  d.validate();
  return d;
}

void DiscreteDist::validate() const {
  if (support.empty()) throw ValidationError("distribution has empty support");
  Rat total = 0;
  for (size_t i = 0; i < support.size(); ++i) {
    const auto& [v, p] = support[i];
    if (v < 0) throw ValidationError("support value " + rat_to_string(v) + " is negative");
    if (p < 0 || p > 1)
      throw ValidationError("probability " + rat_to_string(p) + " outside [0,1]");
    if (i > 0 && !(support[i - 1].first < v))
      throw ValidationError("support values must be strictly increasing");
    total += p;
  }
  if (total != 1)
    throw ValidationError("probabilities sum to " + rat_to_string(total) + ", expected 1");
}

Instance Instance::from_agents(std::vector<DiscreteDist> agents) {
  if (agents.empty()) throw ValidationError("instance needs at least one agent");
  Instance inst;
  inst.agents = std::move(agents);
  bool have_pos = false;
  for (const auto& d : inst.agents) {
    d.validate();
    for (const auto& [v, p] : d.support) {
      if (v > 0) {
        if (!have_pos || v < inst.vmin) inst.vmin = v;
        have_pos = true;
      }
      if (v > inst.vmax) inst.vmax = v;
    }
  }
  if (!have_pos) throw ValidationError("instance has no positive support value");
  return inst;
}

Rat Instance::expected_max() const {
  // E[max] = sum_j v_j * (Pr[max <= v_j] - Pr[max <= v_{j-1}])
  std::vector<Rat> levels = value_levels();
  Rat expectation = 0;
  Rat prev_cdf = 0;
  for (const Rat& v : levels) {
    Rat cdf = 1;
    for (const auto& d : agents) cdf *= d.cdf(v);
    expectation += v * (cdf - prev_cdf);
    prev_cdf = cdf;
  }
  return expectation;
}

std::vector<Rat> Instance::value_levels() const {
  std::set<Rat> vals;
  for (const auto& d : agents)
    for (const auto& [v, p] : d.support) vals.insert(v);
  return {vals.begin(), vals.end()};
}

bool Instance::all_positive_support() const {
  for (const auto& d : agents)
    if (d.support.front().first == 0) return false;
  return true;
}

Rat UtilityVector::prefix(size_t k) const {
  std::vector<Rat> sorted = u;
  std::sort(sorted.begin(), sorted.end());
  Rat s = 0;
  for (size_t i = 0; i < k && i < sorted.size(); ++i) s += sorted[i];
  return s;
}

std::vector<Rat> UtilityVector::sorted_prefix_sums() const {
  std::vector<Rat> sorted = u;
  std::sort(sorted.begin(), sorted.end());
  std::vector<Rat> out(sorted.size());
  Rat acc = 0;
  for (size_t i = 0; i < sorted.size(); ++i) {
    acc += sorted[i];
    out[i] = acc;
  }
  return out;
}

Rat UtilityVector::min() const { return *std::min_element(u.begin(), u.end()); }

Rat UtilityVector::total() const {
  Rat s = 0;
  for (const Rat& x : u) s += x;
  return s;
}

}  // namespace fairsel
