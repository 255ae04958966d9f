#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "fairsel/rational.hpp"

namespace fairsel {

/// Finite-support value distribution of one agent (the prior).
/// Support values are strictly increasing; probabilities sum to one.
/// Value zero is admitted so Bernoulli priors on {0,1} can be expressed;
/// everything else requires positive values.
struct DiscreteDist {
  std::vector<std::pair<Rat, Rat>> support;  // (value, probability)

  Rat mean() const;
  /// Pr[X <= v]
  Rat cdf(const Rat& v) const;
  Rat min_value() const { return support.front().first; }
  Rat max_value() const { return support.back().first; }
  bool is_point() const { return support.size() == 1; }
  /// Bernoulli on {0, c}: high-value probability, or nullopt-like flag via ok.
  struct BernoulliView {
    bool ok = false;
    Rat scale;  // c
    Rat mu;     // Pr[value = c]
  };
  BernoulliView as_bernoulli() const;

  static DiscreteDist point(const Rat& v);
  static DiscreteDist from_pairs(std::vector<std::pair<Rat, Rat>> pairs);

  /// Throws ValidationError when invariants fail.
  void validate() const;

  bool operator==(const DiscreteDist&) const = default;
};

struct Instance {
  std::vector<DiscreteDist> agents;
  Rat vmin;  // smallest positive support value across agents
  Rat vmax;  // largest support value

  size_t num_agents() const { return agents.size(); }
  Rat value_ratio() const { return vmax / vmin; }
  /// E[max_i v_i], computed by level: Pr[max <= v] = prod_i CDF_i(v).
  Rat expected_max() const;
  /// Sorted union of all support values.
  std::vector<Rat> value_levels() const;
  bool all_positive_support() const;

  static Instance from_agents(std::vector<DiscreteDist> agents);

  bool operator==(const Instance&) const = default;
};

/// Per-agent expected utilities with sorted-prefix-sum accessors.
struct UtilityVector {
  std::vector<Rat> u;

  size_t size() const { return u.size(); }
  /// Sum of the k smallest entries, k in [0, n].
  Rat prefix(size_t k) const;
  std::vector<Rat> sorted_prefix_sums() const;
  Rat min() const;
  Rat total() const;

  bool operator==(const UtilityVector&) const = default;
};

}  // namespace fairsel
