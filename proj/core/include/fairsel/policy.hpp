#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "fairsel/dist.hpp"

namespace fairsel {

/// Per-agent randomized map from realized value to signal labels.
/// Labels are opaque strings scoped per agent.
struct MappingRule {
  struct Row {
    Rat value;
    std::vector<std::pair<std::string, Rat>> out;  // (label, probability)
    bool operator==(const Row&) const = default;
  };
  std::vector<std::vector<Row>> agents;  // one row list per agent

  /// Reveals the exact value: label "v=<value>" with probability 1.
  static MappingRule full_revelation(const Instance& inst);
  /// One constant label per agent; the posterior equals the prior.
  static MappingRule no_reveal(const Instance& inst);

  bool operator==(const MappingRule&) const = default;
};

inline std::string value_label(const Rat& v) { return "v=" + rat_to_string(v); }

/// Picks the first agent of a fixed permutation inside the eligible set.
struct RankingSelection {
  std::vector<size_t> order;
  bool operator==(const RankingSelection&) const = default;
};

/// Single-interval rounded-order rule: if some posterior mean exceeds `hi`,
/// take the highest mean; otherwise walk the agents with mean in [lo, hi] in
/// uniformly random order accepting agent i with probability accept[i]; if
/// nobody accepts, take the highest posterior mean (ties to lowest index).
struct ThresholdRoundedOrder {
  Rat lo;
  Rat hi;
  std::vector<Rat> accept;
  bool operator==(const ThresholdRoundedOrder&) const = default;
};

/// Joint-signal table; rows are optional, a missing joint signal falls back
/// to the uniform split over the eligible set.
struct ExplicitTableSelection {
  std::map<std::vector<std::string>, std::vector<std::pair<size_t, Rat>>> rows;
  bool operator==(const ExplicitTableSelection&) const = default;
};

/// Selection rule of the S_k policies: prefer the largest-index eligible
/// agent showing its designated high label; otherwise the eligible revealed
/// agent (index < prefix_len) with the highest mean, ties to lowest index.
struct LargestIndexThenPrefixMax {
  size_t prefix_len = 0;           // k: agents 0..k-1 are fully revealed
  std::string high_label = "hi";
  bool operator==(const LargestIndexThenPrefixMax&) const = default;
};

/// Per-value-level rounded-order rule for full-revelation policies: at the
/// realized top level j, walk the agents at that level in uniformly random
/// order accepting agent i with probability accept[i][j]; if nobody accepts,
/// the lowest-index agent at the level is selected.
struct RoundedSelection {
  std::vector<Rat> levels;                 // ascending value levels
  std::vector<std::vector<Rat>> accept;    // [agent][level]
  bool operator==(const RoundedSelection&) const = default;
};

using SelectionRule = std::variant<RankingSelection, ThresholdRoundedOrder,
                                   ExplicitTableSelection, LargestIndexThenPrefixMax,
                                   RoundedSelection>;

struct SignalingScheme {
  MappingRule mapping;
  SelectionRule selection;
  bool operator==(const SignalingScheme&) const = default;
};

/// Weighted mixture of independent signaling schemes.
struct SignalingPolicy {
  std::vector<std::pair<Rat, SignalingScheme>> components;

  static SignalingPolicy single(SignalingScheme scheme);
  bool operator==(const SignalingPolicy&) const = default;
};

/// All invariant violations (weights, row sums, unreachable labels, shape).
/// Violations are data, not failures.
std::vector<std::string> validate_policy(const Instance& inst, const SignalingPolicy& policy);

/// Full revelation with the default uniform tie split.
SignalingPolicy full_revelation_policy(const Instance& inst);
/// No information revealed; ties split uniformly over the eligible set.
SignalingPolicy no_reveal_policy(const Instance& inst);

}  // namespace fairsel
