#pragma once

#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "fairsel/evaluate.hpp"
#include "fairsel/policy.hpp"

namespace fairsel::testing {

inline Rat rat(const char* s) { return parse_rat(s); }

/// Three agents: two iid {1: 1/2, 5: 1/2} and one deterministic 2.
inline Instance example26_instance() {
  return Instance::from_agents({
      DiscreteDist::from_pairs({{rat("1"), rat("1/2")}, {rat("5"), rat("1/2")}}),
      DiscreteDist::from_pairs({{rat("1"), rat("1/2")}, {rat("5"), rat("1/2")}}),
      DiscreteDist::point(rat("2")),
  });
}

/// The mapping probabilities (1, 1/3, 2/3) per stochastic agent plus the
/// tie-break-to-agent-3 table; ties between agents 1 and 2 fall back to the
/// default uniform split.
inline SignalingPolicy example26_policy() {
  MappingRule mapping;
  for (int agent = 0; agent < 2; ++agent) {
    std::vector<MappingRule::Row> rows;
    rows.push_back({rat("1"), {{"s", rat("1")}}});
    rows.push_back({rat("5"), {{"s", rat("1/3")}, {"s'", rat("2/3")}}});
    mapping.agents.push_back(std::move(rows));
  }
  mapping.agents.push_back({{rat("2"), {{"s", rat("1")}}}});
  ExplicitTableSelection table;
  table.rows[{"s", "s", "s"}] = {{2, rat("1")}};
  return SignalingPolicy::single({std::move(mapping), std::move(table)});
}

/// Agent 1 deterministic 2; agents 2..n iid {1: 1/2, 3: 1/2}.
inline Instance example27_instance(size_t n) {
  std::vector<DiscreteDist> agents;
  agents.push_back(DiscreteDist::point(rat("2")));
  for (size_t i = 1; i < n; ++i)
    agents.push_back(DiscreteDist::from_pairs({{rat("1"), rat("1/2")}, {rat("3"), rat("1/2")}}));
  return Instance::from_agents(std::move(agents));
}

/// Random rational in [0, 1] on a small-denominator grid.
inline Rat random_prob(std::mt19937_64& rng, int denom = 32) {
  std::uniform_int_distribution<int> d(0, denom);
  return Rat(d(rng), denom);
}

inline DiscreteDist random_dist(std::mt19937_64& rng, int max_points, int max_value,
                                bool allow_zero = false) {
  std::uniform_int_distribution<int> npoints(1, max_points);
  const int m = npoints(rng);
  std::uniform_int_distribution<int> val(allow_zero ? 0 : 1, 4 * max_value);
  std::set<Rat> values;
  while (static_cast<int>(values.size()) < m) values.insert(Rat(val(rng), 4));
  std::vector<std::pair<Rat, Rat>> support;
  std::uniform_int_distribution<int> w(1, 12);
  Rat total = 0;
  std::vector<int> weights;
  for (int i = 0; i < m; ++i) weights.push_back(w(rng));
  const int wsum = std::accumulate(weights.begin(), weights.end(), 0);
  int idx = 0;
  for (const Rat& v : values) support.emplace_back(v, Rat(weights[idx++], wsum));
  return DiscreteDist::from_pairs(std::move(support));
}

inline Instance random_instance(std::mt19937_64& rng, int max_agents, int max_points,
                                int max_value) {
  std::uniform_int_distribution<int> na(1, max_agents);
  const int n = na(rng);
  std::vector<DiscreteDist> agents;
  for (int i = 0; i < n; ++i) agents.push_back(random_dist(rng, max_points, max_value));
  return Instance::from_agents(std::move(agents));
}

/// Random mapping rule with up to `max_labels` labels per agent.
inline MappingRule random_mapping(std::mt19937_64& rng, const Instance& inst, int max_labels) {
  MappingRule mapping;
  std::uniform_int_distribution<int> nl(1, max_labels);
  for (const auto& dist : inst.agents) {
    const int labels = nl(rng);
    std::vector<MappingRule::Row> rows;
    for (const auto& [v, p] : dist.support) {
      MappingRule::Row row{v, {}};
      std::uniform_int_distribution<int> w(0, 6);
      std::vector<int> weights(labels);
      int total = 0;
      for (int& x : weights) total += (x = w(rng));
      if (total == 0) {
        weights[0] = 1;
        total = 1;
      }
      for (int l = 0; l < labels; ++l) {
        if (weights[l] == 0) continue;
        row.out.emplace_back("g" + std::to_string(l), Rat(weights[l], total));
      }
      rows.push_back(std::move(row));
    }
    mapping.agents.push_back(std::move(rows));
  }
  return mapping;
}

/// Random explicit-table policy: random mapping plus, for every reachable
/// joint signal, a random distribution over the exact-receiver eligible set.
inline SignalingPolicy random_table_policy(std::mt19937_64& rng, const Instance& inst,
                                           int max_labels) {
  MappingRule mapping = random_mapping(rng, inst, max_labels);
  const size_t n = inst.num_agents();
  std::vector<std::vector<LabelPosterior<Rat>>> posts;
  for (size_t i = 0; i < n; ++i)
    posts.push_back(posteriors<Rat>(inst.agents[i], mapping.agents[i]));

  ExplicitTableSelection table;
  std::vector<size_t> idx(n, 0);
  for (;;) {
    std::vector<std::string> labels(n);
    std::vector<Rat> means(n);
    for (size_t i = 0; i < n; ++i) {
      labels[i] = posts[i][idx[i]].label;
      means[i] = posts[i][idx[i]].mu;
    }
    const auto eligible = eligible_set(means, ReceiverModel::exact());
    std::uniform_int_distribution<int> w(0, 6);
    std::vector<int> weights(eligible.size());
    int total = 0;
    for (int& x : weights) total += (x = w(rng));
    if (total == 0) {
      weights[0] = 1;
      total = 1;
    }
    std::vector<std::pair<size_t, Rat>> select;
    for (size_t t = 0; t < eligible.size(); ++t)
      if (weights[t] > 0) select.emplace_back(eligible[t], Rat(weights[t], total));
    table.rows.emplace(std::move(labels), std::move(select));

    size_t carry = 0;
    while (carry < n && ++idx[carry] == posts[carry].size()) idx[carry++] = 0;
    if (carry == n) break;
  }
  return SignalingPolicy::single({std::move(mapping), std::move(table)});
}

}  // namespace fairsel::testing
