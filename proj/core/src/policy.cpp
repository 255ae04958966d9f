#include "fairsel/policy.hpp"

#include <algorithm>
#include <set>

namespace fairsel {

MappingRule MappingRule::full_revelation(const Instance& inst) {
  MappingRule m;
  m.agents.reserve(inst.num_agents());
  for (const auto& d : inst.agents) {
    std::vector<Row> rows;
    for (const auto& [v, p] : d.support) rows.push_back({v, {{value_label(v), Rat(1)}}});
    m.agents.push_back(std::move(rows));
  }
  return m;
}

MappingRule MappingRule::no_reveal(const Instance& inst) {
  MappingRule m;
  m.agents.reserve(inst.num_agents());
  for (const auto& d : inst.agents) {
    std::vector<Row> rows;
    for (const auto& [v, p] : d.support) rows.push_back({v, {{"o", Rat(1)}}});
    m.agents.push_back(std::move(rows));
  }
  return m;
}

SignalingPolicy SignalingPolicy::single(SignalingScheme scheme) {
  SignalingPolicy p;
  p.components.emplace_back(Rat(1), std::move(scheme));
  return p;
}

SignalingPolicy full_revelation_policy(const Instance& inst) {
  return SignalingPolicy::single({MappingRule::full_revelation(inst), ExplicitTableSelection{}});
}

SignalingPolicy no_reveal_policy(const Instance& inst) {
  return SignalingPolicy::single({MappingRule::no_reveal(inst), ExplicitTableSelection{}});
}

namespace {

void validate_scheme(const Instance& inst, const SignalingScheme& scheme, size_t index,
                     std::vector<std::string>& out) {
  const std::string where = "scheme " + std::to_string(index) + ": ";
  const size_t n = inst.num_agents();
  if (scheme.mapping.agents.size() != n) {
    out.push_back(where + "mapping covers " + std::to_string(scheme.mapping.agents.size()) +
                  " agents, instance has " + std::to_string(n));
    return;
  }
  // mapping rows: one row per support value, outgoing probabilities sum to 1
  std::vector<std::set<std::string>> labels(n);
  for (size_t i = 0; i < n; ++i) {
    const auto& dist = inst.agents[i];
    const auto& rows = scheme.mapping.agents[i];
    for (const auto& [v, p] : dist.support) {
      auto it = std::find_if(rows.begin(), rows.end(),
                             [&](const MappingRule::Row& r) { return r.value == v; });
      if (it == rows.end()) {
        out.push_back(where + "agent " + std::to_string(i) + " has no mapping row for value " +
                      rat_to_string(v));
        continue;
      }
      Rat total = 0;
      for (const auto& [label, prob] : it->out) {
        if (prob < 0 || prob > 1)
          out.push_back(where + "agent " + std::to_string(i) + " value " + rat_to_string(v) +
                        " label '" + label + "' probability outside [0,1]");
        if (prob > 0) labels[i].insert(label);
        total += prob;
      }
      if (total != 1)
        out.push_back(where + "agent " + std::to_string(i) + " value " + rat_to_string(v) +
                      " outgoing probabilities sum to " + rat_to_string(total));
    }
    for (const auto& row : rows) {
      bool known = std::any_of(dist.support.begin(), dist.support.end(),
                               [&](const auto& vp) { return vp.first == row.value; });
      if (!known)
        out.push_back(where + "agent " + std::to_string(i) + " maps unknown value " +
                      rat_to_string(row.value));
    }
  }

  struct Visitor {
    const Instance& inst;
    const std::vector<std::set<std::string>>& labels;
    const std::string& where;
    std::vector<std::string>& out;

    void operator()(const RankingSelection& s) const {
      std::vector<bool> seen(inst.num_agents(), false);
      if (s.order.size() != inst.num_agents()) {
        out.push_back(where + "ranking length mismatch");
        return;
      }
      for (size_t a : s.order) {
        if (a >= inst.num_agents() || seen[a]) {
          out.push_back(where + "ranking is not a permutation");
          return;
        }
        seen[a] = true;
      }
    }
    void operator()(const ThresholdRoundedOrder& s) const {
      if (s.lo > s.hi) out.push_back(where + "interval lower end exceeds upper end");
      if (s.accept.size() != inst.num_agents())
        out.push_back(where + "acceptance vector length mismatch");
      for (const Rat& a : s.accept)
        if (a < 0 || a > 1)
          out.push_back(where + "acceptance probability " + rat_to_string(a) + " outside [0,1]");
    }
    void operator()(const ExplicitTableSelection& s) const {
      for (const auto& [signal, dist] : s.rows) {
        if (signal.size() != inst.num_agents()) {
          out.push_back(where + "table row has wrong joint-signal arity");
          continue;
        }
        for (size_t i = 0; i < signal.size(); ++i) {
          if (!labels[i].count(signal[i]))
            out.push_back(where + "table row references label '" + signal[i] +
                          "' that agent " + std::to_string(i) + " never emits");
        }
        Rat total = 0;
        for (const auto& [agent, prob] : dist) {
          if (agent >= inst.num_agents())
            out.push_back(where + "table row selects unknown agent");
          if (prob < 0 || prob > 1)
            out.push_back(where + "table row probability outside [0,1]");
          total += prob;
        }
        if (total != 1)
          out.push_back(where + "table row selection probabilities sum to " +
                        rat_to_string(total));
      }
    }
    void operator()(const LargestIndexThenPrefixMax& s) const {
      if (s.prefix_len > inst.num_agents())
        out.push_back(where + "prefix length exceeds agent count");
    }
    void operator()(const RoundedSelection& s) const {
      if (!std::is_sorted(s.levels.begin(), s.levels.end()))
        out.push_back(where + "levels are not ascending");
      if (s.accept.size() != inst.num_agents())
        out.push_back(where + "acceptance matrix row count mismatch");
      for (const auto& row : s.accept) {
        if (row.size() != s.levels.size())
          out.push_back(where + "acceptance matrix column count mismatch");
        for (const Rat& a : row)
          if (a < 0 || a > 1)
            out.push_back(where + "acceptance probability " + rat_to_string(a) +
                          " outside [0,1]");
      }
    }
  };
  std::visit(Visitor{inst, labels, where, out}, scheme.selection);
}

}  // namespace

std::vector<std::string> validate_policy(const Instance& inst, const SignalingPolicy& policy) {
  std::vector<std::string> out;
  if (policy.components.empty()) {
    out.push_back("policy has no components");
    return out;
  }
  Rat total = 0;
  for (const auto& [w, scheme] : policy.components) {
    if (w < 0 || w > 1) out.push_back("component weight " + rat_to_string(w) + " outside [0,1]");
    total += w;
  }
  if (total != 1) out.push_back("component weights sum to " + rat_to_string(total));
  for (size_t s = 0; s < policy.components.size(); ++s)
    validate_scheme(inst, policy.components[s].second, s, out);
  return out;
}

}  // namespace fairsel
