#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "fairsel/rational.hpp"

namespace fairsel {

/// Single-source capacitated bipartite network: the source feeds middle node
/// j up to b_j, arc (j, i) carries at most its capacity into sink i. All the
/// majorization reductions in this toolkit produce this shape.
struct FlowNetwork {
  std::vector<Rat> middle_caps;                            // b_j
  std::vector<std::vector<std::pair<size_t, Rat>>> arcs;   // per middle node: (sink, cap)
  size_t num_sinks = 0;

  size_t num_middle() const { return middle_caps.size(); }
  size_t num_arcs() const {
    size_t c = 0;
    for (const auto& a : arcs) c += a.size();
    return c;
  }
  void add_middle(Rat cap) {
    middle_caps.push_back(std::move(cap));
    arcs.emplace_back();
  }
  void add_arc(size_t mid, size_t sink, Rat cap) {
    arcs[mid].emplace_back(sink, std::move(cap));
  }

  bool operator==(const FlowNetwork&) const = default;
};

}  // namespace fairsel
