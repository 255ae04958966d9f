#pragma once

#include <algorithm>
#include <vector>

#include "fairsel/flow_network.hpp"
#include "fairsel/simplex.hpp"

namespace fairsel {

/// 1-majorized sink-inflow vector with a realizing edge flow and the
/// prefix-sum certificate S_1 <= ... <= S_n.
template <class T>
struct MajorizedPoint {
  std::vector<T> f;                    // sink inflows
  std::vector<std::vector<T>> y;       // dense [middle][sink] edge flows
  std::vector<T> certificate;          // prefix sums of sorted f
};

namespace detail {

template <class T>
struct FlowLpBuilder {
  // arc variables first; extra variables appended by the caller
  const FlowNetwork& net;
  std::vector<std::tuple<size_t, size_t, T>> arc_list;  // (mid, sink, cap)
  size_t num_arc_vars = 0;

  explicit FlowLpBuilder(const FlowNetwork& n) : net(n) {
    for (size_t j = 0; j < net.num_middle(); ++j)
      for (const auto& [sink, cap] : net.arcs[j])
        arc_list.emplace_back(j, sink, num_from_rat<T>(cap));
    num_arc_vars = arc_list.size();
  }

  // capacity rows shared by every flow LP
  void add_capacity_rows(LinearProgram<T>& lp) const {
    for (size_t j = 0; j < net.num_middle(); ++j) {
      typename LinearProgram<T>::Row row;
      for (size_t a = 0; a < arc_list.size(); ++a)
        if (std::get<0>(arc_list[a]) == j) row.coeffs.emplace_back(a, T(1));
      row.sense = LpSense::Le;
      row.rhs = num_from_rat<T>(net.middle_caps[j]);
      lp.rows.push_back(std::move(row));
    }
    for (size_t a = 0; a < arc_list.size(); ++a)
      lp.add_row({{a, T(1)}}, LpSense::Le, std::get<2>(arc_list[a]));
  }

  std::vector<std::pair<size_t, T>> sink_terms(size_t sink) const {
    std::vector<std::pair<size_t, T>> terms;
    for (size_t a = 0; a < arc_list.size(); ++a)
      if (std::get<1>(arc_list[a]) == sink) terms.emplace_back(a, T(1));
    return terms;
  }

  std::vector<std::vector<T>> dense_flows(const std::vector<T>& x) const {
    std::vector<std::vector<T>> y(net.num_middle(), std::vector<T>(net.num_sinks, T(0)));
    for (size_t a = 0; a < arc_list.size(); ++a)
      y[std::get<0>(arc_list[a])][std::get<1>(arc_list[a])] += x[a];
    return y;
  }
};

}  // namespace detail

/// Max achievable sum of the k smallest sink inflows, as one LP:
/// maximize k*t - sum slack_i with f_i >= t - slack_i and flow feasibility.
template <class T>
T prefix_sum_oracle(const FlowNetwork& net, size_t k) {
  const size_t n = net.num_sinks;
  if (n == 0 || k == 0) return T(0);
  if (k > n) throw ValidationError("prefix_sum_oracle: k exceeds sink count");
  detail::FlowLpBuilder<T> b(net);
  LinearProgram<T> lp;
  const size_t t_var = b.num_arc_vars;
  const size_t slack0 = t_var + 1;
  std::vector<T> obj(slack0 + n, T(0));
  obj[t_var] = T(static_cast<int>(k));
  for (size_t i = 0; i < n; ++i) obj[slack0 + i] = T(-1);
  lp.set_objective(std::move(obj));
  b.add_capacity_rows(lp);
  for (size_t i = 0; i < n; ++i) {
    auto terms = b.sink_terms(i);
    terms.emplace_back(t_var, T(-1));
    terms.emplace_back(slack0 + i, T(1));
    lp.add_row(std::move(terms), LpSense::Ge, T(0));
  }
  auto sol = solve_lp(lp);
  if (!sol.optimal()) throw std::logic_error("prefix-sum LP must be solvable");
  return sol.objective;
}

namespace detail {

/// Dinic max-flow over the bipartite network plus a super-sink whose arcs
/// carry per-sink demand caps. Float mode only.
class FloatFlowSolver {
 public:
  explicit FloatFlowSolver(const FlowNetwork& net)
      : net_(net), m_(net.num_middle()), n_(net.num_sinks) {}

  static constexpr double kInf = 1e30;
  static constexpr double kEps = 1e-13;

  struct Result {
    double total = 0.0;
    std::vector<double> sink_in;
    std::vector<std::vector<double>> y;
  };

  /// Two-phase max flow: saturate the phase-1 sink caps first, then raise
  /// them to the phase-2 caps (caps may only grow) and keep augmenting. The
  /// phase-1 deliveries can never be cannibalized by phase 2, which makes
  /// this the right primitive for both pin-preserving floods and probes.
  Result run_phased(const std::vector<double>& caps1, const std::vector<double>& caps2) {
    build();
    for (size_t i = 0; i < n_; ++i) edges_[sink_edge_[i]].cap = caps1[i];
    double total = augment_all();
    bool raised = false;
    for (size_t i = 0; i < n_; ++i) {
      if (caps2[i] > caps1[i]) {
        edges_[sink_edge_[i]].cap = caps2[i];
        raised = true;
      }
    }
    if (raised) total += augment_all();
    Result out;
    out.total = total;
    out.sink_in.assign(n_, 0.0);
    out.y.assign(m_, std::vector<double>(n_, 0.0));
    for (size_t j = 0; j < m_; ++j)
      for (const auto& [eid, sink] : middle_arc_edges_[j]) {
        out.y[j][sink] += edges_[eid].flow;
        out.sink_in[sink] += edges_[eid].flow;
      }
    return out;
  }

  /// Max flow with sink i limited to sink_caps[i] (kInf allowed).
  Result run(const std::vector<double>& sink_caps) {
    return run_phased(sink_caps, sink_caps);
  }

  /// Lexicographic probe: saturate everyone else's demand first, then open
  /// sink `probe` without a cap.
  Result run_probe(const std::vector<double>& sink_caps, size_t probe) {
    std::vector<double> caps1 = sink_caps, caps2 = sink_caps;
    caps1[probe] = 0.0;
    caps2[probe] = kInf;
    return run_phased(caps1, caps2);
  }

 private:
  struct Edge {
    size_t to;
    double cap;
    double flow = 0.0;
    size_t rev;  // index of the reverse edge
  };

  void add_edge(size_t from, size_t to, double cap) {
    adj_[from].push_back(edges_.size());
    edges_.push_back({to, cap, 0.0, edges_.size() + 1});
    adj_[to].push_back(edges_.size());
    edges_.push_back({from, 0.0, 0.0, edges_.size() - 1});
  }

  void build() {
    const size_t nodes = 2 + m_ + n_;
    source_ = 0;
    super_sink_ = 1 + m_ + n_;
    edges_.clear();
    adj_.assign(nodes, {});
    middle_arc_edges_.assign(m_, {});
    for (size_t j = 0; j < m_; ++j)
      add_edge(source_, 1 + j, rat_to_double(net_.middle_caps[j]));
    for (size_t j = 0; j < m_; ++j)
      for (const auto& [sink, cap] : net_.arcs[j]) {
        middle_arc_edges_[j].emplace_back(edges_.size(), sink);
        add_edge(1 + j, 1 + m_ + sink, rat_to_double(cap));
      }
    sink_edge_.assign(n_, 0);
    for (size_t i = 0; i < n_; ++i) {
      sink_edge_[i] = edges_.size();
      add_edge(1 + m_ + i, super_sink_, 0.0);
    }
  }

  bool bfs() {
    level_.assign(adj_.size(), SIZE_MAX);
    level_[source_] = 0;
    std::vector<size_t> queue{source_};
    for (size_t head = 0; head < queue.size(); ++head) {
      const size_t u = queue[head];
      for (size_t eid : adj_[u]) {
        const Edge& e = edges_[eid];
        if (level_[e.to] == SIZE_MAX && e.cap - e.flow > kEps) {
          level_[e.to] = level_[u] + 1;
          queue.push_back(e.to);
        }
      }
    }
    return level_[super_sink_] != SIZE_MAX;
  }

  double dfs(size_t u, double pushed) {
    if (u == super_sink_) return pushed;
    for (size_t& idx = iter_[u]; idx < adj_[u].size(); ++idx) {
      const size_t eid = adj_[u][idx];
      Edge& e = edges_[eid];
      if (level_[e.to] != level_[u] + 1 || e.cap - e.flow <= kEps) continue;
      const double got = dfs(e.to, std::min(pushed, e.cap - e.flow));
      if (got > kEps) {
        e.flow += got;
        edges_[e.rev].flow -= got;
        return got;
      }
    }
    return 0.0;
  }

  double augment_all() {
    double total = 0.0;
    while (bfs()) {
      iter_.assign(adj_.size(), 0);
      for (;;) {
        const double got = dfs(source_, kInf);
        if (got <= kEps) break;
        total += got;
      }
    }
    return total;
  }

  const FlowNetwork& net_;
  size_t m_, n_, source_ = 0, super_sink_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<size_t>> adj_;
  std::vector<std::vector<std::pair<size_t, size_t>>> middle_arc_edges_;
  std::vector<size_t> sink_edge_;
  std::vector<size_t> level_;
  std::vector<size_t> iter_;
};

/// Float-mode water-filling: binary-search the common floor (feasibility is
/// one max-flow with the demands folded in), freeze stuck sinks via
/// two-phase probes, repeat. Floor tolerance 1e-12 absolute.
inline MajorizedPoint<double> lex_flow_float(const FlowNetwork& net) {
  const size_t n = net.num_sinks;
  MajorizedPoint<double> out;
  out.f.assign(n, 0.0);
  if (n == 0) {
    out.y.assign(net.num_middle(), {});
    return out;
  }
  FloatFlowSolver solver(net);
  double cap_total = 0.0;
  for (const Rat& b : net.middle_caps) cap_total += rat_to_double(b);

  std::vector<bool> frozen(n, false);
  std::vector<double> level(n, 0.0);
  auto demands_at = [&](double t) {
    std::vector<double> d(n);
    for (size_t i = 0; i < n; ++i) d[i] = frozen[i] ? level[i] : t;
    return d;
  };
  auto feasible = [&](double t) {
    const auto d = demands_at(t);
    double want = 0.0;
    for (double x : d) want += x;
    const auto res = solver.run(d);
    return res.total >= want - (1e-10 + 1e-12 * want);
  };

  size_t rounds_left = n + 2;
  while (std::find(frozen.begin(), frozen.end(), false) != frozen.end()) {
    double lo = 0.0, hi = cap_total + 1.0;
    if (!feasible(lo)) break;  // frozen levels degraded numerically; stop raising
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      (feasible(mid) ? lo : hi) = mid;
    }
    const double tstar = lo;
    // deliveries at the floor, with the already-pinned sinks served first so
    // the stored levels always form a jointly realizable vector
    std::vector<double> pins_only(n, 0.0);
    for (size_t i = 0; i < n; ++i)
      if (frozen[i]) pins_only[i] = level[i];
    const auto at_floor = solver.run_phased(pins_only, demands_at(tstar));

    size_t newly_frozen = 0;
    std::vector<double> probe_val(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
      if (frozen[i]) continue;
      const auto res = solver.run_probe(demands_at(tstar), i);
      probe_val[i] = res.sink_in[i];
      if (probe_val[i] <= tstar + 1e-10 * (1.0 + std::abs(tstar))) {
        frozen[i] = true;
        level[i] = std::min(tstar, at_floor.sink_in[i]);
        ++newly_frozen;
      }
    }
    if (newly_frozen == 0 || --rounds_left == 0) {
      size_t worst = SIZE_MAX;
      for (size_t i = 0; i < n; ++i)
        if (!frozen[i] && (worst == SIZE_MAX || probe_val[i] < probe_val[worst])) worst = i;
      if (worst == SIZE_MAX) break;
      frozen[worst] = true;
      level[worst] = std::min(tstar, at_floor.sink_in[worst]);
    }
  }

  const auto final_res = solver.run(level);
  out.f = level;
  out.y = final_res.y;
  std::vector<double> sorted = level;
  std::sort(sorted.begin(), sorted.end());
  out.certificate.resize(n);
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) {
    acc += sorted[i];
    out.certificate[i] = acc;
  }
  return out;
}

}  // namespace detail

/// Lexicographically optimal (1-majorized) flow by water-filling. In exact
/// mode every floor is an LP breakpoint (no search) and the final edge flow
/// realizing f* prefers low-index middle nodes, deterministically; in float
/// mode the floors come from binary search over max-flow feasibility.
template <class T>
MajorizedPoint<T> lex_optimal_flow(const FlowNetwork& net) {
  if constexpr (!NumTraits<T>::exact) return detail::lex_flow_float(net);
  const size_t n = net.num_sinks;
  MajorizedPoint<T> out;
  out.f.assign(n, T(0));
  if (n == 0) {
    out.y.assign(net.num_middle(), {});
    return out;
  }
  detail::FlowLpBuilder<T> b(net);

  std::vector<bool> frozen(n, false);
  std::vector<T> level(n, T(0));

  auto add_pin_rows = [&](LinearProgram<T>& lp) {
    for (size_t i = 0; i < n; ++i) {
      if (!frozen[i]) continue;
      lp.add_row(b.sink_terms(i), LpSense::Eq, level[i]);
    }
  };

  size_t rounds_left = n + 2;
  while (std::find(frozen.begin(), frozen.end(), false) != frozen.end()) {
    // 1) the largest common floor feasible for unfrozen sinks
    LinearProgram<T> floor_lp;
    const size_t t_var = b.num_arc_vars;
    std::vector<T> obj(t_var + 1, T(0));
    obj[t_var] = T(1);
    floor_lp.set_objective(std::move(obj));
    b.add_capacity_rows(floor_lp);
    add_pin_rows(floor_lp);
    for (size_t i = 0; i < n; ++i) {
      if (frozen[i]) continue;
      auto terms = b.sink_terms(i);
      terms.emplace_back(t_var, T(-1));
      floor_lp.add_row(std::move(terms), LpSense::Ge, T(0));
    }
    auto fsol = solve_lp(floor_lp);
    if (!fsol.optimal()) throw std::logic_error("water-filling floor LP must be solvable");
    const T tstar = fsol.x[t_var];

    // 2) probe each unfrozen sink: can it exceed tstar while the others hold?
    size_t newly_frozen = 0;
    std::vector<T> probe_val(n, T(0));
    for (size_t i = 0; i < n; ++i) {
      if (frozen[i]) continue;
      LinearProgram<T> probe;
      std::vector<T> pobj(b.num_arc_vars, T(0));
      for (const auto& [a, c] : b.sink_terms(i)) pobj[a] = c;
      probe.set_objective(std::move(pobj));
      b.add_capacity_rows(probe);
      add_pin_rows(probe);
      for (size_t u = 0; u < n; ++u) {
        if (frozen[u] || u == i) continue;
        probe.add_row(b.sink_terms(u), LpSense::Ge, tstar);
      }
      auto psol = solve_lp(probe);
      if (!psol.optimal()) throw std::logic_error("water-filling probe LP must be solvable");
      probe_val[i] = psol.objective;
    }
    for (size_t i = 0; i < n; ++i) {
      if (frozen[i]) continue;
      bool stuck;
      if constexpr (NumTraits<T>::exact)
        stuck = probe_val[i] <= tstar;
      else
        stuck = probe_val[i] <= tstar + NumTraits<T>::tol * std::max(1.0, std::abs(tstar));
      if (stuck) {
        frozen[i] = true;
        level[i] = tstar;
        ++newly_frozen;
      }
    }
    if (newly_frozen == 0 || --rounds_left == 0) {
      // numerical stall (float mode only): pin the tightest sink to force progress
      size_t worst = SIZE_MAX;
      for (size_t i = 0; i < n; ++i)
        if (!frozen[i] && (worst == SIZE_MAX || probe_val[i] < probe_val[worst])) worst = i;
      if (worst == SIZE_MAX) break;
      frozen[worst] = true;
      level[worst] = tstar;
    }
  }

  // 3) realize f* with edge flows, preferring low-index middle nodes
  LinearProgram<T> fin;
  std::vector<T> obj(b.num_arc_vars, T(0));
  const size_t m = net.num_middle();
  for (size_t a = 0; a < b.num_arc_vars; ++a)
    obj[a] = T(static_cast<int>(m - std::get<0>(b.arc_list[a])));
  fin.set_objective(std::move(obj));
  b.add_capacity_rows(fin);
  for (size_t i = 0; i < n; ++i) fin.add_row(b.sink_terms(i), LpSense::Eq, level[i]);
  auto fsol = solve_lp(fin);
  if (!fsol.optimal()) throw std::logic_error("water-filling extraction LP must be solvable");

  out.f = level;
  out.y = b.dense_flows(fsol.x);
  std::vector<T> sorted = level;
  std::sort(sorted.begin(), sorted.end());
  out.certificate.resize(n);
  T acc = T(0);
  for (size_t i = 0; i < n; ++i) {
    acc += sorted[i];
    out.certificate[i] = acc;
  }
  return out;
}

}  // namespace fairsel
