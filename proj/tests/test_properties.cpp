#include <doctest.h>

#include "fairsel/fullrev.hpp"
#include "fairsel/lex_flow.hpp"
#include "fairsel/singlemean.hpp"
#include "helpers.hpp"

using namespace fairsel;
using namespace fairsel::testing;

namespace {

FlowNetwork random_network(std::mt19937_64& rng, size_t max_middle, size_t max_sinks) {
  std::uniform_int_distribution<size_t> md(1, max_middle), sd(1, max_sinks);
  std::uniform_int_distribution<int> cap(0, 1000);
  std::uniform_int_distribution<int> coin(0, 99);
  FlowNetwork net;
  net.num_sinks = sd(rng);
  const size_t m = md(rng);
  for (size_t j = 0; j < m; ++j) {
    net.add_middle(Rat(cap(rng), 1000));
    for (size_t i = 0; i < net.num_sinks; ++i)
      if (coin(rng) < 60) net.add_arc(j, i, Rat(cap(rng), 1000));
  }
  return net;
}

}  // namespace

TEST_CASE("water filling matches the prefix-sum program on random networks") {
  std::mt19937_64 rng(808);
  for (int trial = 0; trial < 200; ++trial) {
    const FlowNetwork net = random_network(rng, 12, 8);
    const auto point = lex_optimal_flow<Rat>(net);
    for (size_t k = 1; k <= net.num_sinks; ++k) {
      const Rat oracle = prefix_sum_oracle<Rat>(net, k);
      CHECK(point.certificate[k - 1] == oracle);
    }
    // edge flows respect every capacity and realize f
    for (size_t j = 0; j < net.num_middle(); ++j) {
      Rat used = 0;
      for (size_t i = 0; i < net.num_sinks; ++i) used += point.y[j][i];
      CHECK(used <= net.middle_caps[j]);
    }
  }
}

TEST_CASE("float-mode water filling agrees with the float prefix program") {
  std::mt19937_64 rng(809);
  for (int trial = 0; trial < 60; ++trial) {
    const FlowNetwork net = random_network(rng, 10, 6);
    const auto point = lex_optimal_flow<double>(net);
    for (size_t k = 1; k <= net.num_sinks; ++k) {
      const double oracle = prefix_sum_oracle<double>(net, k);
      CHECK(std::abs(point.certificate[k - 1] - oracle) <=
            1e-9 * std::max(1.0, std::abs(oracle)));
    }
  }
}

TEST_CASE("value-model utilities scale with the instance, selection stays put") {
  std::mt19937_64 rng(811);
  for (int trial = 0; trial < 25; ++trial) {
    const Instance inst = random_instance(rng, 3, 3, 8);
    const auto policy = random_table_policy(rng, inst, 2);
    const Rat c = Rat(1 + (rng() % 12), 4);

    std::vector<DiscreteDist> scaled_agents;
    for (const auto& d : inst.agents) {
      std::vector<std::pair<Rat, Rat>> support;
      for (const auto& [v, p] : d.support) support.emplace_back(v * c, p);
      scaled_agents.push_back(DiscreteDist::from_pairs(std::move(support)));
    }
    const Instance scaled = Instance::from_agents(std::move(scaled_agents));
    SignalingPolicy scaled_policy = policy;
    for (auto& [w, scheme] : scaled_policy.components)
      for (auto& rows : scheme.mapping.agents)
        for (auto& row : rows) row.value *= c;

    const auto base = evaluate_exact(inst, policy, {});
    const auto lifted = evaluate_exact(scaled, scaled_policy, {});
    for (size_t i = 0; i < inst.num_agents(); ++i)
      CHECK(lifted.utilities.u[i] == c * base.utilities.u[i]);

    EvalOptions sel;
    sel.utility = UtilityModel::Selection;
    const auto base_sel = evaluate_exact(inst, policy, sel);
    const auto lifted_sel = evaluate_exact(scaled, scaled_policy, sel);
    CHECK(base_sel.utilities == lifted_sel.utilities);
  }
}

TEST_CASE("the majorized Bernoulli policy prefix-dominates arbitrary policies") {
  std::mt19937_64 rng(813);
  for (int trial = 0; trial < 40; ++trial) {
    std::uniform_int_distribution<int> nd(1, 3);
    const int n = nd(rng);
    std::vector<DiscreteDist> agents;
    for (int i = 0; i < n; ++i) {
      Rat mu = random_prob(rng);
      if (mu == 0) mu = rat("1/32");
      if (mu == 1) mu = rat("31/32");
      agents.push_back(DiscreteDist::from_pairs({{rat("0"), Rat(1) - mu}, {rat("1"), mu}}));
    }
    const Instance inst = Instance::from_agents(std::move(agents));
    const auto build = build_bernoulli_policy(inst);
    const auto majorized = evaluate_exact(inst, build.policy, {});
    const auto rival_policy = random_table_policy(rng, inst, 3);
    const auto rival = evaluate_exact(inst, rival_policy, {});
    const auto mp = majorized.utilities.sorted_prefix_sums();
    const auto rp = rival.utilities.sorted_prefix_sums();
    for (size_t k = 0; k < mp.size(); ++k) CHECK(mp[k] >= rp[k]);
  }
}

TEST_CASE("two-signal collapse never lowers p or Q") {
  std::mt19937_64 rng(815);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto dist = random_dist(rng, 3, 8);
    const Instance inst = Instance::from_agents({dist});
    const auto mapping = random_mapping(rng, inst, 3);
    const Rat lo = Rat(1 + (rng() % 28), 4);
    const Rat hi = lo * rat("5/4");

    const auto posts = posteriors<Rat>(dist, mapping.agents[0]);
    Rat q_le = 0, q_in = 0;
    for (const auto& lp : posts) {
      if (lp.mu <= hi) q_le += lp.q;
      if (lo <= lp.mu && lp.mu <= hi) q_in += lp.q;
    }
    const Rat Q_tau = q_le;
    const Rat p_tau = (q_le == 0) ? Rat(0) : q_in / q_le;

    const Rat prior = dist.mean();
    Rat p_canon, Q_canon;
    if (lo <= prior && prior <= hi) {
      p_canon = Q_canon = 1;
    } else {
      const auto sol = solve_maximal_mapping<Rat>(dist, lo, hi);
      if (prior < lo) {
        Q_canon = 1;
        p_canon = sol.beta;
      } else {
        p_canon = 1;
        Q_canon = sol.beta;
      }
    }
    CHECK(p_canon >= p_tau);
    CHECK(Q_canon >= Q_tau);
    ++checked;
  }
  CHECK(checked == 200);
}

TEST_CASE("full revelation attains the utilitarian optimum under any tie rule") {
  std::mt19937_64 rng(817);
  for (int trial = 0; trial < 20; ++trial) {
    const Instance inst = random_instance(rng, 4, 3, 8);
    // random tie rule: re-use the random-table machinery over revealed labels
    SignalingPolicy policy = full_revelation_policy(inst);
    const auto report = evaluate_exact(inst, policy, {});
    CHECK(report.total == report.welfare_opt);
    const auto twomaj = build_fullrev_twomaj_policy(inst);
    const auto rounded = evaluate_exact(inst, twomaj.policy, {});
    CHECK(rounded.total <= rounded.welfare_opt);
  }
}
