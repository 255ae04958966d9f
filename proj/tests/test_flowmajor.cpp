#include <doctest.h>

#include "fairsel/fullrev.hpp"
#include "fairsel/io.hpp"
#include "fairsel/lex_flow.hpp"
#include "fairsel/polymatroid.hpp"
#include "helpers.hpp"

using namespace fairsel;
using namespace fairsel::testing;

namespace {

// the subset network of a two-agent Bernoulli(0.3, 0.6) instance
FlowNetwork figure_network() {
  FlowNetwork net;
  net.num_sinks = 2;
  net.add_middle(rat("7/25"));   // {} : 0.28
  net.add_middle(rat("3/25"));   // {1}: 0.12
  net.add_middle(rat("21/50"));  // {2}: 0.42
  net.add_middle(rat("9/50"));   // {1,2}: 0.18
  net.add_arc(1, 0, rat("3/25"));
  net.add_arc(2, 1, rat("21/50"));
  net.add_arc(3, 0, rat("9/50"));
  net.add_arc(3, 1, rat("9/50"));
  return net;
}

}  // namespace

TEST_CASE("lex-optimal flow on the figure network") {
  const auto point = lex_optimal_flow<Rat>(figure_network());
  REQUIRE(point.f.size() == 2);
  CHECK(point.f[0] == rat("3/10"));
  CHECK(point.f[1] == rat("21/50"));
  CHECK(point.certificate[0] == rat("3/10"));
  CHECK(point.certificate[1] == rat("18/25"));  // 0.72 total
  // edge flows realize f
  for (size_t i = 0; i < 2; ++i) {
    Rat inflow = 0;
    for (size_t j = 0; j < 4; ++j) inflow += point.y[j][i];
    CHECK(inflow == point.f[i]);
  }
}

TEST_CASE("trivial networks") {
  SUBCASE("single sink takes the whole capacity") {
    FlowNetwork net;
    net.num_sinks = 1;
    net.add_middle(rat("1"));
    net.add_arc(0, 0, rat("1"));
    const auto point = lex_optimal_flow<Rat>(net);
    CHECK(point.f[0] == Rat(1));
  }
  SUBCASE("two symmetric sinks split one unit") {
    FlowNetwork net;
    net.num_sinks = 2;
    net.add_middle(rat("1"));
    net.add_arc(0, 0, rat("1"));
    net.add_arc(0, 1, rat("1"));
    const auto point = lex_optimal_flow<Rat>(net);
    CHECK(point.f[0] == rat("1/2"));
    CHECK(point.f[1] == rat("1/2"));
  }
  SUBCASE("empty network") {
    FlowNetwork net;
    net.num_sinks = 0;
    CHECK(lex_optimal_flow<Rat>(net).f.empty());
    CHECK(prefix_sum_oracle<Rat>(net, 0) == Rat(0));
  }
  SUBCASE("unreachable sink freezes at zero") {
    FlowNetwork net;
    net.num_sinks = 2;
    net.add_middle(rat("1"));
    net.add_arc(0, 0, rat("1"));
    const auto point = lex_optimal_flow<Rat>(net);
    CHECK(point.f[0] == Rat(1));
    CHECK(point.f[1] == Rat(0));
  }
}

TEST_CASE("prefix-sum oracle on the figure network") {
  const auto net = figure_network();
  CHECK(prefix_sum_oracle<Rat>(net, 1) == rat("3/10"));
  CHECK(prefix_sum_oracle<Rat>(net, 2) == rat("18/25"));  // max flow at k = n
  CHECK_THROWS_AS(prefix_sum_oracle<Rat>(net, 3), ValidationError);
}

TEST_CASE("polymatroid lex points") {
  SUBCASE("worked two-agent case") {
    const PolymatroidSpec spec{{rat("3/10"), rat("3/5")}};
    const auto f = polymatroid_lex_point(spec);
    CHECK(f == std::vector<Rat>{rat("3/10"), rat("21/50")});
  }
  SUBCASE("symmetric pair") {
    const PolymatroidSpec spec{{rat("1/2"), rat("1/2")}};
    const auto f = polymatroid_lex_point(spec);
    CHECK(f == std::vector<Rat>{rat("3/8"), rat("3/8")});
  }
  SUBCASE("sure winner") {
    const PolymatroidSpec spec{{rat("1")}};
    CHECK(polymatroid_lex_point(spec) == std::vector<Rat>{rat("1")});
  }
}

TEST_CASE("polymatroid feasibility reports the tight or violated sets") {
  const PolymatroidSpec spec{{rat("3/10"), rat("3/5")}};
  SUBCASE("the lex point is feasible with its tight sets") {
    const auto rep = polymatroid_feasible(spec, {rat("3/10"), rat("21/50")});
    CHECK(rep.feasible);
    CHECK(rep.tight_masks == std::vector<uint32_t>{0b01, 0b11});
  }
  SUBCASE("exceeding a singleton bound is caught") {
    const auto rep = polymatroid_feasible(spec, {rat("31/100"), rat("41/100")});
    CHECK_FALSE(rep.feasible);
    CHECK(rep.argmin_mask == 0b01);
  }
  SUBCASE("zero is feasible") {
    CHECK(polymatroid_feasible(spec, {rat("0"), rat("0")}).feasible);
  }
}

TEST_CASE("ranking decomposition") {
  SUBCASE("tight chain needs a single permutation") {
    const PolymatroidSpec spec{{rat("3/10"), rat("3/5")}};
    const auto mix = decompose_to_rankings(spec, {rat("3/10"), rat("21/50")});
    REQUIRE(mix.atoms.size() == 1);
    CHECK(mix.atoms[0].first == Rat(1));
    CHECK(mix.atoms[0].second == std::vector<size_t>{0, 1});
  }
  SUBCASE("symmetric point mixes the two orders evenly") {
    const PolymatroidSpec spec{{rat("1/2"), rat("1/2")}};
    const auto mix = decompose_to_rankings(spec, {rat("3/8"), rat("3/8")});
    REQUIRE(mix.atoms.size() == 2);
    CHECK(mix.atoms[0].first == rat("1/2"));
    CHECK(mix.atoms[1].first == rat("1/2"));
  }
  SUBCASE("a vertex decomposes as itself") {
    const PolymatroidSpec spec{{rat("2/5"), rat("7/10"), rat("1/5")}};
    const auto vertex = greedy_vertex(spec, {2, 0, 1});
    const auto mix = decompose_to_rankings(spec, vertex);
    REQUIRE(mix.atoms.size() == 1);
    CHECK(mix.atoms[0].second == std::vector<size_t>{2, 0, 1});
  }
  SUBCASE("targets outside the base polytope are rejected") {
    const PolymatroidSpec spec{{rat("1/2"), rat("1/2")}};
    CHECK_THROWS_AS(decompose_to_rankings(spec, {rat("1/4"), rat("1/4")}), ValidationError);
    CHECK_THROWS_AS(decompose_to_rankings(spec, {rat("3/4"), rat("3/4")}), ValidationError);
  }
}

TEST_CASE("decomposition reproduces the target over random instances") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 60; ++trial) {
    std::uniform_int_distribution<int> nd(1, 5);
    const int n = nd(rng);
    PolymatroidSpec spec;
    for (int i = 0; i < n; ++i) spec.p.push_back(random_prob(rng));
    const auto f = polymatroid_lex_point(spec);
    CHECK(polymatroid_feasible(spec, f).feasible);
    const auto mix = decompose_to_rankings(spec, f);
    CHECK(mix.atoms.size() <= static_cast<size_t>(n) + 1);
    Rat wsum = 0;
    std::vector<Rat> combo(n, Rat(0));
    for (const auto& [w, order] : mix.atoms) {
      wsum += w;
      const auto v = greedy_vertex(spec, order);
      // vertex structure: first agent takes its singleton bound
      CHECK(v[order[0]] == spec.g(1u << order[0]));
      for (int i = 0; i < n; ++i) combo[i] += w * v[i];
    }
    CHECK(wsum == Rat(1));
    CHECK(combo == f);
  }
}

TEST_CASE("polymatroid point equals the lex flow of the subset network") {
  std::mt19937_64 rng(777);
  for (int trial = 0; trial < 25; ++trial) {
    std::uniform_int_distribution<int> nd(1, 4);
    const int n = nd(rng);
    std::vector<DiscreteDist> agents;
    PolymatroidSpec spec;
    for (int i = 0; i < n; ++i) {
      Rat mu = random_prob(rng);
      if (mu == 0) mu = rat("1/32");
      spec.p.push_back(mu);
      if (mu == 1)
        agents.push_back(DiscreteDist::point(rat("1")));
      else
        agents.push_back(
            DiscreteDist::from_pairs({{rat("0"), Rat(1) - mu}, {rat("1"), mu}}));
    }
    const Instance inst = Instance::from_agents(std::move(agents));
    const auto net = bernoulli_subset_network(inst);
    const auto flow = lex_optimal_flow<Rat>(net);
    const auto point = polymatroid_lex_point(spec);
    CHECK(flow.f == point);
  }
}

TEST_CASE("certificate matches the oracle on the figure network") {
  const auto net = figure_network();
  const auto point = lex_optimal_flow<Rat>(net);
  for (size_t k = 1; k <= net.num_sinks; ++k)
    CHECK(point.certificate[k - 1] == prefix_sum_oracle<Rat>(net, k));
}
