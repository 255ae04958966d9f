#include <doctest.h>

#include "fairsel/singlemean.hpp"
#include "helpers.hpp"

using namespace fairsel;
using namespace fairsel::testing;

TEST_CASE("bucket grid shapes") {
  SUBCASE("V = 5 at eta = 1.25 needs 8 buckets") {
    const auto grid = make_grid(example26_instance(), rat("1/4"));
    CHECK(grid.K == 8);
    CHECK(grid.lower(1) == Rat(1));
    CHECK(grid.upper(8) == rat_pow(rat("5/4"), 8));
    CHECK(grid.bucket_of(rat("1")) == 1);
    CHECK(grid.bucket_of(rat("5")) == 8);
    CHECK(grid.bucket_of(rat("2")) == 4);  // [125/64, 625/256)
  }
  SUBCASE("degenerate single-value instance") {
    const Instance inst = Instance::from_agents({DiscreteDist::point(rat("7"))});
    const auto grid = make_grid(inst, rat("1/4"));
    CHECK(grid.K == 1);
    CHECK(grid.bucket_of(rat("7")) == 1);
  }
  SUBCASE("exact power of eta") {
    const Instance inst = Instance::from_agents(
        {DiscreteDist::from_pairs({{rat("1"), rat("1/2")}, {rat("125/64"), rat("1/2")}})});
    const auto grid = make_grid(inst, rat("1/4"));
    CHECK(grid.K == 3);
    CHECK(grid.upper(3) == rat("125/64"));
  }
  CHECK_THROWS_AS(make_grid(example26_instance(), rat("0")), ValidationError);
}

TEST_CASE("per-bucket parameters follow the prior-mean cases") {
  const auto dist = DiscreteDist::from_pairs({{rat("1"), rat("1/2")}, {rat("5"), rat("1/2")}});
  const Instance inst = Instance::from_agents({dist, DiscreteDist::point(rat("2"))});

  SUBCASE("prior above the interval: p = 1, Q = beta") {
    // interval [2, 2.2]; prior mean 3 > 2.2
    const auto params = bucket_params(
        Instance::from_agents({dist}), BucketGrid{rat("2"), rat("11/5"), rat("11/10"), 1},
        NumericMode::Exact);
    const auto& ap = params[0][0];
    CHECK(ap.tag == PriorCase::Above);
    CHECK(ap.beta == rat("5/7"));
    CHECK(ap.p == Rat(1));
    CHECK(ap.Q == rat("5/7"));
  }
  SUBCASE("prior inside: reveal nothing") {
    const auto grid = make_grid(inst, rat("1/4"));
    const auto params = bucket_params(inst, grid, NumericMode::Exact);
    // bucket 4 = [125/64, 625/256) contains the point prior 2
    const auto& ap = params[3][1];
    CHECK(ap.tag == PriorCase::Inside);
    CHECK(ap.p == Rat(1));
    CHECK(ap.Q == Rat(1));
    CHECK(ap.y == std::vector<Rat>{Rat(1)});
  }
  SUBCASE("unusable bucket above a deterministic prior") {
    const auto grid = make_grid(inst, rat("1/4"));
    const auto params = bucket_params(inst, grid, NumericMode::Exact);
    // bucket 8 sits above value 2 entirely; the point agent cannot reach it
    const auto& ap = params[7][1];
    CHECK(ap.tag == PriorCase::Below);
    CHECK(ap.beta == Rat(0));
    CHECK(ap.p == Rat(0));
    CHECK(ap.Q == Rat(1));
  }
}

TEST_CASE("worked instance bucket containing the common mean") {
  // recomputed via the maximal-mapping program on [125/64, 625/256]
  const Instance inst = example26_instance();
  const auto grid = make_grid(inst, rat("1/4"));
  const auto params = bucket_params(inst, grid, NumericMode::Exact);
  const auto& stoch = params[3][0];
  CHECK(stoch.tag == PriorCase::Above);
  CHECK(stoch.beta == rat("512/655"));
  CHECK(params[3][1].beta == rat("512/655"));
  CHECK(params[3][2].p == Rat(1));  // deterministic 2 sits inside
  // direct cross-check against the program itself
  const auto sol = solve_maximal_mapping<Rat>(inst.agents[0], grid.lower(4), grid.upper(4));
  CHECK(sol.beta == stoch.beta);
}

TEST_CASE("pmaj network capacities") {
  const Instance inst = example27_instance(5);
  const auto grid = make_grid(inst, rat("1/4"));
  const auto params = bucket_params(inst, grid, NumericMode::Exact);

  SUBCASE("value model: b = m Q / K") {
    std::vector<Rat> Qk, bk;
    const auto net = build_pmaj_network(grid, params, UtilityModel::Value, &Qk, &bk);
    REQUIRE(net.num_middle() == grid.K);
    for (size_t k = 1; k <= grid.K; ++k) {
      CHECK(bk[k - 1] == grid.lower(k) * Qk[k - 1] / int(grid.K));
      if (Qk[k - 1] == 0) CHECK(net.middle_caps[k - 1] == Rat(0));
    }
    // bucket 4 holds every prior mean: Q = 1
    CHECK(Qk[3] == Rat(1));
    CHECK(bk[3] == rat("25/64"));
  }
  SUBCASE("selection model: b is independent of the bucket mean") {
    std::vector<Rat> Qk, bk;
    build_pmaj_network(grid, params, UtilityModel::Selection, &Qk, &bk);
    for (size_t k = 1; k <= grid.K; ++k) CHECK(bk[k - 1] == Qk[k - 1] / int(grid.K));
  }
}

TEST_CASE("realized mappings respect the case structure") {
  std::mt19937_64 rng(95014);
  for (int trial = 0; trial < 60; ++trial) {
    const Instance inst = random_instance(rng, 3, 4, 8);
    const auto grid = make_grid(inst, rat("1/4"));
    const auto params = bucket_params(inst, grid, NumericMode::Exact);
    for (size_t k = 1; k <= grid.K; ++k) {
      for (size_t i = 0; i < inst.num_agents(); ++i) {
        const auto& ap = params[k - 1][i];
        const auto rows = two_signal_rows(inst.agents[i], ap.y, "in", "out");
        const auto posts = posteriors<Rat>(inst.agents[i], rows);
        for (const auto& lp : posts) {
          if (lp.label == "in") {
            CHECK(lp.q == ap.beta);
            CHECK(lp.mu >= grid.lower(k));
            CHECK(lp.mu <= grid.upper(k));
          } else {
            if (ap.tag == PriorCase::Below) CHECK(lp.mu < grid.lower(k));
            if (ap.tag == PriorCase::Above) CHECK(lp.mu > grid.upper(k));
          }
        }
      }
    }
  }
}

TEST_CASE("xhat is a feasible rounding target") {
  std::mt19937_64 rng(60089);
  for (int trial = 0; trial < 20; ++trial) {
    const Instance inst = random_instance(rng, 4, 3, 8);
    const auto build = build_singlemean_policy(inst, rat("1/4"), UtilityModel::Value);
    const auto& plan = build.plan;
    for (size_t k = 0; k < plan.grid.K; ++k) {
      Rat sum = 0;
      for (size_t i = 0; i < inst.num_agents(); ++i) {
        CHECK(plan.xhat[k][i] >= Rat(0));
        CHECK(plan.xhat[k][i] <= plan.params[k][i].p);
        sum += plan.xhat[k][i];
      }
      CHECK(sum <= Rat(1));
    }
  }
}

TEST_CASE("single agent keeps its prior mean at any epsilon") {
  const Instance inst = Instance::from_agents(
      {DiscreteDist::from_pairs({{rat("1"), rat("1/4")}, {rat("6"), rat("3/4")}})});
  for (const char* eps : {"1/4", "1/2", "2"}) {
    const auto build = build_singlemean_policy(inst, rat(eps), UtilityModel::Value);
    EvalOptions opts;
    opts.receiver = ReceiverModel::approx(rat(eps));
    const auto report = evaluate_exact(inst, build.policy, opts);
    CHECK(report.utilities.u[0] == inst.agents[0].mean());
  }
}

TEST_CASE("achieved utilities clear half the majorized flow") {
  std::mt19937_64 rng(777001);
  for (int trial = 0; trial < 12; ++trial) {
    const Instance inst = random_instance(rng, 4, 3, 8);
    for (const UtilityModel model : {UtilityModel::Value, UtilityModel::Selection}) {
      const auto build = build_singlemean_policy(inst, rat("1/4"), model);
      EvalOptions opts;
      opts.receiver = ReceiverModel::approx(rat("1/4"));
      opts.utility = model;
      const auto report = evaluate_exact(inst, build.policy, opts);
      for (size_t i = 0; i < inst.num_agents(); ++i)
        CHECK(report.utilities.u[i] >= build.plan.uhat[i] / 2);
    }
  }
}

TEST_CASE("certificate bounds the prefix ratios") {
  const Instance inst = example26_instance();
  const auto build = build_singlemean_policy(inst, rat("1/4"), UtilityModel::Value);
  EvalOptions opts;
  opts.receiver = ReceiverModel::approx(rat("1/4"));
  const auto report = evaluate_exact(inst, build.policy, opts);
  const auto cert = singlemean_certificate(build.plan, report.utilities);
  CHECK_FALSE(cert.infinite);
  CHECK(cert.max_ratio <= Rat(2));
  CHECK(cert.analytic_bound == Rat(2) * rat("5/4") * int(build.plan.grid.K));
  CHECK(cert.max_ratio <= cert.analytic_bound);
  for (size_t k = 0; k < cert.uhat_prefix.size(); ++k)
    CHECK(cert.achieved_prefix[k] >= cert.uhat_prefix[k] / 2);
  CHECK(cert.factor_rounding == Rat(2));
  CHECK(cert.factor_buckets == build.plan.grid.K);
}

TEST_CASE("single-bucket grid reduces the guarantee to one rounding factor") {
  const Instance inst = Instance::from_agents(
      {DiscreteDist::from_pairs({{rat("1"), rat("1/2")}, {rat("9/8"), rat("1/2")}}),
       DiscreteDist::point(rat("1"))});
  const auto build = build_singlemean_policy(inst, rat("1/4"), UtilityModel::Value);
  CHECK(build.plan.grid.K == 1);
  const auto cert = singlemean_certificate(build.plan, UtilityVector{build.plan.uhat});
  CHECK(cert.analytic_bound == Rat(2) * rat("5/4"));
}

TEST_CASE("the separation family beats full revelation's worst agent") {
  const Instance inst = example27_instance(5);
  // full revelation: the deterministic agent wins only on an all-low draw
  const auto fullrev = evaluate_exact(inst, full_revelation_policy(inst), {});
  CHECK(fullrev.utilities.min() == rat("1/8"));

  const auto build = build_singlemean_policy(inst, rat("1/4"), UtilityModel::Value);
  EvalOptions opts;
  opts.receiver = ReceiverModel::approx(rat("1/4"));
  const auto report = evaluate_exact(inst, build.policy, opts);
  CHECK(report.utilities.min() > rat("1/8"));
}

TEST_CASE("zero-value supports are rejected") {
  const Instance bern = Instance::from_agents(
      {DiscreteDist::from_pairs({{rat("0"), rat("1/2")}, {rat("1"), rat("1/2")}})});
  CHECK_THROWS_AS(build_singlemean_policy(bern, rat("1/4"), UtilityModel::Value),
                  ValidationError);
}
