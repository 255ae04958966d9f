#include "fairsel/singlemean.hpp"

namespace fairsel {

namespace {

template <class T>
AgentBucketParams agent_bucket_params(const DiscreteDist& dist, const Rat& lo, const Rat& hi) {
  AgentBucketParams out;
  const Rat prior = dist.mean();
  if (lo <= prior && prior <= hi) {
    // revealing nothing already lands the mean inside the interval
    out.tag = PriorCase::Inside;
    out.beta = 1;
    out.p = 1;
    out.Q = 1;
    out.y.reserve(dist.support.size());
    for (const auto& [v, p] : dist.support) out.y.push_back(p);
    return out;
  }
  auto sol = solve_maximal_mapping<T>(dist, num_from_rat<T>(lo), num_from_rat<T>(hi));
  out.beta = NumTraits<T>::to_rat(sol.beta);
  if (out.beta > 1) out.beta = 1;
  if (out.beta < 0) out.beta = 0;
  out.y.reserve(sol.y.size());
  for (const auto& yv : sol.y) out.y.push_back(NumTraits<T>::to_rat(yv));
  if (prior < lo) {
    out.tag = PriorCase::Below;
    out.Q = 1;
    out.p = out.beta;
  } else {
    out.tag = PriorCase::Above;
    out.p = 1;
    out.Q = out.beta;
  }
  return out;
}

}  // namespace

std::vector<std::vector<AgentBucketParams>> bucket_params(const Instance& inst,
                                                          const BucketGrid& grid,
                                                          NumericMode mode) {
  std::vector<std::vector<AgentBucketParams>> out(grid.K);
  for (size_t k = 1; k <= grid.K; ++k) {
    const Rat lo = grid.lower(k);
    const Rat hi = grid.upper(k);
    out[k - 1].reserve(inst.num_agents());
    for (const auto& dist : inst.agents) {
      out[k - 1].push_back(mode == NumericMode::Exact
                               ? agent_bucket_params<Rat>(dist, lo, hi)
                               : agent_bucket_params<double>(dist, lo, hi));
    }
  }
  return out;
}

FlowNetwork build_pmaj_network(const BucketGrid& grid,
                               const std::vector<std::vector<AgentBucketParams>>& params,
                               UtilityModel utility, std::vector<Rat>* Qk_out,
                               std::vector<Rat>* bk_out) {
  FlowNetwork net;
  net.num_sinks = params.empty() ? 0 : params.front().size();
  std::vector<Rat> Qk(grid.K), bk(grid.K);
  for (size_t k = 1; k <= grid.K; ++k) {
    Rat Q = 1;
    for (const auto& ap : params[k - 1]) Q *= ap.Q;
    Qk[k - 1] = Q;
    bk[k - 1] = (utility == UtilityModel::Value) ? Rat(grid.lower(k) * Q / int(grid.K))
                                                 : Rat(Q / int(grid.K));
    net.add_middle(bk[k - 1]);
    for (size_t i = 0; i < net.num_sinks; ++i) {
      const Rat cap = params[k - 1][i].p * bk[k - 1];
      if (cap > 0) net.add_arc(k - 1, i, cap);
    }
  }
  if (Qk_out) *Qk_out = std::move(Qk);
  if (bk_out) *bk_out = std::move(bk);
  return net;
}

namespace {

template <class T>
void solve_xhat(SingleMeanPlan& plan) {
  auto flow = lex_optimal_flow<T>(plan.net);
  const size_t n = plan.net.num_sinks;
  plan.uhat.resize(n);
  for (size_t i = 0; i < n; ++i) plan.uhat[i] = NumTraits<T>::to_rat(flow.f[i]);
  plan.xhat.assign(plan.grid.K, std::vector<Rat>(n, Rat(0)));
  for (size_t k = 0; k < plan.grid.K; ++k) {
    if (plan.bk[k] == 0) continue;
    for (size_t i = 0; i < n; ++i) {
      Rat x = NumTraits<T>::to_rat(flow.y[k][i]) / plan.bk[k];
      const Rat& p = plan.params[k][i].p;
      if (x > p) x = p;  // float-mode rounding guard
      if (x < 0) x = 0;
      plan.xhat[k][i] = x;
    }
  }
}

}  // namespace

SingleMeanBuild build_singlemean_policy(const Instance& inst, const Rat& epsilon,
                                        UtilityModel utility, NumericMode mode) {
  if (!inst.all_positive_support())
    throw ValidationError("the Single Mean policy needs strictly positive support values");
  SingleMeanBuild out;
  auto& plan = out.plan;
  plan.grid = make_grid(inst, epsilon);
  plan.utility = utility;
  plan.mode = mode;
  plan.params = bucket_params(inst, plan.grid, mode);
  plan.net = build_pmaj_network(plan.grid, plan.params, utility, &plan.Qk, &plan.bk);
  if (mode == NumericMode::Exact)
    solve_xhat<Rat>(plan);
  else
    solve_xhat<double>(plan);

  const size_t n = inst.num_agents();
  const Rat weight = Rat(1) / int(plan.grid.K);
  for (size_t k = 1; k <= plan.grid.K; ++k) {
    MappingRule mapping;
    mapping.agents.reserve(n);
    for (size_t i = 0; i < n; ++i)
      mapping.agents.push_back(
          two_signal_rows(inst.agents[i], plan.params[k - 1][i].y, "in", "out"));
    ThresholdRoundedOrder sel;
    sel.lo = plan.grid.lower(k);
    sel.hi = plan.grid.upper(k);
    sel.accept.assign(n, Rat(0));
    for (size_t i = 0; i < n; ++i) {
      const Rat& p = plan.params[k - 1][i].p;
      if (p == 0) continue;
      Rat a = plan.xhat[k - 1][i] / p;
      if (a > 1) a = 1;
      sel.accept[i] = a;
    }
    out.policy.components.emplace_back(weight,
                                       SignalingScheme{std::move(mapping), std::move(sel)});
  }
  return out;
}

SingleMeanCertificate singlemean_certificate(const SingleMeanPlan& plan,
                                             const UtilityVector& achieved) {
  SingleMeanCertificate cert;
  UtilityVector uhat{plan.uhat};
  cert.uhat_prefix = uhat.sorted_prefix_sums();
  cert.achieved_prefix = achieved.sorted_prefix_sums();
  cert.max_ratio = 0;
  for (size_t k = 0; k < cert.uhat_prefix.size(); ++k) {
    if (cert.achieved_prefix[k] == 0) {
      if (cert.uhat_prefix[k] > 0) cert.infinite = true;
      continue;
    }
    const Rat ratio = cert.uhat_prefix[k] / cert.achieved_prefix[k];
    if (ratio > cert.max_ratio) cert.max_ratio = ratio;
  }
  cert.factor_interval = plan.grid.eta;
  cert.factor_receiver = plan.grid.eta;
  cert.factor_rounding = 2;
  cert.factor_buckets = plan.grid.K;
  cert.analytic_bound = Rat(2) * plan.grid.eta * int(plan.grid.K);
  return cert;
}

}  // namespace fairsel
