#include "fairsel/fullrev.hpp"

namespace fairsel {

FlowNetwork bernoulli_subset_network(const Instance& inst) {
  const auto shape = bernoulli_shape(inst);
  const size_t n = shape.mu.size();
  if (n > 20) throw ValidationError("subset network supports up to 20 agents");
  FlowNetwork net;
  net.num_sinks = n;
  const uint32_t full = (1u << n) - 1u;
  for (uint32_t mask = 0; mask <= full; ++mask) {
    Rat cap = 1;
    for (size_t i = 0; i < n; ++i)
      cap *= (mask & (1u << i)) ? shape.mu[i] : Rat(1) - shape.mu[i];
    net.add_middle(cap);
    for (size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) net.add_arc(mask, i, cap);  // node cap already binds
  }
  return net;
}

BernoulliShape bernoulliShapeError() {
  throw ValidationError("instance is not Bernoulli on a common {0, c} support");
}

BernoulliShape bernoulli_shape(const Instance& inst) {
  BernoulliShape shape;
  shape.scale = 0;
  for (const auto& d : inst.agents) {
    const auto view = d.as_bernoulli();
    if (!view.ok) bernoulliShapeError();
    if (view.scale > 0) {
      if (shape.scale == 0)
        shape.scale = view.scale;
      else if (shape.scale != view.scale)
        bernoulliShapeError();
    }
    shape.mu.push_back(view.mu);
  }
  if (shape.scale == 0) bernoulliShapeError();
  return shape;
}

BernoulliBuild build_bernoulli_policy(const Instance& inst) {
  BernoulliBuild out;
  const auto shape = bernoulli_shape(inst);
  out.scale = shape.scale;
  out.spec = PolymatroidSpec{shape.mu};
  out.lex_point = polymatroid_lex_point(out.spec);
  out.mixture = decompose_to_rankings(out.spec, out.lex_point);
  const MappingRule mapping = MappingRule::full_revelation(inst);
  for (const auto& [weight, order] : out.mixture.atoms)
    out.policy.components.emplace_back(weight,
                                       SignalingScheme{mapping, RankingSelection{order}});
  return out;
}

FullRevNetwork fullrev_network(const Instance& inst) {
  FullRevNetwork out;
  auto& par = out.params;
  par.levels = inst.value_levels();
  const size_t n = inst.num_agents();
  const size_t m = par.levels.size();
  par.z.resize(m);
  par.b.resize(m);
  par.p.assign(n, std::vector<Rat>(m, Rat(0)));
  out.net.num_sinks = n;
  for (size_t j = 0; j < m; ++j) {
    const Rat& v = par.levels[j];
    Rat z = 1;
    for (const auto& d : inst.agents) z *= d.cdf(v);
    par.z[j] = z;
    par.b[j] = z * v;
    out.net.add_middle(par.b[j]);
    for (size_t i = 0; i < n; ++i) {
      const Rat cdf = inst.agents[i].cdf(v);
      if (cdf == 0) continue;
      Rat point = 0;
      for (const auto& [val, prob] : inst.agents[i].support)
        if (val == v) point = prob;
      par.p[i][j] = point / cdf;
      const Rat cap = par.p[i][j] * par.b[j];
      if (cap > 0) out.net.add_arc(j, i, cap);
    }
  }
  return out;
}

namespace {

template <class T>
void solve_twomaj(const FullRevNetwork& relax, TwoMajBuild& out) {
  auto flow = lex_optimal_flow<T>(relax.net);
  const size_t n = relax.net.num_sinks;
  const size_t m = relax.params.levels.size();
  out.flow.f.resize(n);
  out.flow.certificate.resize(n);
  out.flow.y.assign(m, std::vector<Rat>(n, Rat(0)));
  for (size_t i = 0; i < n; ++i) out.flow.f[i] = NumTraits<T>::to_rat(flow.f[i]);
  for (size_t i = 0; i < n; ++i)
    out.flow.certificate[i] = NumTraits<T>::to_rat(flow.certificate[i]);
  out.x.assign(n, std::vector<Rat>(m, Rat(0)));
  for (size_t j = 0; j < m; ++j) {
    for (size_t i = 0; i < n; ++i) {
      out.flow.y[j][i] = NumTraits<T>::to_rat(flow.y[j][i]);
      if (relax.params.b[j] > 0) out.x[i][j] = out.flow.y[j][i] / relax.params.b[j];
    }
  }
}

}  // namespace

TwoMajBuild build_fullrev_twomaj_policy(const Instance& inst, NumericMode mode) {
  TwoMajBuild out;
  out.relaxation = fullrev_network(inst);
  if (mode == NumericMode::Exact)
    solve_twomaj<Rat>(out.relaxation, out);
  else
    solve_twomaj<double>(out.relaxation, out);

  const size_t n = inst.num_agents();
  const size_t m = out.relaxation.params.levels.size();
  RoundedSelection sel;
  sel.levels = out.relaxation.params.levels;
  sel.accept.assign(n, std::vector<Rat>(m, Rat(0)));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < m; ++j) {
      const Rat& pij = out.relaxation.params.p[i][j];
      if (pij == 0) continue;  // no 0/0
      Rat a = out.x[i][j] / pij;
      if (a > 1) a = 1;
      if (a < 0) a = 0;
      sel.accept[i][j] = a;
    }
  }
  out.policy =
      SignalingPolicy::single({MappingRule::full_revelation(inst), std::move(sel)});
  return out;
}

}  // namespace fairsel
