#include "fairsel/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace fairsel {

namespace {

template <class T>
struct SchemePosteriors {
  std::vector<std::vector<LabelPosterior<T>>> agents;
  uint64_t joint_count(uint64_t budget) const {
    uint64_t count = 1;
    for (const auto& labels : agents) {
      if (labels.empty()) return 0;
      if (count > budget / labels.size() + 1) return budget + 1;
      count *= labels.size();
      if (count > budget) return budget + 1;
    }
    return count;
  }
};

template <class T>
SchemePosteriors<T> scheme_posteriors(const Instance& inst, const SignalingScheme& scheme) {
  SchemePosteriors<T> out;
  out.agents.reserve(inst.num_agents());
  for (size_t i = 0; i < inst.num_agents(); ++i)
    out.agents.push_back(posteriors<T>(inst.agents[i], scheme.mapping.agents[i]));
  return out;
}

/// Walks every joint label combination; fn(prob, means, labels).
template <class T, class Fn>
void enumerate_joint(const SchemePosteriors<T>& posts, Fn&& fn) {
  const size_t n = posts.agents.size();
  std::vector<T> means(n);
  std::vector<std::string> labels(n);
  std::function<void(size_t, const T&)> walk = [&](size_t agent, const T& prob) {
    if (agent == n) {
      fn(prob, means, labels);
      return;
    }
    for (const auto& lp : posts.agents[agent]) {
      means[agent] = lp.mu;
      labels[agent] = lp.label;
      walk(agent + 1, prob * lp.q);
    }
  };
  walk(0, T(1));
}

template <class T>
std::vector<std::vector<T>> per_scheme_utilities(const Instance& inst,
                                                 const SignalingPolicy& policy,
                                                 const EvalOptions& opts) {
  const size_t n = inst.num_agents();
  std::vector<std::vector<T>> result;
  for (const auto& [weight, scheme] : policy.components) {
    auto posts = scheme_posteriors<T>(inst, scheme);
    if (posts.joint_count(opts.budget) > opts.budget)
      throw EvalError("joint signal enumeration exceeds the budget of " +
                      std::to_string(opts.budget));
    std::vector<T> util(n, T(0));
    const T w = num_from_rat<T>(weight);
    enumerate_joint(posts, [&](const T& prob, const std::vector<T>& means,
                               const std::vector<std::string>& labels) {
      if (NumTraits<T>::is_zero(prob)) return;
      const auto eligible = eligible_set(means, opts.receiver);
      const auto selection =
          detail::selection_distribution(scheme.selection, means, labels, eligible);
      for (const auto& [agent, sprob] : selection) {
        const T gain = (opts.utility == UtilityModel::Value) ? means[agent] : T(1);
        util[agent] += w * prob * sprob * gain;
      }
    });
    result.push_back(std::move(util));
  }
  return result;
}

template <class T>
EvalReport exact_impl(const Instance& inst, const SignalingPolicy& policy,
                      const EvalOptions& opts) {
  const size_t n = inst.num_agents();
  auto by_scheme = per_scheme_utilities<T>(inst, policy, opts);
  EvalReport report;
  report.mode = opts.mode;
  report.utility = opts.utility;
  report.welfare_opt = inst.expected_max();
  report.utilities.u.assign(n, Rat(0));
  std::vector<T> totals(n, T(0));
  for (const auto& util : by_scheme) {
    UtilityVector uv;
    uv.u.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      totals[i] += util[i];
      uv.u.push_back(NumTraits<T>::to_rat(util[i]));
    }
    report.per_scheme.push_back(std::move(uv));
  }
  for (size_t i = 0; i < n; ++i) report.utilities.u[i] = NumTraits<T>::to_rat(totals[i]);
  report.total = report.utilities.total();
  return report;
}

}  // namespace

EvalReport evaluate_exact(const Instance& inst, const SignalingPolicy& policy,
                          const EvalOptions& opts) {
  auto violations = validate_policy(inst, policy);
  if (!violations.empty())
    throw ValidationError("invalid policy: " + violations.front() +
                          (violations.size() > 1 ? " (+" + std::to_string(violations.size() - 1) +
                                                       " more)"
                                                 : ""));
  if (opts.mode == NumericMode::Exact) return exact_impl<Rat>(inst, policy, opts);
  return exact_impl<double>(inst, policy, opts);
}

namespace {

struct McSampler {
  std::mt19937_64 rng;
  std::uniform_real_distribution<double> unit{0.0, 1.0};

  explicit McSampler(uint64_t seed) : rng(seed) {}

  double coin() { return unit(rng); }

  size_t pick_weighted(const std::vector<double>& cumulative) {
    const double r = coin();
    for (size_t i = 0; i < cumulative.size(); ++i)
      if (r <= cumulative[i]) return i;
    return cumulative.size() - 1;
  }

  template <class It>
  void shuffle(It begin, It end) {
    std::shuffle(begin, end, rng);
  }
};

struct McScheme {
  // per agent: cumulative value probabilities, per value: cumulative label
  // probabilities and label ids; label id -> (label string, posterior mean)
  struct Agent {
    std::vector<double> value_cum;
    std::vector<std::vector<double>> label_cum;       // [value][choice]
    std::vector<std::vector<size_t>> label_choice;    // [value][choice] -> label id
    std::vector<std::string> label_names;
    std::vector<double> label_mu;
  };
  std::vector<Agent> agents;
  const SignalingScheme* scheme = nullptr;

  // selection constants converted once (the sampling loop stays float-only)
  double lo = 0.0, hi = 0.0;
  std::vector<double> accept_interval;               // ThresholdRoundedOrder
  std::vector<double> levels;                        // RoundedSelection
  std::vector<std::vector<double>> accept_level;     // RoundedSelection [agent][level]
};

McScheme prepare_mc_scheme(const Instance& inst, const SignalingScheme& scheme) {
  McScheme out;
  out.scheme = &scheme;
  out.agents.resize(inst.num_agents());
  for (size_t i = 0; i < inst.num_agents(); ++i) {
    auto& agent = out.agents[i];
    const auto posts = posteriors<double>(inst.agents[i], scheme.mapping.agents[i]);
    for (const auto& lp : posts) {
      agent.label_names.push_back(lp.label);
      agent.label_mu.push_back(lp.mu);
    }
    auto label_id = [&](const std::string& name) {
      for (size_t k = 0; k < agent.label_names.size(); ++k)
        if (agent.label_names[k] == name) return k;
      throw std::logic_error("label vanished between posterior and sampling passes");
    };
    double acc = 0.0;
    for (const auto& [v, p] : inst.agents[i].support) {
      acc += rat_to_double(p);
      agent.value_cum.push_back(acc);
      const MappingRule::Row* row = nullptr;
      for (const auto& r : scheme.mapping.agents[i])
        if (r.value == v) row = &r;
      std::vector<double> cum;
      std::vector<size_t> ids;
      double lacc = 0.0;
      for (const auto& [label, lp] : row->out) {
        if (lp == 0) continue;
        lacc += rat_to_double(lp);
        cum.push_back(lacc);
        ids.push_back(label_id(label));
      }
      agent.label_cum.push_back(std::move(cum));
      agent.label_choice.push_back(std::move(ids));
    }
  }
  if (const auto* tro = std::get_if<ThresholdRoundedOrder>(&scheme.selection)) {
    out.lo = rat_to_double(tro->lo);
    out.hi = rat_to_double(tro->hi);
    for (const Rat& a : tro->accept) out.accept_interval.push_back(rat_to_double(a));
  } else if (const auto* rs = std::get_if<RoundedSelection>(&scheme.selection)) {
    for (const Rat& v : rs->levels) out.levels.push_back(rat_to_double(v));
    for (const auto& row : rs->accept) {
      std::vector<double> r;
      for (const Rat& a : row) r.push_back(rat_to_double(a));
      out.accept_level.push_back(std::move(r));
    }
  }
  return out;
}

size_t sample_selection(const McScheme& mc, const std::vector<double>& means,
                        const std::vector<std::string>& labels,
                        const std::vector<size_t>& eligible, McSampler& sampler) {
  const size_t n = means.size();
  std::vector<bool> is_eligible(n, false);
  for (size_t i : eligible) is_eligible[i] = true;
  auto argmax_lowest = [&]() {
    size_t best = 0;
    for (size_t i = 1; i < n; ++i)
      if (means[i] > means[best]) best = i;
    return best;
  };
  auto require = [&](size_t agent) {
    if (!is_eligible[agent])
      throw EvalError("selection rule nominates ineligible agent " + std::to_string(agent));
    return agent;
  };

  struct Visitor {
    const McScheme& mc;
    const std::vector<double>& means;
    const std::vector<std::string>& labels;
    const std::vector<size_t>& eligible;
    const std::vector<bool>& is_eligible;
    McSampler& sampler;
    decltype(argmax_lowest)& argmax;
    decltype(require)& require_eligible;
    size_t n;

    size_t operator()(const RankingSelection& s) const {
      for (size_t agent : s.order)
        if (is_eligible[agent]) return agent;
      return eligible.front();
    }
    size_t operator()(const ThresholdRoundedOrder&) const {
      const double lo = mc.lo, hi = mc.hi;
      double best = *std::max_element(means.begin(), means.end());
      if (best > hi && !NumTraits<double>::eq(best, hi))
        return require_eligible(argmax());
      std::vector<size_t> members;
      for (size_t i = 0; i < n; ++i) {
        const bool in_lo = means[i] > lo || NumTraits<double>::eq(means[i], lo);
        const bool in_hi = means[i] < hi || NumTraits<double>::eq(means[i], hi);
        if (in_lo && in_hi) members.push_back(i);
      }
      sampler.shuffle(members.begin(), members.end());
      for (size_t i : members)
        if (sampler.coin() < mc.accept_interval[i]) return require_eligible(i);
      return require_eligible(argmax());
    }
    size_t operator()(const ExplicitTableSelection& s) const {
      auto it = s.rows.find(labels);
      if (it == s.rows.end()) {
        const size_t idx = static_cast<size_t>(sampler.coin() * eligible.size());
        return eligible[std::min(idx, eligible.size() - 1)];
      }
      const double r = sampler.coin();
      double acc = 0.0;
      for (const auto& [agent, prob] : it->second) {
        acc += rat_to_double(prob);
        if (r <= acc) return require_eligible(agent);
      }
      return require_eligible(it->second.back().first);
    }
    size_t operator()(const LargestIndexThenPrefixMax& s) const {
      size_t best_high = SIZE_MAX;
      for (size_t i : eligible)
        if (i >= s.prefix_len && labels[i] == s.high_label)
          if (best_high == SIZE_MAX || i > best_high) best_high = i;
      if (best_high != SIZE_MAX) return best_high;
      size_t pick = SIZE_MAX;
      for (size_t i : eligible) {
        if (i >= s.prefix_len) continue;
        if (pick == SIZE_MAX || means[i] > means[pick]) pick = i;
      }
      return pick == SIZE_MAX ? eligible.front() : pick;
    }
    size_t operator()(const RoundedSelection&) const {
      const double best = *std::max_element(means.begin(), means.end());
      size_t level = SIZE_MAX;
      for (size_t j = 0; j < mc.levels.size(); ++j)
        if (NumTraits<double>::eq(mc.levels[j], best)) level = j;
      if (level == SIZE_MAX)
        throw EvalError("rounded selection: top posterior mean matches no value level");
      std::vector<size_t> members;
      for (size_t i = 0; i < n; ++i)
        if (NumTraits<double>::eq(means[i], best)) members.push_back(i);
      const size_t lowest = *std::min_element(members.begin(), members.end());
      sampler.shuffle(members.begin(), members.end());
      for (size_t i : members)
        if (sampler.coin() < mc.accept_level[i][level]) return require_eligible(i);
      return require_eligible(lowest);
    }
  };
  return std::visit(
      Visitor{mc, means, labels, eligible, is_eligible, sampler, argmax_lowest, require, n},
      mc.scheme->selection);
}

}  // namespace

EvalReport evaluate_mc(const Instance& inst, const SignalingPolicy& policy,
                       const EvalOptions& opts, uint64_t samples, uint64_t seed) {
  if (samples == 0) throw ValidationError("Monte Carlo evaluation needs samples >= 1");
  auto violations = validate_policy(inst, policy);
  if (!violations.empty()) throw ValidationError("invalid policy: " + violations.front());

  const size_t n = inst.num_agents();
  std::vector<McScheme> schemes;
  std::vector<double> scheme_cum;
  double acc = 0.0;
  for (const auto& [w, scheme] : policy.components) {
    schemes.push_back(prepare_mc_scheme(inst, scheme));
    acc += rat_to_double(w);
    scheme_cum.push_back(acc);
  }

  McSampler sampler(seed);
  std::vector<double> sum(n, 0.0), sumsq(n, 0.0);
  std::vector<double> means(n);
  std::vector<std::string> labels(n);
  std::vector<bool> needs_labels;
  for (const auto& [w, scheme] : policy.components)
    needs_labels.push_back(
        std::holds_alternative<ExplicitTableSelection>(scheme.selection) ||
        std::holds_alternative<LargestIndexThenPrefixMax>(scheme.selection));
  for (uint64_t it = 0; it < samples; ++it) {
    const size_t s = sampler.pick_weighted(scheme_cum);
    const McScheme& mc = schemes[s];
    for (size_t i = 0; i < n; ++i) {
      const auto& agent = mc.agents[i];
      const size_t v = sampler.pick_weighted(agent.value_cum);
      const size_t c = sampler.pick_weighted(agent.label_cum[v]);
      const size_t label = agent.label_choice[v][c];
      means[i] = agent.label_mu[label];
      if (needs_labels[s]) labels[i] = agent.label_names[label];
    }
    const auto eligible = eligible_set(means, opts.receiver);
    const size_t chosen = sample_selection(mc, means, labels, eligible, sampler);
    const double gain = (opts.utility == UtilityModel::Value) ? means[chosen] : 1.0;
    sum[chosen] += gain;
    sumsq[chosen] += gain * gain;
  }

  EvalReport report;
  report.mode = NumericMode::Float64;
  report.utility = opts.utility;
  report.welfare_opt = inst.expected_max();
  report.samples = samples;
  report.seed = seed;
  report.utilities.u.resize(n);
  report.std_errors.resize(n);
  const double N = static_cast<double>(samples);
  for (size_t i = 0; i < n; ++i) {
    const double mean = sum[i] / N;
    report.utilities.u[i] = rat_from_double(mean);
    const double var = std::max(0.0, sumsq[i] / N - mean * mean);
    report.std_errors[i] = std::sqrt(var / N);
  }
  report.total = report.utilities.total();
  return report;
}

BucketContributions bucket_contributions(const Instance& inst, const SignalingPolicy& policy,
                                         const Rat& epsilon, const ReceiverModel& receiver) {
  if (!inst.all_positive_support())
    throw ValidationError("bucket contributions need strictly positive support values");
  auto violations = validate_policy(inst, policy);
  if (!violations.empty()) throw ValidationError("invalid policy: " + violations.front());

  BucketContributions out;
  out.grid = make_grid(inst, epsilon);
  const size_t n = inst.num_agents();
  out.c.assign(n, std::vector<Rat>(out.grid.K, Rat(0)));

  EvalOptions opts;
  opts.receiver = receiver;
  for (const auto& [weight, scheme] : policy.components) {
    auto posts = scheme_posteriors<Rat>(inst, scheme);
    if (posts.joint_count(opts.budget) > opts.budget)
      throw EvalError("joint signal enumeration exceeds the budget");
    enumerate_joint(posts, [&](const Rat& prob, const std::vector<Rat>& means,
                               const std::vector<std::string>& labels) {
      if (prob == 0) return;
      const auto eligible = eligible_set(means, receiver);
      const auto selection =
          detail::selection_distribution(scheme.selection, means, labels, eligible);
      for (const auto& [agent, sprob] : selection) {
        const size_t k = out.grid.bucket_of(means[agent]);
        out.c[agent][k - 1] += weight * prob * sprob * means[agent];
      }
    });
  }
  return out;
}

AlphaResult audit_alpha(const UtilityVector& u, const UtilityVector& reference) {
  if (u.size() != reference.size())
    throw ValidationError("audit_alpha needs equal-length utility vectors");
  const auto pu = u.sorted_prefix_sums();
  const auto pr = reference.sorted_prefix_sums();
  AlphaResult out;
  out.alpha = 1;
  out.worst_k = 0;
  bool any = false;
  for (size_t k = 1; k <= u.size(); ++k) {
    const Rat& num = pr[k - 1];
    const Rat& den = pu[k - 1];
    if (den == 0) {
      if (num > 0) return {true, Rat(0), k};
      continue;  // both prefixes vanish: no constraint from this k
    }
    const Rat ratio = num / den;
    if (!any || ratio > out.alpha) {
      out.alpha = ratio;
      out.worst_k = k;
      any = true;
    }
  }
  return out;
}

}  // namespace fairsel
