#include "fairsel/lowerbound.hpp"

#include <cmath>

namespace fairsel {

Instance make_lb_instance(size_t n) {
  if (n < 1) throw ValidationError("family needs n >= 1");
  std::vector<DiscreteDist> agents;
  agents.push_back(DiscreteDist::point(Rat(2)));
  for (size_t i = 2; i <= n; ++i) {
    const Rat hi_prob(1, static_cast<long long>(i));
    agents.push_back(DiscreteDist::from_pairs(
        {{Rat(1), Rat(1) - hi_prob}, {Rat(static_cast<long long>(i + 1)), hi_prob}}));
  }
  return Instance::from_agents(std::move(agents));
}

Rat harmonic_tail(size_t n, size_t k) {
  Rat h = 0;
  for (size_t i = k; i <= n; ++i) h += Rat(1, static_cast<long long>(i + 1));
  return h;
}

Rat sk_signal_prob(size_t n, size_t k, size_t i) {
  if (!(k < i && i <= n)) throw ValidationError("x_i is defined for k < i <= n");
  const Rat num(static_cast<long long>(i), static_cast<long long>(i + 1));
  const Rat den = Rat(static_cast<long long>(k), static_cast<long long>(k + 1)) +
                  harmonic_tail(n, k + 1) - harmonic_tail(n, i + 1);
  return num / den;
}

SignalingPolicy build_sk_policy(size_t n, size_t k) {
  if (k < 1 || k > n) throw ValidationError("S_k needs 1 <= k <= n");
  const Instance inst = make_lb_instance(n);
  MappingRule mapping;
  mapping.agents.reserve(n);
  for (size_t i = 1; i <= n; ++i) {
    const auto& dist = inst.agents[i - 1];
    std::vector<MappingRule::Row> rows;
    if (i <= k) {
      for (const auto& [v, p] : dist.support) rows.push_back({v, {{value_label(v), Rat(1)}}});
    } else {
      const Rat x = sk_signal_prob(n, k, i);
      rows.push_back({Rat(1), {{"lo", Rat(1)}}});
      MappingRule::Row high{Rat(static_cast<long long>(i + 1)), {}};
      if (x > 0) high.out.emplace_back("hi", x);
      if (x < 1) high.out.emplace_back("lo", Rat(1) - x);
      rows.push_back(std::move(high));
    }
    mapping.agents.push_back(std::move(rows));
  }
  SignalingPolicy policy =
      SignalingPolicy::single({std::move(mapping), LargestIndexThenPrefixMax{k, "hi"}});
  return policy;
}

UtilityVector sk_utilities_closed_form(size_t n, size_t k) {
  if (k < 1 || k > n) throw ValidationError("S_k needs 1 <= k <= n");
  const Rat denom = Rat(static_cast<long long>(k), static_cast<long long>(k + 1)) +
                    harmonic_tail(n, k + 1);
  UtilityVector out;
  out.u.reserve(n);
  for (size_t j = 1; j <= n; ++j) {
    if (j <= k) {
      out.u.push_back(Rat(static_cast<long long>(j + 1), static_cast<long long>(k + 1)) /
                      denom);
    } else {
      out.u.push_back(Rat(1) / denom);
    }
  }
  return out;
}

Rat lb_prefix_bound(size_t n, size_t k) {
  return Rat(static_cast<long long>(k + 1), 2) / (Rat(1) + harmonic_tail(n, k + 1));
}

double lb_floor(size_t n) {
  return std::log(1.0 + std::log(1.0 + static_cast<double>(n))) / 3.0;
}

LbAudit lb_audit(size_t n, const UtilityVector& utilities) {
  if (utilities.size() != n) throw ValidationError("utility vector length differs from n");
  LbAudit out;
  out.floor = lb_floor(n);
  const auto prefixes = utilities.sorted_prefix_sums();
  out.alpha.alpha = 0;
  bool any = false;
  for (size_t k = 1; k <= n; ++k) {
    const Rat rk = lb_prefix_bound(n, k);
    out.rows.push_back({k, rk, prefixes[k - 1]});
    if (prefixes[k - 1] == 0) {
      if (rk > 0) {
        out.alpha.infinite = true;
        out.alpha.worst_k = k;
      }
      continue;
    }
    const Rat ratio = rk / prefixes[k - 1];
    if (!any || ratio > out.alpha.alpha) {
      out.alpha.alpha = ratio;
      out.alpha.worst_k = k;
      any = true;
    }
  }
  return out;
}

}  // namespace fairsel
