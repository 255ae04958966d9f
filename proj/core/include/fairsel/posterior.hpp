#pragma once

#include <string>
#include <vector>

#include "fairsel/numeric.hpp"
#include "fairsel/policy.hpp"

namespace fairsel {

enum class ReceiverMode { Exact, Approx };

/// Exact welfare maximizer, or the (1+epsilon)-approximate one that may
/// select any agent whose posterior mean is within a (1+epsilon) factor of
/// the maximum.
struct ReceiverModel {
  ReceiverMode mode = ReceiverMode::Exact;
  Rat epsilon = 0;

  static ReceiverModel exact() { return {ReceiverMode::Exact, Rat(0)}; }
  static ReceiverModel approx(Rat eps) {
    if (eps <= 0) throw ValidationError("approximate receiver needs epsilon > 0");
    return {ReceiverMode::Approx, std::move(eps)};
  }
};

template <class T>
struct LabelPosterior {
  std::string label;
  T q;   // probability this label is emitted
  T mu;  // posterior mean
  std::vector<std::pair<T, T>> posterior;  // (value, conditional probability)
};

/// Bayes update of one agent's prior under its mapping row.
/// Labels with q = 0 are omitted; label order follows first appearance when
/// walking rows in support order.
template <class T>
std::vector<LabelPosterior<T>> posteriors(const DiscreteDist& dist,
                                          const std::vector<MappingRule::Row>& rows) {
  std::vector<LabelPosterior<T>> out;
  auto slot = [&](const std::string& label) -> LabelPosterior<T>& {
    for (auto& lp : out)
      if (lp.label == label) return lp;
    out.push_back({label, T(0), T(0), {}});
    return out.back();
  };
  for (const auto& [value, prob] : dist.support) {
    const MappingRule::Row* row = nullptr;
    for (const auto& r : rows)
      if (r.value == value) {
        row = &r;
        break;
      }
    if (row == nullptr) throw ValidationError("mapping row missing for a support value");
    const T pv = num_from_rat<T>(prob);
    const T v = num_from_rat<T>(value);
    for (const auto& [label, lp] : row->out) {
      if (lp == 0) continue;
      auto& bucket = slot(label);
      const T mass = pv * num_from_rat<T>(lp);
      bucket.q += mass;
      bucket.mu += v * mass;  // accumulate v*mass; divide once q is final
      bucket.posterior.emplace_back(v, mass);
    }
  }
  // normalize, drop q == 0 labels
  std::vector<LabelPosterior<T>> dense;
  for (auto& lp : out) {
    if (NumTraits<T>::is_zero(lp.q)) continue;
    lp.mu = lp.mu / lp.q;
    for (auto& [v, m] : lp.posterior) m = m / lp.q;
    dense.push_back(std::move(lp));
  }
  return dense;
}

/// Receiver-eligible agents. Exact mode: the argmax set. Approx(eps):
/// {i : mu_i >= max_j mu_j / (1+eps)}.
template <class T>
std::vector<size_t> eligible_set(const std::vector<T>& mus, const ReceiverModel& model) {
  if (mus.empty()) throw ValidationError("eligible_set needs at least one posterior mean");
  T best = mus[0];
  for (const T& m : mus)
    if (m > best) best = m;
  std::vector<size_t> out;
  if (model.mode == ReceiverMode::Exact) {
    for (size_t i = 0; i < mus.size(); ++i)
      if (NumTraits<T>::eq(mus[i], best) || mus[i] >= best) out.push_back(i);
  } else {
    const T one_plus_eps = num_from_rat<T>(Rat(1) + model.epsilon);
    for (size_t i = 0; i < mus.size(); ++i) {
      const T scaled = mus[i] * one_plus_eps;
      if (scaled >= best || NumTraits<T>::eq(scaled, best)) out.push_back(i);
    }
  }
  return out;
}

}  // namespace fairsel
