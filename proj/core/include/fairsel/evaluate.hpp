#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fairsel/bucket_grid.hpp"
#include "fairsel/posterior.hpp"

namespace fairsel {

enum class UtilityModel { Value, Selection };

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EvalOptions {
  ReceiverModel receiver = ReceiverModel::exact();
  UtilityModel utility = UtilityModel::Value;
  NumericMode mode = NumericMode::Exact;
  uint64_t budget = 10'000'000;  // joint label combinations per scheme
};

/// Exact or Monte Carlo evaluation result. Values are stored exactly; in
/// float mode they are the (exactly represented) doubles the run produced.
struct EvalReport {
  NumericMode mode = NumericMode::Exact;
  UtilityModel utility = UtilityModel::Value;
  UtilityVector utilities;
  Rat total;
  Rat welfare_opt;
  std::vector<UtilityVector> per_scheme;  // weighted contribution per component

  // Monte Carlo extras (samples == 0 for exact runs)
  uint64_t samples = 0;
  uint64_t seed = 0;
  std::vector<double> std_errors;
};

/// Contribution of bucket I_k to each agent's utility (value model).
struct BucketContributions {
  BucketGrid grid;
  std::vector<std::vector<Rat>> c;  // [agent][bucket 0..K-1]
};

struct AlphaResult {
  bool infinite = false;
  Rat alpha;        // meaningful when !infinite
  size_t worst_k = 0;  // 1-indexed prefix attaining the maximum
};

namespace detail {

/// Pr[first acceptance by each member] for a uniformly random processing
/// order with independent acceptance probabilities, via elementary symmetric
/// polynomials; last entry convention: Pr[nobody accepts] = prod(1 - a).
template <class T>
std::vector<T> random_order_first_accept(const std::vector<T>& a) {
  const size_t s = a.size();
  std::vector<T> out(s, T(0));
  if (s == 0) return out;
  // factorial weights w_t = t! (s-1-t)! / s!
  std::vector<T> w(s);
  {
    std::vector<T> fact(s + 1);
    fact[0] = T(1);
    for (size_t i = 1; i <= s; ++i) fact[i] = fact[i - 1] * T(static_cast<int>(i));
    for (size_t t = 0; t < s; ++t) w[t] = fact[t] * fact[s - 1 - t] / fact[s];
  }
  for (size_t i = 0; i < s; ++i) {
    // elementary symmetric polynomials of {1 - a_j : j != i}
    std::vector<T> e(s, T(0));
    e[0] = T(1);
    size_t used = 0;
    for (size_t j = 0; j < s; ++j) {
      if (j == i) continue;
      const T v = T(1) - a[j];
      for (size_t t = used + 2; t-- > 1;) e[t] += e[t - 1] * v;
      ++used;
    }
    T sum = T(0);
    for (size_t t = 0; t < s; ++t) sum += w[t] * e[t];
    out[i] = a[i] * sum;
  }
  return out;
}

template <class T>
T nobody_accepts(const std::vector<T>& a) {
  T prod = T(1);
  for (const T& ai : a) prod *= (T(1) - ai);
  return prod;
}

/// Distribution over selected agents for one joint signal, or an EvalError
/// when the rule nominates an agent outside the receiver-eligible set.
template <class T>
std::vector<std::pair<size_t, T>> selection_distribution(
    const SelectionRule& rule, const std::vector<T>& means,
    const std::vector<std::string>& labels, const std::vector<size_t>& eligible) {
  const size_t n = means.size();
  std::vector<bool> is_eligible(n, false);
  for (size_t i : eligible) is_eligible[i] = true;

  auto argmax_lowest_index = [&]() {
    size_t best = 0;
    for (size_t i = 1; i < n; ++i)
      if (means[i] > means[best]) best = i;
    return best;
  };
  auto require_eligible = [&](size_t agent) {
    if (!is_eligible[agent])
      throw EvalError("selection rule nominates ineligible agent " + std::to_string(agent));
  };
  auto uniform_over_eligible = [&]() {
    std::vector<std::pair<size_t, T>> out;
    const T share = T(1) / T(static_cast<int>(eligible.size()));
    for (size_t i : eligible) out.emplace_back(i, share);
    return out;
  };

  struct Visitor {
    const std::vector<T>& means;
    const std::vector<std::string>& labels;
    const std::vector<size_t>& eligible;
    const std::vector<bool>& is_eligible;
    decltype(argmax_lowest_index)& argmax;
    decltype(require_eligible)& require;
    decltype(uniform_over_eligible)& uniform;
    size_t n;

    std::vector<std::pair<size_t, T>> operator()(const RankingSelection& s) const {
      for (size_t agent : s.order) {
        if (is_eligible[agent]) return {{agent, T(1)}};
      }
      return uniform();  // unreachable for valid permutations
    }

    std::vector<std::pair<size_t, T>> operator()(const ThresholdRoundedOrder& s) const {
      const T lo = num_from_rat<T>(s.lo), hi = num_from_rat<T>(s.hi);
      T best = means[0];
      for (const T& m : means) best = std::max(best, m);
      if (best > hi && !NumTraits<T>::eq(best, hi)) {
        const size_t pick = argmax();
        require(pick);
        return {{pick, T(1)}};
      }
      std::vector<size_t> members;
      std::vector<T> accept;
      for (size_t i = 0; i < n; ++i) {
        const bool in_lo = means[i] > lo || NumTraits<T>::eq(means[i], lo);
        const bool in_hi = means[i] < hi || NumTraits<T>::eq(means[i], hi);
        if (in_lo && in_hi) {
          members.push_back(i);
          accept.push_back(num_from_rat<T>(s.accept[i]));
        }
      }
      std::vector<std::pair<size_t, T>> out;
      T leftover = T(1);
      if (!members.empty()) {
        auto first = random_order_first_accept(accept);
        for (size_t t = 0; t < members.size(); ++t) {
          if (NumTraits<T>::is_zero(first[t])) continue;
          require(members[t]);
          out.emplace_back(members[t], first[t]);
        }
        leftover = nobody_accepts(accept);
      }
      if (!NumTraits<T>::is_zero(leftover)) {
        const size_t pick = argmax();
        require(pick);
        out.emplace_back(pick, leftover);
      }
      return out;
    }

    std::vector<std::pair<size_t, T>> operator()(const ExplicitTableSelection& s) const {
      auto it = s.rows.find(labels);
      if (it == s.rows.end()) return uniform();
      std::vector<std::pair<size_t, T>> out;
      for (const auto& [agent, prob] : it->second) {
        if (prob == 0) continue;
        require(agent);
        out.emplace_back(agent, num_from_rat<T>(prob));
      }
      return out;
    }

    std::vector<std::pair<size_t, T>> operator()(const LargestIndexThenPrefixMax& s) const {
      size_t best_high = SIZE_MAX;
      for (size_t i : eligible)
        if (i >= s.prefix_len && labels[i] == s.high_label)
          if (best_high == SIZE_MAX || i > best_high) best_high = i;
      if (best_high != SIZE_MAX) return {{best_high, T(1)}};
      size_t pick = SIZE_MAX;
      for (size_t i : eligible) {
        if (i >= s.prefix_len) continue;
        if (pick == SIZE_MAX || means[i] > means[pick]) pick = i;
      }
      if (pick == SIZE_MAX) pick = eligible.front();
      return {{pick, T(1)}};
    }

    std::vector<std::pair<size_t, T>> operator()(const RoundedSelection& s) const {
      T best = means[0];
      for (const T& m : means) best = std::max(best, m);
      size_t level = SIZE_MAX;
      for (size_t j = 0; j < s.levels.size(); ++j)
        if (NumTraits<T>::eq(num_from_rat<T>(s.levels[j]), best)) level = j;
      if (level == SIZE_MAX)
        throw EvalError("rounded selection: top posterior mean matches no value level");
      std::vector<size_t> members;
      std::vector<T> accept;
      for (size_t i = 0; i < n; ++i) {
        if (NumTraits<T>::eq(means[i], best)) {
          members.push_back(i);
          accept.push_back(num_from_rat<T>(s.accept[i][level]));
        }
      }
      auto first = random_order_first_accept(accept);
      std::vector<std::pair<size_t, T>> out;
      for (size_t t = 0; t < members.size(); ++t) {
        if (NumTraits<T>::is_zero(first[t])) continue;
        require(members[t]);
        out.emplace_back(members[t], first[t]);
      }
      const T leftover = nobody_accepts(accept);
      if (!NumTraits<T>::is_zero(leftover)) {
        require(members.front());
        out.emplace_back(members.front(), leftover);  // lowest index at the level
      }
      return out;
    }
  };
  return std::visit(Visitor{means, labels, eligible, is_eligible, argmax_lowest_index,
                            require_eligible, uniform_over_eligible, n},
                    rule);
}

}  // namespace detail

/// Exact expectation over scheme choice, joint signals and selection
/// randomness; the value model credits the selected agent its posterior mean.
EvalReport evaluate_exact(const Instance& inst, const SignalingPolicy& policy,
                          const EvalOptions& opts);

/// Seeded Monte Carlo estimate with per-agent standard errors.
EvalReport evaluate_mc(const Instance& inst, const SignalingPolicy& policy,
                       const EvalOptions& opts, uint64_t samples, uint64_t seed);

/// Splits each agent's exact value-model utility by the bucket holding the
/// posterior mean of the signal under which it was selected. Requires a
/// strictly positive support so every mean lands in the grid.
BucketContributions bucket_contributions(const Instance& inst, const SignalingPolicy& policy,
                                         const Rat& epsilon,
                                         const ReceiverModel& receiver = ReceiverModel::exact());

/// alpha = max_k prefix_k(reference) / prefix_k(u); infinite when some
/// prefix of u vanishes while the reference's is positive.
AlphaResult audit_alpha(const UtilityVector& u, const UtilityVector& reference);

}  // namespace fairsel
