#pragma once

#include <cstddef>

#include "fairsel/dist.hpp"

namespace fairsel {

/// Geometric bucket grid over [vmin, vmax]: I_k = [eta^{k-1} vmin, eta^k vmin)
/// for k = 1..K, the last interval closed at vmax. K = ceil(log_eta V).
struct BucketGrid {
  Rat vmin, vmax, eta;
  size_t K = 0;

  /// m^k, 1-indexed bucket k in [1, K].
  Rat lower(size_t k) const { return vmin * rat_pow(eta, static_cast<unsigned>(k - 1)); }
  Rat upper(size_t k) const { return vmin * rat_pow(eta, static_cast<unsigned>(k)); }

  /// Bucket containing x (1-indexed); requires x in [vmin, vmax].
  size_t bucket_of(const Rat& x) const {
    if (x < vmin || x > vmax) throw ValidationError("value outside the bucket grid");
    Rat hi = vmin * eta;
    for (size_t k = 1; k < K; ++k) {
      if (x < hi) return k;
      hi *= eta;
    }
    return K;
  }

  bool operator==(const BucketGrid&) const = default;
};

inline BucketGrid make_grid(const Instance& inst, const Rat& epsilon) {
  if (epsilon <= 0) throw ValidationError("bucket grid needs epsilon > 0");
  BucketGrid g;
  g.vmin = inst.vmin;
  g.vmax = inst.vmax;
  g.eta = Rat(1) + epsilon;
  // K = ceil(log_eta V) without leaving exact arithmetic
  const Rat V = inst.value_ratio();
  g.K = 1;
  Rat acc = g.eta;
  while (acc < V) {
    acc *= g.eta;
    ++g.K;
  }
  return g;
}

}  // namespace fairsel
