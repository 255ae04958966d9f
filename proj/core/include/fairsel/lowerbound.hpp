#pragma once

#include "fairsel/evaluate.hpp"
#include "fairsel/policy.hpp"

namespace fairsel {

/// The hard instance family: agent 1 is deterministically 2; agent i >= 2 has
/// value i+1 with probability 1/i and value 1 otherwise. Every prior mean is
/// 2 and V = n + 1 for n >= 2.
Instance make_lb_instance(size_t n);

/// Tail harmonic sum H_{-k} = sum_{i=k}^{n} 1/(i+1); zero when k > n.
Rat harmonic_tail(size_t n, size_t k);

/// High-signal probability x_i of the S_k policy, for k < i <= n (1-indexed).
Rat sk_signal_prob(size_t n, size_t k, size_t i);

/// S_k: agents <= k fully revealed; agent i > k sends "hi" with probability
/// x_i when its value is i+1; selection takes the largest-index high signal,
/// else the best revealed value among the first k agents.
SignalingPolicy build_sk_policy(size_t n, size_t k);

/// Closed-form utilities of S_k, ascending in the agent index.
UtilityVector sk_utilities_closed_form(size_t n, size_t k);

/// R_k = (1/2) (k+1) / (1 + H_{-(k+1)}): certified lower bound on the best
/// achievable k-smallest utility prefix.
Rat lb_prefix_bound(size_t n, size_t k);

/// log(1 + log(1 + n)) / 3 in natural logs: no policy's audit alpha on this
/// family can be smaller.
double lb_floor(size_t n);

struct LbAuditRow {
  size_t k = 0;
  Rat bound;       // R_k
  Rat prefix;      // policy's k-smallest prefix
};

struct LbAudit {
  AlphaResult alpha;            // max_k R_k / prefix_k
  double floor = 0.0;           // universal lower bound on alpha
  std::vector<LbAuditRow> rows;
};

/// Audits any utility vector on the family: per-k table, the achieved alpha,
/// and the universal floor.
LbAudit lb_audit(size_t n, const UtilityVector& utilities);

}  // namespace fairsel
