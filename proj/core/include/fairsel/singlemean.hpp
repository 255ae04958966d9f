#pragma once

#include "fairsel/bucket_grid.hpp"
#include "fairsel/evaluate.hpp"
#include "fairsel/lex_flow.hpp"
#include "fairsel/maximal_mapping.hpp"

namespace fairsel {

enum class PriorCase { Below, Inside, Above };

/// Per-(bucket, agent) result of the maximal-mapping program on the relaxed
/// interval [m^k, eta m^k] together with the (p, Q) case assignment.
struct AgentBucketParams {
  Rat beta;
  PriorCase tag = PriorCase::Inside;
  Rat p;
  Rat Q;
  std::vector<Rat> y;  // in-interval mass per support value
};

struct SingleMeanPlan {
  BucketGrid grid;
  UtilityModel utility = UtilityModel::Value;
  NumericMode mode = NumericMode::Exact;
  std::vector<std::vector<AgentBucketParams>> params;  // [bucket][agent]
  std::vector<Rat> Qk;                                 // per bucket
  std::vector<Rat> bk;                                 // per bucket source capacity
  FlowNetwork net;                                     // the pmaj network
  std::vector<std::vector<Rat>> xhat;                  // [bucket][agent]
  std::vector<Rat> uhat;                               // 1-majorized flow per agent
};

struct SingleMeanBuild {
  SignalingPolicy policy;
  SingleMeanPlan plan;
};

std::vector<std::vector<AgentBucketParams>> bucket_params(const Instance& inst,
                                                          const BucketGrid& grid,
                                                          NumericMode mode);

/// Middle node per bucket: b^k = m^k Q^k / K (value model) or Q^k / K
/// (selection model); sink arcs carry p_i^k b^k.
FlowNetwork build_pmaj_network(const BucketGrid& grid,
                               const std::vector<std::vector<AgentBucketParams>>& params,
                               UtilityModel utility, std::vector<Rat>* Qk_out = nullptr,
                               std::vector<Rat>* bk_out = nullptr);

/// The Single Mean policy: weight 1/K per bucket of (maximal mapping,
/// threshold rounded-order selection with acceptance xhat/p). Evaluate it
/// under a (1+epsilon)-approximate receiver.
SingleMeanBuild build_singlemean_policy(const Instance& inst, const Rat& epsilon,
                                        UtilityModel utility,
                                        NumericMode mode = NumericMode::Exact);

/// Prefix-sum certificate: the 1-majorized pmaj prefixes against the achieved
/// prefixes, the worst ratio, and the analytic 2 eta K budget it must respect.
struct SingleMeanCertificate {
  std::vector<Rat> uhat_prefix;      // k-smallest prefixes of uhat
  std::vector<Rat> achieved_prefix;  // k-smallest prefixes of the achieved utilities
  bool infinite = false;             // some achieved prefix is 0 under a positive target
  Rat max_ratio;                     // max_k uhat_prefix / achieved_prefix
  Rat analytic_bound;                // 2 * eta * K
  Rat factor_interval;               // eta (bucket width)
  Rat factor_receiver;               // eta (approximate receiver)
  Rat factor_rounding;               // 2  (randomized rounding)
  size_t factor_buckets = 0;         // K  (bucket mixing)
};

SingleMeanCertificate singlemean_certificate(const SingleMeanPlan& plan,
                                             const UtilityVector& achieved);

}  // namespace fairsel
