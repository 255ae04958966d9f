#pragma once

#include "fairsel/lex_flow.hpp"
#include "fairsel/policy.hpp"
#include "fairsel/polymatroid.hpp"

namespace fairsel {

/// Exponential single-source network for Bernoulli instances: one middle node
/// per subset T of agents with capacity prod_{i in T} mu_i prod_{i not in T}
/// (1 - mu_i), arcs from T to each sink i in T. Middle nodes are ordered by
/// subset mask, the empty set first.
FlowNetwork bernoulli_subset_network(const Instance& inst);

/// Bernoulli success probabilities of an all-{0,c} instance; throws when the
/// instance is not Bernoulli up to a common scale.
struct BernoulliShape {
  std::vector<Rat> mu;
  Rat scale;  // the common positive value c
};
BernoulliShape bernoulli_shape(const Instance& inst);

struct BernoulliBuild {
  SignalingPolicy policy;
  PolymatroidSpec spec;
  std::vector<Rat> lex_point;   // winning probabilities, 1-majorized
  RankingMixture mixture;
  Rat scale;                    // utilities = scale * lex_point
};

/// Full revelation plus a mixture of ranking selections whose utility vector
/// is the 1-majorized point of the Bernoulli polymatroid.
BernoulliBuild build_bernoulli_policy(const Instance& inst);

/// Level parameters of the full-revelation relaxation: sorted distinct values
/// v_j, z_j = Pr[max <= v_j], p_ij = Pr[D_i = v_j | max <= v_j], b_j = z_j v_j.
struct FullRevNetworkParams {
  std::vector<Rat> levels;
  std::vector<Rat> z;
  std::vector<std::vector<Rat>> p;  // [agent][level]
  std::vector<Rat> b;
};

struct FullRevNetwork {
  FlowNetwork net;
  FullRevNetworkParams params;
};

/// Every full-revelation policy's utility vector is a feasible sink-inflow
/// vector of this network; the converse need not hold (it is a relaxation).
FullRevNetwork fullrev_network(const Instance& inst);

struct TwoMajBuild {
  SignalingPolicy policy;
  FullRevNetwork relaxation;
  MajorizedPoint<Rat> flow;            // 1-majorized relaxation point u
  std::vector<std::vector<Rat>> x;     // [agent][level], x_ij = y_ij / b_j
};

/// Full revelation with the randomized-order rounded selection; each agent's
/// exact utility is at least half its 1-majorized relaxation inflow.
TwoMajBuild build_fullrev_twomaj_policy(const Instance& inst,
                                        NumericMode mode = NumericMode::Exact);

}  // namespace fairsel
