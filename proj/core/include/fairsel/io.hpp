#pragma once

#include <string>

#include "fairsel/evaluate.hpp"
#include "fairsel/flow_network.hpp"
#include "fairsel/lowerbound.hpp"
#include "fairsel/policy.hpp"
#include "fairsel/singlemean.hpp"

namespace fairsel {

/// JSON documents; numbers are decimal or "p/q" strings and round-trip
/// bit-exactly in exact mode.
Instance load_instance(const std::string& text);
std::string save_instance(const Instance& inst);

SignalingPolicy load_policy(const std::string& text);
std::string save_policy(const SignalingPolicy& policy);

FlowNetwork load_network(const std::string& text);
std::string save_network(const FlowNetwork& net);

/// Reports are one-way: exact mode prints fraction strings, float mode
/// prints doubles.
std::string report_to_json(const EvalReport& report);
std::string plan_to_json(const SingleMeanPlan& plan);
std::string lb_audit_to_json(size_t n, const LbAudit& audit);

}  // namespace fairsel
