#include "fairsel/io.hpp"

#include <nlohmann/json.hpp>

namespace fairsel {

using nlohmann::json;

namespace {

Rat rat_from_json(const json& j) {
  if (j.is_string()) return parse_rat(j.get<std::string>());
  if (j.is_number_integer()) return Rat(j.get<long long>());
  if (j.is_number_float()) return rat_from_double(j.get<double>());
  throw ParseError("expected a number or a rational string, got: " + j.dump());
}

json rat_to_json(const Rat& r) { return rat_to_string(r); }

json instance_to_json(const Instance& inst) {
  json agents = json::array();
  for (const auto& d : inst.agents) {
    json support = json::array();
    for (const auto& [v, p] : d.support) support.push_back({rat_to_json(v), rat_to_json(p)});
    agents.push_back({{"support", std::move(support)}});
  }
  return {{"schema", 1}, {"agents", std::move(agents)}};
}

json selection_to_json(const SelectionRule& rule) {
  struct Visitor {
    json operator()(const RankingSelection& s) const {
      return {{"type", "ranking"}, {"order", s.order}};
    }
    json operator()(const ThresholdRoundedOrder& s) const {
      json accept = json::array();
      for (const Rat& a : s.accept) accept.push_back(rat_to_json(a));
      return {{"type", "threshold_rounded_order"},
              {"lo", rat_to_json(s.lo)},
              {"hi", rat_to_json(s.hi)},
              {"accept", std::move(accept)}};
    }
    json operator()(const ExplicitTableSelection& s) const {
      json rows = json::array();
      for (const auto& [signal, select] : s.rows) {
        json sel = json::array();
        for (const auto& [agent, prob] : select) sel.push_back({agent, rat_to_json(prob)});
        rows.push_back({{"signal", signal}, {"select", std::move(sel)}});
      }
      return {{"type", "explicit_table"}, {"rows", std::move(rows)}};
    }
    json operator()(const LargestIndexThenPrefixMax& s) const {
      return {{"type", "largest_index_then_prefix_max"},
              {"prefix_len", s.prefix_len},
              {"high_label", s.high_label}};
    }
    json operator()(const RoundedSelection& s) const {
      json levels = json::array();
      for (const Rat& v : s.levels) levels.push_back(rat_to_json(v));
      json accept = json::array();
      for (const auto& row : s.accept) {
        json r = json::array();
        for (const Rat& a : row) r.push_back(rat_to_json(a));
        accept.push_back(std::move(r));
      }
      return {{"type", "rounded_selection"},
              {"levels", std::move(levels)},
              {"accept", std::move(accept)}};
    }
  };
  return std::visit(Visitor{}, rule);
}

SelectionRule selection_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "ranking") {
    RankingSelection s;
    s.order = j.at("order").get<std::vector<size_t>>();
    return s;
  }
  if (type == "threshold_rounded_order") {
    ThresholdRoundedOrder s;
    s.lo = rat_from_json(j.at("lo"));
    s.hi = rat_from_json(j.at("hi"));
    for (const auto& a : j.at("accept")) s.accept.push_back(rat_from_json(a));
    return s;
  }
  if (type == "explicit_table") {
    ExplicitTableSelection s;
    for (const auto& row : j.at("rows")) {
      std::vector<std::string> signal = row.at("signal").get<std::vector<std::string>>();
      std::vector<std::pair<size_t, Rat>> select;
      for (const auto& entry : row.at("select"))
        select.emplace_back(entry.at(0).get<size_t>(), rat_from_json(entry.at(1)));
      s.rows.emplace(std::move(signal), std::move(select));
    }
    return s;
  }
  if (type == "largest_index_then_prefix_max") {
    LargestIndexThenPrefixMax s;
    s.prefix_len = j.at("prefix_len").get<size_t>();
    s.high_label = j.value("high_label", std::string("hi"));
    return s;
  }
  if (type == "rounded_selection") {
    RoundedSelection s;
    for (const auto& v : j.at("levels")) s.levels.push_back(rat_from_json(v));
    for (const auto& row : j.at("accept")) {
      std::vector<Rat> r;
      for (const auto& a : row) r.push_back(rat_from_json(a));
      s.accept.push_back(std::move(r));
    }
    return s;
  }
  throw ParseError("unknown selection rule type '" + type + "'");
}

json policy_to_json(const SignalingPolicy& policy) {
  json components = json::array();
  for (const auto& [weight, scheme] : policy.components) {
    json mapping = json::array();
    for (const auto& rows : scheme.mapping.agents) {
      json jrows = json::array();
      for (const auto& row : rows) {
        json out = json::array();
        for (const auto& [label, prob] : row.out) out.push_back({label, rat_to_json(prob)});
        jrows.push_back({{"value", rat_to_json(row.value)}, {"out", std::move(out)}});
      }
      mapping.push_back({{"rows", std::move(jrows)}});
    }
    components.push_back({{"weight", rat_to_json(weight)},
                          {"scheme",
                           {{"mapping", std::move(mapping)},
                            {"selection", selection_to_json(scheme.selection)}}}});
  }
  return {{"schema", 1}, {"components", std::move(components)}};
}

}  // namespace

Instance load_instance(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("instance document is not valid JSON: ") + e.what());
  }
  if (!j.contains("agents")) throw ParseError("instance document lacks 'agents'");
  std::vector<DiscreteDist> agents;
  for (const auto& ja : j.at("agents")) {
    std::vector<std::pair<Rat, Rat>> support;
    for (const auto& pair : ja.at("support"))
      support.emplace_back(rat_from_json(pair.at(0)), rat_from_json(pair.at(1)));
    DiscreteDist d{std::move(support)};
    d.validate();
    agents.push_back(std::move(d));
  }
  return Instance::from_agents(std::move(agents));
}

std::string save_instance(const Instance& inst) { return instance_to_json(inst).dump(2); }

SignalingPolicy load_policy(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("policy document is not valid JSON: ") + e.what());
  }
  SignalingPolicy policy;
  for (const auto& jc : j.at("components")) {
    const Rat weight = rat_from_json(jc.at("weight"));
    SignalingScheme scheme;
    for (const auto& ja : jc.at("scheme").at("mapping")) {
      std::vector<MappingRule::Row> rows;
      for (const auto& jr : ja.at("rows")) {
        MappingRule::Row row;
        row.value = rat_from_json(jr.at("value"));
        for (const auto& out : jr.at("out"))
          row.out.emplace_back(out.at(0).get<std::string>(), rat_from_json(out.at(1)));
        rows.push_back(std::move(row));
      }
      scheme.mapping.agents.push_back(std::move(rows));
    }
    scheme.selection = selection_from_json(jc.at("scheme").at("selection"));
    policy.components.emplace_back(weight, std::move(scheme));
  }
  return policy;
}

std::string save_policy(const SignalingPolicy& policy) { return policy_to_json(policy).dump(2); }

FlowNetwork load_network(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("network document is not valid JSON: ") + e.what());
  }
  FlowNetwork net;
  net.num_sinks = j.at("num_sinks").get<size_t>();
  for (const auto& jm : j.at("middle")) {
    net.add_middle(rat_from_json(jm.at("cap")));
    for (const auto& arc : jm.at("arcs")) {
      const size_t sink = arc.at(0).get<size_t>();
      if (sink >= net.num_sinks) throw ParseError("arc references an unknown sink");
      net.add_arc(net.num_middle() - 1, sink, rat_from_json(arc.at(1)));
    }
  }
  return net;
}

std::string save_network(const FlowNetwork& net) {
  json middle = json::array();
  for (size_t jm = 0; jm < net.num_middle(); ++jm) {
    json arcs = json::array();
    for (const auto& [sink, cap] : net.arcs[jm]) arcs.push_back({sink, rat_to_json(cap)});
    middle.push_back({{"cap", rat_to_json(net.middle_caps[jm])}, {"arcs", std::move(arcs)}});
  }
  return json{{"schema", 1}, {"num_sinks", net.num_sinks}, {"middle", std::move(middle)}}
      .dump(2);
}

namespace {

json format_rat(const Rat& r, NumericMode mode) {
  if (mode == NumericMode::Exact) return rat_to_string(r);
  return rat_to_double(r);
}

json utilities_json(const UtilityVector& u, NumericMode mode) {
  json out = json::array();
  for (const Rat& x : u.u) out.push_back(format_rat(x, mode));
  return out;
}

}  // namespace

std::string report_to_json(const EvalReport& report) {
  json j{{"schema", 1},
         {"mode", to_string(report.mode)},
         {"utility_model", report.utility == UtilityModel::Value ? "value" : "selection"},
         {"utilities", utilities_json(report.utilities, report.mode)},
         {"total", format_rat(report.total, report.mode)},
         {"welfare_opt", format_rat(report.welfare_opt, report.mode)}};
  json per_scheme = json::array();
  for (const auto& uv : report.per_scheme) per_scheme.push_back(utilities_json(uv, report.mode));
  if (!report.per_scheme.empty()) j["per_scheme"] = std::move(per_scheme);
  if (report.samples > 0) {
    j["samples"] = report.samples;
    j["seed"] = report.seed;
    j["std_errors"] = report.std_errors;
  }
  return j.dump(2);
}

std::string plan_to_json(const SingleMeanPlan& plan) {
  const NumericMode mode = plan.mode;
  json buckets = json::array();
  for (size_t k = 1; k <= plan.grid.K; ++k) {
    json agents = json::array();
    for (const auto& ap : plan.params[k - 1]) {
      const char* tag = ap.tag == PriorCase::Below    ? "below"
                        : ap.tag == PriorCase::Inside ? "inside"
                                                      : "above";
      json y = json::array();
      for (const Rat& yv : ap.y) y.push_back(format_rat(yv, mode));
      agents.push_back({{"beta", format_rat(ap.beta, mode)},
                        {"case", tag},
                        {"p", format_rat(ap.p, mode)},
                        {"Q", format_rat(ap.Q, mode)},
                        {"y", std::move(y)}});
    }
    json xhat = json::array();
    for (const Rat& x : plan.xhat[k - 1]) xhat.push_back(format_rat(x, mode));
    buckets.push_back({{"k", k},
                       {"lo", format_rat(plan.grid.lower(k), mode)},
                       {"hi", format_rat(plan.grid.upper(k), mode)},
                       {"Q", format_rat(plan.Qk[k - 1], mode)},
                       {"b", format_rat(plan.bk[k - 1], mode)},
                       {"agents", std::move(agents)},
                       {"xhat", std::move(xhat)}});
  }
  json uhat = json::array();
  for (const Rat& u : plan.uhat) uhat.push_back(format_rat(u, mode));
  return json{{"schema", 1},
              {"mode", to_string(mode)},
              {"utility_model", plan.utility == UtilityModel::Value ? "value" : "selection"},
              {"eta", format_rat(plan.grid.eta, mode)},
              {"K", plan.grid.K},
              {"vmin", format_rat(plan.grid.vmin, mode)},
              {"vmax", format_rat(plan.grid.vmax, mode)},
              {"buckets", std::move(buckets)},
              {"uhat", std::move(uhat)}}
      .dump(2);
}

std::string lb_audit_to_json(size_t n, const LbAudit& audit) {
  json rows = json::array();
  for (const auto& row : audit.rows)
    rows.push_back({{"k", row.k},
                    {"bound", rat_to_string(row.bound)},
                    {"prefix", rat_to_string(row.prefix)}});
  json alpha;
  if (audit.alpha.infinite)
    alpha = "inf";
  else
    alpha = rat_to_string(audit.alpha.alpha);
  return json{{"schema", 1},
              {"n", n},
              {"alpha", std::move(alpha)},
              {"alpha_float", audit.alpha.infinite
                                  ? std::numeric_limits<double>::infinity()
                                  : rat_to_double(audit.alpha.alpha)},
              {"floor", audit.floor},
              {"rows", std::move(rows)}}
      .dump(2);
}

}  // namespace fairsel
