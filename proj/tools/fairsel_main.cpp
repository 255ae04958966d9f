// fairsel: build, evaluate and audit signaling policies for fair selection.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fairsel/fullrev.hpp"
#include "fairsel/io.hpp"
#include "fairsel/lowerbound.hpp"
#include "fairsel/singlemean.hpp"

using namespace fairsel;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << text << "\n";
}

ReceiverModel parse_receiver(const std::string& spec) {
  if (spec == "exact") return ReceiverModel::exact();
  if (spec.rfind("approx:", 0) == 0) return ReceiverModel::approx(parse_rat(spec.substr(7)));
  throw ValidationError("receiver must be 'exact' or 'approx:EPS', got '" + spec + "'");
}

NumericMode parse_mode(const std::string& mode) {
  if (mode == "exact") return NumericMode::Exact;
  if (mode == "float" || mode == "float64") return NumericMode::Float64;
  throw ValidationError("numeric mode must be 'exact' or 'float64', got '" + mode + "'");
}

UtilityModel parse_utility(const std::string& utility) {
  if (utility == "value") return UtilityModel::Value;
  if (utility == "selection") return UtilityModel::Selection;
  throw ValidationError("utility model must be 'value' or 'selection'");
}

std::string fmt(const Rat& r, NumericMode mode) {
  return mode == NumericMode::Exact ? rat_to_string(r) : std::to_string(rat_to_double(r));
}

void print_utilities(std::ostream& os, const UtilityVector& u, NumericMode mode) {
  os << "agent  utility\n";
  for (size_t i = 0; i < u.size(); ++i)
    os << "  " << i + 1 << "    " << fmt(u.u[i], mode) << "\n";
}

int run_build(const std::string& kind, const std::string& instance_path,
              const std::string& out_path, const std::string& plan_path, const Rat& epsilon,
              UtilityModel utility, NumericMode mode) {
  const Instance inst = load_instance(read_file(instance_path));
  SignalingPolicy policy;
  std::string plan_json;
  if (kind == "bernoulli") {
    const auto build = build_bernoulli_policy(inst);
    policy = build.policy;
    std::cerr << "bernoulli: " << build.mixture.atoms.size() << " ranking atoms, lex point:";
    for (const auto& f : build.lex_point) std::cerr << " " << fmt(f, mode);
    std::cerr << "\n";
  } else if (kind == "fullrev2") {
    const auto build = build_fullrev_twomaj_policy(inst, mode);
    policy = build.policy;
    std::cerr << "fullrev2: relaxation flow:";
    for (const auto& f : build.flow.f) std::cerr << " " << fmt(f, mode);
    std::cerr << "\n";
  } else if (kind == "singlemean") {
    const auto build = build_singlemean_policy(inst, epsilon, utility, mode);
    policy = build.policy;
    plan_json = plan_to_json(build.plan);
    std::cerr << "singlemean: K=" << build.plan.grid.K << ", majorized flow:";
    for (const auto& f : build.plan.uhat) std::cerr << " " << fmt(f, mode);
    std::cerr << "\n";
  } else {
    throw ValidationError("unknown builder '" + kind + "'");
  }
  const std::string text = save_policy(policy);
  write_file(out_path, text);
  if (!plan_path.empty() && !plan_json.empty()) write_file(plan_path, plan_json);
  std::cout << text << "\n";
  return 0;
}

int run_evaluate(const std::string& instance_path, const std::string& policy_path,
                 const std::string& receiver, const std::string& utility, NumericMode mode,
                 uint64_t mc_samples, uint64_t seed, uint64_t budget,
                 const std::string& out_path) {
  const Instance inst = load_instance(read_file(instance_path));
  const SignalingPolicy policy = load_policy(read_file(policy_path));
  const auto violations = validate_policy(inst, policy);
  if (!violations.empty()) {
    for (const auto& v : violations) std::cerr << "violation: " << v << "\n";
    return 1;
  }
  EvalOptions opts;
  opts.receiver = parse_receiver(receiver);
  opts.utility = parse_utility(utility);
  opts.mode = mode;
  opts.budget = budget;
  const EvalReport report = (mc_samples > 0)
                                ? evaluate_mc(inst, policy, opts, mc_samples, seed)
                                : evaluate_exact(inst, policy, opts);
  const std::string text = report_to_json(report);
  std::cout << text << "\n";
  if (!out_path.empty()) write_file(out_path, text);
  print_utilities(std::cerr, report.utilities, report.mode);
  std::cerr << "total " << fmt(report.total, report.mode) << ", welfare optimum "
            << fmt(report.welfare_opt, report.mode) << "\n";
  return 0;
}

int run_audit(const std::string& instance_path, const std::string& policy_path,
              const std::string& against, const std::string& receiver, NumericMode mode,
              double expect_factor) {
  const Instance inst = load_instance(read_file(instance_path));
  const SignalingPolicy policy = load_policy(read_file(policy_path));
  const auto violations = validate_policy(inst, policy);
  if (!violations.empty()) {
    for (const auto& v : violations) std::cerr << "violation: " << v << "\n";
    return 1;
  }
  EvalOptions opts;
  opts.receiver = parse_receiver(receiver);
  opts.mode = mode;
  const auto report = evaluate_exact(inst, policy, opts);
  const auto prefixes = report.utilities.sorted_prefix_sums();
  const size_t n = inst.num_agents();

  std::vector<Rat> reference(n);
  std::string reference_name;
  if (against == "flow") {
    reference_name = "full-revelation relaxation optimum";
    const auto relax = fullrev_network(inst);
    for (size_t k = 1; k <= n; ++k) reference[k - 1] = prefix_sum_oracle<Rat>(relax.net, k);
  } else {
    reference_name = against;
    const SignalingPolicy rival = load_policy(read_file(against));
    const auto rival_report = evaluate_exact(inst, rival, opts);
    reference = rival_report.utilities.sorted_prefix_sums();
  }

  bool infinite = false;
  Rat alpha = 0;
  size_t worst_k = 0;
  std::ostringstream rows;
  std::cerr << "k  policy-prefix  reference-prefix  ratio\n";
  for (size_t k = 1; k <= n; ++k) {
    const Rat& mine = prefixes[k - 1];
    const Rat& ref = reference[k - 1];
    std::string ratio_str = "-";
    if (mine == 0 && ref > 0) {
      infinite = true;
      worst_k = k;
      ratio_str = "inf";
    } else if (mine > 0) {
      const Rat ratio = ref / mine;
      if (ratio > alpha) {
        alpha = ratio;
        worst_k = k;
      }
      ratio_str = std::to_string(rat_to_double(ratio));
    }
    rows << (k > 1 ? "," : "") << "{\"k\":" << k << ",\"policy\":\"" << rat_to_string(mine)
         << "\",\"reference\":\"" << rat_to_string(ref) << "\",\"ratio\":"
         << (ratio_str == "inf" ? "\"inf\"" : ratio_str == "-" ? "null" : ratio_str) << "}";
    std::cerr << k << "  " << fmt(mine, mode) << "  " << fmt(ref, mode) << "  " << ratio_str
              << "\n";
  }
  const double alpha_float =
      infinite ? std::numeric_limits<double>::infinity() : rat_to_double(alpha);
  std::cout << "{\"schema\":1,\"against\":\"" << reference_name << "\",\"alpha\":"
            << (infinite ? std::string("\"inf\"") : "\"" + rat_to_string(alpha) + "\"")
            << ",\"alpha_float\":" << (infinite ? "\"inf\"" : std::to_string(alpha_float))
            << ",\"worst_k\":" << worst_k << ",\"rows\":[" << rows.str() << "]}\n";
  std::cerr << "alpha = " << (infinite ? "inf" : std::to_string(alpha_float)) << " (worst k "
            << worst_k << ")\n";
  if (expect_factor > 0 && (infinite || alpha_float > expect_factor)) {
    std::cerr << "guarantee violation: alpha exceeds " << expect_factor << "\n";
    return 1;
  }
  return 0;
}

int run_lowerbound(size_t n, int k, const std::string& emit_path) {
  if (k >= 0) {
    const auto u = sk_utilities_closed_form(n, static_cast<size_t>(k));
    const auto audit = lb_audit(n, u);
    std::cout << lb_audit_to_json(n, audit) << "\n";
    std::cerr << "S_" << k << " closed-form utilities:";
    for (const auto& x : u.u) std::cerr << " " << rat_to_string(x);
    std::cerr << "\nfloor log(1+log(1+n))/3 = " << audit.floor << "\n";
    if (!emit_path.empty())
      write_file(emit_path, save_policy(build_sk_policy(n, static_cast<size_t>(k))));
  } else {
    std::ostringstream rows;
    std::cerr << "k  R_k  S_k prefix\n";
    for (size_t kk = 1; kk <= n; ++kk) {
      const Rat rk = lb_prefix_bound(n, kk);
      const Rat prefix = sk_utilities_closed_form(n, kk).prefix(kk);
      rows << (kk > 1 ? "," : "") << "{\"k\":" << kk << ",\"bound\":\"" << rat_to_string(rk)
           << "\",\"sk_prefix\":\"" << rat_to_string(prefix) << "\"}";
      std::cerr << kk << "  " << rat_to_double(rk) << "  " << rat_to_double(prefix) << "\n";
    }
    std::cout << "{\"schema\":1,\"n\":" << n << ",\"floor\":" << lb_floor(n) << ",\"rows\":["
              << rows.str() << "]}\n";
    std::cerr << "floor log(1+log(1+n))/3 = " << lb_floor(n) << "\n";
  }
  return 0;
}

int run_oracle(const std::string& net_path, size_t k) {
  const FlowNetwork net = load_network(read_file(net_path));
  const Rat value = prefix_sum_oracle<Rat>(net, k);
  std::cout << "{\"schema\":1,\"k\":" << k << ",\"prefix_sum\":\"" << rat_to_string(value)
            << "\",\"prefix_sum_float\":" << rat_to_double(value) << "}\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"signaling policies for fair selection: builders, evaluator, audits"};
  app.require_subcommand(1);

  std::string instance_path, policy_path, out_path, plan_path, against, net_path;
  std::string receiver = "exact", utility = "value", mode_str = "exact";
  std::string epsilon_str = "1/4";
  std::string emit_path;
  uint64_t mc_samples = 0, seed = 0, budget = 10'000'000;
  double expect_factor = 0.0;
  size_t lb_n = 0, oracle_k = 1;
  int lb_k = -1;

  auto* build = app.add_subcommand("build", "construct a signaling policy");
  std::string builder_kind;
  build->add_option("kind", builder_kind, "bernoulli | fullrev2 | singlemean")->required();
  build->add_option("-i,--instance", instance_path)->required();
  build->add_option("-o,--output", out_path)->required();
  build->add_option("-e,--epsilon", epsilon_str, "bucket width parameter (singlemean)");
  build->add_option("--utility", utility, "value | selection");
  build->add_option("--mode", mode_str, "exact | float64");
  build->add_option("--plan-out", plan_path, "write the Single Mean plan JSON here");

  auto* evaluate = app.add_subcommand("evaluate", "expected utilities of a policy");
  evaluate->add_option("-i,--instance", instance_path)->required();
  evaluate->add_option("-p,--policy", policy_path)->required();
  evaluate->add_option("--receiver", receiver, "exact | approx:EPS");
  evaluate->add_option("--utility", utility, "value | selection");
  evaluate->add_option("--mode", mode_str, "exact | float64");
  evaluate->add_option("--mc", mc_samples, "Monte Carlo samples (0 = exact)");
  evaluate->add_option("--seed", seed);
  evaluate->add_option("--budget", budget, "joint-signal enumeration budget");
  evaluate->add_option("-o,--output", out_path);

  auto* audit = app.add_subcommand("audit", "prefix-sum table and alpha against a reference");
  audit->add_option("-i,--instance", instance_path)->required();
  audit->add_option("-p,--policy", policy_path)->required();
  audit->add_option("--against", against, "'flow' or a rival policy path")->required();
  audit->add_option("--receiver", receiver, "exact | approx:EPS");
  audit->add_option("--mode", mode_str, "exact | float64");
  audit->add_option("--expect-factor", expect_factor,
                    "nonzero exit when alpha exceeds this factor");

  auto* lowerbound = app.add_subcommand("lowerbound", "the hard family and its S_k policies");
  lowerbound->add_option("--n", lb_n)->required();
  lowerbound->add_option("--k", lb_k, "report the S_k policy (omit for the family table)");
  lowerbound->add_option("--emit-policy", emit_path, "write the S_k policy JSON here");

  auto* oracle = app.add_subcommand("oracle", "certificate oracles");
  oracle->require_subcommand(1);
  auto* prefix = oracle->add_subcommand("prefix-sum", "max sum of the k smallest sink inflows");
  prefix->add_option("-i,--network", net_path)->required();
  prefix->add_option("-k", oracle_k)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*build)
      return run_build(builder_kind, instance_path, out_path, plan_path,
                       parse_rat(epsilon_str), parse_utility(utility), parse_mode(mode_str));
    if (*evaluate)
      return run_evaluate(instance_path, policy_path, receiver, utility, parse_mode(mode_str),
                          mc_samples, seed, budget, out_path);
    if (*audit)
      return run_audit(instance_path, policy_path, against, receiver, parse_mode(mode_str),
                       expect_factor);
    if (*lowerbound) return run_lowerbound(lb_n, lb_k, emit_path);
    if (*oracle) return run_oracle(net_path, oracle_k);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
