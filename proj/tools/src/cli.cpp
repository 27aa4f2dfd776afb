#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "generators.hpp"
#include "indist/analysis.hpp"
#include "indist/constructions.hpp"
#include "indist/convex.hpp"
#include "indist/errors.hpp"
#include "indist/io.hpp"

namespace indist::cli {
namespace {

using nlohmann::json;
using indist::to_string;
using cli::to_string;
namespace fs = std::filesystem;

struct FlagInfo {
  const char* key;
  const char* help;
};

const std::vector<FlagInfo>& flag_info() {
  static const std::vector<FlagInfo> flags = {
      {"x0", "distribution file for X0"},
      {"x1", "distribution file for X1"},
      {"family", "test family file"},
      {"generator", "instance generator, e.g. biased_coin(0.1)"},
      {"partition", "partition labels file (audit)"},
      {"epsilon", "indistinguishability parameter"},
      {"gamma", "heavy-part threshold (default eps^2)"},
      {"delta", "rounding precision of the distinguisher"},
      {"eps-prime", "hat-variable threshold parameter (default eps^2)"},
      {"k", "sample count, or comma-separated list"},
      {"budget", "enumeration budget"},
      {"seed", "seed; required for any Monte Carlo fallback"},
      {"mode", "arithmetic mode for inputs: rational or real"},
      {"out", "output path (directory for generate)"},
      {"csv", "CSV output path"},
      {"target", "advantage target for k*"},
      {"k-max", "largest k scanned for k*"},
      {"trials", "Monte Carlo trials"},
  };
  return flags;
}

std::map<std::string, std::string> defaults_for(const std::string& command) {
  std::map<std::string, std::string> d = {
      {"epsilon", "0.1"}, {"delta", "1/1000"},   {"budget", "10000000"},
      {"mode", "rational"}, {"target", "0.5"}, {"trials", "20000"},
  };
  d["k"] = command == "sweep" ? "1,2,4,8" : "1";
  return d;
}

std::string config_value(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string s;
    for (const auto& e : v) {
      if (!s.empty()) s += ",";
      s += config_value(e);
    }
    return s;
  }
  if (v.is_number() || v.is_boolean()) return v.dump();
  throw ParseError("unsupported config value " + v.dump());
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != text.size() || text.front() == '-') {
    // Budgets are often written as 1e7.
    try {
      Rational q = parse_rational(text);
      if (sgn(q) >= 0 && q.get_den() == 1 && q.get_num().fits_ulong_p()) {
        return q.get_num().get_ui();
      }
    } catch (const ParseError&) {
    }
    throw ParseError("--" + key + " expects a nonnegative integer, got \"" +
                     text + "\"");
  }
  return v;
}

double parse_real(const std::string& key, const std::string& text) {
  try {
    return to_double(parse_rational(text));
  } catch (const ParseError&) {
    throw ParseError("--" + key + " expects a number, got \"" + text + "\"");
  }
}

std::vector<unsigned> parse_k_list(const std::string& text) {
  std::vector<unsigned> ks;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::uint64_t k = parse_u64("k", item);
    if (k == 0 || k > 100000) throw ValidationError("k must lie in [1, 100000]");
    ks.push_back(static_cast<unsigned>(k));
  }
  if (ks.empty()) throw ParseError("--k is empty");
  return ks;
}

struct Context {
  RunConfig cfg;
  std::ostream& out;
};

Instance load_instance(const RunConfig& cfg) {
  if (auto g = cfg.get("generator")) return generate(parse_generator(*g));
  const io::ArithmeticMode mode = io::parse_mode(cfg.require("mode"));
  ProbDist x0 = io::read_distribution(cfg.require("x0"), mode);
  ProbDist x1 = io::read_distribution(cfg.require("x1"), mode);
  Family f = io::read_family(cfg.require("family"), mode);
  require_same_domain(x0.domain(), x1.domain());
  require_same_domain(x0.domain(), f.domain());
  return {std::move(x0), std::move(x1), std::move(f)};
}

Rational epsilon_of(const RunConfig& cfg) {
  Rational eps = parse_rational(cfg.require("epsilon"));
  if (!(sgn(eps) > 0 && eps < 1)) {
    throw ValidationError("--epsilon must lie in (0,1)");
  }
  return eps;
}

PipelineOptions pipeline_options(const RunConfig& cfg) {
  PipelineOptions o;
  if (auto g = cfg.get("gamma")) o.gamma = parse_rational(*g);
  o.budget = parse_u64("budget", cfg.require("budget"));
  o.mc_trials = parse_u64("trials", cfg.require("trials"));
  if (auto s = cfg.get("seed")) {
    o.seed = parse_u64("seed", *s);
    o.allow_monte_carlo = true;
  } else {
    o.allow_monte_carlo = false;
  }
  return o;
}

json instance_json(const Instance& inst) {
  auto masses = [](const ProbDist& p) {
    json a = json::array();
    for (const auto& q : p.mass()) a.push_back(to_string(q));
    return a;
  };
  return {{"domain_size", inst.x0.size()},
          {"x0", masses(inst.x0)},
          {"x1", masses(inst.x1)},
          {"family_size", inst.family.size()},
          {"family_complexity",
           {{"oracle_gates", inst.family.complexity().oracle_gates},
            {"wires", inst.family.complexity().wires},
            {"note", inst.family.complexity().note}}}};
}

void emit(const Context& ctx, const json& doc) {
  const std::string text = doc.dump(2) + "\n";
  if (auto path = ctx.cfg.get("out")) {
    io::write_text(*path, text);
  } else {
    ctx.out << text;
  }
}

json header(const Context& ctx) {
  return {{"command", ctx.cfg.command},
          {"config", ctx.cfg.echo()},
          {"status", "ok"}};
}

int cmd_analyze(const Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  Instance inst = load_instance(cfg);
  const Rational eps = epsilon_of(cfg);
  const auto ks = parse_k_list(cfg.require("k"));
  if (ks.size() != 1) throw ValidationError("analyze takes a single --k");
  const Rational delta = parse_rational(cfg.require("delta"));
  SandwichReport report = sandwich_report(inst.x0, inst.x1, inst.family, eps,
                                          ks, delta, pipeline_options(cfg));
  // The CSV writer re-checks every row, so render it before anything lands.
  const std::string csv = io::sandwich_csv(report);

  Rational eps_prime = eps * eps;
  if (auto e = cfg.get("eps-prime")) eps_prime = parse_rational(*e);
  HatVariable hat =
      build_hat(inst.x0, inst.x1, report.pipeline.partition, eps_prime);
  verify_structural(hat, inst.x0, inst.x1).require();
  TvSandwich tvs = hat_partition_tv_sandwich(hat, inst.x1);
  json hat_json = {{"eps_prime", to_string(eps_prime)},
                   {"threshold", io::format_real(hat.threshold)},
                   {"tv_partition", to_string(tvs.lo)},
                   {"tv_domain", to_string(tvs.mid)},
                   {"tv_upper", io::format_real(tvs.hi)}};
  if (!inst.family.empty()) {
    hat_json["best_advantage_x0"] =
        to_string(best_advantage(inst.family, inst.x0, hat.hat0).value);
  }

  json doc = header(ctx);
  doc["instance"] = instance_json(inst);
  doc["report"] = io::to_json(report);
  doc["hat"] = hat_json;
  emit(ctx, doc);
  if (auto path = cfg.get("csv")) io::write_text(*path, csv);
  return kOk;
}

int cmd_sweep(const Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  Instance inst = load_instance(cfg);
  const Rational eps = epsilon_of(cfg);
  const auto ks = parse_k_list(cfg.require("k"));
  const Rational delta = parse_rational(cfg.require("delta"));
  const PipelineOptions po = pipeline_options(cfg);
  SandwichReport report =
      sandwich_report(inst.x0, inst.x1, inst.family, eps, ks, delta, po);
  const std::string csv = io::sandwich_csv(report);

  SweepOptions so;
  so.pipeline = po;
  so.stop_at_target = true;
  const double target = parse_real("target", cfg.require("target"));
  std::uint64_t k_max = *std::max_element(ks.begin(), ks.end());
  if (auto km = cfg.get("k-max")) k_max = parse_u64("k-max", *km);
  if (k_max == 0 || k_max > 1000000) {
    throw ValidationError("--k-max must lie in [1, 1000000]");
  }
  KStarResult ks_result =
      k_star_sweep(inst.x0, inst.x1, inst.family, eps, delta, target,
                   static_cast<unsigned>(k_max), so);

  json doc = header(ctx);
  doc["instance"] = instance_json(inst);
  doc["report"] = io::to_json(report);
  json kj = io::to_json(ks_result);
  kj.erase("pipeline");
  kj["target"] = io::format_real(target);
  kj["k_max"] = k_max;
  doc["k_star"] = kj;
  emit(ctx, doc);
  if (auto path = cfg.get("csv")) io::write_text(*path, csv);
  return kOk;
}

MCParams mc_params(const RunConfig& cfg) {
  MCParams p = MCParams::defaults(epsilon_of(cfg));
  if (auto g = cfg.get("gamma")) {
    p.gamma = parse_rational(*g);
    p.max_rounds = p.round_bound();
  }
  if (auto s = cfg.get("seed")) p.seed = parse_u64("seed", *s);
  p.validate();
  return p;
}

int cmd_mcal(const Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  Instance inst = load_instance(cfg);
  const MCParams params = mc_params(cfg);
  const ProbDist d = mixture(inst.x0, inst.x1);
  const TestFunction g = target_g(inst.x0, inst.x1);
  BuildDiagnostics diag;
  Partition p = build_partition(d, g, inst.family, params, &diag);
  part_statistics(p, inst.x0, inst.x1, d);
  AuditReport rep = audit(p, d, g, inst.family, params);

  json doc = header(ctx);
  doc["instance"] = instance_json(inst);
  doc["partition"] = {{"parts", p.parts()},
                      {"labels", p.labeling.labels},
                      {"rounds", diag.rounds},
                      {"round_bound", diag.round_bound},
                      {"calibration_steps", diag.calibration_steps},
                      {"multicalibration_steps", diag.multicalibration_steps},
                      {"gamma", to_string(params.gamma)},
                      {"lambda", to_string(params.lambda)}};
  doc["audit"] = io::to_json(rep);
  if (auto path = cfg.get("out")) {
    io::write_text(*path, io::format_partition(p));
    io::write_text(*path + ".sidecar", io::format_partition_sidecar(p));
    ctx.out << doc.dump(2) << "\n";
  } else {
    emit(ctx, doc);
  }
  return kOk;
}

int cmd_audit(const Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  Instance inst = load_instance(cfg);
  const MCParams params = mc_params(cfg);
  const std::string path = cfg.require("partition");
  std::string sidecar;
  if (fs::exists(path + ".sidecar")) sidecar = io::read_text(path + ".sidecar");
  Partition given = io::parse_partition(io::read_text(path), sidecar);
  if (given.labeling.size() != inst.x0.size()) {
    throw DomainMismatch("partition labels do not cover the domain");
  }
  const ProbDist d = mixture(inst.x0, inst.x1);
  const TestFunction g = target_g(inst.x0, inst.x1);
  Partition p = Partition::from_labels(given.labeling, d, g);
  json mismatches = json::array();
  if (!sidecar.empty()) {
    for (std::size_t i = 0; i < p.parts(); ++i) {
      if (p.part_weights[i] != given.part_weights[i] || p.v[i] != given.v[i]) {
        mismatches.push_back(i);
      }
    }
  }
  AuditReport rep = audit(p, d, g, inst.family, params);
  json doc = header(ctx);
  doc["instance"] = instance_json(inst);
  doc["audit"] = io::to_json(rep);
  doc["sidecar_checked"] = !sidecar.empty();
  doc["sidecar_mismatches"] = mismatches;
  const bool pass = rep.pass && mismatches.empty();
  if (!pass) doc["status"] = "audit_failed";
  emit(ctx, doc);
  return pass ? kOk : kCheckFailed;
}

int cmd_pseudo(const Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  Instance inst = load_instance(cfg);
  const double eps = to_double(epsilon_of(cfg));
  const auto ks = parse_k_list(cfg.require("k"));
  PseudoDistanceResult ph = pseudo_hellinger(inst.x0, inst.x1, inst.family, eps);
  PseudoEntropyResult pr = pseudo_renyi(inst.x0, inst.family, eps);
  json bounds = json::array();
  for (unsigned k : ks) {
    SampleBounds hb = hellinger_sample_bounds(ph.delta_star, eps, k);
    SampleBounds rb = renyi_sample_bounds(pr.gap, eps, k);
    bounds.push_back({{"k", k},
                      {"hellinger_indist_upper", io::format_real(hb.indist_upper)},
                      {"hellinger_dist_lower", io::format_real(hb.dist_lower)},
                      {"renyi_indist_upper", io::format_real(rb.indist_upper)},
                      {"renyi_dist_lower", io::format_real(rb.dist_lower)}});
  }
  json doc = header(ctx);
  doc["instance"] = instance_json(inst);
  doc["pseudo_hellinger"] = io::to_json(ph);
  doc["pseudo_renyi"] = io::to_json(pr);
  doc["sample_bounds"] = bounds;
  emit(ctx, doc);
  return kOk;
}

int cmd_generate(const Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const GeneratorSpec spec = parse_generator(cfg.require("generator"));
  Instance inst = generate(spec);
  const fs::path dir = cfg.get("out").value_or(".");
  fs::create_directories(dir);
  io::write_text(dir / "x0.json", io::format_distribution(inst.x0));
  io::write_text(dir / "x1.json", io::format_distribution(inst.x1));
  io::write_text(dir / "family.json", io::format_family(inst.family));
  json doc = header(ctx);
  doc["generator"] = to_string(spec);
  doc["files"] = {(dir / "x0.json").string(), (dir / "x1.json").string(),
                  (dir / "family.json").string()};
  ctx.out << doc.dump(2) << "\n";
  return kOk;
}

void flush_failure(const RunConfig& cfg, const std::string& status,
                   const std::string& message) {
  // Leave a status record where the report would have gone.
  auto path = cfg.get("out");
  if (!path || cfg.command == "generate" || cfg.command == "mcal") return;
  json doc = {{"command", cfg.command},
              {"config", cfg.echo()},
              {"status", status},
              {"message", message}};
  try {
    io::write_text(*path, doc.dump(2) + "\n");
  } catch (const Error&) {
  }
}

}  // namespace

std::optional<std::string> RunConfig::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string RunConfig::require(const std::string& key) const {
  auto v = get(key);
  if (!v) throw ValidationError("missing required setting --" + key);
  return *v;
}

json RunConfig::echo() const {
  json j(values_);
  return j;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : flag_info()) k.push_back(f.key);
    return k;
  }();
  return keys;
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"indist: indistinguishability analysis on finite domains"};
  app.require_subcommand(1);
  std::map<std::string, std::string> given;
  std::string config_path;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"analyze", "sandwich report at a single k"},
      {"sweep", "sandwich report over a k list, plus k*"},
      {"mcal", "build and audit a multicalibrated partition"},
      {"pseudo", "pseudo-Hellinger distance and pseudo-Renyi entropy"},
      {"generate", "write a generated instance to disk"},
      {"audit", "audit a stored partition"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    for (const auto& f : flag_info()) {
      sub->add_option(std::string("--") + f.key, given[f.key], f.help);
    }
    sub->add_option("--config", config_path, "JSON config file");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParseError;
  }

  RunConfig cfg;
  try {
    CLI::App* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    for (const auto& [k, v] : defaults_for(cfg.command)) cfg.set(k, v);
    if (sub->count("--config") > 0) {
      const json doc = json::parse(io::read_text(config_path), nullptr, false);
      if (doc.is_discarded() || !doc.is_object()) {
        throw ParseError("config file is not a JSON object");
      }
      const auto& keys = config_keys();
      for (const auto& [k, v] : doc.items()) {
        if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
          throw ParseError("unknown config key \"" + k + "\"");
        }
        cfg.set(k, config_value(v));
      }
    }
    for (const auto& f : flag_info()) {
      if (sub->count(std::string("--") + f.key) > 0) cfg.set(f.key, given[f.key]);
    }

    Context ctx{cfg, out};
    if (cfg.command == "analyze") return cmd_analyze(ctx);
    if (cfg.command == "sweep") return cmd_sweep(ctx);
    if (cfg.command == "mcal") return cmd_mcal(ctx);
    if (cfg.command == "pseudo") return cmd_pseudo(ctx);
    if (cfg.command == "generate") return cmd_generate(ctx);
    return cmd_audit(ctx);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kParseError;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kValidationError;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what()
        << (cfg.has("seed") ? "" : " (pass --seed to allow sampling)") << "\n";
    flush_failure(cfg, "budget_exceeded", e.what());
    return kBudgetError;
  } catch (const InvariantViolation& e) {
    err << "\n*** INTERNAL INVARIANT VIOLATED ***\n" << e.what()
        << "\n*** results are not trustworthy; please report this input ***\n";
    flush_failure(cfg, "invariant_violation", e.what());
    return kInvariantError;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << "\n";
    flush_failure(cfg, "solver_error", e.what());
    return kSolverError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kValidationError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kValidationError;
  }
}

}  // namespace indist::cli
