#include "indist/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "indist/errors.hpp"

namespace indist::io {
namespace {

using nlohmann::json;
using indist::to_string;

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

Rational parse_entry(const json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (v.is_number()) return rational_from_double(v.get<double>());
  throw ParseError("expected a number or a rational string");
}

std::vector<Rational> parse_entries(const json& arr) {
  if (!arr.is_array()) throw ParseError("expected an array of values");
  std::vector<Rational> out;
  out.reserve(arr.size());
  for (const auto& v : arr) out.push_back(parse_entry(v));
  return out;
}

std::size_t require_size(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number_unsigned()) {
    throw ParseError(std::string("missing or invalid \"") + key + "\"");
  }
  return doc[key].get<std::size_t>();
}

Domain parse_domain(const json& doc) {
  const std::size_t n = require_size(doc, "domain_size");
  std::vector<std::string> labels;
  if (doc.contains("labels")) {
    if (!doc["labels"].is_array()) throw ParseError("\"labels\" must be an array");
    for (const auto& l : doc["labels"]) {
      if (!l.is_string()) throw ParseError("labels must be strings");
      labels.push_back(l.get<std::string>());
    }
  }
  return Domain(n, std::move(labels));
}

json rationals(const std::vector<Rational>& v) {
  json arr = json::array();
  for (const auto& q : v) arr.push_back(to_string(q));
  return arr;
}

json bigints(const std::vector<BigInt>& v) {
  json arr = json::array();
  for (const auto& z : v) arr.push_back(z.get_str());
  return arr;
}

json diagnostics_json(const SolverDiagnostics& d) {
  return {{"status", d.status},
          {"iterations", d.iterations},
          {"outer_iterations", d.outer_iterations},
          {"kkt_residual", format_real(d.kkt_residual)},
          {"duality_gap", format_real(d.duality_gap)},
          {"min_slack", [&] {
             json a = json::array();
             for (double s : d.min_slack) a.push_back(format_real(s));
             return a;
           }()}};
}

json pipeline_json(const Pipeline& pl) {
  json parts = json::array();
  const auto members = pl.partition.members();
  for (std::size_t i = 0; i < pl.partition.parts(); ++i) {
    const Rational& v = pl.partition.v[i];
    parts.push_back({{"part", i},
                     {"size", members[i].size()},
                     {"weight", to_string(pl.partition.part_weights[i])},
                     {"v", to_string(v)},
                     {"v_one_minus_v", to_string(v * (1 - v))},
                     {"alpha0", to_string(pl.alpha.alpha0[i])},
                     {"alpha1", to_string(pl.alpha.alpha1[i])},
                     {"zero_mass", static_cast<bool>(pl.alpha.zero_mass[i])}});
  }
  return {{"mc_epsilon", to_string(pl.params.epsilon)},
          {"gamma", to_string(pl.params.gamma)},
          {"lambda", to_string(pl.params.lambda)},
          {"refinements", pl.refinements},
          {"rounds", pl.build.rounds},
          {"round_bound", pl.build.round_bound},
          {"calibration_steps", pl.build.calibration_steps},
          {"multicalibration_steps", pl.build.multicalibration_steps},
          {"labels", pl.partition.labeling.labels},
          {"parts", parts},
          {"indistinguishability",
           {{"side0", to_string(pl.indist.side0.value)},
            {"side1", to_string(pl.indist.side1.value)},
            {"bound", format_real(pl.indist.bound)}}}};
}

json rounded_json(const RoundedAlphaTable& r) {
  return {{"denominator", r.denominator.get_str()},
          {"delta", to_string(r.delta)},
          {"n0", bigints(r.n0)},
          {"n1", bigints(r.n1)},
          {"shift0", to_string(r.shift0)},
          {"shift1", to_string(r.shift1)}};
}

}  // namespace

using indist::to_string;

ArithmeticMode parse_mode(const std::string& text) {
  if (text == "rational") return ArithmeticMode::rational;
  if (text == "real") return ArithmeticMode::real;
  throw ParseError("unknown arithmetic mode \"" + text + "\"");
}

std::string to_string(ArithmeticMode mode) {
  return mode == ArithmeticMode::rational ? "rational" : "real";
}

ProbDist parse_distribution(const std::string& text, ArithmeticMode mode) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("distribution must be a JSON object");
  Domain domain = parse_domain(doc);
  if (!doc.contains("mass")) throw ParseError("missing \"mass\"");
  std::vector<Rational> mass = parse_entries(doc["mass"]);
  if (mass.size() != domain.size()) {
    throw ValidationError("mass has " + std::to_string(mass.size()) +
                          " entries, domain_size is " +
                          std::to_string(domain.size()));
  }
  if (mode == ArithmeticMode::real) {
    return ProbDist::from_reals(std::move(domain), to_doubles(mass));
  }
  return ProbDist(std::move(domain), std::move(mass));
}

ProbDist read_distribution(const std::filesystem::path& path,
                           ArithmeticMode mode) {
  return parse_distribution(read_text(path), mode);
}

std::string format_distribution(const ProbDist& p) {
  json doc = {{"domain_size", p.size()}};
  if (p.domain().has_labels()) doc["labels"] = p.domain().labels();
  doc["mass"] = rationals(p.mass());
  return doc.dump(2) + "\n";
}

Family parse_family(const std::string& text, ArithmeticMode mode) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("family must be a JSON object");
  Domain domain = parse_domain(doc);
  if (!doc.contains("functions") || !doc["functions"].is_array()) {
    throw ParseError("missing \"functions\" array");
  }
  std::vector<TestFunction> fs;
  std::size_t i = 0;
  for (const auto& item : doc["functions"]) {
    std::string name = "f" + std::to_string(i++);
    const json* values = &item;
    if (item.is_object()) {
      if (item.contains("name")) name = item["name"].get<std::string>();
      if (!item.contains("values")) throw ParseError("function without values");
      values = &item["values"];
    }
    std::vector<Rational> v = parse_entries(*values);
    if (v.size() != domain.size()) {
      throw ValidationError("function " + name + " has " +
                            std::to_string(v.size()) + " values");
    }
    if (mode == ArithmeticMode::real) {
      // Real mode keeps the shortest decimal of each double.
      for (auto& q : v) q = rational_from_double(to_double(q));
    }
    fs.emplace_back(domain, std::move(v), std::move(name));
  }
  if (doc.contains("count") && require_size(doc, "count") != fs.size()) {
    throw ValidationError("\"count\" disagrees with the function list");
  }
  ComplexityTag tag;
  if (doc.contains("complexity")) {
    const json& c = doc["complexity"];
    tag.oracle_gates = c.value("oracle_gates", std::uint64_t{0});
    tag.wires = c.value("wires", std::uint64_t{0});
    tag.note = c.value("note", std::string());
  }
  const bool closed = doc.value("closed_under_negation", false);
  return Family(std::move(domain), std::move(fs), closed, std::move(tag));
}

Family read_family(const std::filesystem::path& path, ArithmeticMode mode) {
  return parse_family(read_text(path), mode);
}

std::string format_family(const Family& family) {
  json fs = json::array();
  for (const auto& f : family.functions()) {
    fs.push_back({{"name", f.name()}, {"values", rationals(f.values())}});
  }
  json doc = {{"domain_size", family.domain().size()}};
  if (family.domain().has_labels()) doc["labels"] = family.domain().labels();
  doc["count"] = family.size();
  doc["closed_under_negation"] = family.closed_under_negation();
  doc["complexity"] = {{"oracle_gates", family.complexity().oracle_gates},
                       {"wires", family.complexity().wires},
                       {"note", family.complexity().note}};
  doc["functions"] = fs;
  return doc.dump(2) + "\n";
}

std::string format_partition(const Partition& partition) {
  std::ostringstream out;
  out << partition.parts() << "\n";
  const auto& labels = partition.labeling.labels;
  for (std::size_t x = 0; x < labels.size(); ++x) {
    out << (x ? " " : "") << labels[x];
  }
  out << "\n";
  return out.str();
}

std::string format_partition_sidecar(const Partition& partition) {
  std::ostringstream out;
  out << "part weight v\n";
  for (std::size_t i = 0; i < partition.parts(); ++i) {
    out << i << " " << to_string(partition.part_weights[i]) << " "
        << to_string(partition.v[i]) << "\n";
  }
  return out.str();
}

Partition parse_partition(const std::string& labels_text,
                          const std::string& sidecar_text) {
  std::istringstream in(labels_text);
  long long m = -1;
  if (!(in >> m) || m < 0) throw ParseError("partition: missing part count");
  Labeling labeling;
  labeling.parts = static_cast<std::size_t>(m);
  std::string tok;
  while (in >> tok) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(tok, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != tok.size() || tok.front() == '-') {
      throw ParseError("partition: bad label \"" + tok + "\"");
    }
    if (v >= labeling.parts) {
      throw ValidationError("partition: label " + tok + " out of range");
    }
    labeling.labels.push_back(static_cast<std::size_t>(v));
  }
  Partition p{std::move(labeling), {}, {}};
  if (sidecar_text.empty()) return p;

  std::istringstream side(sidecar_text);
  std::string line;
  std::getline(side, line);  // header
  p.part_weights.assign(p.parts(), Rational(0));
  p.v.assign(p.parts(), Rational(1, 2));
  std::vector<bool> seen(p.parts(), false);
  while (std::getline(side, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    std::size_t part = 0;
    std::string w, v;
    if (!(row >> part >> w >> v)) throw ParseError("sidecar: bad row \"" + line + "\"");
    if (part >= p.parts()) throw ValidationError("sidecar: part out of range");
    p.part_weights[part] = parse_rational(w);
    p.v[part] = parse_rational(v);
    seen[part] = true;
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) throw ValidationError("sidecar: part " + std::to_string(i) + " missing");
  }
  return p;
}

json distinguisher_json(const LRDistinguisher& d,
                        const std::string& labeling_ref) {
  return {{"labeling", labeling_ref},
          {"parts", d.table.parts},
          {"denominator", d.table.denominator.get_str()},
          {"n0", bigints(d.table.n0)},
          {"n1", bigints(d.table.n1)},
          {"k", d.k},
          {"tie_rule", "output 1 when prod n1 >= prod n0"}};
}

json to_json(const AdvantageEstimate& a) {
  json j = {{"value", format_real(a.value)}, {"method", to_string(a.method)}};
  if (a.exact) j["exact"] = to_string(*a.exact);
  if (a.method == AdvantageMethod::monte_carlo) {
    j["ci_halfwidth"] = format_real(a.ci_halfwidth);
    j["trials"] = a.trials;
    j["seed"] = a.seed;
  }
  return j;
}

json to_json(const SandwichReport& report) {
  json recs = json::array();
  for (const auto& r : report.records) {
    json j = {{"k", r.k},
              {"tv_tilde_k", format_real(r.tv_tilde_k)},
              {"tv_method", r.tv_method},
              {"upper", format_real(r.upper)},
              {"floor_rounding", format_real(r.floor_rounding)},
              {"floor_epsilon", format_real(r.floor_epsilon)},
              {"achieved", to_json(r.achieved)},
              {"family_method", r.family_method},
              {"holds", sandwich_holds(r)}};
    if (r.tv_tilde_exact) j["tv_tilde_exact"] = to_string(*r.tv_tilde_exact);
    j["family_adv"] = r.family_adv ? json(format_real(*r.family_adv)) : json();
    recs.push_back(std::move(j));
  }
  return {{"epsilon", to_string(report.epsilon)},
          {"delta", to_string(report.delta)},
          {"pipeline", pipeline_json(report.pipeline)},
          {"rounded", rounded_json(report.rounded)},
          {"records", recs}};
}

json to_json(const KStarResult& result) {
  json curve = json::array();
  for (const auto& c : result.curve) {
    curve.push_back({{"k", c.k}, {"achieved", to_json(c.achieved)}});
  }
  return {{"k_star", result.k_star ? json(*result.k_star) : json()},
          {"reached", result.k_star.has_value()},
          {"dh2_tilde", format_real(result.dh2_tilde)},
          {"bracket_low", format_real(result.bracket_low)},
          {"bracket_high", format_real(result.bracket_high)},
          {"within_bracket", result.within_bracket},
          {"pipeline", pipeline_json(result.pipeline)},
          {"rounded", rounded_json(result.rounded)},
          {"curve", curve}};
}

json to_json(const PseudoDistanceResult& result) {
  return {{"delta_star", format_real(result.delta_star)},
          {"delta_sq", format_real(result.delta_sq)},
          {"witness0", rationals(result.witness0.mass())},
          {"witness1", rationals(result.witness1.mass())},
          {"diagnostics", diagnostics_json(result.diagnostics)}};
}

json to_json(const PseudoEntropyResult& result) {
  return {{"r_star", format_real(result.r_star)},
          {"gap", format_real(result.gap)},
          {"witness", rationals(result.witness.mass())},
          {"diagnostics", diagnostics_json(result.diagnostics)}};
}

json to_json(const AuditReport& report) {
  json vs = json::array();
  for (const auto& v : report.violations) {
    vs.push_back({{"part", v.part},
                  {"function", v.function},
                  {"correlation", to_string(v.correlation)}});
  }
  return {{"pass", report.pass},
          {"violations", vs},
          {"skipped_light_parts", report.skipped_light_parts}};
}

std::string sandwich_csv(const SandwichReport& report, double tol) {
  std::ostringstream out;
  out << kCsvHeader << "\n";
  for (const auto& r : report.records) {
    if (!sandwich_holds(r, tol)) {
      throw InvariantViolation("sandwich fails at k=" + std::to_string(r.k));
    }
    out << r.k << "," << format_real(r.tv_tilde_k) << ","
        << format_real(r.upper) << "," << format_real(r.floor_rounding) << ","
        << format_real(r.achieved.value) << ","
        << format_real(r.achieved.ci_halfwidth) << ","
        << (r.family_adv ? format_real(*r.family_adv) : std::string()) << ","
        << to_string(r.achieved.method) << "\n";
  }
  return out.str();
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw Error("write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot read " + path.string());
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace indist::io
