#include "generators.hpp"

#include <cctype>
#include <cmath>

#include "indist/errors.hpp"
#include "indist/random.hpp"

namespace indist::cli {
namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

void require_arity(const GeneratorSpec& spec, std::size_t n) {
  if (spec.args.size() != n) {
    throw ParseError(spec.kind + " takes " + std::to_string(n) +
                     " argument(s), got " + std::to_string(spec.args.size()));
  }
}

std::size_t parse_size(const std::string& s) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size() || s.front() == '-') {
    throw ParseError("expected a nonnegative integer, got \"" + s + "\"");
  }
  return static_cast<std::size_t>(v);
}

Family singletons(const Domain& domain) {
  std::vector<TestFunction> fs;
  for (std::size_t x = 0; x < domain.size(); ++x) {
    fs.push_back(TestFunction::indicator(domain.size(), {x},
                                         "{" + std::to_string(x) + "}"));
  }
  return Family(domain, std::move(fs));
}

Instance biased_coin(const GeneratorSpec& spec) {
  require_arity(spec, 1);
  const Rational e = parse_rational(spec.args[0]);
  if (sgn(e) < 0 || e > Rational(1, 2)) {
    throw ValidationError("biased_coin bias must lie in [0, 1/2]");
  }
  ProbDist x0 = ProbDist::bernoulli(Rational(1, 2));
  ProbDist x1 = ProbDist::bernoulli(Rational(Rational(1, 2) + e));
  Family f = all_boolean_family(x0.domain());
  return {std::move(x0), std::move(x1), std::move(f)};
}

Instance planted_halves(const GeneratorSpec& spec) {
  require_arity(spec, 2);
  const std::size_t n = parse_size(spec.args[0]);
  const Rational bias = parse_rational(spec.args[1]);
  if (n < 2 || n % 2 != 0) {
    throw ValidationError("planted_halves needs an even domain size >= 2");
  }
  if (sgn(bias) < 0 || bias >= 1) {
    throw ValidationError("planted_halves bias must lie in [0, 1)");
  }
  // Uniform mixture with posterior 1/2 +- bias/2 on the two halves.
  const Rational hi = Rational(1, 2) + bias / 2;
  const Rational lo = Rational(1, 2) - bias / 2;
  std::vector<Rational> m0(n), m1(n);
  std::vector<std::size_t> first;
  for (std::size_t x = 0; x < n; ++x) {
    const Rational& post = x < n / 2 ? hi : lo;
    m1[x] = Rational(2, n) * post;
    m0[x] = Rational(2, n) * (1 - post);
    if (x < n / 2) first.push_back(x);
  }
  Domain dom(n);
  TestFunction a = TestFunction::indicator(n, first, "first_half");
  TestFunction b(dom, a.negated().values(), "second_half");
  Family f(dom, {a, b}, true);
  return {ProbDist(dom, std::move(m0)), ProbDist(dom, std::move(m1)),
          std::move(f)};
}

std::vector<Rational> dirichlet_masses(Rng& rng, std::size_t n, double conc) {
  // Integer weights keep the masses exact and the files short.
  const double scale = 1e6;
  std::vector<double> g(n);
  double total = 0;
  for (auto& v : g) {
    v = rng.gamma(conc);
    total += v;
  }
  std::vector<long> w(n);
  long sum = 0;
  for (std::size_t x = 0; x < n; ++x) {
    w[x] = std::lround(g[x] / total * scale);
    sum += w[x];
  }
  if (sum == 0) {
    w[0] = 1;
    sum = 1;
  }
  std::vector<Rational> out(n);
  for (std::size_t x = 0; x < n; ++x) {
    out[x] = Rational(w[x], sum);
    out[x].canonicalize();
  }
  return out;
}

Instance random_pair(const GeneratorSpec& spec) {
  require_arity(spec, 3);
  const std::size_t n = parse_size(spec.args[0]);
  const double conc = to_double(parse_rational(spec.args[1]));
  const std::uint64_t seed = parse_size(spec.args[2]);
  if (n < 1 || n > 64) throw ValidationError("random_pair needs 1 <= N <= 64");
  if (!(conc > 0)) throw ValidationError("concentration must be positive");
  Rng rng(seed);
  Domain dom(n);
  ProbDist x0(dom, dirichlet_masses(rng, n, conc));
  ProbDist x1(dom, dirichlet_masses(rng, n, conc));
  if (n <= 4) return {std::move(x0), std::move(x1), all_boolean_family(dom)};
  std::vector<TestFunction> fs = singletons(dom).functions();
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> subset;
    for (std::size_t x = 0; x < n; ++x) {
      if (rng.below(2) == 1) subset.push_back(x);
    }
    fs.push_back(
        TestFunction::indicator(n, subset, "subset" + std::to_string(i)));
  }
  return {std::move(x0), std::move(x1), Family(dom, std::move(fs))};
}

Instance uniform(const GeneratorSpec& spec) {
  require_arity(spec, 1);
  const std::size_t n = parse_size(spec.args[0]);
  if (n < 1) throw ValidationError("uniform needs N >= 1");
  ProbDist u = ProbDist::uniform(n);
  return {u, u, singletons(u.domain())};
}

}  // namespace

GeneratorSpec parse_generator(const std::string& text) {
  const std::string t = trim(text);
  const auto open = t.find('(');
  if (open == std::string::npos || t.back() != ')') {
    throw ParseError("generator must look like kind(args), got \"" + text +
                     "\"");
  }
  GeneratorSpec spec;
  spec.kind = trim(t.substr(0, open));
  const std::string inner = t.substr(open + 1, t.size() - open - 2);
  std::size_t start = 0;
  while (start <= inner.size()) {
    auto comma = inner.find(',', start);
    if (comma == std::string::npos) comma = inner.size();
    std::string arg = trim(inner.substr(start, comma - start));
    if (arg.empty()) throw ParseError("empty generator argument in \"" + text + "\"");
    spec.args.push_back(std::move(arg));
    start = comma + 1;
  }
  return spec;
}

std::string to_string(const GeneratorSpec& spec) {
  std::string s = spec.kind + "(";
  for (std::size_t i = 0; i < spec.args.size(); ++i) {
    s += (i ? "," : "") + spec.args[i];
  }
  return s + ")";
}

Instance generate(const GeneratorSpec& spec) {
  if (spec.kind == "biased_coin") return biased_coin(spec);
  if (spec.kind == "planted_halves") return planted_halves(spec);
  if (spec.kind == "random_pair") return random_pair(spec);
  if (spec.kind == "uniform") return uniform(spec);
  throw ParseError("unknown generator \"" + spec.kind + "\"");
}

}  // namespace indist::cli
