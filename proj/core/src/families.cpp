#include "indist/families.hpp"

#include <algorithm>
#include <set>

#include "indist/errors.hpp"
#include "indist/products.hpp"
#include "indist/random.hpp"

namespace indist {

TestFunction::TestFunction(Domain domain, std::vector<Rational> values,
                           std::string name)
    : domain_(std::move(domain)), values_(std::move(values)),
      name_(std::move(name)) {
  if (values_.size() != domain_.size()) {
    throw ValidationError("function length does not match domain size");
  }
  for (auto& v : values_) {
    v.canonicalize();
    if (sgn(v) < 0 || v > 1) {
      throw ValidationError("test function value " + to_string(v) +
                            " outside [0,1]");
    }
  }
  reals_ = to_doubles(values_);
}

TestFunction TestFunction::constant(std::size_t n, const Rational& c,
                                    std::string name) {
  return TestFunction(Domain(n), std::vector<Rational>(n, c), std::move(name));
}

TestFunction TestFunction::indicator(std::size_t n,
                                     const std::vector<std::size_t>& subset,
                                     std::string name) {
  std::vector<Rational> v(n, Rational(0));
  for (auto x : subset) v.at(x) = 1;
  return TestFunction(Domain(n), std::move(v), std::move(name));
}

TestFunction TestFunction::negated() const {
  std::vector<Rational> v(values_.size());
  for (std::size_t x = 0; x < v.size(); ++x) v[x] = 1 - values_[x];
  return TestFunction(domain_, std::move(v),
                      name_.empty() ? std::string() : "not(" + name_ + ")");
}

Family::Family(Domain domain, std::vector<TestFunction> functions,
               bool closed_under_negation, ComplexityTag complexity)
    : domain_(std::move(domain)), functions_(std::move(functions)),
      closed_under_negation_(closed_under_negation),
      complexity_(std::move(complexity)) {
  for (const auto& f : functions_) require_same_domain(domain_, f.domain());
  if (closed_under_negation_) {
    std::set<std::vector<Rational>> present;
    for (const auto& f : functions_) present.insert(f.values());
    for (std::size_t i = 0; i < functions_.size(); ++i) {
      if (!present.count(functions_[i].negated().values())) {
        throw ValidationError("family flagged closed under negation but 1-f "
                              "is missing for function " + std::to_string(i));
      }
    }
  }
}

bool Family::contains_all_boolean() const {
  std::size_t n = domain_.size();
  if (n > config::kMaxBooleanDomain) return false;
  std::set<std::uint64_t> masks;
  for (const auto& f : functions_) {
    std::uint64_t mask = 0;
    bool boolean = true;
    for (std::size_t x = 0; x < n && boolean; ++x) {
      if (f[x] == 1) {
        mask |= std::uint64_t{1} << x;
      } else if (f[x] != 0) {
        boolean = false;
      }
    }
    if (boolean) masks.insert(mask);
  }
  return masks.size() == (std::uint64_t{1} << n);
}

Rational signed_advantage(const TestFunction& f, const ProbDist& p,
                          const ProbDist& q) {
  require_same_domain(f.domain(), p.domain());
  require_same_domain(p.domain(), q.domain());
  Rational s = 0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (sgn(f[x]) != 0) s += f[x] * (p[x] - q[x]);
  }
  return s;
}

Rational advantage_exact(const TestFunction& f, const ProbDist& p,
                         const ProbDist& q) {
  return abs(signed_advantage(f, p, q));
}

double advantage(const TestFunction& f, const ProbDist& p, const ProbDist& q) {
  return to_double(advantage_exact(f, p, q));
}

BestAdvantage best_advantage(const Family& family, const ProbDist& p,
                             const ProbDist& q) {
  if (family.empty()) throw ValidationError("best_advantage on empty family");
  require_same_domain(family.domain(), p.domain());
  require_same_domain(p.domain(), q.domain());

  // Floating-point screen, then exact comparison among the near-maximal
  // candidates. The screen error is far below the candidate margin.
  const std::size_t n = p.size();
  std::vector<double> diff(n);
  for (std::size_t x = 0; x < n; ++x) diff[x] = to_double(p[x] - q[x]);
  std::vector<double> approx(family.size());
  double top = 0.0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& r = family[i].reals();
    double s = 0.0;
    for (std::size_t x = 0; x < n; ++x) s += r[x] * diff[x];
    approx[i] = std::abs(s);
    top = std::max(top, approx[i]);
  }
  const double margin = 1e-9;
  BestAdvantage best;
  bool have = false;
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (approx[i] < top - margin) continue;
    Rational v = advantage_exact(family[i], p, q);
    if (!have || v > best.value) {
      best.index = i;
      best.value = v;
      have = true;
    }
  }
  return best;
}

Family all_boolean_family(const Domain& domain) {
  std::size_t n = domain.size();
  if (n > config::kMaxBooleanDomain) {
    throw ValidationError("all_boolean_family limited to domains of size " +
                          std::to_string(config::kMaxBooleanDomain));
  }
  std::vector<TestFunction> fs;
  fs.reserve(std::size_t{1} << n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<Rational> v(n);
    std::string name = "1{";
    bool first = true;
    for (std::size_t x = 0; x < n; ++x) {
      bool on = (mask >> x) & 1u;
      v[x] = on ? 1 : 0;
      if (on) {
        name += (first ? "" : ",") + std::to_string(x);
        first = false;
      }
    }
    name += "}";
    fs.emplace_back(domain, std::move(v), std::move(name));
  }
  return Family(domain, std::move(fs), true,
                ComplexityTag{0, 0, "all 0/1 functions"});
}

Family close_under_negation(const Family& family) {
  std::vector<TestFunction> fs = family.functions();
  std::set<std::vector<Rational>> present;
  for (const auto& f : fs) present.insert(f.values());
  std::size_t n = family.domain().size();
  for (std::size_t i = 0; i < family.size(); ++i) {
    TestFunction neg = family[i].negated();
    if (present.insert(neg.values()).second) fs.push_back(std::move(neg));
  }
  for (int c = 0; c <= 1; ++c) {
    TestFunction k(family.domain(), std::vector<Rational>(n, Rational(c)),
                   c == 0 ? "zero" : "one");
    if (present.insert(k.values()).second) fs.push_back(std::move(k));
  }
  return Family(family.domain(), std::move(fs), true, family.complexity());
}

std::vector<ProductFunction> product_generators(
    const Family& family, unsigned k, const ProductFamilyOptions& options) {
  if (k == 0) throw ValidationError("k must be positive");
  std::vector<ProductFunction> out;
  const std::size_t m = family.size();
  switch (options.mode) {
    case ProductMode::all_products: {
      std::uint64_t count = saturating_power(m, k);
      if (count > options.budget) {
        throw BudgetExceeded("|F|^k exceeds the product-family budget");
      }
      std::vector<std::size_t> idx(k, 0);
      for (std::uint64_t c = 0; c < count; ++c) {
        out.push_back({idx});
        for (unsigned j = k; j-- > 0;) {
          if (++idx[j] < m) break;
          idx[j] = 0;
        }
      }
      break;
    }
    case ProductMode::per_coordinate: {
      for (unsigned j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
          ProductFunction g{std::vector<std::size_t>(k, ProductFunction::kOne)};
          g.factors[j] = i;
          out.push_back(std::move(g));
        }
      }
      break;
    }
    case ProductMode::sampled: {
      if (m == 0) break;
      Rng rng(options.seed);
      for (std::size_t s = 0; s < options.samples; ++s) {
        ProductFunction g{std::vector<std::size_t>(k)};
        for (auto& f : g.factors) f = rng.below(m);
        out.push_back(std::move(g));
      }
      break;
    }
  }
  return out;
}

TestFunction materialize(const Family& family, const ProductFunction& g) {
  const std::size_t n = family.domain().size();
  const unsigned k = static_cast<unsigned>(g.factors.size());
  ProductIndexer idx(n, k);
  std::vector<Rational> values(idx.size());
  std::string name;
  for (unsigned j = 0; j < k; ++j) {
    if (j) name += "*";
    name += g.factors[j] == ProductFunction::kOne
                ? std::string("1")
                : (family[g.factors[j]].name().empty()
                       ? "f" + std::to_string(g.factors[j])
                       : family[g.factors[j]].name());
  }
  for (std::size_t x = 0; x < idx.size(); ++x) {
    auto c = idx.decode(x);
    Rational v = 1;
    for (unsigned j = 0; j < k && sgn(v) != 0; ++j) {
      if (g.factors[j] != ProductFunction::kOne) v *= family[g.factors[j]][c[j]];
    }
    values[x] = v;
  }
  return TestFunction(Domain(idx.size()), std::move(values), std::move(name));
}

Family product_family(const Family& family, unsigned k,
                      const ProductFamilyOptions& options) {
  ProductIndexer idx(family.domain().size(), k);
  if (k == 1 && options.mode == ProductMode::all_products) return family;
  auto gens = product_generators(family, k, options);
  // Every generator is tabulated over X^k.
  const std::uint64_t cells = saturating_power(family.domain().size(), k);
  if (cells > options.budget ||
      (!gens.empty() && gens.size() > options.budget / cells)) {
    throw BudgetExceeded("product family tables exceed the budget");
  }
  std::vector<TestFunction> fs;
  fs.reserve(gens.size());
  for (const auto& g : gens) fs.push_back(materialize(family, g));
  return Family(Domain(idx.size()), std::move(fs), false,
                ComplexityTag{family.complexity().oracle_gates * k,
                              family.complexity().wires * k,
                              "product generators"});
}

}  // namespace indist
