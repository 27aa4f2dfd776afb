#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "indist/config.hpp"
#include "indist/distributions.hpp"

namespace indist {

// Tabulated test f: X -> [0,1].
class TestFunction {
 public:
  TestFunction(Domain domain, std::vector<Rational> values,
               std::string name = {});

  static TestFunction constant(std::size_t n, const Rational& c,
                               std::string name = {});
  static TestFunction indicator(std::size_t n,
                                const std::vector<std::size_t>& subset,
                                std::string name = {});

  const Domain& domain() const { return domain_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<Rational>& values() const { return values_; }
  const std::vector<double>& reals() const { return reals_; }
  const Rational& operator[](std::size_t x) const { return values_[x]; }
  const std::string& name() const { return name_; }

  // 1 - f.
  TestFunction negated() const;
  bool same_values(const TestFunction& other) const {
    return values_ == other.values_;
  }

 private:
  Domain domain_;
  std::vector<Rational> values_;
  std::vector<double> reals_;
  std::string name_;
};

// Declarative circuit-size metadata. Recorded, never enforced.
struct ComplexityTag {
  std::uint64_t oracle_gates = 0;
  std::uint64_t wires = 0;
  std::string note;
};

class Family {
 public:
  // Throws ValidationError if closed_under_negation is claimed but some 1-f
  // is missing, or if the functions disagree on the domain.
  Family(Domain domain, std::vector<TestFunction> functions,
         bool closed_under_negation = false, ComplexityTag complexity = {});

  const Domain& domain() const { return domain_; }
  const std::vector<TestFunction>& functions() const { return functions_; }
  const TestFunction& operator[](std::size_t i) const { return functions_[i]; }
  std::size_t size() const { return functions_.size(); }
  bool empty() const { return functions_.empty(); }
  bool closed_under_negation() const { return closed_under_negation_; }
  const ComplexityTag& complexity() const { return complexity_; }

  // True when the family contains every 0/1 function on the domain.
  bool contains_all_boolean() const;

 private:
  Domain domain_;
  std::vector<TestFunction> functions_;
  bool closed_under_negation_;
  ComplexityTag complexity_;
};

// Signed sum f(x)(P(x) - Q(x)).
Rational signed_advantage(const TestFunction& f, const ProbDist& p,
                          const ProbDist& q);
Rational advantage_exact(const TestFunction& f, const ProbDist& p,
                         const ProbDist& q);
double advantage(const TestFunction& f, const ProbDist& p, const ProbDist& q);

struct BestAdvantage {
  std::size_t index = 0;
  Rational value;
  double real() const { return to_double(value); }
};

// Max over F, lowest index on ties. Throws ValidationError on empty F.
BestAdvantage best_advantage(const Family& family, const ProbDist& p,
                             const ProbDist& q);

// Every indicator on the domain, ordered by bitmask (bit x set <=> f(x)=1).
Family all_boolean_family(const Domain& domain);

// Adds 1-f for every f and both constants when missing.
Family close_under_negation(const Family& family);

enum class ProductMode { all_products, per_coordinate, sampled };

struct ProductFamilyOptions {
  ProductMode mode = ProductMode::all_products;
  std::size_t samples = 0;  // used by ProductMode::sampled
  std::uint64_t seed = 0;
  std::uint64_t budget = config::kDefaultBudget;
};

// A product of per-coordinate factors. Factor kOne stands for the constant
// 1 function, which is how single-coordinate liftings are expressed.
struct ProductFunction {
  static constexpr std::size_t kOne = static_cast<std::size_t>(-1);
  std::vector<std::size_t> factors;
};

std::vector<ProductFunction> product_generators(
    const Family& family, unsigned k, const ProductFamilyOptions& options);

TestFunction materialize(const Family& family, const ProductFunction& g);

// Generator subset of the marginal-closed family on X^k.
Family product_family(const Family& family, unsigned k,
                      const ProductFamilyOptions& options = {});

}  // namespace indist
