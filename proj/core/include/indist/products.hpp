#pragma once

#include <cstdint>
#include <vector>

#include "indist/config.hpp"
#include "indist/distributions.hpp"

namespace indist {

// Mixed-radix coordinates for X^k. Coordinate 0 is the most significant.
class ProductIndexer {
 public:
  ProductIndexer(std::size_t base, unsigned k);

  std::size_t size() const { return size_; }
  unsigned arity() const { return k_; }
  std::size_t base() const { return base_; }
  std::vector<std::size_t> decode(std::size_t index) const;
  std::size_t encode(const std::vector<std::size_t>& coords) const;

 private:
  std::size_t base_;
  unsigned k_;
  std::size_t size_;
};

// Explicit k-fold product P^k. Size N^k must stay within budget.
ProbDist product_power(const ProbDist& p, unsigned k,
                       std::uint64_t budget = config::kDefaultBudget);

// Explicit product of arbitrary factors.
ProbDist product_of(const std::vector<ProbDist>& factors,
                    std::uint64_t budget = config::kDefaultBudget);

// Real-valued k-fold product, for identity checks in floating point.
std::vector<double> product_power_reals(const std::vector<double>& p,
                                        unsigned k);

enum class ProductTvMethod { automatic, exhaustive, count_vectors };

struct ProductTv {
  Rational value;
  ProductTvMethod method = ProductTvMethod::exhaustive;
  double real() const { return to_double(value); }
};

// Exact TV between the products of Ps and Qs. Exhaustive enumeration when
// the product of pairwise support sizes fits the budget, otherwise the
// multinomial count-vector sum, which needs identical factors.
ProductTv product_tv_exact(const std::vector<ProbDist>& ps,
                           const std::vector<ProbDist>& qs,
                           std::uint64_t budget = config::kDefaultBudget,
                           ProductTvMethod method = ProductTvMethod::automatic);

// TV(P^k, Q^k) through the identical-factor route.
ProductTv power_tv_exact(const ProbDist& p, const ProbDist& q, unsigned k,
                         std::uint64_t budget = config::kDefaultBudget,
                         ProductTvMethod method = ProductTvMethod::automatic);

// Number of count vectors of k samples over m cells, saturating at
// UINT64_MAX.
std::uint64_t count_vector_space(unsigned k, std::size_t m);
// m^k, saturating.
std::uint64_t saturating_power(std::size_t m, unsigned k);

}  // namespace indist
