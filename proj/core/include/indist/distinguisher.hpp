#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "indist/config.hpp"
#include "indist/constructions.hpp"
#include "indist/distributions.hpp"

namespace indist {

// alpha values rounded to multiples of 1/denominator, denominator =
// ceil(parts / delta).
struct RoundedAlphaTable {
  BigInt denominator;
  std::vector<BigInt> n0;
  std::vector<BigInt> n1;
  std::size_t parts = 0;
  Rational delta;
  // 1/2 sum_P (X0(P)+X1(P)) |n_b/den - alpha_b| for b = 0, 1.
  Rational shift0;
  Rational shift1;
};

// Nearest multiple, exact halves toward zero. Throws ValidationError when
// a positive-mass part ends up with n0 = n1 = 0, and InvariantViolation if
// either shift exceeds delta.
RoundedAlphaTable round_alphas(const AlphaTable& table, const Rational& delta);

struct Kappa {
  BigInt numerator;    // prod n1
  BigInt denominator;  // prod n0
  // log(numerator / denominator); +-inf at the zero conventions.
  double log_value() const;
  // kappa >= 1, with kappa = infinity when only the denominator vanishes.
  bool decide() const { return numerator >= denominator; }
};

// Throws ValidationError on an out-of-range label or a visited part with
// n0 = n1 = 0.
Kappa kappa(const RoundedAlphaTable& table,
            const std::vector<std::size_t>& labels);

struct LRDistinguisher {
  Labeling labeling;
  RoundedAlphaTable table;
  unsigned k = 1;

  bool decide_labels(const std::vector<std::size_t>& labels) const;
  bool decide_elements(const std::vector<std::size_t>& samples) const;
};

enum class AdvantageMethod { exact_enumeration, exact_count_dp, monte_carlo };

std::string to_string(AdvantageMethod method);

struct AdvantageEstimate {
  double value = 0.0;
  std::optional<Rational> exact;
  AdvantageMethod method = AdvantageMethod::exact_count_dp;
  double ci_halfwidth = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

enum class ExactMethod { automatic, enumeration, count_vectors };

// |Pr_{pi1^k}[decide] - Pr_{pi0^k}[decide]| in exact arithmetic. Throws
// BudgetExceeded when neither exact route fits.
AdvantageEstimate exact_advantage(const RoundedAlphaTable& table,
                                  const ProbDist& pi0, const ProbDist& pi1,
                                  unsigned k,
                                  std::uint64_t budget = config::kDefaultBudget,
                                  ExactMethod method = ExactMethod::automatic);

// Sampling estimate with a 95% confidence half-width. Trials are split into
// fixed-size blocks seeded from the master seed, so results depend only on
// (trials, seed).
AdvantageEstimate mc_advantage(const RoundedAlphaTable& table,
                               const ProbDist& x0, const ProbDist& x1,
                               const Labeling& labeling, unsigned k,
                               std::uint64_t trials, std::uint64_t seed);

// max(0, tv - 4 delta k).
double guarantee_floor(double tv_tilde_k, double delta, unsigned k);

// Per-index rule: decide 1 iff prod_a n1^(a)(l_a) >= prod_a n0^(a)(l_a).
// Exhaustive over label tuples.
AdvantageEstimate heterogeneous_advantage(
    const std::vector<RoundedAlphaTable>& tables,
    const std::vector<ProbDist>& pis0, const std::vector<ProbDist>& pis1,
    std::uint64_t budget = config::kDefaultBudget);

}  // namespace indist
