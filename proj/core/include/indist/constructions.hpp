#pragma once

#include <string>
#include <vector>

#include "indist/config.hpp"
#include "indist/distributions.hpp"
#include "indist/families.hpp"
#include "indist/multicalibration.hpp"

namespace indist {

// Posterior weight of each part: alpha_b(P) = X_b(P) / (X0(P) + X1(P)).
struct AlphaTable {
  std::vector<Rational> mass0;
  std::vector<Rational> mass1;
  std::vector<Rational> alpha0;
  std::vector<Rational> alpha1;
  // Parts with X0(P) + X1(P) = 0 have alpha set to 0 and are flagged.
  std::vector<bool> zero_mass;

  std::size_t parts() const { return alpha0.size(); }
};

AlphaTable alphas(const ProbDist& x0, const ProbDist& x1,
                  const Partition& partition);

// Keeps X_b's per-part mass and replaces its conditional with D|P.
struct TildePair {
  ProbDist tilde0;
  ProbDist tilde1;
  Partition partition;
  Rational epsilon;
};

TildePair build_tilde(const ProbDist& x0, const ProbDist& x1,
                      const Partition& partition, const Rational& epsilon = 0);

// X0 with its conditional replaced by X1's on parts where
// alpha1 >= sqrt(eps_prime).
struct HatVariable {
  ProbDist hat0;
  Partition partition;
  Rational eps_prime;
  double threshold = 0.0;
  std::vector<bool> swapped;
};

HatVariable build_hat(const ProbDist& x0, const ProbDist& x1,
                      const Partition& partition, const Rational& eps_prime);

struct StructuralFailure {
  std::size_t part = 0;
  std::string what;
};

struct StructuralReport {
  bool pass = true;
  std::vector<StructuralFailure> failures;
  // Throws InvariantViolation naming the first failing part.
  void require() const;
};

// Exact checks: pushforwards agree with X_b, and both tilde conditionals
// equal D|P on every positive-mass part.
StructuralReport verify_structural(const TildePair& pair, const ProbDist& x0,
                                   const ProbDist& x1);

// Exact checks: pushforward agrees with X0; each positive-mass part carries
// X1's conditional when swapped and X0's otherwise.
StructuralReport verify_structural(const HatVariable& hat, const ProbDist& x0,
                                   const ProbDist& x1);

struct IndistinguishabilityReport {
  BestAdvantage side0;
  BestAdvantage side1;
  double bound = 0.0;
};

// best_advantage(F, X_b, tilde_b) for both sides. Throws InvariantViolation
// if either exceeds constant * epsilon.
IndistinguishabilityReport verify_indistinguishability(
    const TildePair& pair, const ProbDist& x0, const ProbDist& x1,
    const Family& family, double constant = config::kIndistConstant);

struct TvSandwich {
  Rational lo;   // TV(p(hat0), p(X1))
  Rational mid;  // TV(hat0, X1)
  double hi = 0.0;  // lo + 2 sqrt(eps_prime)
};

TvSandwich hat_partition_tv_sandwich(const HatVariable& hat,
                                     const ProbDist& x1);

}  // namespace indist
