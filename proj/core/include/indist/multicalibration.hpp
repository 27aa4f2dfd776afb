#pragma once

#include <cstdint>
#include <vector>

#include "indist/distributions.hpp"
#include "indist/families.hpp"

namespace indist {

// A labeling of the domain together with per-part mixture weights and
// calibrated values v_P = E_{D|P}[g].
struct Partition {
  Labeling labeling;
  std::vector<Rational> part_weights;
  std::vector<Rational> v;

  std::size_t parts() const { return labeling.parts; }
  std::vector<std::vector<std::size_t>> members() const {
    return labeling.members();
  }

  // Computes weights under d and the calibrated values of g. Zero-weight
  // parts get v = 1/2, the value g takes on zero-mass points.
  static Partition from_labels(Labeling labeling, const ProbDist& d,
                               const TestFunction& g);
  static Partition singletons(const ProbDist& d, const TestFunction& g);
  static Partition whole(const ProbDist& d, const TestFunction& g);

  // Throws InvariantViolation unless weights and values match d and g.
  void validate(const ProbDist& d, const TestFunction& g) const;
};

struct MCParams {
  Rational epsilon;
  Rational gamma;
  Rational lambda;
  std::uint64_t max_rounds = 0;
  std::uint64_t seed = 0;

  // gamma = eps^2, lambda = eps/2, max_rounds = the potential bound.
  static MCParams defaults(const Rational& epsilon);

  // floor(1 / (lambda eps gamma)).
  std::uint64_t round_bound() const;
  void validate() const;
};

struct Violation {
  std::size_t part = 0;
  std::size_t function = 0;
  Rational correlation;
};

struct AuditReport {
  bool pass = true;
  std::vector<Violation> violations;
  std::vector<std::size_t> skipped_light_parts;
};

struct BuildDiagnostics {
  std::uint64_t rounds = 0;
  std::uint64_t calibration_steps = 0;
  std::uint64_t multicalibration_steps = 0;
  std::uint64_t round_bound = 0;
};

// Posterior of the mixture: X1 / (X0 + X1), and 1/2 where both vanish.
TestFunction target_g(const ProbDist& x0, const ProbDist& x1);

// Checks |E_{D|P}[f (g - v_P)]| <= eps on every part of weight >= gamma.
AuditReport audit(const Partition& partition, const ProbDist& d,
                  const TestFunction& g, const Family& family,
                  const MCParams& params);

// Level sets of a predictor h refined by boosting-style updates until the
// audit passes. Throws InvariantViolation if the round counter passes the
// potential bound.
Partition build_partition(const ProbDist& d, const TestFunction& g,
                          const Family& family, const MCParams& params,
                          BuildDiagnostics* diagnostics = nullptr);

struct PartStats {
  Rational weight0;
  Rational weight1;
  Rational weight_mixture;
  Rational v;
};

// Per-part masses. Throws InvariantViolation unless v_P equals
// X1(P) / (X0(P) + X1(P)) on every positive-mass part.
std::vector<PartStats> part_statistics(const Partition& partition,
                                       const ProbDist& x0, const ProbDist& x1,
                                       const ProbDist& d);

}  // namespace indist
