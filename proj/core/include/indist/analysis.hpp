#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "indist/config.hpp"
#include "indist/constructions.hpp"
#include "indist/distinguisher.hpp"
#include "indist/families.hpp"
#include "indist/multicalibration.hpp"

namespace indist {

// How the family advantage on X^k is measured.
enum class ProductFamilyMode {
  automatic,    // all_boolean when F contains every 0/1 function
  all_boolean,  // exact TV(X0^k, X1^k)
  generators,   // best advantage over product_family(F, k)
  none,
};

struct PipelineOptions {
  // Zero selects the defaults eps^2 and eps/2 (relative to the
  // multicalibration epsilon actually used).
  Rational gamma = 0;
  Rational lambda = 0;
  // Halve the multicalibration epsilon until both tilde sides are
  // eps-indistinguishable from X_b.
  bool refine_to_epsilon = true;
  unsigned max_refinements = 40;
  std::uint64_t budget = config::kDefaultBudget;
  std::uint64_t mc_trials = 20000;
  std::uint64_t seed = 0;
  // When false, budget overruns propagate instead of falling back to
  // sampling.
  bool allow_monte_carlo = true;
  ProductFamilyMode family_mode = ProductFamilyMode::automatic;
};

struct Pipeline {
  TestFunction g;
  ProbDist mixture;
  MCParams params;  // as used for the final build
  Partition partition;
  BuildDiagnostics build;
  TildePair tilde;
  AlphaTable alpha;
  IndistinguishabilityReport indist;
  unsigned refinements = 0;
  ProbDist pi0;  // p(X0) = p(tilde0)
  ProbDist pi1;
};

Pipeline run_pipeline(const ProbDist& x0, const ProbDist& x1,
                      const Family& family, const Rational& epsilon,
                      const PipelineOptions& options = {});

struct SandwichRecord {
  unsigned k = 0;
  double tv_tilde_k = 0.0;
  std::optional<Rational> tv_tilde_exact;
  std::string tv_method;
  double upper = 0.0;           // tv + 2k eps, capped at 1
  double floor_rounding = 0.0;  // max(0, tv - 4 delta k)
  double floor_epsilon = 0.0;   // max(0, tv - 2k eps)
  AdvantageEstimate achieved;
  std::optional<double> family_adv;
  std::string family_method;
};

struct SandwichReport {
  Rational epsilon;
  Rational delta;
  Pipeline pipeline;
  RoundedAlphaTable rounded;
  std::vector<SandwichRecord> records;
};

SandwichReport sandwich_report(const ProbDist& x0, const ProbDist& x1,
                               const Family& family, const Rational& epsilon,
                               const std::vector<unsigned>& ks,
                               const Rational& delta,
                               const PipelineOptions& options = {});

// family_adv <= upper + tol and achieved >= floor_rounding - tol.
bool sandwich_holds(const SandwichRecord& record, double tol = 1e-9);

struct SampleBounds {
  double indist_upper = 0.0;
  double dist_lower = 0.0;
};

// (sqrt(2k) delta + 2k eps, 1 - exp(-k delta^2) - 2k eps), clamped to [0,1].
SampleBounds hellinger_sample_bounds(double delta_star, double eps,
                                     unsigned k);

// (a sqrt(k gap) + 2k eps, 1 - exp(-c k min(gap,1)) - 2k eps), clamped.
SampleBounds renyi_sample_bounds(double gap, double eps, unsigned k,
                                 double upper_factor = config::kRenyiUpperFactor,
                                 double exponent = config::kRenyiExponent);

// min(1, 1 - (1-d)^k + slack).
double geier_bound(double d, unsigned k, double slack);

// F plus the indicator of the parts where X1 outweighs X0 (and its
// complement): the partition-level test whose advantage is TV(p(X0), p(X1)).
Family enlarged_family(const Family& family, const Partition& partition,
                       const ProbDist& x0, const ProbDist& x1);

struct CurvePoint {
  unsigned k = 0;
  AdvantageEstimate achieved;
};

struct KStarResult {
  std::optional<unsigned> k_star;
  std::vector<CurvePoint> curve;
  double dh2_tilde = 0.0;
  double bracket_low = 0.0;   // kKStarLow / dh2
  double bracket_high = 0.0;  // kKStarHigh / dh2
  bool within_bracket = false;
  Pipeline pipeline;
  RoundedAlphaTable rounded;
};

struct SweepOptions {
  PipelineOptions pipeline;
  // Stop the curve at k*.
  bool stop_at_target = false;
};

KStarResult k_star_sweep(const ProbDist& x0, const ProbDist& x1,
                         const Family& family, const Rational& epsilon,
                         const Rational& delta, double target, unsigned k_max,
                         const SweepOptions& options = {});

}  // namespace indist
