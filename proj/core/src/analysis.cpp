#include "indist/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "indist/errors.hpp"
#include "indist/products.hpp"
#include "indist/random.hpp"

namespace indist {
namespace {

std::string to_string(ProductTvMethod m) {
  switch (m) {
    case ProductTvMethod::exhaustive:
      return "exhaustive";
    case ProductTvMethod::count_vectors:
      return "count_vectors";
    case ProductTvMethod::automatic:
      break;
  }
  return "automatic";
}

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

// TV(P^k, Q^k) = E_{P^k}[(1 - Q^k/P^k)_+], sampled when no exact route fits.
double sampled_power_tv(const ProbDist& p, const ProbDist& q, unsigned k,
                        std::uint64_t trials, std::uint64_t seed) {
  const auto pr = p.reals(), qr = q.reals();
  std::vector<double> log_ratio(pr.size(), 0.0);
  for (std::size_t x = 0; x < pr.size(); ++x) {
    if (pr[x] > 0) {
      log_ratio[x] = qr[x] > 0 ? std::log(qr[x]) - std::log(pr[x])
                               : -std::numeric_limits<double>::infinity();
    }
  }
  DiscreteSampler sampler(pr);
  long double acc = 0;
  const std::uint64_t blocks =
      (trials + config::kMonteCarloBlock - 1) / config::kMonteCarloBlock;
  for (std::uint64_t blk = 0; blk < blocks; ++blk) {
    Rng rng(derive_seed(seed, blk));
    const std::uint64_t end =
        std::min(trials, (blk + 1) * config::kMonteCarloBlock);
    for (std::uint64_t t = blk * config::kMonteCarloBlock; t < end; ++t) {
      double l = 0.0;
      for (unsigned i = 0; i < k; ++i) l += log_ratio[sampler(rng)];
      acc += std::max(0.0, 1.0 - std::exp(l));
    }
  }
  return static_cast<double>(acc / static_cast<long double>(trials));
}

AdvantageEstimate achieved_advantage(const Pipeline& pl,
                                     const RoundedAlphaTable& rounded,
                                     const ProbDist& x0, const ProbDist& x1,
                                     unsigned k,
                                     const PipelineOptions& options) {
  try {
    return exact_advantage(rounded, pl.pi0, pl.pi1, k, options.budget);
  } catch (const BudgetExceeded&) {
    if (!options.allow_monte_carlo) throw;
    return mc_advantage(rounded, x0, x1, pl.partition.labeling, k,
                        options.mc_trials, derive_seed(options.seed, k));
  }
}

}  // namespace

Pipeline run_pipeline(const ProbDist& x0, const ProbDist& x1,
                      const Family& family, const Rational& epsilon,
                      const PipelineOptions& options) {
  require_same_domain(x0.domain(), x1.domain());
  if (!family.empty()) require_same_domain(x0.domain(), family.domain());
  if (!(sgn(epsilon) > 0 && epsilon < 1)) {
    throw ValidationError("epsilon must lie in (0,1)");
  }
  TestFunction g = target_g(x0, x1);
  ProbDist d = mixture(x0, x1);

  Rational mc_eps = epsilon;
  unsigned refinements = 0;
  for (;;) {
    MCParams params = MCParams::defaults(mc_eps);
    if (sgn(options.gamma) != 0) params.gamma = options.gamma;
    if (sgn(options.lambda) != 0) params.lambda = options.lambda;
    params.max_rounds = params.round_bound();
    params.seed = options.seed;
    BuildDiagnostics build;
    Partition partition = build_partition(d, g, family, params, &build);
    TildePair tilde = build_tilde(x0, x1, partition, epsilon);
    verify_structural(tilde, x0, x1).require();

    bool tight = true;
    if (options.refine_to_epsilon && !family.empty()) {
      tight = best_advantage(family, x0, tilde.tilde0).value <= epsilon &&
              best_advantage(family, x1, tilde.tilde1).value <= epsilon;
    }
    if (tight || refinements >= options.max_refinements) {
      IndistinguishabilityReport indist =
          verify_indistinguishability(tilde, x0, x1, family);
      AlphaTable alpha = alphas(x0, x1, partition);
      ProbDist pi0 = pushforward(x0, partition.labeling);
      ProbDist pi1 = pushforward(x1, partition.labeling);
      return Pipeline{std::move(g),     std::move(d),     std::move(params),
                      std::move(partition), build,         std::move(tilde),
                      std::move(alpha), std::move(indist), refinements,
                      std::move(pi0),   std::move(pi1)};
    }
    mc_eps /= 2;
    ++refinements;
  }
}

SandwichReport sandwich_report(const ProbDist& x0, const ProbDist& x1,
                               const Family& family, const Rational& epsilon,
                               const std::vector<unsigned>& ks,
                               const Rational& delta,
                               const PipelineOptions& options) {
  for (unsigned k : ks) {
    if (k == 0) throw ValidationError("k must be positive");
  }
  Pipeline pl = run_pipeline(x0, x1, family, epsilon, options);
  RoundedAlphaTable rounded = round_alphas(pl.alpha, delta);
  const double eps = to_double(epsilon);
  const double del = to_double(delta);

  ProductFamilyMode mode = options.family_mode;
  if (mode == ProductFamilyMode::automatic) {
    mode = family.contains_all_boolean() ? ProductFamilyMode::all_boolean
                                         : ProductFamilyMode::generators;
  }

  std::vector<SandwichRecord> records;
  for (unsigned k : ks) {
    SandwichRecord r;
    r.k = k;
    // p(tilde_b) = p(X_b) and the conditionals agree, so the tilde TV is the
    // TV of the pushforward products.
    try {
      ProductTv tv = power_tv_exact(pl.pi0, pl.pi1, k, options.budget);
      r.tv_tilde_exact = tv.value;
      r.tv_tilde_k = tv.real();
      r.tv_method = to_string(tv.method);
    } catch (const BudgetExceeded&) {
      if (!options.allow_monte_carlo) throw;
      r.tv_tilde_k = sampled_power_tv(pl.pi0, pl.pi1, k, options.mc_trials,
                                      derive_seed(options.seed, 1000003 + k));
      r.tv_method = "monte_carlo";
    }
    const double kd = static_cast<double>(k);
    r.upper = std::min(1.0, r.tv_tilde_k + 2.0 * kd * eps);
    r.floor_rounding = guarantee_floor(r.tv_tilde_k, del, k);
    r.floor_epsilon = std::max(0.0, r.tv_tilde_k - 2.0 * kd * eps);
    r.achieved = achieved_advantage(pl, rounded, x0, x1, k, options);

    try {
      switch (mode) {
        case ProductFamilyMode::all_boolean: {
          ProductTv tv = power_tv_exact(x0, x1, k, options.budget);
          r.family_adv = tv.real();
          r.family_method = "all_boolean_tv";
          break;
        }
        case ProductFamilyMode::generators: {
          if (family.empty()) {
            r.family_method = "empty_family";
            break;
          }
          ProductFamilyOptions pfo;
          pfo.budget = options.budget;
          Family fk = product_family(family, k, pfo);
          ProbDist p0 = product_power(x0, k, options.budget);
          ProbDist p1 = product_power(x1, k, options.budget);
          r.family_adv = best_advantage(fk, p0, p1).real();
          r.family_method = "product_generators";
          break;
        }
        case ProductFamilyMode::none:
        case ProductFamilyMode::automatic:
          r.family_method = "skipped";
          break;
      }
    } catch (const BudgetExceeded&) {
      r.family_adv.reset();
      r.family_method = "skipped_budget";
    }
    records.push_back(std::move(r));
  }
  return SandwichReport{epsilon, delta, std::move(pl), std::move(rounded),
                        std::move(records)};
}

bool sandwich_holds(const SandwichRecord& record, double tol) {
  if (record.family_adv && *record.family_adv > record.upper + tol) {
    return false;
  }
  double slack = tol;
  if (record.achieved.method == AdvantageMethod::monte_carlo) {
    slack += record.achieved.ci_halfwidth;
  }
  return record.achieved.value >= record.floor_rounding - slack;
}

SampleBounds hellinger_sample_bounds(double delta_star, double eps,
                                     unsigned k) {
  if (!(delta_star >= 0 && delta_star <= 1) || !(eps >= 0)) {
    throw ValidationError("sample bounds need delta in [0,1], eps >= 0");
  }
  const double kd = static_cast<double>(k);
  SampleBounds b;
  b.indist_upper = clamp01(std::sqrt(2.0 * kd) * delta_star + 2.0 * kd * eps);
  b.dist_lower = clamp01(-std::expm1(-kd * delta_star * delta_star) -
                         2.0 * kd * eps);
  return b;
}

SampleBounds renyi_sample_bounds(double gap, double eps, unsigned k,
                                 double upper_factor, double exponent) {
  if (!(gap >= 0) || !(eps >= 0)) {
    throw ValidationError("sample bounds need gap >= 0, eps >= 0");
  }
  const double kd = static_cast<double>(k);
  SampleBounds b;
  b.indist_upper = clamp01(upper_factor * std::sqrt(kd * gap) + 2.0 * kd * eps);
  b.dist_lower = clamp01(-std::expm1(-exponent * kd * std::min(gap, 1.0)) -
                         2.0 * kd * eps);
  return b;
}

double geier_bound(double d, unsigned k, double slack) {
  if (!(d >= 0 && d <= 1)) throw ValidationError("d must lie in [0,1]");
  const double miss = d >= 1 ? 1.0
                             : -std::expm1(static_cast<double>(k) *
                                           std::log1p(-d));
  return std::min(1.0, miss + slack);
}

Family enlarged_family(const Family& family, const Partition& partition,
                       const ProbDist& x0, const ProbDist& x1) {
  require_same_domain(x0.domain(), x1.domain());
  const auto parts = partition.members();
  std::vector<std::size_t> tilt;
  for (const auto& part : parts) {
    if (x1.mass_of(part) > x0.mass_of(part)) {
      tilt.insert(tilt.end(), part.begin(), part.end());
    }
  }
  std::sort(tilt.begin(), tilt.end());
  std::vector<TestFunction> fs = family.functions();
  TestFunction ind = TestFunction::indicator(x0.size(), tilt, "tilt");
  fs.push_back(TestFunction(x0.domain(), ind.values(), "tilt"));
  fs.push_back(TestFunction(x0.domain(), ind.negated().values(), "not(tilt)"));
  return Family(x0.domain(), std::move(fs), family.closed_under_negation(),
                family.complexity());
}

KStarResult k_star_sweep(const ProbDist& x0, const ProbDist& x1,
                         const Family& family, const Rational& epsilon,
                         const Rational& delta, double target, unsigned k_max,
                         const SweepOptions& options) {
  if (!(target > 0 && target < 1)) {
    throw ValidationError("advantage target must lie in (0,1)");
  }
  if (k_max == 0) throw ValidationError("k_max must be positive");
  Pipeline pl = run_pipeline(x0, x1, family, epsilon, options.pipeline);
  RoundedAlphaTable rounded = round_alphas(pl.alpha, delta);

  const double dh2 = hellinger_sq(pl.tilde.tilde0, pl.tilde.tilde1).value;
  const double inf = std::numeric_limits<double>::infinity();
  std::optional<unsigned> k_star;
  std::vector<CurvePoint> curve;
  for (unsigned k = 1; k <= k_max; ++k) {
    AdvantageEstimate a =
        achieved_advantage(pl, rounded, x0, x1, k, options.pipeline);
    const bool hit = a.value >= target;
    curve.push_back({k, std::move(a)});
    if (hit && !k_star) {
      k_star = k;
      if (options.stop_at_target) break;
    }
  }
  const double low = dh2 > 0 ? config::kKStarLow / dh2 : inf;
  const double high = dh2 > 0 ? config::kKStarHigh / dh2 : inf;
  bool within = false;
  if (k_star) {
    const double ks = static_cast<double>(*k_star);
    within = ks >= low && ks <= high;
  }
  return KStarResult{k_star, std::move(curve), dh2,   low,
                     high,   within,           std::move(pl),
                     std::move(rounded)};
}

}  // namespace indist
