// Acceptance checks. One PASS/FAIL line per criterion; exit status is the
// number of failures. Tolerances and runtime limits are pinned below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "gen.hpp"
#include "indist/analysis.hpp"
#include "indist/convex.hpp"
#include "indist/errors.hpp"
#include "indist/products.hpp"
#include "noop.hpp"
#include "oracle.hpp"

using namespace indist;

namespace {

constexpr double kRealTol = 1e-10;       // criterion 1
constexpr double kSandwichTol = 1e-9;    // criteria 5, 6, 9
constexpr double kGridTol = 1e-3;        // criterion 8
constexpr double kGradRelTol = 1e-6;     // criterion 8
constexpr double kLimit1 = 10, kLimit2 = 60, kLimit6 = 120, kLimit7 = 60;

struct Instance {
  std::string name;
  ProbDist x0;
  ProbDist x1;
  Family family;
  Rational epsilon;
};

struct Outcome {
  bool pass = true;
  std::ostringstream note;
  void fail(const std::string& what) {
    if (pass) note << "first failure: " << what << "; ";
    pass = false;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

ProbDist bern(const Rational& p) { return ProbDist::bernoulli(p); }

Family halves(std::size_t n) {
  std::vector<std::size_t> first;
  for (std::size_t x = 0; x < n / 2; ++x) first.push_back(x);
  auto f = TestFunction::indicator(n, first, "first_half");
  return Family(Domain(n), {f, TestFunction(Domain(n), f.negated().values(), "second_half")}, true);
}

ProbDist planted(std::size_t n, const Rational& bias) {
  // First half carries (1 + bias)/2 of the mass, spread evenly.
  std::vector<Rational> m(n);
  const Rational half(static_cast<long>(n / 2));
  for (std::size_t x = 0; x < n; ++x) {
    m[x] = x < n / 2 ? Rational((1 + bias) / 2 / half) : Rational((1 - bias) / 2 / half);
  }
  return ProbDist(Domain(n), m);
}

// The regression suite: named fixtures plus seeded random pairs.
std::vector<Instance> suite() {
  std::vector<Instance> out;
  for (const char* e : {"1/20", "1/10", "1/5"}) {
    const Rational b = parse_rational(e);
    out.push_back({std::string("coin ") + e, bern(Rational(1, 2)), bern(Rational(1, 2) + b),
                   all_boolean_family(Domain(2)), Rational(1, 10)});
  }
  out.push_back({"planted_halves 8", ProbDist::uniform(8), planted(8, Rational(3, 10)),
                 halves(8), Rational(1, 10)});
  out.push_back({"planted_halves 4", ProbDist::uniform(4), planted(4, Rational(1, 2)),
                 halves(4), Rational(1, 20)});
  gen::Source s(2024);
  for (int i = 0; i < 12; ++i) {
    const std::size_t n = static_cast<std::size_t>(s.range(3, 6));
    auto x0 = gen::distribution(s, n), x1 = gen::distribution(s, n);
    Family fam = gen::family(s, n, static_cast<std::size_t>(s.range(1, 4)), i % 2 == 0);
    if (i % 3 == 0) fam = close_under_negation(fam);
    out.push_back({"random " + std::to_string(i), x0, x1, fam, Rational(1, s.range(5, 12))});
  }
  return out;
}

void report(int id, const std::string& title, const Outcome& o, double secs,
            double limit, int& failures) {
  const bool in_time = limit <= 0 || secs <= limit;
  const bool ok = o.pass && in_time;
  if (!ok) ++failures;
  std::printf("criterion %2d %s  %s [%.2fs%s] %s%s\n", id, ok ? "PASS" : "FAIL",
              title.c_str(), secs,
              limit > 0 ? (" of " + std::to_string(static_cast<int>(limit)) + "s").c_str() : "",
              o.note.str().c_str(), in_time ? "" : "runtime limit exceeded");
  std::fflush(stdout);
}

// 1. Hellinger/TV chain, product formula, Hellinger-to-uniform identity.
Outcome metric_identities() {
  Outcome o;
  gen::Source s(1);
  std::size_t products = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = static_cast<std::size_t>(s.range(1, 8));
    auto p = gen::distribution(s, n), q = gen::distribution(s, n);
    const double h2 = hellinger_sq(p, q).value, h = std::sqrt(h2);
    const double tv = tv_distance(p, q).value;
    if (h2 > tv + kRealTol || tv > std::sqrt(2.0) * h + kRealTol) {
      o.fail("chain on trial " + std::to_string(trial));
    }
    for (unsigned m = 1; m <= 8; ++m) {
      if (saturating_power(n, m) > 65536) break;
      const double direct = oracle::hellinger_sq(product_power_reals(p.reals(), m),
                                                 product_power_reals(q.reals(), m));
      const double formula = product_hellinger_sq(h2, m);
      if (std::abs(direct - formula) > kRealTol) {
        o.fail("product formula trial " + std::to_string(trial) + " m " + std::to_string(m));
      }
      ++products;
      // Exact rational products for the small cases.
      if (trial < 40 && saturating_power(n, m) <= 1024) {
        const double exact = hellinger_sq(product_power(p, m), product_power(q, m)).value;
        if (std::abs(exact - formula) > kRealTol) o.fail("rational product formula");
      }
    }
    const double hu = hellinger_to_uniform(p).value;
    const double hd = hellinger_sq(p, ProbDist(p.domain(), ProbDist::uniform(n).mass())).value;
    if (std::abs(hu - hd) > kRealTol) o.fail("uniform identity trial " + std::to_string(trial));
  }
  o.note << "1000 pairs, " << products << " product checks, tol " << kRealTol << "; ";
  return o;
}

// 2. Audit, potential bound and v_P = alpha1 on 100 seeded instances.
Outcome multicalibration_soundness() {
  Outcome o;
  gen::Source s(2);
  std::uint64_t max_rounds = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = static_cast<std::size_t>(s.range(2, 32));
    const std::size_t fcount = static_cast<std::size_t>(s.range(1, 64));
    auto x0 = gen::distribution(s, n), x1 = gen::distribution(s, n);
    auto fam = gen::family(s, n, fcount, s.coin());
    const Rational eps = std::vector<Rational>{Rational(1, 4), Rational(1, 8),
                                               Rational(1, 10)}[static_cast<std::size_t>(trial % 3)];
    MCParams params = MCParams::defaults(eps);
    params.seed = static_cast<std::uint64_t>(trial);
    const auto d = mixture(x0, x1);
    const auto g = target_g(x0, x1);
    BuildDiagnostics diag;
    Partition part = build_partition(d, g, fam, params, &diag);
    max_rounds = std::max(max_rounds, diag.rounds);
    const std::string tag = " (trial " + std::to_string(trial) + ")";
    if (!audit(part, d, g, fam, params).pass) o.fail("audit" + tag);
    if (diag.rounds > params.round_bound()) o.fail("round bound" + tag);
    const AlphaTable a = alphas(x0, x1, part);
    for (std::size_t p = 0; p < part.parts(); ++p) {
      if (!a.zero_mass[p] && part.v[p] != a.alpha1[p]) o.fail("v != alpha1" + tag);
    }
  }
  o.note << "100 instances, N<=32, |F|<=64, max rounds " << max_rounds << "; ";
  return o;
}

// Moves mass between two points of x; same_part picks whether they share a
// part of the labeling.
std::optional<ProbDist> corrupt(const ProbDist& x, const Labeling& lab, bool same_part) {
  for (std::size_t a = 0; a < x.size(); ++a) {
    if (sgn(x[a]) == 0) continue;
    for (std::size_t b = 0; b < x.size(); ++b) {
      if (a == b || (lab[a] == lab[b]) != same_part) continue;
      auto m = x.mass();
      const Rational shift = m[a] / 3;
      m[a] -= shift;
      m[b] += shift;
      return ProbDist(x.domain(), m);
    }
  }
  return std::nullopt;
}

// 3. Pushforward and conditional identities, with corrupted negatives.
Outcome structural(const std::vector<Instance>& instances) {
  Outcome o;
  int runs = 0, negatives = 0;
  for (const auto& inst : instances) {
    auto pl = run_pipeline(inst.x0, inst.x1, inst.family, inst.epsilon);
    ++runs;
    if (!verify_structural(pl.tilde, inst.x0, inst.x1).pass) o.fail("tilde " + inst.name);
    if (pushforward(pl.tilde.tilde1, pl.partition.labeling) != pl.pi1) o.fail("pi1 " + inst.name);
    auto hat = build_hat(inst.x0, inst.x1, pl.partition, inst.epsilon * inst.epsilon);
    if (!verify_structural(hat, inst.x0, inst.x1).pass) o.fail("hat " + inst.name);
    for (bool same : {true, false}) {
      if (auto bad = corrupt(pl.tilde.tilde0, pl.partition.labeling, same)) {
        TildePair broken = pl.tilde;
        broken.tilde0 = *bad;
        ++negatives;
        if (verify_structural(broken, inst.x0, inst.x1).pass) o.fail("missed tilde corruption " + inst.name);
      }
      if (auto bad = corrupt(hat.hat0, pl.partition.labeling, same)) {
        HatVariable broken = hat;
        broken.hat0 = *bad;
        ++negatives;
        if (verify_structural(broken, inst.x0, inst.x1).pass) o.fail("missed hat corruption " + inst.name);
      }
    }
  }
  o.note << runs << " pipeline runs, " << negatives << " corrupted negatives; ";
  return o;
}

// 4. Indistinguishability budget at gamma = eps^2, unrefined construction,
// and the hat variable at eps' = eps^2.
Outcome indistinguishability(const std::vector<Instance>& instances) {
  Outcome o;
  double worst = 0;
  for (const auto& inst : instances) {
    if (inst.family.empty()) continue;
    const double eps = to_double(inst.epsilon);
    PipelineOptions opt;
    opt.refine_to_epsilon = false;
    try {
      auto pl = run_pipeline(inst.x0, inst.x1, inst.family, inst.epsilon, opt);
      worst = std::max({worst, pl.indist.side0.real() / eps, pl.indist.side1.real() / eps});
    } catch (const InvariantViolation& e) {
      o.fail(inst.name + ": " + e.what());
      continue;
    }
    // The hat lemma needs a partition calibrated at eps' = eps^2.
    const Rational eps_prime = inst.epsilon * inst.epsilon;
    auto d = mixture(inst.x0, inst.x1);
    auto g = target_g(inst.x0, inst.x1);
    Partition part = build_partition(d, g, inst.family, MCParams::defaults(eps_prime));
    auto hat = build_hat(inst.x0, inst.x1, part, eps_prime);
    const double adv = best_advantage(inst.family, inst.x0, hat.hat0).real();
    worst = std::max(worst, adv / eps);
    if (adv > config::kIndistConstant * eps) o.fail("hat " + inst.name);
  }
  o.note << "worst advantage/eps " << worst << " (bound " << config::kIndistConstant << "); ";
  return o;
}

// 5. No-op rounding: DP = enumeration = product TV; active rounding keeps
// the 4 delta k floor.
Outcome distinguisher_exactness(const std::vector<Instance>& instances) {
  Outcome o;
  gen::Source s(5);
  int exact_checks = 0, floor_checks = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = static_cast<std::size_t>(s.range(2, 8));
    const std::size_t m = static_cast<std::size_t>(s.range(1, 4));
    auto x0 = gen::distribution(s, n, 12, 0.1), x1 = gen::distribution(s, n, 12, 0.1);
    Labeling lab{gen::labels(s, n, m), m};
    auto pi0 = pushforward(x0, lab), pi1 = pushforward(x1, lab);
    auto table = noop::table(pi0, pi1);
    for (unsigned k = 1; k <= 6; ++k) {
      auto dp = exact_advantage(table, pi0, pi1, k, config::kDefaultBudget, ExactMethod::count_vectors);
      auto en = exact_advantage(table, pi0, pi1, k, config::kDefaultBudget, ExactMethod::enumeration);
      auto tv = power_tv_exact(pi0, pi1, k, config::kDefaultBudget, ProductTvMethod::exhaustive);
      ++exact_checks;
      if (*dp.exact != *en.exact || *dp.exact != tv.value) {
        o.fail("three-way disagreement trial " + std::to_string(trial) + " k " + std::to_string(k));
      }
    }
  }
  for (const auto& inst : instances) {
    auto pl = run_pipeline(inst.x0, inst.x1, inst.family, inst.epsilon);
    for (const char* dl : {"1/10", "1/100", "1/1000"}) {
      const Rational delta = parse_rational(dl);
      auto table = round_alphas(pl.alpha, delta);
      for (unsigned k = 1; k <= 6; ++k) {
        const double tv = power_tv_exact(pl.pi0, pl.pi1, k).real();
        const double got = exact_advantage(table, pl.pi0, pl.pi1, k).value;
        ++floor_checks;
        if (got < guarantee_floor(tv, to_double(delta), k) - kSandwichTol) {
          o.fail("floor " + inst.name + " delta " + dl + " k " + std::to_string(k));
        }
      }
    }
  }
  o.note << exact_checks << " three-way checks, " << floor_checks << " floor checks; ";
  return o;
}

// 6. Sandwich on small domains with the full Boolean family.
Outcome sandwich() {
  Outcome o;
  gen::Source s(6);
  int records = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = static_cast<std::size_t>(s.range(2, 4));
    auto x0 = gen::distribution(s, n), x1 = gen::distribution(s, n);
    const Rational eps(1, trial % 2 ? 10 : 20);
    const Rational delta(1, trial % 3 ? 100 : 1000);
    auto rep = sandwich_report(x0, x1, all_boolean_family(Domain(n)), eps, {1, 2, 3}, delta);
    for (const auto& r : rep.records) {
      ++records;
      const double k = r.k, e = to_double(eps), dl = to_double(delta);
      const double lo = r.tv_tilde_k - 4 * dl * k - kSandwichTol;
      const double hi = r.tv_tilde_k + 2 * k * e + kSandwichTol;
      if (r.achieved.value < lo || r.achieved.value > hi) o.fail("achieved outside band");
      if (!r.family_adv || *r.family_adv > hi) o.fail("family advantage above band");
      if (!r.family_adv || std::abs(*r.family_adv - oracle::tv(oracle::power(x0.reals(), r.k),
                                                            oracle::power(x1.reals(), r.k))) > 1e-12) {
        o.fail("family advantage is not the product TV");
      }
    }
  }
  o.note << records << " records, tol " << kSandwichTol << "; ";
  return o;
}

// 7. k* lands in [0.1/dH^2, 10/dH^2] for biased coins.
Outcome sample_complexity() {
  Outcome o;
  for (const char* e : {"0.05", "0.1", "0.2"}) {
    auto x0 = bern(Rational(1, 2)), x1 = bern(Rational(1, 2) + parse_rational(e));
    const double dh2 = hellinger_sq(x0, x1).value;
    const auto k_max = static_cast<unsigned>(std::ceil(config::kKStarHigh / dh2));
    SweepOptions so;
    so.stop_at_target = true;
    so.pipeline.allow_monte_carlo = false;
    auto r = k_star_sweep(x0, x1, all_boolean_family(Domain(2)), Rational(1, 1000),
                          Rational(1, 1000000), 0.5, k_max, so);
    o.note << "e=" << e << " k*=" << (r.k_star ? std::to_string(*r.k_star) : "none") << " in ["
           << r.bracket_low << ", " << r.bracket_high << "]; ";
    if (!r.within_bracket) o.fail(std::string("bracket e=") + e);
  }
  return o;
}

// Grid searches for criterion 8.
using Vec = std::vector<double>;

bool feasible(const Family& fam, const Vec& ref, const Vec& p, double eps) {
  for (const auto& f : fam.functions()) {
    double acc = 0;
    for (std::size_t x = 0; x < p.size(); ++x) acc += f.reals()[x] * (ref[x] - p[x]);
    if (std::abs(acc) > eps + 1e-12) return false;
  }
  return true;
}

std::vector<Vec> grid_points(std::size_t n, const Family& fam, const Vec& ref, double eps,
                             double step, const Vec& center, double radius) {
  std::vector<Vec> out;
  const long steps = std::lround(1.0 / step);
  auto lo = [&](double c) { return std::max(0L, static_cast<long>(std::floor((c - radius) / step))); };
  auto hi = [&](double c) { return std::min(steps, static_cast<long>(std::ceil((c + radius) / step))); };
  if (n == 2) {
    for (long i = lo(center[0]); i <= hi(center[0]); ++i) {
      Vec p{i * step, 1 - i * step};
      if (feasible(fam, ref, p, eps)) out.push_back(p);
    }
    return out;
  }
  for (long i = lo(center[0]); i <= hi(center[0]); ++i) {
    for (long j = lo(center[1]); j <= hi(center[1]) && i + j <= steps; ++j) {
      Vec p{i * step, j * step, (steps - i - j) * step};
      if (feasible(fam, ref, p, eps)) out.push_back(p);
    }
  }
  return out;
}

// Exhaustive at the final resolution for N = 2; for N = 3 a coarse full
// pass followed by local refinement down to 1e-4.
double grid_hellinger(std::size_t n, const Family& fam, const Vec& r0, const Vec& r1, double eps) {
  Vec c0(n, 0.5), c1(n, 0.5);
  double best = std::numeric_limits<double>::infinity();
  const std::vector<double> steps = n == 2 ? std::vector<double>{1e-4}
                                           : std::vector<double>{1e-2, 2.5e-3, 1e-3, 4e-4, 1e-4};
  double radius = 2.0;
  for (double step : steps) {
    auto ps = grid_points(n, fam, r0, eps, step, c0, radius);
    auto qs = grid_points(n, fam, r1, eps, step, c1, radius);
    Vec b0 = c0, b1 = c1;
    for (const auto& p : ps) {
      for (const auto& q : qs) {
        const double v = oracle::hellinger_sq(p, q);
        if (v < best) {
          best = v;
          b0 = p;
          b1 = q;
        }
      }
    }
    c0 = b0;
    c1 = b1;
    radius = 4 * step;
  }
  return best;
}

double grid_renyi(std::size_t n, const Family& fam, const Vec& r0, double eps) {
  double best = -1;
  for (const auto& p : grid_points(n, fam, r0, eps, 1e-4, Vec(n, 0.5), 2.0)) {
    best = std::max(best, oracle::renyi_half(p));
  }
  return best;
}

Outcome convex_programs() {
  Outcome o;
  struct Case {
    ProbDist x0, x1;
    Family fam;
    double eps;
  };
  std::vector<Case> cases;
  cases.push_back({bern(Rational(1, 2)), bern(Rational(7, 10)),
                   Family(Domain(2), {TestFunction::indicator(2, {1})}), 0.05});
  gen::Source s(8);
  for (int i = 0; i < 3; ++i) {
    auto x0 = gen::distribution(s, 3, 10, 0.0), x1 = gen::distribution(s, 3, 10, 0.0);
    cases.push_back({x0, x1, gen::family(s, 3, 2, i == 0), 0.03});
  }
  double worst_h = 0, worst_r = 0;
  for (const auto& c : cases) {
    const std::size_t n = c.x0.size();
    auto ph = pseudo_hellinger(c.x0, c.x1, c.fam, c.eps);
    const double gh = grid_hellinger(n, c.fam, c.x0.reals(), c.x1.reals(), c.eps);
    worst_h = std::max(worst_h, std::abs(ph.delta_sq - gh));
    if (std::abs(ph.delta_sq - gh) > kGridTol || ph.delta_sq > gh + 1e-9) o.fail("hellinger grid");
    auto pr = pseudo_renyi(c.x0, c.fam, c.eps);
    const double gr = grid_renyi(n, c.fam, c.x0.reals(), c.eps);
    worst_r = std::max(worst_r, std::abs(pr.r_star - gr));
    if (std::abs(pr.r_star - gr) > kGridTol || pr.r_star < gr - 1e-9) o.fail("renyi grid");
  }

  // Central differences at interior points.
  double worst_grad = 0;
  for (int trial = 0; trial < 20; ++trial) {
    Vec p = gen::distribution(s, 5, 20, 0.0).reals(), q = gen::distribution(s, 5, 20, 0.0).reals();
    Vec gp, gq, gs;
    hellinger_gradient(p, q, config::kSqrtFloor, gp, gq);
    sqrt_sum_gradient(p, config::kSqrtFloor, gs);
    for (std::size_t x = 0; x < 5; ++x) {
      const double h = 1e-6 * std::max(p[x], 1e-3);
      auto pp = p, pm = p;
      pp[x] += h;
      pm[x] -= h;
      const double fd_h = (hellinger_objective(pp, q, config::kSqrtFloor) -
                           hellinger_objective(pm, q, config::kSqrtFloor)) / (2 * h);
      const double fd_s = (sqrt_sum_objective(pp, config::kSqrtFloor) -
                           sqrt_sum_objective(pm, config::kSqrtFloor)) / (2 * h);
      const double eh = std::abs(fd_h - gp[x]) / std::abs(gp[x]);
      const double es = std::abs(fd_s - gs[x]) / std::abs(gs[x]);
      worst_grad = std::max({worst_grad, eh, es});
      if (eh > kGradRelTol || es > kGradRelTol) o.fail("finite differences");
    }
  }

  // Degenerate ends.
  auto x0 = ProbDist(Domain(3), {Rational(1, 5), Rational(3, 10), Rational(1, 2)});
  auto x1 = ProbDist(Domain(3), {Rational(1, 2), Rational(3, 10), Rational(1, 5)});
  auto all = all_boolean_family(Domain(3));
  const double big = best_advantage(all, x0, x1).real();
  if (pseudo_hellinger(x0, x1, all, big).delta_star != 0.0) o.fail("large-eps hellinger");
  const double to_u = best_advantage(all, x0, ProbDist(Domain(3), ProbDist::uniform(3).mass())).real();
  if (std::abs(pseudo_renyi(x0, all, to_u).r_star - std::log2(3.0)) > 1e-12) o.fail("large-eps renyi");
  if (std::abs(pseudo_hellinger(x0, x1, all, 0.0).delta_star - hellinger(x0, x1).value) > 1e-15) {
    o.fail("pinned hellinger");
  }
  if (std::abs(pseudo_renyi(x0, all, 0.0).r_star - renyi_half_entropy(x0).value) > 1e-15) {
    o.fail("pinned renyi");
  }
  o.note << "max |solver-grid| hellinger^2 " << worst_h << ", renyi " << worst_r
         << ", max gradient rel err " << worst_grad << "; ";
  return o;
}

// 9. Product-family advantage under the Geier bound with slack 8 k eps.
Outcome geier(const std::vector<Instance>& instances) {
  Outcome o;
  int checks = 0;
  for (const auto& inst : instances) {
    if (inst.family.empty()) continue;
    std::vector<unsigned> ks;
    for (unsigned k = 1; k <= 3 && saturating_power(inst.x0.size(), k) <= 4096; ++k) ks.push_back(k);
    PipelineOptions opt;
    opt.family_mode = ProductFamilyMode::generators;
    auto rep = sandwich_report(inst.x0, inst.x1, inst.family, inst.epsilon, ks, Rational(1, 100), opt);
    auto big = enlarged_family(inst.family, rep.pipeline.partition, inst.x0, inst.x1);
    const double d = best_advantage(big, inst.x0, inst.x1).real();
    for (const auto& r : rep.records) {
      if (!r.family_adv) continue;
      ++checks;
      const double slack = config::kIndistConstant * r.k * to_double(inst.epsilon);
      if (*r.family_adv > geier_bound(d, r.k, slack) + kSandwichTol) {
        o.fail(inst.name + " k " + std::to_string(r.k));
      }
    }
  }
  o.note << checks << " checks; ";
  return o;
}

// 10. Heterogeneous rule: identical factors and 4-outcome brute force.
Outcome heterogeneous() {
  Outcome o;
  gen::Source s(10);
  int checks = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = static_cast<std::size_t>(s.range(1, 4));
    auto pi0 = gen::distribution(s, m, 9, 0.0), pi1 = gen::distribution(s, m, 9, 0.0);
    auto part = Partition::singletons(mixture(pi0, pi1), target_g(pi0, pi1));
    auto t = round_alphas(alphas(pi0, pi1, part), Rational(1, s.range(2, 50)));
    const unsigned k = static_cast<unsigned>(s.range(1, 4));
    auto h = heterogeneous_advantage(std::vector<RoundedAlphaTable>(k, t),
                                     std::vector<ProbDist>(k, pi0), std::vector<ProbDist>(k, pi1));
    ++checks;
    if (*h.exact != *exact_advantage(t, pi0, pi1, k).exact) o.fail("identical factors");
  }
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ProbDist> a0, a1;
    std::vector<RoundedAlphaTable> ts;
    for (int i = 0; i < 2; ++i) {
      auto p0 = gen::distribution(s, 2, 9, 0.0), p1 = gen::distribution(s, 2, 9, 0.0);
      auto part = Partition::singletons(mixture(p0, p1), target_g(p0, p1));
      ts.push_back(round_alphas(alphas(p0, p1, part), Rational(1, s.range(2, 50))));
      a0.push_back(p0);
      a1.push_back(p1);
    }
    auto h = heterogeneous_advantage(ts, a0, a1);
    Rational acc = 0;
    for (std::size_t u = 0; u < 2; ++u) {
      for (std::size_t v = 0; v < 2; ++v) {
        if (ts[0].n1[u] * ts[1].n1[v] >= ts[0].n0[u] * ts[1].n0[v]) {
          acc += a1[0][u] * a1[1][v] - a0[0][u] * a0[1][v];
        }
      }
    }
    ++checks;
    if (*h.exact != abs(acc)) o.fail("brute force trial " + std::to_string(trial));
  }
  o.note << checks << " checks; ";
  return o;
}

}  // namespace

int main() {
  int failures = 0;
  const auto instances = suite();
  struct Entry {
    int id;
    std::string title;
    double limit;
    std::function<Outcome()> run;
  };
  const std::vector<Entry> entries = {
      {1, "metric identities", kLimit1, metric_identities},
      {2, "multicalibration soundness", kLimit2, multicalibration_soundness},
      {3, "structural equalities", 0, [&] { return structural(instances); }},
      {4, "indistinguishability budget", 0, [&] { return indistinguishability(instances); }},
      {5, "distinguisher exactness", 0, [&] { return distinguisher_exactness(instances); }},
      {6, "sandwich", kLimit6, sandwich},
      {7, "sample-complexity scaling", kLimit7, sample_complexity},
      {8, "convex programs", 0, convex_programs},
      {9, "Geier consistency", 0, [&] { return geier(instances); }},
      {10, "heterogeneous products", 0, heterogeneous},
  };
  for (const auto& e : entries) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = e.run();
    } catch (const std::exception& ex) {
      o.fail(std::string("exception: ") + ex.what());
    }
    report(e.id, e.title, o, seconds_since(t0), e.limit, failures);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(entries.size()) - failures,
              entries.size());
  return failures;
}
