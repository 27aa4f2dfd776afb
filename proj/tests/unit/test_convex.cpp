#include <doctest.h>

#include <cmath>
#include <limits>

#include "gen.hpp"
#include "indist/analysis.hpp"
#include "indist/convex.hpp"
#include "indist/errors.hpp"
#include "indist/multicalibration.hpp"
#include "oracle.hpp"

using namespace indist;

namespace {

using Vec = std::vector<double>;

bool feasible(const Family& fam, const Vec& ref, const Vec& p, double eps) {
  for (const auto& f : fam.functions()) {
    double s = 0;
    for (std::size_t x = 0; x < p.size(); ++x) s += f.reals()[x] * (ref[x] - p[x]);
    if (std::abs(s) > eps + 1e-12) return false;
  }
  return true;
}

// Feasible points of the 3-simplex on a grid of the given step inside a
// box around center (or everywhere when radius >= 1).
std::vector<Vec> simplex3(const Family& fam, const Vec& ref, double eps,
                          double step, const Vec& center, double radius) {
  std::vector<Vec> out;
  const double lo0 = std::max(0.0, center[0] - radius), hi0 = std::min(1.0, center[0] + radius);
  const double lo1 = std::max(0.0, center[1] - radius), hi1 = std::min(1.0, center[1] + radius);
  for (double a = lo0; a <= hi0 + 1e-15; a += step) {
    for (double b = lo1; b <= hi1 + 1e-15; b += step) {
      const double c = 1.0 - a - b;
      if (c < -1e-15) break;
      Vec p{a, b, std::max(0.0, c)};
      if (feasible(fam, ref, p, eps)) out.push_back(p);
    }
  }
  return out;
}

// Coarse grid over both simplices, then repeated local refinement.
double grid_pseudo_hellinger(const Family& fam, const Vec& r0, const Vec& r1,
                             double eps) {
  double step = 0.01, radius = 2.0;
  Vec c0{0.5, 0.5, 0}, c1{0.5, 0.5, 0};
  double best = std::numeric_limits<double>::infinity();
  for (int level = 0; level < 6; ++level) {
    auto ps = simplex3(fam, r0, eps, step, c0, radius);
    auto qs = simplex3(fam, r1, eps, step, c1, radius);
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
    radius = 3 * step;
    step /= 4;
  }
  return best;
}

double grid_renyi(const Family& fam, const Vec& r0, double eps, double step) {
  double best = -1;
  for (const auto& p : simplex3(fam, r0, eps, step, {0.5, 0.5, 0}, 2.0)) {
    best = std::max(best, oracle::renyi_half(p));
  }
  return best;
}

ProbDist dist(std::initializer_list<const char*> m) {
  std::vector<Rational> v;
  for (auto s : m) v.push_back(parse_rational(s));
  return ProbDist(Domain(v.size()), v);
}

}  // namespace

TEST_SUITE("convex") {
  TEST_CASE("two-point domain against the closed form and a grid") {
    auto x0 = ProbDist::bernoulli(Rational(1, 2));
    auto x1 = ProbDist::bernoulli(Rational(7, 10));
    Family fam(Domain(2), {TestFunction::indicator(2, {1})});
    auto r = pseudo_hellinger(x0, x1, fam, 0.05);
    CHECK(r.diagnostics.status == "solved");
    // The nearest feasible pair is (0.55, 0.65).
    const double closed = oracle::hellinger_sq({0.45, 0.55}, {0.35, 0.65});
    CHECK(std::abs(r.delta_sq - closed) < 1e-9);
    double grid = 1;
    for (int i = 4400; i <= 5600; ++i) {
      for (int j = 6400; j <= 7600; ++j) {
        const double p = i * 1e-4, q = j * 1e-4;
        if (std::abs(p - 0.5) > 0.05 + 1e-12 || std::abs(q - 0.7) > 0.05 + 1e-12) continue;
        grid = std::min(grid, oracle::hellinger_sq({1 - p, p}, {1 - q, q}));
      }
    }
    CHECK(r.delta_sq <= grid + 1e-9);
    CHECK(grid - r.delta_sq < 1e-6);
    CHECK(r.diagnostics.kkt_residual <= config::kKktTolerance);
    for (double s : r.diagnostics.min_slack) CHECK(s >= -1e-9);
  }

  TEST_CASE("three-point domains against grid search") {
    gen::Source s(31);
    for (int trial = 0; trial < 4; ++trial) {
      auto x0 = gen::distribution(s, 3, 10, 0.0);
      auto x1 = gen::distribution(s, 3, 10, 0.0);
      auto fam = gen::family(s, 3, 2, false);
      const double eps = 0.03;
      auto r = pseudo_hellinger(x0, x1, fam, eps);
      const double grid = grid_pseudo_hellinger(fam, x0.reals(), x1.reals(), eps);
      CHECK(r.delta_sq <= grid + 1e-9);
      CHECK(grid - r.delta_sq < 1e-4);

      auto e = pseudo_renyi(x0, fam, eps);
      const double g = grid_renyi(fam, x0.reals(), eps, 1e-3);
      CHECK(e.r_star >= g - 1e-9);
      CHECK(e.r_star - g < 1e-2);
      CHECK(e.r_star <= std::log2(3.0) + 1e-12);
      CHECK(std::abs(e.gap - (std::log2(3.0) - e.r_star)) < 1e-12);
    }
  }

  TEST_CASE("gradients match finite differences") {
    gen::Source s(4);
    for (int trial = 0; trial < 10; ++trial) {
      Vec p(5), q(5);
      for (auto& v : p) v = 0.01 + 0.2 * (s.range(1, 1000) / 1000.0);
      for (auto& v : q) v = 0.01 + 0.2 * (s.range(1, 1000) / 1000.0);
      Vec gp, gq, gs;
      hellinger_gradient(p, q, 1e-12, gp, gq);
      sqrt_sum_gradient(p, 1e-12, gs);
      for (std::size_t x = 0; x < 5; ++x) {
        const double h = 1e-6;
        auto pp = p, pm = p, qp = q, qm = q;
        pp[x] += h;
        pm[x] -= h;
        qp[x] += h;
        qm[x] -= h;
        const double fdp = (hellinger_objective(pp, q, 1e-12) -
                            hellinger_objective(pm, q, 1e-12)) / (2 * h);
        const double fdq = (hellinger_objective(p, qp, 1e-12) -
                            hellinger_objective(p, qm, 1e-12)) / (2 * h);
        const double fds = (sqrt_sum_objective(pp, 1e-12) -
                            sqrt_sum_objective(pm, 1e-12)) / (2 * h);
        CHECK(std::abs(fdp - gp[x]) <= 1e-6 * std::max(1.0, std::abs(gp[x])));
        CHECK(std::abs(fdq - gq[x]) <= 1e-6 * std::max(1.0, std::abs(gq[x])));
        CHECK(std::abs(fds - gs[x]) <= 1e-6 * std::max(1.0, std::abs(gs[x])));
      }
    }
  }

  TEST_CASE("objective is convex along segments") {
    gen::Source s(6);
    for (int trial = 0; trial < 50; ++trial) {
      auto a0 = gen::distribution(s, 4).reals(), a1 = gen::distribution(s, 4).reals();
      auto b0 = gen::distribution(s, 4).reals(), b1 = gen::distribution(s, 4).reals();
      Vec m0(4), m1(4);
      for (std::size_t x = 0; x < 4; ++x) {
        m0[x] = 0.5 * (a0[x] + b0[x]);
        m1[x] = 0.5 * (a1[x] + b1[x]);
      }
      const double mid = hellinger_objective(m0, m1, 0);
      CHECK(mid <= 0.5 * (hellinger_objective(a0, a1, 0) +
                          hellinger_objective(b0, b1, 0)) + 1e-12);
      CHECK(-sqrt_sum_objective(m0, 0) <=
            -0.5 * (sqrt_sum_objective(a0, 0) + sqrt_sum_objective(b0, 0)) + 1e-12);
    }
  }

  TEST_CASE("degenerate instances") {
    auto x0 = dist({"0.2", "0.3", "0.5"});
    auto x1 = dist({"0.5", "0.3", "0.2"});
    auto all = all_boolean_family(Domain(3));

    auto same = pseudo_hellinger(x0, x0, all, 0.1);
    CHECK(same.delta_star == 0.0);
    CHECK(same.diagnostics.status == "common_point");

    auto pinned = pseudo_hellinger(x0, x1, all, 0.0);
    CHECK(pinned.diagnostics.status == "pinned");
    CHECK(std::abs(pinned.delta_sq - hellinger_sq(x0, x1).value) < 1e-15);

    Family empty(Domain(3), {});
    CHECK(pseudo_hellinger(x0, x1, empty, 0.1).delta_star == 0.0);
    auto flat = pseudo_renyi(x0, empty, 0.1);
    CHECK(std::abs(flat.r_star - std::log2(3.0)) < 1e-12);
    CHECK(flat.gap == 0.0);

    auto pin_r = pseudo_renyi(x0, all, 0.0);
    CHECK(pin_r.diagnostics.status == "pinned");
    CHECK(std::abs(pin_r.r_star - renyi_half_entropy(x0).value) < 1e-12);

    CHECK_THROWS_AS(pseudo_hellinger(x0, x1, all, 1.0), ValidationError);
    CHECK_THROWS_AS(pseudo_renyi(x0, all, -0.1), ValidationError);
  }

  TEST_CASE("zero epsilon without pinning") {
    // One constraint on three points leaves a face to optimize over.
    auto x0 = dist({"0.2", "0.3", "0.5"});
    auto x1 = dist({"0.5", "0.3", "0.2"});
    Family fam(Domain(3), {TestFunction::indicator(3, {0})});
    auto r = pseudo_hellinger(x0, x1, fam, 0.0);
    CHECK(r.diagnostics.status == "solved");
    // p(0) = 0.2 and q(0) = 0.5 are fixed; the rest can be matched in shape.
    const double expect = oracle::hellinger_sq({0.2, 0.4, 0.4}, {0.5, 0.25, 0.25});
    CHECK(std::abs(r.delta_sq - expect) < 1e-8);
  }

  TEST_CASE("pseudo distance never exceeds the tilde pair's distance") {
    gen::Source s(12);
    for (int trial = 0; trial < 5; ++trial) {
      auto x0 = gen::distribution(s, 5, 10, 0.0), x1 = gen::distribution(s, 5, 10, 0.0);
      auto fam = gen::family(s, 5, 3);
      const Rational eps(1, 10);
      auto pl = run_pipeline(x0, x1, fam, eps);
      auto r = pseudo_hellinger(x0, x1, fam, to_double(eps));
      CHECK(r.delta_star <= hellinger(pl.tilde.tilde0, pl.tilde.tilde1).value + 1e-9);
    }
  }
}
