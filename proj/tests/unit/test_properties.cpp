#include <doctest.h>

#include <cmath>

#include "gen.hpp"
#include "indist/analysis.hpp"
#include "indist/products.hpp"
#include "oracle.hpp"

using namespace indist;

// Randomized invariants over hand-rolled instance generators. Each case runs
// a fixed seed so failures reproduce.

TEST_SUITE("properties") {
  TEST_CASE("metric inequalities") {
    gen::Source s(101);
    for (int trial = 0; trial < 300; ++trial) {
      const std::size_t n = static_cast<std::size_t>(s.range(1, 8));
      auto p = gen::distribution(s, n), q = gen::distribution(s, n), r = gen::distribution(s, n);
      const Rational tpq = tv_distance_exact(p, q);
      CHECK(tpq == tv_distance_exact(q, p));
      CHECK(tpq >= 0);
      CHECK(tpq <= 1);
      CHECK(tpq <= tv_distance_exact(p, r) + tv_distance_exact(r, q));
      const double h2 = hellinger_sq(p, q).value, tv = to_double(tpq);
      CHECK(h2 <= tv + 1e-12);
      CHECK(tv <= std::sqrt(2 * h2) + 1e-12);
      const double ren = renyi_half_entropy(p).value;
      CHECK(ren >= -1e-12);
      CHECK(ren <= std::log2(static_cast<double>(n)) + 1e-12);
    }
  }

  TEST_CASE("product TV grows with k and stays within the Hellinger bounds") {
    gen::Source s(102);
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t n = static_cast<std::size_t>(s.range(2, 4));
      auto p = gen::distribution(s, n), q = gen::distribution(s, n);
      Rational prev = 0;
      for (unsigned k = 1; k <= 5; ++k) {
        const Rational tv = power_tv_exact(p, q, k).value;
        CHECK(tv >= prev);
        prev = tv;
        auto b = k_sample_tv_bounds(p, q, k);
        CHECK(to_double(tv) >= b.lower - 1e-12);
        CHECK(to_double(tv) <= b.upper + 1e-12);
      }
    }
  }

  TEST_CASE("pushforward preserves mass and never increases TV") {
    gen::Source s(103);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = static_cast<std::size_t>(s.range(1, 9));
      const std::size_t parts = static_cast<std::size_t>(s.range(1, 4));
      auto p = gen::distribution(s, n), q = gen::distribution(s, n);
      Labeling lab{gen::labels(s, n, parts), parts};
      auto pp = pushforward(p, lab), pq = pushforward(q, lab);
      Rational sum = 0;
      for (const auto& m : pp.mass()) sum += m;
      CHECK(sum == 1);
      CHECK(tv_distance_exact(pp, pq) <= tv_distance_exact(p, q));
    }
  }

  TEST_CASE("all-Boolean best advantage equals TV") {
    gen::Source s(104);
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t n = static_cast<std::size_t>(s.range(1, 6));
      auto p = gen::distribution(s, n), q = gen::distribution(s, n);
      auto best = best_advantage(all_boolean_family(Domain(n)), p, q);
      CHECK(best.value == tv_distance_exact(p, q));
      CHECK(std::abs(best.real() - oracle::best_boolean_advantage(p.reals(), q.reals())) < 1e-12);
    }
  }

  TEST_CASE("pipeline invariants on random instances") {
    gen::Source s(105);
    for (int trial = 0; trial < 25; ++trial) {
      const std::size_t n = static_cast<std::size_t>(s.range(2, 7));
      auto x0 = gen::distribution(s, n), x1 = gen::distribution(s, n);
      auto fam = gen::family(s, n, static_cast<std::size_t>(s.range(0, 4)), s.coin());
      const Rational eps(1, s.range(4, 12));
      const Rational delta(1, s.range(20, 200));
      auto rep = sandwich_report(x0, x1, fam, eps, {1, 2, 3}, delta);
      const auto& pl = rep.pipeline;

      Rational w = 0;
      for (const auto& pw : pl.partition.part_weights) w += pw;
      CHECK(w == 1);
      CHECK_NOTHROW(pl.partition.validate(pl.mixture, pl.g));
      CHECK(verify_structural(pl.tilde, x0, x1).pass);
      CHECK(audit(pl.partition, pl.mixture, pl.g, fam, pl.params).pass);
      CHECK(pushforward(pl.tilde.tilde0, pl.partition.labeling) == pl.pi0);
      CHECK(rep.rounded.shift0 <= delta);
      CHECK(rep.rounded.shift1 <= delta);
      if (!fam.empty() && pl.refinements < 40) {
        CHECK(pl.indist.side0.value <= eps);
        CHECK(pl.indist.side1.value <= eps);
      }
      for (const auto& r : rep.records) {
        CHECK(sandwich_holds(r));
        // No rule on the labels beats the TV of the pushforward products.
        CHECK(*r.achieved.exact <= *r.tv_tilde_exact);
      }
    }
  }

  TEST_CASE("rounded rule matches the exact tuple oracle") {
    gen::Source s(106);
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t m = static_cast<std::size_t>(s.range(1, 4));
      auto pi0 = gen::distribution(s, m, 9, 0.0), pi1 = gen::distribution(s, m, 9, 0.0);
      auto part = Partition::singletons(mixture(pi0, pi1), target_g(pi0, pi1));
      auto t = round_alphas(alphas(pi0, pi1, part), Rational(1, s.range(2, 30)));
      const unsigned k = static_cast<unsigned>(s.range(1, 4));
      CHECK(*exact_advantage(t, pi0, pi1, k).exact ==
            oracle::lr_rule_advantage(t.n0, t.n1, pi0.mass(), pi1.mass(), k));
    }
  }
}
