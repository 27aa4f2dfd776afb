#include "indist/constructions.hpp"

#include <cmath>

#include "indist/errors.hpp"

namespace indist {
namespace {

std::vector<Rational> part_masses(const ProbDist& p, const Labeling& l) {
  std::vector<Rational> m(l.parts, Rational(0));
  for (std::size_t x = 0; x < p.size(); ++x) m[l[x]] += p[x];
  return m;
}

void require_cover(const Partition& partition, const ProbDist& p) {
  if (partition.labeling.size() != p.size()) {
    throw DomainMismatch("labeling does not cover the domain");
  }
}

// Checks that dist restricted to the part is proportional to reference
// restricted to the same part.
bool same_conditional(const std::vector<std::size_t>& members,
                      const ProbDist& dist, const Rational& dist_mass,
                      const ProbDist& reference, const Rational& ref_mass) {
  for (auto x : members) {
    if (dist[x] * ref_mass != reference[x] * dist_mass) return false;
  }
  return true;
}

}  // namespace

AlphaTable alphas(const ProbDist& x0, const ProbDist& x1,
                  const Partition& partition) {
  require_same_domain(x0.domain(), x1.domain());
  require_cover(partition, x0);
  AlphaTable t;
  t.mass0 = part_masses(x0, partition.labeling);
  t.mass1 = part_masses(x1, partition.labeling);
  const std::size_t m = partition.parts();
  t.alpha0.resize(m);
  t.alpha1.resize(m);
  t.zero_mass.resize(m);
  for (std::size_t p = 0; p < m; ++p) {
    Rational s = t.mass0[p] + t.mass1[p];
    t.zero_mass[p] = sgn(s) == 0;
    if (t.zero_mass[p]) {
      t.alpha0[p] = 0;
      t.alpha1[p] = 0;
    } else {
      t.alpha0[p] = t.mass0[p] / s;
      t.alpha1[p] = t.mass1[p] / s;
    }
  }
  return t;
}

TildePair build_tilde(const ProbDist& x0, const ProbDist& x1,
                      const Partition& partition, const Rational& epsilon) {
  require_same_domain(x0.domain(), x1.domain());
  require_cover(partition, x0);
  const auto& l = partition.labeling;
  auto m0 = part_masses(x0, l);
  auto m1 = part_masses(x1, l);
  std::vector<Rational> t0(x0.size()), t1(x0.size());
  for (std::size_t x = 0; x < x0.size(); ++x) {
    const auto p = l[x];
    Rational s = m0[p] + m1[p];  // 2 D(P)
    if (sgn(s) == 0) {
      t0[x] = 0;
      t1[x] = 0;
      continue;
    }
    Rational share = (x0[x] + x1[x]) / s;  // D(x) / D(P)
    t0[x] = m0[p] * share;
    t1[x] = m1[p] * share;
  }
  return TildePair{ProbDist(x0.domain(), std::move(t0)),
                   ProbDist(x0.domain(), std::move(t1)), partition, epsilon};
}

HatVariable build_hat(const ProbDist& x0, const ProbDist& x1,
                      const Partition& partition, const Rational& eps_prime) {
  require_same_domain(x0.domain(), x1.domain());
  require_cover(partition, x0);
  if (!(sgn(eps_prime) > 0 && eps_prime < 1)) {
    throw ValidationError("eps_prime must lie in (0,1)");
  }
  AlphaTable a = alphas(x0, x1, partition);
  const auto& l = partition.labeling;
  HatVariable h{x0, partition, eps_prime, std::sqrt(to_double(eps_prime)),
                std::vector<bool>(partition.parts(), false)};
  std::vector<Rational> mass(x0.size());
  for (std::size_t p = 0; p < partition.parts(); ++p) {
    // alpha1 >= sqrt(eps') compared exactly through squares.
    h.swapped[p] = !a.zero_mass[p] && a.alpha1[p] * a.alpha1[p] >= eps_prime;
  }
  for (std::size_t x = 0; x < x0.size(); ++x) {
    const auto p = l[x];
    mass[x] = h.swapped[p] ? Rational(a.mass0[p] * x1[x] / a.mass1[p])
                           : x0[x];
  }
  h.hat0 = ProbDist(x0.domain(), std::move(mass));
  return h;
}

void StructuralReport::require() const {
  if (pass) return;
  const auto& f = failures.front();
  throw InvariantViolation("structural check failed on part " +
                           std::to_string(f.part) + ": " + f.what);
}

StructuralReport verify_structural(const TildePair& pair, const ProbDist& x0,
                                   const ProbDist& x1) {
  require_cover(pair.partition, x0);
  const auto& l = pair.partition.labeling;
  auto members = l.members();
  auto m0 = part_masses(x0, l), m1 = part_masses(x1, l);
  auto t0 = part_masses(pair.tilde0, l), t1 = part_masses(pair.tilde1, l);
  ProbDist d = mixture(x0, x1);
  auto md = part_masses(d, l);

  StructuralReport r;
  for (std::size_t p = 0; p < l.parts; ++p) {
    if (t0[p] != m0[p]) r.failures.push_back({p, "pushforward of tilde0 differs from X0"});
    if (t1[p] != m1[p]) r.failures.push_back({p, "pushforward of tilde1 differs from X1"});
    if (sgn(md[p]) == 0) continue;
    if (sgn(t0[p]) > 0 &&
        !same_conditional(members[p], pair.tilde0, t0[p], d, md[p])) {
      r.failures.push_back({p, "tilde0 conditional differs from the mixture's"});
    }
    if (sgn(t1[p]) > 0 &&
        !same_conditional(members[p], pair.tilde1, t1[p], d, md[p])) {
      r.failures.push_back({p, "tilde1 conditional differs from the mixture's"});
    }
  }
  r.pass = r.failures.empty();
  return r;
}

StructuralReport verify_structural(const HatVariable& hat, const ProbDist& x0,
                                   const ProbDist& x1) {
  require_cover(hat.partition, x0);
  const auto& l = hat.partition.labeling;
  auto members = l.members();
  auto m0 = part_masses(x0, l), m1 = part_masses(x1, l);
  auto mh = part_masses(hat.hat0, l);
  AlphaTable a = alphas(x0, x1, hat.partition);

  StructuralReport r;
  for (std::size_t p = 0; p < l.parts; ++p) {
    if (mh[p] != m0[p]) r.failures.push_back({p, "pushforward of hat0 differs from X0"});
    bool should_swap =
        !a.zero_mass[p] && a.alpha1[p] * a.alpha1[p] >= hat.eps_prime;
    if (p >= hat.swapped.size() || hat.swapped[p] != should_swap) {
      r.failures.push_back({p, "swap flag disagrees with the threshold"});
      continue;
    }
    if (sgn(mh[p]) == 0) continue;
    bool ok = should_swap
                  ? same_conditional(members[p], hat.hat0, mh[p], x1, m1[p])
                  : same_conditional(members[p], hat.hat0, mh[p], x0, m0[p]);
    if (!ok) {
      r.failures.push_back({p, should_swap ? "hat0 conditional differs from X1's"
                                           : "hat0 conditional differs from X0's"});
    }
  }
  r.pass = r.failures.empty();
  return r;
}

IndistinguishabilityReport verify_indistinguishability(
    const TildePair& pair, const ProbDist& x0, const ProbDist& x1,
    const Family& family, double constant) {
  IndistinguishabilityReport r;
  r.bound = constant * to_double(pair.epsilon);
  if (family.empty()) return r;
  r.side0 = best_advantage(family, x0, pair.tilde0);
  r.side1 = best_advantage(family, x1, pair.tilde1);
  Rational limit = rational_from_double(constant) * pair.epsilon;
  if (r.side0.value > limit || r.side1.value > limit) {
    throw InvariantViolation(
        "tilde pair advantage " +
        std::to_string(std::max(r.side0.real(), r.side1.real())) +
        " exceeds " + std::to_string(r.bound));
  }
  return r;
}

TvSandwich hat_partition_tv_sandwich(const HatVariable& hat,
                                     const ProbDist& x1) {
  TvSandwich s;
  s.lo = tv_distance_exact(pushforward(hat.hat0, hat.partition.labeling),
                           pushforward(x1, hat.partition.labeling));
  s.mid = tv_distance_exact(hat.hat0, x1);
  s.hi = to_double(s.lo) + 2.0 * hat.threshold;
  if (s.mid < s.lo || to_double(s.mid) > s.hi + config::kRealTolerance) {
    throw InvariantViolation("partition TV sandwich violated");
  }
  return s;
}

}  // namespace indist
