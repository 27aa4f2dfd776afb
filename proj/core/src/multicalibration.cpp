#include "indist/multicalibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "indist/errors.hpp"

namespace indist {
namespace {

// Screening slack for the floating-point pass; exact arithmetic decides.
constexpr double kScreen = 1e-9;

struct PartSums {
  std::vector<Rational> weight;
  std::vector<Rational> v;
};

PartSums part_sums(const Labeling& labeling, const ProbDist& d,
                   const TestFunction& g) {
  PartSums s;
  s.weight.assign(labeling.parts, Rational(0));
  s.v.assign(labeling.parts, Rational(0));
  for (std::size_t x = 0; x < d.size(); ++x) {
    s.weight[labeling[x]] += d[x];
    s.v[labeling[x]] += d[x] * g[x];
  }
  for (std::size_t p = 0; p < labeling.parts; ++p) {
    if (sgn(s.weight[p]) > 0) {
      s.v[p] /= s.weight[p];
    } else {
      s.v[p] = Rational(1, 2);
    }
  }
  return s;
}

// E_{D|P}[f (g - v_P)] for the members of one part.
Rational correlation(const std::vector<std::size_t>& members,
                     const std::vector<Rational>& a, const TestFunction& f,
                     const Rational& weight) {
  Rational s = 0;
  for (auto x : members) {
    if (sgn(f[x]) != 0 && sgn(a[x]) != 0) s += f[x] * a[x];
  }
  return s / weight;
}

double correlation_approx(const std::vector<std::size_t>& members,
                          const std::vector<double>& a, const TestFunction& f,
                          double weight) {
  double s = 0.0;
  const auto& r = f.reals();
  for (auto x : members) s += r[x] * a[x];
  return s / weight;
}

}  // namespace

Partition Partition::from_labels(Labeling labeling, const ProbDist& d,
                                 const TestFunction& g) {
  require_same_domain(d.domain(), g.domain());
  if (labeling.size() != d.size()) {
    throw DomainMismatch("labeling does not cover the domain");
  }
  for (auto l : labeling.labels) {
    if (l >= labeling.parts) throw ValidationError("label out of range");
  }
  PartSums s = part_sums(labeling, d, g);
  Partition p;
  p.labeling = std::move(labeling);
  p.part_weights = std::move(s.weight);
  p.v = std::move(s.v);
  return p;
}

Partition Partition::singletons(const ProbDist& d, const TestFunction& g) {
  return from_labels(Labeling::identity(d.size()), d, g);
}

Partition Partition::whole(const ProbDist& d, const TestFunction& g) {
  return from_labels(Labeling::constant(d.size()), d, g);
}

void Partition::validate(const ProbDist& d, const TestFunction& g) const {
  if (labeling.size() != d.size()) {
    throw InvariantViolation("partition does not cover the domain");
  }
  if (part_weights.size() != parts() || v.size() != parts()) {
    throw InvariantViolation("partition tables have the wrong length");
  }
  for (auto l : labeling.labels) {
    if (l >= parts()) throw InvariantViolation("label out of range");
  }
  PartSums s = part_sums(labeling, d, g);
  Rational total = 0;
  for (std::size_t p = 0; p < parts(); ++p) {
    total += part_weights[p];
    if (part_weights[p] != s.weight[p]) {
      throw InvariantViolation("part " + std::to_string(p) +
                               " weight disagrees with the mixture");
    }
    if (v[p] != s.v[p]) {
      throw InvariantViolation("part " + std::to_string(p) +
                               " calibrated value disagrees with E[g|P]");
    }
    if (sgn(v[p]) < 0 || v[p] > 1) {
      throw InvariantViolation("calibrated value outside [0,1]");
    }
  }
  if (total != 1) throw InvariantViolation("part weights do not sum to 1");
}

MCParams MCParams::defaults(const Rational& epsilon) {
  MCParams p;
  p.epsilon = epsilon;
  p.gamma = epsilon * epsilon;
  // The largest lambda <= eps/2 whose reciprocal is an even integer, so the
  // grid contains 0, 1/2 and 1.
  BigInt half_steps = ceil(Rational(1) / epsilon);
  p.lambda = Rational(1) / Rational(2 * half_steps);
  p.max_rounds = p.round_bound();
  return p;
}

std::uint64_t MCParams::round_bound() const {
  Rational b = Rational(1) / (lambda * epsilon * gamma);
  BigInt fl;
  mpz_fdiv_q(fl.get_mpz_t(), b.get_num_mpz_t(), b.get_den_mpz_t());
  if (!fl.fits_ulong_p()) return std::numeric_limits<std::uint64_t>::max();
  return fl.get_ui();
}

void MCParams::validate() const {
  if (!(sgn(epsilon) > 0 && epsilon < 1)) {
    throw ValidationError("epsilon must lie in (0,1)");
  }
  if (!(sgn(gamma) > 0 && gamma < 1)) {
    throw ValidationError("gamma must lie in (0,1)");
  }
  if (!(sgn(lambda) > 0 && lambda <= epsilon / 2)) {
    throw ValidationError("grid step lambda must lie in (0, epsilon/2]");
  }
  Rational inv = Rational(1) / lambda;
  if (inv.get_den() != 1) {
    throw ValidationError("grid step lambda must be 1/integer");
  }
}

TestFunction target_g(const ProbDist& x0, const ProbDist& x1) {
  require_same_domain(x0.domain(), x1.domain());
  std::vector<Rational> v(x0.size());
  for (std::size_t x = 0; x < x0.size(); ++x) {
    Rational s = x0[x] + x1[x];
    v[x] = sgn(s) > 0 ? Rational(x1[x] / s) : Rational(1, 2);
  }
  return TestFunction(x0.domain(), std::move(v), "posterior");
}

AuditReport audit(const Partition& partition, const ProbDist& d,
                  const TestFunction& g, const Family& family,
                  const MCParams& params) {
  require_same_domain(d.domain(), g.domain());
  if (!family.empty()) require_same_domain(d.domain(), family.domain());
  if (partition.labeling.size() != d.size()) {
    throw DomainMismatch("labeling does not cover the domain");
  }
  PartSums s = part_sums(partition.labeling, d, g);
  auto members = partition.members();
  std::vector<Rational> a(d.size());
  std::vector<double> ad(d.size());
  for (std::size_t x = 0; x < d.size(); ++x) {
    a[x] = d[x] * (g[x] - s.v[partition.labeling[x]]);
    ad[x] = to_double(a[x]);
  }
  const double eps_d = to_double(params.epsilon);

  AuditReport report;
  for (std::size_t p = 0; p < partition.parts(); ++p) {
    if (s.weight[p] < params.gamma) {
      report.skipped_light_parts.push_back(p);
      continue;
    }
    const double w = to_double(s.weight[p]);
    for (std::size_t i = 0; i < family.size(); ++i) {
      double approx = correlation_approx(members[p], ad, family[i], w);
      if (std::abs(approx) <= eps_d - kScreen) continue;
      Rational c = correlation(members[p], a, family[i], s.weight[p]);
      if (abs(c) > params.epsilon) report.violations.push_back({p, i, c});
    }
  }
  report.pass = report.violations.empty();
  return report;
}

Partition build_partition(const ProbDist& d, const TestFunction& g,
                          const Family& family, const MCParams& params,
                          BuildDiagnostics* diagnostics) {
  params.validate();
  require_same_domain(d.domain(), g.domain());
  if (!family.empty()) require_same_domain(d.domain(), family.domain());

  const std::size_t n = d.size();
  const long steps = Rational(Rational(1) / params.lambda).get_num().get_si();
  const Rational& lambda = params.lambda;
  const double eps_d = to_double(params.epsilon);
  // Guaranteed potential drop per round: a calibration move gains more than
  // (3/4) lambda^2 w_P and a boundary step more than (1/2) lambda eps w_P,
  // with w_P >= gamma in both cases.
  const Rational min_drop =
      params.gamma * std::min(Rational(3 * lambda * lambda / 4),
                              Rational(lambda * params.epsilon / 2));

  // h(x) = level[x] * lambda, starting at the grid point nearest 1/2.
  std::vector<long> level(
      n, round_half_toward_zero(Rational(1, 2), BigInt(steps)).get_si());

  auto potential = [&]() {
    Rational phi = 0;
    for (std::size_t x = 0; x < n; ++x) {
      Rational diff = Rational(level[x]) * lambda - g[x];
      phi += d[x] * diff * diff;
    }
    return phi;
  };

  BuildDiagnostics diag;
  Rational phi = potential();
  std::uint64_t bound;
  {
    Rational b = phi / min_drop;
    BigInt fl;
    mpz_fdiv_q(fl.get_mpz_t(), b.get_num_mpz_t(), b.get_den_mpz_t());
    bound = fl.fits_ulong_p() ? fl.get_ui()
                              : std::numeric_limits<std::uint64_t>::max();
  }
  diag.round_bound = bound;

  for (;;) {
    // Parts are the occupied levels, in increasing order.
    std::map<long, std::size_t> index;
    for (auto l : level) index.emplace(l, 0);
    std::size_t next = 0;
    for (auto& [l, i] : index) i = next++;
    Labeling labeling;
    labeling.parts = index.size();
    labeling.labels.resize(n);
    for (std::size_t x = 0; x < n; ++x) labeling.labels[x] = index[level[x]];
    std::vector<long> part_level(labeling.parts);
    for (auto& [l, i] : index) part_level[i] = l;

    PartSums s = part_sums(labeling, d, g);
    auto members = labeling.members();
    std::vector<Rational> a(n);
    std::vector<double> ad(n);
    for (std::size_t x = 0; x < n; ++x) {
      a[x] = d[x] * (g[x] - s.v[labeling[x]]);
      ad[x] = to_double(a[x]);
    }

    bool updated = false;
    for (std::size_t p = 0; p < labeling.parts && !updated; ++p) {
      if (s.weight[p] < params.gamma) continue;
      const Rational u = Rational(part_level[p]) * lambda;

      // Calibration: move a level whose mean drifted more than one step.
      if (abs(s.v[p] - u) > lambda) {
        long target = round_half_toward_zero(s.v[p], BigInt(steps)).get_si();
        for (auto x : members[p]) level[x] = target;
        ++diag.calibration_steps;
        updated = true;
        break;
      }

      const double w = to_double(s.weight[p]);
      for (std::size_t i = 0; i < family.size(); ++i) {
        double approx = correlation_approx(members[p], ad, family[i], w);
        if (std::abs(approx) <= eps_d - kScreen) continue;
        Rational c = correlation(members[p], a, family[i], s.weight[p]);
        if (abs(c) <= params.epsilon) continue;

        // Step along the best threshold set {f >= t} inside the part; its
        // correlation is at least |c| in magnitude.
        const auto& f = family[i];
        std::vector<std::size_t> order = members[p];
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t x, std::size_t y) { return f[x] > f[y]; });
        Rational running = 0, best = 0;
        std::size_t best_len = 0;
        for (std::size_t j = 0; j < order.size(); ++j) {
          running += a[order[j]];
          bool boundary = j + 1 == order.size() || f[order[j + 1]] != f[order[j]];
          if (boundary && sgn(f[order[j]]) > 0 && abs(running) > abs(best)) {
            best = running;
            best_len = j + 1;
          }
        }
        Rational c_set = best / s.weight[p];
        if (abs(c_set) <= params.epsilon) {
          throw InvariantViolation("threshold set lost the violation");
        }
        const long dir = sgn(c_set) > 0 ? 1 : -1;
        for (std::size_t j = 0; j < best_len; ++j) {
          level[order[j]] = std::clamp(level[order[j]] + dir, 0L, steps);
        }
        ++diag.multicalibration_steps;
        updated = true;
        break;
      }
    }

    if (!updated) {
      Partition out = Partition::from_labels(std::move(labeling), d, g);
      AuditReport check = audit(out, d, g, family, params);
      if (!check.pass) {
        throw InvariantViolation("built partition fails its own audit");
      }
      if (diagnostics) *diagnostics = diag;
      return out;
    }

    ++diag.rounds;
    Rational next_phi = potential();
    if (phi - next_phi < min_drop) {
      throw InvariantViolation("multicalibration potential failed to drop");
    }
    phi = next_phi;
    if (diag.rounds > bound) {
      throw InvariantViolation("multicalibration exceeded its potential bound "
                               "of " + std::to_string(bound) + " rounds");
    }
    if (params.max_rounds && diag.rounds > params.max_rounds) {
      throw InvariantViolation("multicalibration exceeded max_rounds = " +
                               std::to_string(params.max_rounds));
    }
  }
}

std::vector<PartStats> part_statistics(const Partition& partition,
                                       const ProbDist& x0, const ProbDist& x1,
                                       const ProbDist& d) {
  require_same_domain(x0.domain(), x1.domain());
  require_same_domain(x0.domain(), d.domain());
  if (partition.labeling.size() != d.size()) {
    throw DomainMismatch("labeling does not cover the domain");
  }
  std::vector<PartStats> out(partition.parts());
  for (std::size_t x = 0; x < d.size(); ++x) {
    auto& s = out[partition.labeling[x]];
    s.weight0 += x0[x];
    s.weight1 += x1[x];
    s.weight_mixture += d[x];
  }
  for (std::size_t p = 0; p < out.size(); ++p) {
    out[p].v = partition.v[p];
    Rational total = out[p].weight0 + out[p].weight1;
    if (sgn(total) > 0 && out[p].v != out[p].weight1 / total) {
      throw InvariantViolation("part " + std::to_string(p) +
                               ": v_P differs from alpha_1");
    }
  }
  return out;
}

}  // namespace indist
