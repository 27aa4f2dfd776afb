#include "indist/distinguisher.hpp"

#include <cmath>
#include <limits>

#include "indist/errors.hpp"
#include "indist/products.hpp"
#include "indist/random.hpp"

namespace indist {
namespace {

double log_of(const BigInt& z) {
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

struct Cells {
  std::vector<std::size_t> index;  // parts reachable under pi0 or pi1
};

Cells reachable(const RoundedAlphaTable& t, const ProbDist& pi0,
                const ProbDist& pi1) {
  if (pi0.size() != t.parts || pi1.size() != t.parts) {
    throw DomainMismatch("pushforwards do not match the rounded table");
  }
  Cells c;
  for (std::size_t p = 0; p < t.parts; ++p) {
    if (sgn(pi0[p]) == 0 && sgn(pi1[p]) == 0) continue;
    if (t.n0[p] == 0 && t.n1[p] == 0) {
      throw ValidationError("part " + std::to_string(p) +
                            " is reachable but both numerators are 0");
    }
    c.index.push_back(p);
  }
  return c;
}

// Sum of coef * (pi1 - pi0) over count vectors whose decision is 1.
struct CountDp {
  const RoundedAlphaTable& t;
  const ProbDist& pi0;
  const ProbDist& pi1;
  const std::vector<std::size_t>& cells;
  Rational total = 0;

  void run(std::size_t i, unsigned remaining, const BigInt& coef,
           const BigInt& num, const BigInt& den, const Rational& p0,
           const Rational& p1) {
    const std::size_t p = cells[i];
    if (i + 1 == cells.size()) {
      BigInt a, b;
      mpz_pow_ui(a.get_mpz_t(), t.n1[p].get_mpz_t(), remaining);
      mpz_pow_ui(b.get_mpz_t(), t.n0[p].get_mpz_t(), remaining);
      if (num * a >= den * b) {
        Rational q0, q1;
        mpz_pow_ui(q0.get_num_mpz_t(), pi0[p].get_num_mpz_t(), remaining);
        mpz_pow_ui(q0.get_den_mpz_t(), pi0[p].get_den_mpz_t(), remaining);
        mpz_pow_ui(q1.get_num_mpz_t(), pi1[p].get_num_mpz_t(), remaining);
        mpz_pow_ui(q1.get_den_mpz_t(), pi1[p].get_den_mpz_t(), remaining);
        total += Rational(coef) * (p1 * q1 - p0 * q0);
      }
      return;
    }
    BigInt nn = num, dd = den;
    Rational a0 = p0, a1 = p1;
    for (unsigned c = 0; c <= remaining; ++c) {
      run(i + 1, remaining - c, coef * binomial(remaining, c), nn, dd, a0, a1);
      nn *= t.n1[p];
      dd *= t.n0[p];
      a0 *= pi0[p];
      a1 *= pi1[p];
    }
  }
};

struct Enumerate {
  const RoundedAlphaTable& t;
  const ProbDist& pi0;
  const ProbDist& pi1;
  const std::vector<std::size_t>& cells;
  unsigned k;
  Rational total = 0;

  void run(unsigned depth, const BigInt& num, const BigInt& den,
           const Rational& p0, const Rational& p1) {
    if (depth == k) {
      if (num >= den) total += p1 - p0;
      return;
    }
    for (auto p : cells) {
      run(depth + 1, num * t.n1[p], den * t.n0[p], p0 * pi0[p], p1 * pi1[p]);
    }
  }
};

struct Heterogeneous {
  const std::vector<RoundedAlphaTable>& tables;
  const std::vector<ProbDist>& pis0;
  const std::vector<ProbDist>& pis1;
  std::vector<std::vector<std::size_t>> cells;
  Rational total = 0;

  void run(std::size_t a, const BigInt& num, const BigInt& den,
           const Rational& p0, const Rational& p1) {
    if (a == tables.size()) {
      if (num >= den) total += p1 - p0;
      return;
    }
    const auto& t = tables[a];
    for (auto p : cells[a]) {
      run(a + 1, num * t.n1[p], den * t.n0[p], p0 * pis0[a][p],
          p1 * pis1[a][p]);
    }
  }
};

}  // namespace

std::string to_string(AdvantageMethod method) {
  switch (method) {
    case AdvantageMethod::exact_enumeration: return "exact_enumeration";
    case AdvantageMethod::exact_count_dp: return "exact_count_dp";
    case AdvantageMethod::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

RoundedAlphaTable round_alphas(const AlphaTable& table, const Rational& delta) {
  if (!(sgn(delta) > 0 && delta < 1)) {
    throw ValidationError("delta must lie in (0,1)");
  }
  RoundedAlphaTable r;
  r.parts = table.parts();
  r.delta = delta;
  r.denominator = ceil(Rational(static_cast<unsigned long>(r.parts)) / delta);
  if (r.denominator < 1) r.denominator = 1;
  r.n0.resize(r.parts);
  r.n1.resize(r.parts);
  for (std::size_t p = 0; p < r.parts; ++p) {
    r.n0[p] = round_half_toward_zero(table.alpha0[p], r.denominator);
    r.n1[p] = round_half_toward_zero(table.alpha1[p], r.denominator);
    if (!table.zero_mass[p] && r.n0[p] == 0 && r.n1[p] == 0) {
      throw ValidationError("delta too large: part " + std::to_string(p) +
                            " rounds both numerators to 0");
    }
    Rational s = table.mass0[p] + table.mass1[p];
    Rational den(r.denominator);
    r.shift0 += s * abs(Rational(r.n0[p]) / den - table.alpha0[p]);
    r.shift1 += s * abs(Rational(r.n1[p]) / den - table.alpha1[p]);
  }
  r.shift0 /= 2;
  r.shift1 /= 2;
  if (r.shift0 > delta || r.shift1 > delta) {
    throw InvariantViolation("rounding moved a distribution by more than delta");
  }
  return r;
}

double Kappa::log_value() const {
  if (denominator == 0) {
    return numerator == 0 ? std::numeric_limits<double>::quiet_NaN()
                          : std::numeric_limits<double>::infinity();
  }
  if (numerator == 0) return -std::numeric_limits<double>::infinity();
  return log_of(numerator) - log_of(denominator);
}

Kappa kappa(const RoundedAlphaTable& table,
            const std::vector<std::size_t>& labels) {
  Kappa k{BigInt(1), BigInt(1)};
  for (auto l : labels) {
    if (l >= table.parts) {
      throw ValidationError("part label " + std::to_string(l) + " out of range");
    }
    if (table.n0[l] == 0 && table.n1[l] == 0) {
      throw ValidationError("sample landed in part " + std::to_string(l) +
                            " whose numerators are both 0");
    }
    k.numerator *= table.n1[l];
    k.denominator *= table.n0[l];
  }
  return k;
}

bool LRDistinguisher::decide_labels(const std::vector<std::size_t>& labels) const {
  return kappa(table, labels).decide();
}

bool LRDistinguisher::decide_elements(
    const std::vector<std::size_t>& samples) const {
  std::vector<std::size_t> labels;
  labels.reserve(samples.size());
  for (auto x : samples) labels.push_back(labeling.labels.at(x));
  return decide_labels(labels);
}

AdvantageEstimate exact_advantage(const RoundedAlphaTable& table,
                                  const ProbDist& pi0, const ProbDist& pi1,
                                  unsigned k, std::uint64_t budget,
                                  ExactMethod method) {
  if (k == 0) throw ValidationError("k must be positive");
  Cells cells = reachable(table, pi0, pi1);
  const std::size_t m = cells.index.size();
  const std::uint64_t cv = count_vector_space(k, m);
  const std::uint64_t en = saturating_power(m, k);
  if (method == ExactMethod::automatic) {
    if (cv <= budget) {
      method = ExactMethod::count_vectors;
    } else if (en <= budget) {
      method = ExactMethod::enumeration;
    } else {
      throw BudgetExceeded("exact advantage exceeds budget (k=" +
                           std::to_string(k) + ", parts=" + std::to_string(m) +
                           ")");
    }
  }
  AdvantageEstimate out;
  Rational total;
  if (method == ExactMethod::count_vectors) {
    if (cv > budget) throw BudgetExceeded("count-vector space exceeds budget");
    CountDp dp{table, pi0, pi1, cells.index};
    dp.run(0, k, BigInt(1), BigInt(1), BigInt(1), Rational(1), Rational(1));
    total = dp.total;
    out.method = AdvantageMethod::exact_count_dp;
  } else {
    if (en > budget) throw BudgetExceeded("enumeration exceeds budget");
    Enumerate e{table, pi0, pi1, cells.index, k};
    e.run(0, BigInt(1), BigInt(1), Rational(1), Rational(1));
    total = e.total;
    out.method = AdvantageMethod::exact_enumeration;
  }
  out.exact = abs(total);
  out.value = to_double(*out.exact);
  return out;
}

AdvantageEstimate mc_advantage(const RoundedAlphaTable& table,
                               const ProbDist& x0, const ProbDist& x1,
                               const Labeling& labeling, unsigned k,
                               std::uint64_t trials, std::uint64_t seed) {
  if (trials < config::kMinMonteCarloTrials) {
    throw ValidationError("Monte Carlo needs at least " +
                          std::to_string(config::kMinMonteCarloTrials) +
                          " trials");
  }
  if (k == 0) throw ValidationError("k must be positive");
  require_same_domain(x0.domain(), x1.domain());
  if (labeling.size() != x0.size() || labeling.parts != table.parts) {
    throw DomainMismatch("labeling does not match the rounded table");
  }
  LRDistinguisher rule{labeling, table, k};
  std::uint64_t ones[2] = {0, 0};
  const ProbDist* sources[2] = {&x0, &x1};
  for (int b = 0; b < 2; ++b) {
    DiscreteSampler sampler(sources[b]->reals());
    std::vector<std::size_t> samples(k);
    const std::uint64_t blocks =
        (trials + config::kMonteCarloBlock - 1) / config::kMonteCarloBlock;
    for (std::uint64_t blk = 0; blk < blocks; ++blk) {
      Rng rng(derive_seed(seed, 2 * blk + static_cast<std::uint64_t>(b)));
      const std::uint64_t begin = blk * config::kMonteCarloBlock;
      const std::uint64_t end =
          std::min(trials, begin + config::kMonteCarloBlock);
      for (std::uint64_t t = begin; t < end; ++t) {
        for (auto& s : samples) s = sampler(rng);
        if (rule.decide_elements(samples)) ++ones[b];
      }
    }
  }
  const double n = static_cast<double>(trials);
  const double p0 = static_cast<double>(ones[0]) / n;
  const double p1 = static_cast<double>(ones[1]) / n;
  AdvantageEstimate out;
  out.method = AdvantageMethod::monte_carlo;
  out.value = std::abs(p1 - p0);
  out.ci_halfwidth = config::kNormalQuantile95 *
                     std::sqrt(p0 * (1 - p0) / n + p1 * (1 - p1) / n);
  out.trials = trials;
  out.seed = seed;
  return out;
}

double guarantee_floor(double tv_tilde_k, double delta, unsigned k) {
  return std::max(0.0, tv_tilde_k - 4.0 * delta * static_cast<double>(k));
}

AdvantageEstimate heterogeneous_advantage(
    const std::vector<RoundedAlphaTable>& tables,
    const std::vector<ProbDist>& pis0, const std::vector<ProbDist>& pis1,
    std::uint64_t budget) {
  if (tables.empty()) throw ValidationError("need at least one index");
  if (pis0.size() != tables.size() || pis1.size() != tables.size()) {
    throw ValidationError("per-index sequences differ in length");
  }
  Heterogeneous h{tables, pis0, pis1, {}};
  std::uint64_t cost = 1;
  for (std::size_t a = 0; a < tables.size(); ++a) {
    h.cells.push_back(reachable(tables[a], pis0[a], pis1[a]).index);
    std::uint64_t c = h.cells.back().size();
    cost = (c != 0 && cost > std::numeric_limits<std::uint64_t>::max() / c)
               ? std::numeric_limits<std::uint64_t>::max()
               : cost * c;
  }
  if (cost > budget) throw BudgetExceeded("label-tuple space exceeds budget");
  h.run(0, BigInt(1), BigInt(1), Rational(1), Rational(1));
  AdvantageEstimate out;
  out.method = AdvantageMethod::exact_enumeration;
  out.exact = abs(h.total);
  out.value = to_double(*out.exact);
  return out;
}

}  // namespace indist
