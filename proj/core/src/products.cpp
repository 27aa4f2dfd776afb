#include "indist/products.hpp"

#include <limits>

#include "indist/errors.hpp"

namespace indist {
namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

std::vector<std::size_t> union_support(const ProbDist& p, const ProbDist& q) {
  std::vector<std::size_t> s;
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (sgn(p[x]) > 0 || sgn(q[x]) > 0) s.push_back(x);
  }
  return s;
}

Rational pow(const Rational& base, unsigned long e) {
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), e);
  return r;
}

struct Exhaustive {
  const std::vector<ProbDist>& ps;
  const std::vector<ProbDist>& qs;
  std::vector<std::vector<std::size_t>> supports;
  Rational total = 0;

  void run(std::size_t j, const Rational& pp, const Rational& qq) {
    if (j == ps.size()) {
      total += abs(pp - qq);
      return;
    }
    for (auto x : supports[j]) {
      run(j + 1, pp * ps[j][x], qq * qs[j][x]);
    }
  }
};

struct CountVectors {
  std::vector<Rational> p;
  std::vector<Rational> q;
  Rational total = 0;

  void run(std::size_t cell, unsigned remaining, const BigInt& coef,
           const Rational& pp, const Rational& qq) {
    if (cell + 1 == p.size()) {
      Rational a = pp * pow(p[cell], remaining);
      Rational b = qq * pow(q[cell], remaining);
      total += Rational(coef) * abs(a - b);
      return;
    }
    Rational pc = 1, qc = 1;
    for (unsigned c = 0; c <= remaining; ++c) {
      run(cell + 1, remaining - c, coef * binomial(remaining, c), pp * pc,
          qq * qc);
      pc *= p[cell];
      qc *= q[cell];
    }
  }
};

}  // namespace

ProductIndexer::ProductIndexer(std::size_t base, unsigned k)
    : base_(base), k_(k), size_(1) {
  if (base == 0) throw ValidationError("empty base domain");
  std::uint64_t s = saturating_power(base, k);
  if (s == kSaturated || s > std::numeric_limits<std::size_t>::max()) {
    throw BudgetExceeded("product domain too large");
  }
  size_ = static_cast<std::size_t>(s);
}

std::vector<std::size_t> ProductIndexer::decode(std::size_t index) const {
  std::vector<std::size_t> c(k_);
  for (unsigned j = k_; j-- > 0;) {
    c[j] = index % base_;
    index /= base_;
  }
  return c;
}

std::size_t ProductIndexer::encode(const std::vector<std::size_t>& c) const {
  std::size_t index = 0;
  for (unsigned j = 0; j < k_; ++j) index = index * base_ + c[j];
  return index;
}

std::uint64_t saturating_power(std::size_t m, unsigned k) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < k; ++i) r = saturating_mul(r, m);
  return r;
}

std::uint64_t count_vector_space(unsigned k, std::size_t m) {
  if (m == 0) return k == 0 ? 1 : 0;
  BigInt c = binomial(k + m - 1, m - 1);
  if (!c.fits_ulong_p()) return kSaturated;
  return c.get_ui();
}

ProbDist product_of(const std::vector<ProbDist>& factors,
                    std::uint64_t budget) {
  if (factors.empty()) throw ValidationError("empty product");
  std::uint64_t size = 1;
  for (const auto& f : factors) size = saturating_mul(size, f.size());
  if (size > budget) throw BudgetExceeded("explicit product exceeds budget");
  std::vector<Rational> mass{Rational(1)};
  for (const auto& f : factors) {
    std::vector<Rational> next;
    next.reserve(mass.size() * f.size());
    for (const auto& m : mass) {
      for (std::size_t x = 0; x < f.size(); ++x) next.push_back(m * f[x]);
    }
    mass = std::move(next);
  }
  Domain dom(mass.size());
  return ProbDist(std::move(dom), std::move(mass));
}

ProbDist product_power(const ProbDist& p, unsigned k, std::uint64_t budget) {
  return product_of(std::vector<ProbDist>(k, p), budget);
}

std::vector<double> product_power_reals(const std::vector<double>& p,
                                        unsigned k) {
  std::vector<double> mass{1.0};
  for (unsigned j = 0; j < k; ++j) {
    std::vector<double> next;
    next.reserve(mass.size() * p.size());
    for (double m : mass) {
      for (double v : p) next.push_back(m * v);
    }
    mass = std::move(next);
  }
  return mass;
}

ProductTv product_tv_exact(const std::vector<ProbDist>& ps,
                           const std::vector<ProbDist>& qs,
                           std::uint64_t budget, ProductTvMethod method) {
  if (ps.size() != qs.size()) {
    throw ValidationError("factor sequences differ in length");
  }
  if (ps.empty()) throw ValidationError("empty product");
  bool identical = true;
  std::uint64_t cost = 1;
  std::vector<std::vector<std::size_t>> supports;
  for (std::size_t j = 0; j < ps.size(); ++j) {
    require_same_domain(ps[j].domain(), qs[j].domain());
    supports.push_back(union_support(ps[j], qs[j]));
    cost = saturating_mul(cost, supports.back().size());
    if (!(ps[j] == ps[0]) || !(qs[j] == qs[0])) identical = false;
  }

  std::uint64_t cv = identical ? count_vector_space(
                                     static_cast<unsigned>(ps.size()),
                                     supports[0].size())
                               : kSaturated;
  if (method == ProductTvMethod::automatic) {
    if (cost <= budget) {
      method = ProductTvMethod::exhaustive;
    } else if (identical && cv <= budget) {
      method = ProductTvMethod::count_vectors;
    } else {
      throw BudgetExceeded(identical
                               ? "count-vector space exceeds budget"
                               : "heterogeneous product exceeds budget");
    }
  }

  ProductTv out;
  out.method = method;
  if (method == ProductTvMethod::exhaustive) {
    if (cost > budget) throw BudgetExceeded("enumeration exceeds budget");
    Exhaustive e{ps, qs, std::move(supports)};
    e.run(0, Rational(1), Rational(1));
    out.value = e.total / 2;
    return out;
  }
  if (!identical) {
    throw ValidationError("count-vector evaluation needs identical factors");
  }
  if (cv > budget) throw BudgetExceeded("count-vector space exceeds budget");
  CountVectors c;
  for (auto x : supports[0]) {
    c.p.push_back(ps[0][x]);
    c.q.push_back(qs[0][x]);
  }
  c.run(0, static_cast<unsigned>(ps.size()), BigInt(1), Rational(1),
        Rational(1));
  out.value = c.total / 2;
  return out;
}

ProductTv power_tv_exact(const ProbDist& p, const ProbDist& q, unsigned k,
                         std::uint64_t budget, ProductTvMethod method) {
  if (k == 0) throw ValidationError("k must be positive");
  return product_tv_exact(std::vector<ProbDist>(k, p),
                          std::vector<ProbDist>(k, q), budget, method);
}

}  // namespace indist
