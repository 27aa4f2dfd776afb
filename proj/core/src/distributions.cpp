#include "indist/distributions.hpp"

#include <cmath>
#include <set>

#include "indist/config.hpp"
#include "indist/errors.hpp"

namespace indist {

Domain::Domain(std::size_t size, std::vector<std::string> labels)
    : size_(size), labels_(std::move(labels)) {
  if (size_ == 0) throw ValidationError("domain size must be positive");
  if (!labels_.empty()) {
    if (labels_.size() != size_) {
      throw ValidationError("label count does not match domain size");
    }
    std::set<std::string> seen(labels_.begin(), labels_.end());
    if (seen.size() != labels_.size()) {
      throw ValidationError("domain labels must be distinct");
    }
  }
}

bool Domain::compatible(const Domain& other) const {
  if (size_ != other.size_) return false;
  if (has_labels() && other.has_labels()) return labels_ == other.labels_;
  return true;
}

void require_same_domain(const Domain& a, const Domain& b) {
  if (!a.compatible(b)) {
    throw DomainMismatch("domain mismatch: sizes " + std::to_string(a.size()) +
                         " and " + std::to_string(b.size()));
  }
}

std::vector<std::vector<std::size_t>> Labeling::members() const {
  std::vector<std::vector<std::size_t>> out(parts);
  for (std::size_t x = 0; x < labels.size(); ++x) out[labels[x]].push_back(x);
  return out;
}

Labeling Labeling::identity(std::size_t n) {
  Labeling l;
  l.parts = n;
  l.labels.resize(n);
  for (std::size_t x = 0; x < n; ++x) l.labels[x] = x;
  return l;
}

Labeling Labeling::constant(std::size_t n) {
  Labeling l;
  l.parts = 1;
  l.labels.assign(n, 0);
  return l;
}

ProbDist::ProbDist(Domain domain, std::vector<Rational> mass)
    : domain_(std::move(domain)), mass_(std::move(mass)) {
  if (mass_.size() != domain_.size()) {
    throw ValidationError("mass vector length " + std::to_string(mass_.size()) +
                          " does not match domain size " +
                          std::to_string(domain_.size()));
  }
  Rational total = 0;
  for (auto& m : mass_) {
    m.canonicalize();
    if (sgn(m) < 0) throw ValidationError("negative mass " + to_string(m));
    total += m;
  }
  if (total != 1) {
    throw ValidationError("masses sum to " + to_string(total) + ", not 1");
  }
}

ProbDist ProbDist::from_reals(Domain domain, const std::vector<double>& mass) {
  std::vector<Rational> exact;
  exact.reserve(mass.size());
  Rational total = 0;
  for (double m : mass) {
    if (!(m >= 0.0) || !std::isfinite(m)) {
      throw ValidationError("mass entries must be finite and nonnegative");
    }
    exact.push_back(rational_from_double(m));
    total += exact.back();
  }
  if (std::abs(to_double(total) - 1.0) > config::kRealModeSumTolerance) {
    throw ValidationError("masses sum to " + std::to_string(to_double(total)) +
                          ", outside tolerance of 1");
  }
  for (auto& m : exact) m /= total;
  return ProbDist(std::move(domain), std::move(exact));
}

ProbDist ProbDist::uniform(std::size_t n) {
  return ProbDist(Domain(n), std::vector<Rational>(n, Rational(1, n)));
}

ProbDist ProbDist::point_mass(std::size_t n, std::size_t at) {
  std::vector<Rational> m(n, Rational(0));
  m.at(at) = 1;
  return ProbDist(Domain(n), std::move(m));
}

ProbDist ProbDist::bernoulli(const Rational& p_one) {
  return ProbDist(Domain(2), {Rational(1 - p_one), p_one});
}

Rational ProbDist::mass_of(const std::vector<std::size_t>& subset) const {
  Rational s = 0;
  for (auto x : subset) s += mass_.at(x);
  return s;
}

std::vector<std::size_t> ProbDist::support() const {
  std::vector<std::size_t> s;
  for (std::size_t x = 0; x < mass_.size(); ++x) {
    if (sgn(mass_[x]) > 0) s.push_back(x);
  }
  return s;
}

bool ProbDist::operator==(const ProbDist& other) const {
  return domain_.compatible(other.domain_) && mass_ == other.mass_;
}

Rational tv_distance_exact(const ProbDist& p, const ProbDist& q) {
  require_same_domain(p.domain(), q.domain());
  Rational s = 0;
  for (std::size_t x = 0; x < p.size(); ++x) s += abs(p[x] - q[x]);
  return s / 2;
}

MetricValue tv_distance(const ProbDist& p, const ProbDist& q) {
  return {to_double(tv_distance_exact(p, q)), MetricKind::tv};
}

double hellinger_sq(const std::vector<double>& p,
                    const std::vector<double>& q) {
  long double s = 0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    long double d = std::sqrt(static_cast<long double>(p[x])) -
                    std::sqrt(static_cast<long double>(q[x]));
    s += d * d;
  }
  return static_cast<double>(s / 2);
}

double sum_sqrt(const std::vector<double>& p) {
  long double s = 0;
  for (double v : p) s += std::sqrt(static_cast<long double>(v));
  return static_cast<double>(s);
}

MetricValue hellinger_sq(const ProbDist& p, const ProbDist& q) {
  require_same_domain(p.domain(), q.domain());
  return {hellinger_sq(p.reals(), q.reals()), MetricKind::hellinger_sq};
}

MetricValue hellinger(const ProbDist& p, const ProbDist& q) {
  return {std::sqrt(hellinger_sq(p, q).value), MetricKind::hellinger};
}

MetricValue renyi_half_entropy(const ProbDist& p) {
  double h = 2.0 * std::log2(sum_sqrt(p.reals()));
  // Clamp rounding noise into [0, log2 N].
  h = std::min(std::max(h, 0.0), std::log2(static_cast<double>(p.size())));
  return {h, MetricKind::renyi_half};
}

MetricValue hellinger_to_uniform(const ProbDist& p) {
  double h = renyi_half_entropy(p).value;
  double n = static_cast<double>(p.size());
  return {1.0 - std::sqrt(std::exp2(h) / n), MetricKind::hellinger_sq};
}

double product_hellinger_sq(double h2, unsigned m) {
  if (!(h2 >= 0.0 && h2 <= 1.0)) {
    throw ValidationError("squared Hellinger distance must lie in [0,1]");
  }
  double value = -std::expm1(static_cast<double>(m) * std::log1p(-h2));
  double lower = -std::expm1(-static_cast<double>(m) * h2);
  double upper = static_cast<double>(m) * h2;
  if (value < lower - config::kRealTolerance ||
      value > upper + config::kRealTolerance) {
    throw InvariantViolation("product Hellinger value outside its bracket");
  }
  return value;
}

TvBounds k_sample_tv_bounds(double h2, unsigned k) {
  TvBounds b;
  b.lower = -std::expm1(-static_cast<double>(k) * h2);
  b.upper = std::min(1.0, std::sqrt(2.0 * k) * std::sqrt(h2));
  return b;
}

TvBounds k_sample_tv_bounds(const ProbDist& p, const ProbDist& q, unsigned k) {
  return k_sample_tv_bounds(hellinger_sq(p, q).value, k);
}

ProbDist mixture(const ProbDist& p, const ProbDist& q) {
  require_same_domain(p.domain(), q.domain());
  std::vector<Rational> m(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) m[x] = (p[x] + q[x]) / 2;
  return ProbDist(p.domain(), std::move(m));
}

ProbDist conditional(const ProbDist& p,
                     const std::vector<std::size_t>& subset) {
  std::vector<bool> in(p.size(), false);
  for (auto x : subset) in.at(x) = true;
  Rational total = 0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (in[x]) total += p[x];
  }
  if (sgn(total) == 0) throw ValidationError("conditioning on a zero-mass set");
  std::vector<Rational> m(p.size(), Rational(0));
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (in[x]) m[x] = p[x] / total;
  }
  return ProbDist(p.domain(), std::move(m));
}

ProbDist pushforward(const ProbDist& p, const Labeling& labeling) {
  if (labeling.size() != p.size()) {
    throw DomainMismatch("labeling does not cover the domain");
  }
  std::vector<Rational> m(labeling.parts, Rational(0));
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (labeling[x] >= labeling.parts) {
      throw ValidationError("label out of range");
    }
    m[labeling[x]] += p[x];
  }
  return ProbDist(Domain(labeling.parts), std::move(m));
}

}  // namespace indist
