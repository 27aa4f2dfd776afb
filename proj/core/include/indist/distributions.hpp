#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "indist/rational.hpp"

namespace indist {

// A finite indexed domain {0, ..., size-1}, optionally labeled.
class Domain {
 public:
  explicit Domain(std::size_t size, std::vector<std::string> labels = {});

  std::size_t size() const { return size_; }
  const std::vector<std::string>& labels() const { return labels_; }
  bool has_labels() const { return !labels_.empty(); }

  // Sizes agree and, when both sides carry labels, the labels agree.
  bool compatible(const Domain& other) const;
  bool operator==(const Domain& other) const = default;

 private:
  std::size_t size_;
  std::vector<std::string> labels_;
};

// Throws DomainMismatch unless a and b are compatible.
void require_same_domain(const Domain& a, const Domain& b);

// Total map from domain indices to part labels in [0, parts).
struct Labeling {
  std::vector<std::size_t> labels;
  std::size_t parts = 0;

  std::size_t operator[](std::size_t x) const { return labels[x]; }
  std::size_t size() const { return labels.size(); }
  // Members of each part, in increasing index order.
  std::vector<std::vector<std::size_t>> members() const;
  static Labeling identity(std::size_t n);
  static Labeling constant(std::size_t n);
};

// Exact probability vector. Entries are nonnegative rationals summing to 1.
class ProbDist {
 public:
  ProbDist(Domain domain, std::vector<Rational> mass);

  // Real-mode constructor: the sum must be within the real-mode tolerance
  // of 1; the vector is then renormalized exactly.
  static ProbDist from_reals(Domain domain, const std::vector<double>& mass);
  static ProbDist uniform(std::size_t n);
  static ProbDist point_mass(std::size_t n, std::size_t at);
  static ProbDist bernoulli(const Rational& p_one);

  const Domain& domain() const { return domain_; }
  std::size_t size() const { return mass_.size(); }
  const std::vector<Rational>& mass() const { return mass_; }
  const Rational& operator[](std::size_t x) const { return mass_[x]; }
  std::vector<double> reals() const { return to_doubles(mass_); }

  Rational mass_of(const std::vector<std::size_t>& subset) const;
  std::vector<std::size_t> support() const;

  bool operator==(const ProbDist& other) const;

 private:
  Domain domain_;
  std::vector<Rational> mass_;
};

enum class MetricKind { tv, hellinger_sq, hellinger, renyi_half };

struct MetricValue {
  double value = 0.0;
  MetricKind kind = MetricKind::tv;
};

Rational tv_distance_exact(const ProbDist& p, const ProbDist& q);
MetricValue tv_distance(const ProbDist& p, const ProbDist& q);

// 1/2 sum (sqrt p - sqrt q)^2, evaluated in long double.
MetricValue hellinger_sq(const ProbDist& p, const ProbDist& q);
MetricValue hellinger(const ProbDist& p, const ProbDist& q);

// 2 log2 sum sqrt p.
MetricValue renyi_half_entropy(const ProbDist& p);

// 1 - sqrt(2^{H_1/2(P)} / N).
MetricValue hellinger_to_uniform(const ProbDist& p);

// Plain-vector forms used by the product and solver code.
double hellinger_sq(const std::vector<double>& p, const std::vector<double>& q);
double sum_sqrt(const std::vector<double>& p);

// 1 - (1 - h2)^m. Throws InvariantViolation if the value leaves
// [1 - exp(-m h2), m h2].
double product_hellinger_sq(double h2, unsigned m);

struct TvBounds {
  double lower = 0.0;
  double upper = 0.0;
};

// lower = 1 - exp(-k dH^2), upper = min(1, sqrt(2k) dH).
TvBounds k_sample_tv_bounds(const ProbDist& p, const ProbDist& q, unsigned k);
TvBounds k_sample_tv_bounds(double h2, unsigned k);

ProbDist mixture(const ProbDist& p, const ProbDist& q);

// Restriction to subset, renormalized. Throws ValidationError when
// P(subset) = 0.
ProbDist conditional(const ProbDist& p, const std::vector<std::size_t>& subset);

ProbDist pushforward(const ProbDist& p, const Labeling& labeling);

}  // namespace indist
