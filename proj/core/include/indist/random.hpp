#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace indist {

// Deterministic generator. mt19937_64 output is fixed by the standard; the
// conversions below avoid the implementation-defined std distributions so
// that streams agree across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  double normal();
  // Marsaglia-Tsang.
  double gamma(double shape);

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer; derives independent seeds from (seed, stream).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// Inverse-CDF sampler over a finite distribution.
class DiscreteSampler {
 public:
  explicit DiscreteSampler(const std::vector<double>& weights);
  std::size_t operator()(Rng& rng) const;

 private:
  std::vector<double> cumulative_;
};

}  // namespace indist
