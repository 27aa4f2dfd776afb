#pragma once

#include <cstdint>

// Central tolerances, budgets and constants. Everything numeric that is not
// a direct input lives here so tests can pin it.
namespace indist::config {

// Comparison tolerance for quantities involving square roots.
inline constexpr double kRealTolerance = 1e-10;

// Allowed |sum - 1| when a distribution is read in real mode.
inline constexpr double kRealModeSumTolerance = 1e-12;

// Largest enumeration any exact evaluator will attempt.
inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

// all_boolean_family refuses domains larger than this.
inline constexpr std::size_t kMaxBooleanDomain = 20;

// advantage(f, X_b, tilde_b) <= kIndistConstant * epsilon.
inline constexpr double kIndistConstant = 8.0;

// Sample-bound constants for the uniform-target (entropy gap) bounds:
// upper = kRenyiUpperFactor * sqrt(k * gap) + 2k eps,
// lower = 1 - exp(-kRenyiExponent * k * min(gap, 1)) - 2k eps.
inline constexpr double kRenyiUpperFactor = 2.0;
inline constexpr double kRenyiExponent = 0.25;

// k* must land in [kKStarLow / dH^2, kKStarHigh / dH^2].
inline constexpr double kKStarLow = 0.1;
inline constexpr double kKStarHigh = 10.0;

// Convex solver.
inline constexpr double kSqrtFloor = 1e-12;
inline constexpr double kKktTolerance = 1e-8;
inline constexpr std::uint64_t kMaxSolverIterations = 100'000;

// Monte Carlo.
inline constexpr std::uint64_t kMinMonteCarloTrials = 1000;
inline constexpr std::uint64_t kMonteCarloBlock = 4096;
inline constexpr double kNormalQuantile95 = 1.959963984540054;

}  // namespace indist::config
