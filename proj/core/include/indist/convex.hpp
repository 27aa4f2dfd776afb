#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "indist/config.hpp"
#include "indist/distributions.hpp"
#include "indist/families.hpp"

namespace indist {

struct SolverConfig {
  // Required bound on the final KKT residual (stationarity and duality gap).
  double kkt_tolerance = config::kKktTolerance;
  // Target duality gap for the barrier path.
  double gap_tolerance = 1e-12;
  std::uint64_t max_iterations = config::kMaxSolverIterations;
  double sqrt_floor = config::kSqrtFloor;
};

struct SolverDiagnostics {
  std::uint64_t iterations = 0;      // Newton steps
  std::uint64_t outer_iterations = 0;
  double kkt_residual = 0.0;
  double duality_gap = 0.0;
  // min over constraints of (eps - |f.(X - witness)|), one per side.
  std::vector<double> min_slack;
  std::string status;  // "solved", "pinned" or "common_point"
};

struct PseudoDistanceResult {
  double delta_star = 0.0;  // Hellinger distance of the witnesses
  double delta_sq = 0.0;
  ProbDist witness0;
  ProbDist witness1;
  SolverDiagnostics diagnostics;
};

struct PseudoEntropyResult {
  double r_star = 0.0;  // H_1/2 of the witness
  double gap = 0.0;     // log2 N - r_star
  ProbDist witness;
  SolverDiagnostics diagnostics;
};

// Minimum Hellinger distance between pairs (p, q) with
// |f.(X0 - p)| <= eps and |f.(X1 - q)| <= eps for every f in F.
PseudoDistanceResult pseudo_hellinger(const ProbDist& x0, const ProbDist& x1,
                                      const Family& family, double eps,
                                      const SolverConfig& cfg = {});

// Maximum Renyi-1/2 entropy over p with |f.(X0 - p)| <= eps for all f.
PseudoEntropyResult pseudo_renyi(const ProbDist& x0, const Family& family,
                                 double eps, const SolverConfig& cfg = {});

// 1 - sum sqrt(max(p,tau) max(q,tau)) and its gradient.
double hellinger_objective(const std::vector<double>& p,
                           const std::vector<double>& q, double tau);
void hellinger_gradient(const std::vector<double>& p,
                        const std::vector<double>& q, double tau,
                        std::vector<double>& grad_p,
                        std::vector<double>& grad_q);

// sum sqrt(max(p,tau)) and its gradient.
double sqrt_sum_objective(const std::vector<double>& p, double tau);
void sqrt_sum_gradient(const std::vector<double>& p, double tau,
                       std::vector<double>& grad);

}  // namespace indist
