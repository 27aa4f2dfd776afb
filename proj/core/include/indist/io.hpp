#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>

#include "indist/analysis.hpp"
#include "indist/convex.hpp"
#include "indist/distinguisher.hpp"
#include "indist/distributions.hpp"
#include "indist/families.hpp"
#include "indist/multicalibration.hpp"

namespace indist::io {

enum class ArithmeticMode { rational, real };

ArithmeticMode parse_mode(const std::string& text);
std::string to_string(ArithmeticMode mode);

// Distribution file (JSON):
//   {"domain_size": N, "labels": [...], "mass": ["1/4", "0.25", 0.5, ...]}
// Rational mode requires the entries to sum to exactly 1; real mode
// accepts a deviation up to the real-mode tolerance and renormalizes.
ProbDist parse_distribution(const std::string& text, ArithmeticMode mode);
ProbDist read_distribution(const std::filesystem::path& path,
                           ArithmeticMode mode);
std::string format_distribution(const ProbDist& p);

// Family file (JSON):
//   {"domain_size": N, "count": M, "closed_under_negation": false,
//    "complexity": {"oracle_gates": 0, "wires": 0, "note": ""},
//    "functions": [{"name": "f0", "values": ["0", "1/2", ...]}, ...]}
// A function may also be written as a bare array of values.
Family parse_family(const std::string& text, ArithmeticMode mode);
Family read_family(const std::filesystem::path& path, ArithmeticMode mode);
std::string format_family(const Family& family);

// Partition: first line m, second line the N labels.
std::string format_partition(const Partition& partition);
// Sidecar: header "part weight v" then one row per part, rationals.
std::string format_partition_sidecar(const Partition& partition);
Partition parse_partition(const std::string& labels_text,
                          const std::string& sidecar_text);

// Labeling reference, denominator, per-part numerators, k, tie rule.
nlohmann::json distinguisher_json(const LRDistinguisher& d,
                                  const std::string& labeling_ref);

nlohmann::json to_json(const AdvantageEstimate& a);
nlohmann::json to_json(const SandwichReport& report);
nlohmann::json to_json(const KStarResult& result);
nlohmann::json to_json(const PseudoDistanceResult& result);
nlohmann::json to_json(const PseudoEntropyResult& result);
nlohmann::json to_json(const AuditReport& report);

inline const char* kCsvHeader =
    "k,tv_tilde_k,upper,floor,achieved,achieved_ci,family_adv,method";

// Flat CSV of a sandwich report. Re-checks every row before emitting it and
// throws InvariantViolation if one fails.
std::string sandwich_csv(const SandwichReport& report, double tol = 1e-9);

// Fixed-format real (17 significant digits) so output is byte-stable.
std::string format_real(double x);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace indist::io
