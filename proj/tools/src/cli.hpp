#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace indist::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,  // audit found violations
  kParseError = 2,
  kValidationError = 3,
  kBudgetError = 4,
  kInvariantError = 5,
  kSolverError = 6,  // convex program did not certify an optimum
};

// Effective settings after merging flags > config file > defaults. Values
// are kept as the strings the user wrote so the echo is exact.
class RunConfig {
 public:
  std::string command;

  void set(const std::string& key, std::string value) {
    values_[key] = std::move(value);
  }
  bool has(const std::string& key) const { return values_.count(key) > 0; }
  std::optional<std::string> get(const std::string& key) const;
  std::string require(const std::string& key) const;
  nlohmann::json echo() const;

 private:
  std::map<std::string, std::string> values_;
};

// Keys understood in config files; flags are the same names with "--".
const std::vector<std::string>& config_keys();

// Entry point used by main() and the tests.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace indist::cli
