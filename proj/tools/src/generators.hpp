#pragma once

#include <string>
#include <vector>

#include "indist/distributions.hpp"
#include "indist/families.hpp"

namespace indist::cli {

// "biased_coin(0.1)", "planted_halves(8, 0.3)", "random_pair(6, 1.0, 42)",
// "uniform(4)".
struct GeneratorSpec {
  std::string kind;
  std::vector<std::string> args;
};

GeneratorSpec parse_generator(const std::string& text);
std::string to_string(const GeneratorSpec& spec);

struct Instance {
  ProbDist x0;
  ProbDist x1;
  Family family;
};

Instance generate(const GeneratorSpec& spec);

}  // namespace indist::cli
