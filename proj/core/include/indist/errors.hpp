#pragma once

#include <stdexcept>
#include <string>

namespace indist {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (distribution, family, partition or config files).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a documented precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DomainMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// An exact evaluator would exceed its enumeration budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// A property that holds by construction was observed to fail. Always a defect.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

// The convex solver stopped without certifying its optimum.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace indist
