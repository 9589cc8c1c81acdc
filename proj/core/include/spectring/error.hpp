#pragma once

#include <stdexcept>
#include <string>

namespace spectring {

// Error taxonomy shared by all modules. The CLI maps ValidationError to
// exit code 2 and everything else below to exit code 3.

class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid value for a mathematical domain (non-positive rate, alpha
// outside (0,1), malformed interval, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

// A recursion or product left the representable floating-point range.
class NumericRangeError : public Error {
public:
  NumericRangeError(const std::string& what, std::size_t index)
      : Error(what), failing_index(index) {}
  std::size_t failing_index;
};

// Caller violated a documented precondition (length mismatch, function
// not vanishing at the endpoints, ...).
class ContractViolation : public Error {
public:
  using Error::Error;
};

// Input is structurally empty where content is required (no atoms, no
// jumps, zero dm-mass denominator).
class DegenerateInput : public Error {
public:
  using Error::Error;
};

// An atom sits exactly on a restriction/partition cut point.
class CutPointCollision : public Error {
public:
  CutPointCollision(const std::string& what, double cut)
      : Error(what), cut_point(cut) {}
  double cut_point;
};

// Configuration the solver does not support (boundary atom under
// Neumann conditions, empty Neumann cell, ...).
class UnsupportedConfiguration : public Error {
public:
  using Error::Error;
};

// An iteration failed to converge within its restart budget.
class NumericFailure : public Error {
public:
  NumericFailure(const std::string& what, std::size_t index)
      : Error(what), failing_index(index) {}
  std::size_t failing_index;
};

// Two internally redundant computations disagree (Sturm bracket without
// a sign change). Always indicates an implementation bug.
class InternalConsistencyError : public Error {
public:
  using Error::Error;
};

// Config/CLI validation failure.
class ValidationError : public Error {
public:
  using Error::Error;
};

} // namespace spectring
