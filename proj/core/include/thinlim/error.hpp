#pragma once

#include <stdexcept>
#include <string>

namespace thinlim {

/// Input or configuration failed validation (CLI exit code 1).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A solver could not produce a result (CLI exit code 2).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be read or written, or is malformed (CLI exit code 3).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A geometric construction produced the empty set.
class EmptyDomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace thinlim
