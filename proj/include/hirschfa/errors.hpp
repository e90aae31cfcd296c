#pragma once

#include <stdexcept>
#include <string>

namespace hirschfa {

/// Bad input: negative counts, malformed CSV, unknown column names, domain
/// violations of a transform.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A core-based index (A, m, h_w, interpolations) requested for h = 0.
class UndefinedCoreError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Too few observations or a zero-variance sample.
class InsufficientDataError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Singular / non-positive-definite / degenerate matrices.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative procedure hit its iteration cap.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hirschfa
