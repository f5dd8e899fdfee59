#pragma once

#include <stdexcept>
#include <string>

namespace qmarg {

/// Raised when an operation's preconditions on its arguments do not hold.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The Jacobi eigensolver hit its sweep cap before the off-diagonal mass
/// dropped below threshold.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double off_diagonal_norm)
      : std::runtime_error(what), off_diagonal_norm_(off_diagonal_norm) {}

  double off_diagonal_norm() const noexcept { return off_diagonal_norm_; }

 private:
  double off_diagonal_norm_;
};

/// An eigenvalue sits below the clamping window; the matrix is not a state.
class PsdViolation : public std::domain_error {
 public:
  PsdViolation(const std::string& what, double eigenvalue)
      : std::domain_error(what), eigenvalue_(eigenvalue) {}

  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

}  // namespace qmarg
