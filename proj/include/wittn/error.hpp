#pragma once

#include <stdexcept>
#include <string>

namespace wittn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition or a domain hypothesis.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A ring, truncation set or problem description could not be constructed.
class ConstructionError : public DomainError {
 public:
  using DomainError::DomainError;
};

class DimensionMismatch : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Operands live over different truncation sets or coefficient rings.
class SetMismatch : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Division of `coefficient` by `divisor` is not exact in an integer ring.
class NonIntegralDivision : public DomainError {
 public:
  NonIntegralDivision(std::string coefficient, std::string divisor)
      : DomainError("non-integral division: " + coefficient + " / " + divisor),
        coefficient_(std::move(coefficient)),
        divisor_(std::move(divisor)) {}

  const std::string& coefficient() const noexcept { return coefficient_; }
  const std::string& divisor() const noexcept { return divisor_; }

 private:
  std::string coefficient_;
  std::string divisor_;
};

/// A closed-form K-theory answer was requested outside its hypotheses (p | a_i).
class HypothesisViolation : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The coefficient ring is not a Z_(p)-algebra for the requested prime.
class NotLocalAlgebra : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Exhaustive enumeration would exceed the configured element budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// A self-check on a computed result failed. Always a bug.
class InternalVerificationFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace wittn
