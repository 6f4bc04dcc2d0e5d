#pragma once

#include <stdexcept>
#include <string>

namespace vacpol {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs that violate a precondition. The CLI maps these to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A well-posed computation that failed numerically. The CLI maps these to exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class BadBracket : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class TooLarge : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class LatticeMismatch : public ValidationError {
 public:
  LatticeMismatch() : ValidationError("objects live on different lattices") {}
};

class OutsideCutoff : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class Unsupported : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DegenerateMasses : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InfeasibleCharge : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NonConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class LandauPole : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class Degenerate : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DenominatorVanishes : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace vacpol
