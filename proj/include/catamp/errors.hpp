#pragma once

#include <stdexcept>
#include <string>

namespace catamp {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
 public:
  using Error::Error;
};

// Operand shapes or basis layouts do not match.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// The Fock truncation is too small for the requested state or operator.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, int required_dim)
      : Error(what), required_dim_(required_dim) {}
  int required_dim() const noexcept { return required_dim_; }

 private:
  int required_dim_;
};

class UndefinedState : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A DensityOp failed its trace, Hermiticity or positivity bounds.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

// Adaptive step size fell below the floor.
class StiffnessError : public Error {
 public:
  using Error::Error;
};

class IntegrationDiverged : public Error {
 public:
  using Error::Error;
};

// Golden-section search could not bracket an interior maximum.
class BracketError : public Error {
 public:
  BracketError(const std::string& what, std::string curve_dump)
      : Error(what), curve_(std::move(curve_dump)) {}
  const std::string& curve_dump() const noexcept { return curve_; }

 private:
  std::string curve_;
};

// Configuration failed schema validation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace catamp
