#pragma once

#include <stdexcept>
#include <string>

namespace topdc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input files or configuration.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Anything that fails for physical or numerical reasons.
class PhysicsError : public Error {
 public:
  using Error::Error;
};

// Preconditions on physical inputs, including requests outside a model's range.
class DomainError : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

class ConvergenceError : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

// Raised when beta2 = 0 would make an analytic bandwidth infinite.
class InfiniteBandwidthError : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

// Raised when an overlap integral vanishes, i.e. the effective area is infinite.
class VanishingOverlapError : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

// Pump fixed point did not settle. lower/upper bracket the last iterates.
class BistabilityError : public ConvergenceError {
 public:
  BistabilityError(const std::string& what, double lower, double upper)
      : ConvergenceError(what), lower_(lower), upper_(upper) {}
  double lower() const { return lower_; }
  double upper() const { return upper_; }

 private:
  double lower_;
  double upper_;
};

}  // namespace topdc
