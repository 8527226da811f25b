#pragma once

#include <stdexcept>
#include <string>

namespace ovkron {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrixError : public Error {
 public:
  explicit SingularMatrixError(double condition)
      : Error("matrix numerically singular, condition estimate " +
              std::to_string(condition)),
        condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

class NonHermitianError : public Error {
 public:
  explicit NonHermitianError(double deviation)
      : Error("matrix not Hermitian within tolerance, max deviation " +
              std::to_string(deviation)),
        deviation_(deviation) {}
  double deviation() const noexcept { return deviation_; }

 private:
  double deviation_;
};

/// Argument outside the domain of a transform (e.g. not in the upper
/// matricial half-plane).
class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ovkron
