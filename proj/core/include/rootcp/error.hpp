#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rootcp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the inputs was violated (non-finite value, bad shape, out-of-range parameter).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A linear system could not be solved reliably.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The requested combination of options has no implementation (e.g. a non-absolute score where a
/// closed form needs |.|).
class Unsupported : public Error {
 public:
  using Error::Error;
};

/// Malformed input file.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// The typicalness profile ran out of its model-fit budget.
class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

/// No candidate with typicalness at or above the level could be found, or the outer bounds could
/// not be pushed below the level. Carries every probed (z, pi(z)) pair.
class InitializationFailed : public Error {
 public:
  InitializationFailed(const std::string& what, std::vector<std::pair<double, double>> probes)
      : Error(what), probes_(std::move(probes)) {}

  const std::vector<std::pair<double, double>>& probes() const noexcept { return probes_; }

 private:
  std::vector<std::pair<double, double>> probes_;
};

}  // namespace rootcp
