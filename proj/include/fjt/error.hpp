#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace fjt {

namespace error_detail {

inline std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace error_detail

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation
/// (a <= 0, x <= 0 for K_{in}, nu < -1/2 for J_nu, parameter regime violations, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// No evaluation path reached the requested tolerance.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, double achieved)
      : Error(what + " (achieved residual " + error_detail::short_number(achieved) + ")"),
        achieved_(achieved) {}

  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// An integrand returned a non-finite value.
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, double abscissa)
      : Error(what + " at x = " + error_detail::short_number(abscissa)), abscissa_(abscissa) {}

  double abscissa() const noexcept { return abscissa_; }

 private:
  double abscissa_;
};

/// The requested semi-infinite integral is not absolutely convergent.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// Averaged partial sums of an oscillatory integral failed to contract.
class AccelerationError : public NonConvergenceError {
 public:
  using NonConvergenceError::NonConvergenceError;
};

/// A log-space assembled constant left the representable range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// A coefficient sequence fails the summability proxy.
class DecayConditionError : public Error {
 public:
  using Error::Error;
};

/// A profile function fails the sampled Lipschitz or periodicity check.
class LipschitzError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace fjt
