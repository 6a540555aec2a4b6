#pragma once

#include <stdexcept>
#include <string>

namespace cvtele {

// Bad input from the user: unknown keys, malformed specs, unparsable numbers.
// The CLI maps this to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Parameters or states that violate physics: ε outside [0,1], G < 1,
// covariance matrices violating the uncertainty principle.  Exit code 3.
class PhysicsError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical procedure (quadrature, optimizer, root finder) failed to reach
// its tolerance.  Carries the last estimate for diagnostics.  Exit code 3.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_estimate)
      : std::runtime_error(what), last_estimate_(last_estimate) {}

  double last_estimate() const noexcept { return last_estimate_; }

 private:
  double last_estimate_;
};

}  // namespace cvtele
