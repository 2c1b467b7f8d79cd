#pragma once

#include <stdexcept>
#include <string>

namespace sqzcool {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure failed to deliver its contract (non-convergence,
/// vanishing divisor). Carries the best estimate available when it gave up.
class ComputationError : public std::runtime_error {
 public:
  explicit ComputationError(const std::string& what, double best_estimate = 0.0,
                            double error_bound = 0.0)
      : std::runtime_error(what), best_estimate_(best_estimate), error_bound_(error_bound) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double best_estimate_;
  double error_bound_;
};

/// Operation requires a stable operating point and did not get one.
class UnstableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Calibration could not reach its target.
class CalibrationError : public std::runtime_error {
 public:
  CalibrationError(const std::string& what, double best_achieved, double residual)
      : std::runtime_error(what), best_achieved_(best_achieved), residual_(residual) {}

  double best_achieved() const noexcept { return best_achieved_; }
  double residual() const noexcept { return residual_; }

 private:
  double best_achieved_;
  double residual_;
};

}  // namespace sqzcool
