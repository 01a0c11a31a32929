#pragma once

#include <stdexcept>
#include <string>

namespace lieco {

/// Evaluation left the mathematical domain of an operation
/// (tan/sec at a pole, sqrt of a negative, t outside a signal's span).
class DomainError : public std::domain_error {
public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// A numerical routine failed to meet its contract (quadrature budget
/// exhausted, step-size underflow, singular Wei-Norman matrix). Carries the
/// best estimate available at the failure point where one exists.
class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
  NumericError(const std::string& what, double best) : std::runtime_error(what), best_estimate(best), has_estimate(true) {}

  double best_estimate = 0.0;
  bool has_estimate = false;
};

}  // namespace lieco
