#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace xinu {

/// Argument outside the mathematical domain of an operation.
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Request that cannot be honoured at the representable resolution.
class precision_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Objects with incompatible shapes were combined.
class dimension_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A structural invariant (e.g. doubly stochastic masses) does not hold.
class validation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative method hit its cap. Carries the residuals at the last iterate.
class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& what, std::vector<double> residuals)
      : std::runtime_error(what), residuals_(std::move(residuals)) {}
  const std::vector<double>& residuals() const noexcept { return residuals_; }

 private:
  std::vector<double> residuals_;
};

}  // namespace xinu
