#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace searchload {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Constraint kinds that can be active at an optimum or empty a feasible set.
enum class Constraint { OneOffPd, CumulativePc, LsMax, RfMax, VariableBound };

std::string to_string(Constraint c);

/// The requested performance cannot be met. Carries the constraints that
/// emptied the feasible set.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(std::vector<Constraint> culprits, const std::string& what);

  const std::vector<Constraint>& culprits() const noexcept { return culprits_; }

 private:
  std::vector<Constraint> culprits_;
};

/// Adaptive quadrature stopped without meeting its tolerance.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(double error_estimate, double tolerance);

  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double error_estimate_;
};

}  // namespace searchload
