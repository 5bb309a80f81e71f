#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace burgers {

/// Invalid problem parameters (reversed interval, non-positive viscosity, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A quadrature that had to converge did not.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double best_value, double error_estimate)
      : std::runtime_error(what), best_value_(best_value), error_estimate_(error_estimate) {}

  double best_value() const noexcept { return best_value_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_value_;
  double error_estimate_;
};

/// The Hopf-Cole denominator |u| fell below the guard.
class DegenerateDenominator : public std::runtime_error {
 public:
  explicit DegenerateDenominator(double magnitude)
      : std::runtime_error("degenerate Hopf-Cole denominator |u| = " + std::to_string(magnitude)),
        magnitude_(magnitude) {}

  double magnitude() const noexcept { return magnitude_; }

 private:
  double magnitude_;
};

class SingularMatrix : public std::runtime_error {
 public:
  explicit SingularMatrix(std::complex<double> p)
      : std::runtime_error("singular boundary system at p = (" + std::to_string(p.real()) + ", " +
                           std::to_string(p.imag()) + ")"),
        p_(p) {}

  std::complex<double> p() const noexcept { return p_; }

 private:
  std::complex<double> p_;
};

/// Finite-difference run blew up.
class InstabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two tables compared over different grids.
class GridMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace burgers
