#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace liscrb {

// Two or more of the BS, LIS, MS (or scatterer) coincide.
class DegenerateGeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Scenario or argument violates a documented precondition.
class InvalidInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The finite-difference oracle produced a non-finite mean; names the parameter.
class OracleError : public std::runtime_error {
 public:
  OracleError(std::string parameter, const std::string& what)
      : std::runtime_error(what), parameter_(std::move(parameter)) {}
  const std::string& parameter() const noexcept { return parameter_; }

 private:
  std::string parameter_;
};

// Information matrix is singular on the queried block. Carries the
// (unit-norm) direction of the offending null space in the matrix's own
// parameter coordinates.
class SingularFimError : public std::runtime_error {
 public:
  SingularFimError(const std::string& what, Eigen::VectorXd null_direction)
      : std::runtime_error(what), null_direction_(std::move(null_direction)) {}
  const Eigen::VectorXd& null_direction() const noexcept { return null_direction_; }

 private:
  Eigen::VectorXd null_direction_;
};

}  // namespace liscrb
