#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace afdm {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kJ{0.0, 1.0};

// Vector/matrix dimensions that do not fit the operation.
class InvalidSize : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Sizes that are valid in principle but not supported (odd-N Fresnel).
class UnsupportedSize : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Raised by the LMMSE solve when the Gram system is not positive definite.
class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace afdm
