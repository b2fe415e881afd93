#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace dwreg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Malformed or unusable input data (CSV rows, empty files, bad sigmas).
struct data_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical breakdown: loss of positive definiteness, non-finite weights,
// degenerate rank-one updates.
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad user-facing configuration (unknown keys, invalid mode strings).
struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace dwreg
