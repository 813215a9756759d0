// Copyright 2026 The nqsdyn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NQSDYN_TYPES_HPP
#define NQSDYN_TYPES_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace nqsdyn {

using Complex = std::complex<double>;
using VectorXc = Eigen::VectorXcd;
using MatrixXc = Eigen::MatrixXcd;

/// Spin configuration in the S^z basis. Entries are +1 or -1 (twice the
/// physical S^z of the site).
using SpinConfig = Eigen::VectorXi;

// Error taxonomy. The CLI maps these onto exit codes.

/// Caller broke a documented precondition (dimension mismatch, bad index).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid user input (configuration, files, grids).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative procedure failed to converge or diverged.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact diagonalization refused: the basis exceeds the configured cap.
class OracleCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sum of the spins, i.e. twice the total S^z.
inline int magnetization(const SpinConfig &config) { return config.sum(); }

inline bool is_valid_config(const SpinConfig &config) {
  for (Eigen::Index i = 0; i < config.size(); ++i) {
    if (config(i) != 1 && config(i) != -1) return false;
  }
  return true;
}

}  // namespace nqsdyn

#endif  // NQSDYN_TYPES_HPP
