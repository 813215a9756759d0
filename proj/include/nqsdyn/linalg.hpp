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


#ifndef NQSDYN_LINALG_HPP
#define NQSDYN_LINALG_HPP

#include <functional>

#include "nqsdyn/types.hpp"

namespace nqsdyn {

using LinearOperator = std::function<VectorXc(const VectorXc &)>;

struct CgResult {
  VectorXc x;
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Conjugate gradient for a Hermitian positive definite operator given only
/// through its action. Stops when |r| <= tolerance |b|.
CgResult conjugate_gradient(const LinearOperator &apply, const VectorXc &rhs,
                            double tolerance, int max_iterations);

}  // namespace nqsdyn

#endif  // NQSDYN_LINALG_HPP
