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


#include "nqsdyn/linalg.hpp"

#include <cmath>

namespace nqsdyn {

CgResult conjugate_gradient(const LinearOperator &apply, const VectorXc &rhs,
                            double tolerance, int max_iterations) {
  CgResult result;
  result.x = VectorXc::Zero(rhs.size());
  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) {
    result.converged = true;
    return result;
  }
  VectorXc r = rhs;
  VectorXc p = r;
  double rr = r.squaredNorm();
  for (int it = 0; it < max_iterations; ++it) {
    if (std::sqrt(rr) <= tolerance * rhs_norm) break;
    const VectorXc ap = apply(p);
    const Complex pap = p.dot(ap);
    if (!(pap.real() > 0.0) || !std::isfinite(pap.real())) break;  // not HPD
    const double step = rr / pap.real();
    result.x += step * p;
    r -= step * ap;
    const double rr_next = r.squaredNorm();
    p = r + (rr_next / rr) * p;
    rr = rr_next;
    result.iterations = it + 1;
  }
  result.relative_residual = std::sqrt(rr) / rhs_norm;
  result.converged = result.relative_residual <= tolerance;
  return result;
}

}  // namespace nqsdyn
