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


#ifndef NQSDYN_TESTS_SUPPORT_HPP
#define NQSDYN_TESTS_SUPPORT_HPP

#include <bit>
#include <cmath>
#include <vector>

#include "nqsdyn/greens.hpp"

namespace nqsdyn::testing {

/// RBM amplitudes over a basis, scaled by exp(-shift) to stay finite.
inline VectorXc rbm_vector(const RbmParameters &params, const SectorBasis &basis,
                           Complex shift = 0.0) {
  VectorXc out(basis.size());
  for (Eigen::Index i = 0; i < basis.size(); ++i) {
    out(i) = std::exp(log_psi(params, basis.state(i)) - shift);
  }
  return out;
}

/// d chi / d alpha_k over the basis (columns k).
inline MatrixXc rbm_jacobian(const RbmParameters &params, const SectorBasis &basis,
                             Complex shift = 0.0) {
  MatrixXc out(basis.size(), params.size());
  for (Eigen::Index i = 0; i < basis.size(); ++i) {
    const SpinConfig &c = basis.state(i);
    out.row(i) = std::exp(log_psi(params, c) - shift) * log_derivatives(params, c).transpose();
  }
  return out;
}

/// Heisenberg chain built from spin operators on the full 2^L space, then
/// restricted to `basis`. Independent of the row-based construction.
inline Eigen::MatrixXd spin_operator_hamiltonian(const ModelSpec &model, const SectorBasis &basis) {
  const int length = model.length;
  const auto full = std::size_t(1) << length;
  auto bit_of = [length](int site) { return std::size_t(1) << (length - 1 - site); };
  std::vector<std::pair<std::pair<int, int>, double>> bonds;
  for (int i = 0; i < length; ++i) {
    for (int range = 1; range <= 2; ++range) {
      const double j = range == 1 ? model.j1 : model.j2;
      if (j == 0.0) continue;
      if (!model.periodic && i + range >= length) continue;
      bonds.push_back({{i, (i + range) % length}, j});
    }
  }
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(Eigen::Index(full), Eigen::Index(full));
  for (std::size_t s = 0; s < full; ++s) {
    for (const auto &[bond, j] : bonds) {
      const bool up_a = s & bit_of(bond.first);
      const bool up_b = s & bit_of(bond.second);
      h(Eigen::Index(s), Eigen::Index(s)) += j * (up_a == up_b ? 0.25 : -0.25);
      if (up_a != up_b) {
        const std::size_t t = s ^ bit_of(bond.first) ^ bit_of(bond.second);
        h(Eigen::Index(t), Eigen::Index(s)) += 0.5 * j;
      }
    }
  }
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < basis.size(); ++i) {
    std::size_t bits = 0;
    for (int site = 0; site < length; ++site) {
      if (basis.state(i)(site) == 1) bits |= bit_of(site);
    }
    keep.push_back(Eigen::Index(bits));
  }
  Eigen::MatrixXd out(basis.size(), basis.size());
  for (Eigen::Index a = 0; a < basis.size(); ++a) {
    for (Eigen::Index b = 0; b < basis.size(); ++b) out(a, b) = h(keep[a], keep[b]);
  }
  return out;
}

/// Exact summation over a dense vector psi over `basis` (weights |psi|^2).
inline SampleSet dense_samples(const SectorBasis &basis, const VectorXc &psi) {
  SampleSet out;
  out.exact = true;
  const double norm = psi.squaredNorm();
  for (Eigen::Index i = 0; i < basis.size(); ++i) {
    out.configs.push_back(basis.state(i));
    out.weights.push_back(std::norm(psi(i)) / norm);
  }
  return out;
}

inline SamplingOptions exact_options(int sector = 0) {
  SamplingOptions o;
  o.mode = SamplingMode::kExact;
  o.plan.sector = sector;
  return o;
}

/// Ground state RBM of a small chain optimized in exact-enumeration mode.
inline GroundStateResult converged_ground_state(const ModelSpec &model, int hidden_per_site = 2,
                                                int max_steps = 600) {
  SrSettings s;
  s.learning_rate = 0.05;
  s.shift_initial = 1.0;
  s.max_steps = max_steps;
  s.energy_tolerance = 1e-9;
  const RbmParameters init = init_random(model.length, hidden_per_site * model.length, 0.01, 1);
  return optimize_ground_state(ChainHamiltonian(model), init, s, exact_options());
}

/// Relative agreement with a unit floor: |a - b| <= tol * max(|b|, 1).
inline bool close(Complex a, Complex b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(b), 1.0);
}

}  // namespace nqsdyn::testing

#endif  // NQSDYN_TESTS_SUPPORT_HPP
