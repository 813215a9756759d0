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


#ifndef NQSDYN_HAMILTONIAN_HPP
#define NQSDYN_HAMILTONIAN_HPP

#include <array>
#include <vector>

#include "nqsdyn/rbm.hpp"

namespace nqsdyn {

/// J1-J2 Heisenberg chain
///   H = sum_i J1 S_i.S_{i+1} + J2 S_i.S_{i+2}.
struct ModelSpec {
  int length = 0;
  double j1 = 1.0;
  double j2 = 0.0;
  bool periodic = true;

  friend bool operator==(const ModelSpec &, const ModelSpec &) = default;
};

struct Bond {
  int first;
  int second;
  double coupling;
};

/// One nonzero matrix element <s'|H|s> of a row. `flips` lists the sites
/// whose spins differ between s and s' (empty for the diagonal).
struct RowEntry {
  SpinConfig config;
  double element;
  std::array<int, 2> flip_sites{-1, -1};
  int n_flips = 0;

  std::span<const int> flips() const { return {flip_sites.data(), std::size_t(n_flips)}; }
};

using SparseRow = std::vector<RowEntry>;

/// Cached bond list for a ModelSpec. Bonds with zero coupling are dropped;
/// a bond list with duplicate pairs (e.g. periodic L = 4 with J2 != 0) is
/// rejected.
class ChainHamiltonian {
 public:
  explicit ChainHamiltonian(ModelSpec spec);

  const ModelSpec &spec() const { return spec_; }
  int length() const { return spec_.length; }
  const std::vector<Bond> &bonds() const { return bonds_; }

  /// sum_bonds J s_i s_k / 4
  double diagonal(const SpinConfig &config) const;

 private:
  ModelSpec spec_;
  std::vector<Bond> bonds_;
};

/// Diagonal entry first, then one entry per antiparallel bond with the two
/// spins exchanged.
SparseRow connected_states(const ChainHamiltonian &hamiltonian,
                           const SpinConfig &config);

/// E_loc(s) = sum_{s'} H_{s s'} psi(s') / psi(s).
Complex local_energy(const ChainHamiltonian &hamiltonian,
                     const RbmParameters &params, const ChainState &state);

/// Same, for a precomputed row.
Complex local_energy(const SparseRow &row, const RbmParameters &params,
                     const ChainState &state);

/// S^z at one site; the only source operator used by the spectrum pipeline.
struct SzSource {
  int site = 0;

  /// <s|S^z_j|phi> / phi(s)
  double value(const SpinConfig &config) const { return 0.5 * config(site); }
};

/// <s|A|psi> / psi(s) for a diagonal source operator.
double local_operator_ratio(const SzSource &op, const SpinConfig &config);

/// <s|(z - H)|chi> = chi(s) * ratio, kept factored to avoid overflow.
struct QAction {
  Complex log_chi;
  Complex ratio;  // z - sum_{s'} H_{s s'} chi(s') / chi(s)

  Complex value() const { return std::exp(log_chi) * ratio; }
  Complex log_value() const { return log_chi + std::log(ratio); }
};

QAction local_q_action(const ChainHamiltonian &hamiltonian, Complex z,
                       const RbmParameters &chi, const ChainState &state);

QAction local_q_action(const SparseRow &row, Complex z,
                       const RbmParameters &chi, const ChainState &state);

}  // namespace nqsdyn

#endif  // NQSDYN_HAMILTONIAN_HPP
