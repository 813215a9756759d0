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


#include "nqsdyn/hamiltonian.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <utility>

namespace nqsdyn {

namespace {

void add_bonds(const ModelSpec &spec, int distance, double coupling,
               std::vector<Bond> &bonds) {
  if (coupling == 0.0) return;
  const int l = spec.length;
  const int last = spec.periodic ? l : l - distance;
  for (int i = 0; i < last; ++i) bonds.push_back({i, (i + distance) % l, coupling});
}

}  // namespace

ChainHamiltonian::ChainHamiltonian(ModelSpec spec) : spec_(spec) {
  if (spec_.length < 2) throw ValidationError("model.length must be >= 2");
  add_bonds(spec_, 1, spec_.j1, bonds_);
  add_bonds(spec_, 2, spec_.j2, bonds_);
  std::set<std::pair<int, int>> seen;
  for (const Bond &b : bonds_) {
    const auto key = std::minmax(b.first, b.second);
    if (b.first == b.second || !seen.insert(key).second) {
      throw ValidationError("chain of length " + std::to_string(spec_.length) +
                            " produces a duplicated bond (" +
                            std::to_string(key.first) + "," +
                            std::to_string(key.second) + ")");
    }
  }
}

double ChainHamiltonian::diagonal(const SpinConfig &config) const {
  double value = 0.0;
  for (const Bond &b : bonds_) {
    value += 0.25 * b.coupling * config(b.first) * config(b.second);
  }
  return value;
}

SparseRow connected_states(const ChainHamiltonian &hamiltonian,
                           const SpinConfig &config) {
  if (config.size() != hamiltonian.length()) {
    throw ContractViolation("configuration length does not match the chain");
  }
  SparseRow row;
  row.reserve(hamiltonian.bonds().size() + 1);
  row.push_back({config, hamiltonian.diagonal(config), {-1, -1}, 0});
  for (const Bond &b : hamiltonian.bonds()) {
    if (config(b.first) == config(b.second)) continue;
    RowEntry entry{config, 0.5 * b.coupling, {b.first, b.second}, 2};
    entry.config(b.first) = -entry.config(b.first);
    entry.config(b.second) = -entry.config(b.second);
    row.push_back(std::move(entry));
  }
  return row;
}

Complex local_energy(const SparseRow &row, const RbmParameters &params,
                     const ChainState &state) {
  Complex value = 0.0;
  for (const RowEntry &entry : row) {
    if (entry.n_flips == 0) {
      value += entry.element;
    } else {
      value += entry.element *
               std::exp(log_amp_after_flips(state, params, entry.flips()) -
                        state.log_amp);
    }
  }
  return value;
}

Complex local_energy(const ChainHamiltonian &hamiltonian,
                     const RbmParameters &params, const ChainState &state) {
  return local_energy(connected_states(hamiltonian, state.config), params,
                      state);
}

double local_operator_ratio(const SzSource &op, const SpinConfig &config) {
  if (op.site < 0 || op.site >= config.size()) {
    throw ContractViolation("source site out of range");
  }
  return op.value(config);
}

QAction local_q_action(const SparseRow &row, Complex z,
                       const RbmParameters &chi, const ChainState &state) {
  return {state.log_amp, z - local_energy(row, chi, state)};
}

QAction local_q_action(const ChainHamiltonian &hamiltonian, Complex z,
                       const RbmParameters &chi, const ChainState &state) {
  return local_q_action(connected_states(hamiltonian, state.config), z, chi,
                        state);
}

}  // namespace nqsdyn
