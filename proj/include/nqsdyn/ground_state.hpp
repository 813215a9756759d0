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


#ifndef NQSDYN_GROUND_STATE_HPP
#define NQSDYN_GROUND_STATE_HPP

#include <vector>

#include "nqsdyn/hamiltonian.hpp"
#include "nqsdyn/linalg.hpp"
#include "nqsdyn/sampler.hpp"

namespace nqsdyn {

/// Stochastic reconfiguration settings. The diagonal shift added to the
/// metric at step p is
///   max(shift_initial * shift_decay^p, shift_floor) * mean(diag g).
struct SrSettings {
  double learning_rate = 0.01;
  double shift_initial = 100.0;
  double shift_decay = 0.9;
  double shift_floor = 1e-4;
  double cg_tolerance = 1e-6;
  int cg_max_iterations = 1000;
  int max_steps = 1000;
  int convergence_window = 20;
  double energy_tolerance = 1e-5;

  void validate() const;
  double shift(int step) const;

  friend bool operator==(const SrSettings &, const SrSettings &) = default;
};

/// Per-sample log-derivatives and local energies with weights; everything
/// the force and metric estimators need.
struct SrSamples {
  MatrixXc centered_o;  // rows: samples, O_k(s) - <O_k>
  VectorXc o_mean;
  VectorXc local_energy;
  Eigen::VectorXd weights;
  Complex energy{0.0, 0.0};
  double energy_variance = 0.0;
  double energy_error = 0.0;
  double metric_scale = 0.0;  // mean diagonal element of g
  bool exact = false;

  Eigen::Index n_samples() const { return centered_o.rows(); }
};

SrSamples collect_sr_samples(const ChainHamiltonian &hamiltonian,
                             const RbmParameters &params,
                             const SampleSet &samples);

/// f_k = <O_k^* E_loc> - <O_k^*> <E_loc>. Monte Carlo sets with fewer
/// than 100 samples are refused.
VectorXc estimate_forces(const SrSamples &samples);

/// (g + shift I) v with g_kl = <O_k^* O_l> - <O_k^*><O_l>, never forming g.
VectorXc metric_matvec(const SrSamples &samples, const VectorXc &v,
                       double shift = 0.0);

struct SrUpdate {
  RbmParameters params;
  VectorXc delta;
  double shift = 0.0;  // absolute shift actually used
  int cg_iterations = 0;
  bool retried = false;
};

/// Solves (g + eps I) delta = -tau f by CG and applies delta. A CG failure is
/// retried once with eps x 10; a second failure throws ConvergenceError.
SrUpdate sr_step(const RbmParameters &params, const SrSettings &settings,
                 const SrSamples &samples, int step);

struct EnergyTraceEntry {
  int step = 0;
  Complex energy{0.0, 0.0};
  double variance = 0.0;
  double error = 0.0;
  double shift = 0.0;
  int cg_iterations = 0;
};

struct GroundStateResult {
  RbmParameters params;
  Complex e0_estimate{0.0, 0.0};
  double e0_error = 0.0;
  std::vector<EnergyTraceEntry> energy_trace;
  bool converged = false;
  int steps = 0;
};

/// Samples (or enumerates) the sector of `sector` spin sum for the current
/// parameters.
SampleSet sample_wavefunction(const ChainHamiltonian &hamiltonian,
                              const RbmParameters &params,
                              const SamplingOptions &options,
                              std::vector<SpinConfig> *chain_positions = nullptr);

/// sample -> forces -> sr_step until the mean energy of the last window
/// differs from the previous window by less than energy_tolerance.
GroundStateResult optimize_ground_state(const ChainHamiltonian &hamiltonian,
                                        const RbmParameters &init,
                                        const SrSettings &settings,
                                        const SamplingOptions &options);

}  // namespace nqsdyn

#endif  // NQSDYN_GROUND_STATE_HPP
