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


#include "nqsdyn/ground_state.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <string>

namespace nqsdyn {

void SrSettings::validate() const {
  if (!(learning_rate > 0.0)) throw ValidationError("sr.tau must be > 0");
  if (!(shift_initial > 0.0) || !(shift_decay > 0.0) || !(shift_floor > 0.0)) {
    throw ValidationError("sr shift schedule must be positive");
  }
  if (shift_floor > shift_initial) {
    throw ValidationError("sr.shift_floor must not exceed sr.shift_initial");
  }
  if (!(cg_tolerance > 0.0) || cg_max_iterations < 1) {
    throw ValidationError("sr.cg_tol and sr.cg_max_iters must be positive");
  }
  if (max_steps < 1 || convergence_window < 1 || !(energy_tolerance > 0.0)) {
    throw ValidationError("sr.max_steps, sr.window, sr.energy_tol must be positive");
  }
}

double SrSettings::shift(int step) const {
  return std::max(shift_initial * std::pow(shift_decay, double(step)), shift_floor);
}

SrSamples collect_sr_samples(const ChainHamiltonian &hamiltonian,
                             const RbmParameters &params,
                             const SampleSet &samples) {
  const auto n = Eigen::Index(samples.size());
  SrSamples out;
  out.exact = samples.exact;
  out.centered_o.resize(n, params.size());
  out.local_energy.resize(n);
  out.weights.resize(n);
  VectorXc o(params.size());
  for (Eigen::Index s = 0; s < n; ++s) {
    const SpinConfig &config = samples.configs[std::size_t(s)];
    const ChainState state = ChainState::make(params, config);
    out.local_energy(s) = local_energy(hamiltonian, params, state);
    log_derivatives(params, config, state.theta, o);
    out.centered_o.row(s) = o.transpose();
    out.weights(s) = samples.weights[std::size_t(s)];
  }
  const Eigen::VectorXcd w = out.weights.cast<Complex>();
  out.o_mean = out.centered_o.transpose() * w;
  out.centered_o.rowwise() -= out.o_mean.transpose();
  out.energy = (out.local_energy.array() * w.array()).sum();
  out.energy_variance =
      ((out.local_energy.array() - out.energy).abs2() * out.weights.array()).sum();
  out.energy_error = (out.exact || n < 2)
                         ? 0.0
                         : std::sqrt(out.energy_variance / double(n - 1));
  out.metric_scale =
      (out.centered_o.cwiseAbs2().transpose() * out.weights).sum() /
      double(std::max<Eigen::Index>(params.size(), 1));
  return out;
}

VectorXc estimate_forces(const SrSamples &samples) {
  if (!samples.exact && samples.n_samples() < 100) {
    throw ContractViolation("force estimate refused: " +
                            std::to_string(samples.n_samples()) +
                            " samples (< 100)");
  }
  const VectorXc weighted_e =
      ((samples.local_energy.array() - samples.energy) *
       samples.weights.cast<Complex>().array())
          .matrix();
  return samples.centered_o.adjoint() * weighted_e;
}

VectorXc metric_matvec(const SrSamples &samples, const VectorXc &v,
                       double shift) {
  VectorXc t = samples.centered_o * v;
  t.array() *= samples.weights.cast<Complex>().array();
  VectorXc out = samples.centered_o.adjoint() * t;
  if (shift != 0.0) out += shift * v;
  return out;
}

SrUpdate sr_step(const RbmParameters &params, const SrSettings &settings,
                 const SrSamples &samples, int step) {
  const VectorXc forces = estimate_forces(samples);
  const double scale = samples.metric_scale > 0.0 ? samples.metric_scale : 1.0;
  double shift = settings.shift(step) * scale;
  const VectorXc rhs = -settings.learning_rate * forces;
  SrUpdate update;
  for (int attempt = 0; attempt < 2; ++attempt) {
    const auto apply = [&](const VectorXc &v) { return metric_matvec(samples, v, shift); };
    CgResult cg = conjugate_gradient(apply, rhs, settings.cg_tolerance,
                                     settings.cg_max_iterations);
    update.cg_iterations += cg.iterations;
    if (cg.converged && cg.x.allFinite()) {
      update.delta = std::move(cg.x);
      update.shift = shift;
      update.params = params;
      update.params += update.delta;
      if (!update.params.all_finite()) {
        throw ConvergenceError("SR update produced non-finite parameters");
      }
      return update;
    }
    update.retried = true;
    shift *= 10.0;
  }
  throw ConvergenceError("SR linear solve did not converge in " +
                         std::to_string(settings.cg_max_iterations) +
                         " CG iterations (also after raising the shift x10)");
}

SampleSet sample_wavefunction(const ChainHamiltonian &hamiltonian,
                              const RbmParameters &params,
                              const SamplingOptions &options,
                              std::vector<SpinConfig> *chain_positions) {
  const int length = hamiltonian.length();
  if (options.mode == SamplingMode::kExact) {
    return exact_samples(enumerate_sector(length, options.plan.sector),
                         [&](const SpinConfig &c) { return log_psi(params, c); });
  }
  auto shared = std::make_shared<const RbmParameters>(params);
  SamplerPlan plan = options.plan;
  std::vector<SpinConfig> start;
  if (chain_positions != nullptr && !chain_positions->empty()) {
    // Chains continue from the previous parameter set; a short re-equilibration
    // replaces the full burn-in.
    start = *chain_positions;
    plan.burn_in = std::min(plan.burn_in, 10 * plan.thinning);
  }
  ChainResult run = run_chains(
      plan, length, [shared]() { return std::make_unique<RbmWalker>(shared); },
      {}, start);
  if (chain_positions != nullptr) *chain_positions = run.final_configs;
  return std::move(run.samples);
}

GroundStateResult optimize_ground_state(const ChainHamiltonian &hamiltonian,
                                        const RbmParameters &init,
                                        const SrSettings &settings,
                                        const SamplingOptions &options) {
  settings.validate();
  if (init.n_visible() != hamiltonian.length()) {
    throw ContractViolation("RBM visible layer does not match the chain length");
  }
  GroundStateResult result;
  RbmParameters params = init;
  std::vector<SpinConfig> positions;
  const int window = settings.convergence_window;
  double initial_energy = 0.0;

  auto window_mean = [&](std::size_t end) {
    double sum = 0.0;
    for (std::size_t k = end - std::size_t(window); k < end; ++k) {
      sum += result.energy_trace[k].energy.real();
    }
    return sum / window;
  };

  for (int step = 0; step < settings.max_steps; ++step) {
    SamplingOptions step_options = options;
    step_options.plan.seed = derive_seed(options.plan.seed, 0x5352, std::uint64_t(step));
    const SampleSet samples =
        sample_wavefunction(hamiltonian, params, step_options, &positions);
    const SrSamples sr = collect_sr_samples(hamiltonian, params, samples);

    EnergyTraceEntry entry;
    entry.step = step;
    entry.energy = sr.energy;
    entry.variance = sr.energy_variance;
    entry.error = sr.energy_error;
    if (step == 0) initial_energy = sr.energy.real();
    if (!std::isfinite(sr.energy.real()) ||
        sr.energy.real() > initial_energy + 10.0 * std::max(std::abs(initial_energy), 1.0)) {
      result.energy_trace.push_back(entry);
      throw ConvergenceError("ground-state optimization diverged at step " +
                             std::to_string(step) + " (E = " +
                             std::to_string(sr.energy.real()) + ")");
    }

    const std::size_t n = result.energy_trace.size() + 1;
    result.energy_trace.push_back(entry);
    result.params = params;
    result.steps = step + 1;
    if (n >= std::size_t(2 * window) &&
        std::abs(window_mean(n) - window_mean(n - window)) < settings.energy_tolerance) {
      result.converged = true;
      break;
    }
    if (step + 1 == settings.max_steps) break;

    const SrUpdate update = sr_step(params, settings, sr, step);
    result.energy_trace.back().shift = update.shift;
    result.energy_trace.back().cg_iterations = update.cg_iterations;
    params = update.params;
  }

  const std::size_t n = result.energy_trace.size();
  const std::size_t used = std::min<std::size_t>(n, std::size_t(window));
  Complex sum = 0.0;
  double err2 = 0.0;
  for (std::size_t k = n - used; k < n; ++k) {
    sum += result.energy_trace[k].energy;
    err2 += result.energy_trace[k].error * result.energy_trace[k].error;
  }
  result.e0_estimate = sum / double(used);
  result.e0_error = std::sqrt(err2) / double(used);
  return result;
}

}  // namespace nqsdyn
