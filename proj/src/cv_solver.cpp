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


#include "nqsdyn/cv_solver.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>

namespace nqsdyn {

namespace {

/// (Q chi)(s)/chi(s) and (Q d_k chi)(s)/chi(s) at one configuration.
struct QChiLocal {
  ChainState state;
  Complex q_ratio;
  VectorXc q_dchi;
};

QChiLocal q_chi_local(const ChainHamiltonian &hamiltonian, Complex z, const RbmParameters &chi,
                      const SpinConfig &config, bool with_derivatives) {
  QChiLocal out;
  out.state = ChainState::make(chi, config);
  const SparseRow row = connected_states(hamiltonian, config);
  out.q_ratio = z;
  if (with_derivatives) out.q_dchi = VectorXc::Zero(chi.size());
  VectorXc o(chi.size());
  for (const RowEntry &entry : row) {
    if (entry.n_flips == 0) {
      out.q_ratio -= entry.element;
      if (with_derivatives) {
        log_derivatives(chi, config, out.state.theta, o);
        out.q_dchi += (z - entry.element) * o;
      }
      continue;
    }
    const ChainState next = flip_update(out.state, chi, entry.flips());
    const Complex ratio = std::exp(next.log_amp - out.state.log_amp);
    out.q_ratio -= entry.element * ratio;
    if (with_derivatives) {
      log_derivatives(chi, next.config, next.theta, o);
      out.q_dchi -= (entry.element * ratio) * o;
    }
  }
  return out;
}

/// Walker over Phi(s) = <s|Q|chi>.
class QChiWalker final : public Walker {
 public:
  QChiWalker(const ChainHamiltonian &hamiltonian, Complex z,
             std::shared_ptr<const RbmParameters> chi)
      : hamiltonian_(hamiltonian), z_(z), chi_(std::move(chi)) {}

  void reset(const SpinConfig &config) override {
    state_ = ChainState::make(*chi_, config);
    log_amp_ = evaluate(state_);
  }
  const SpinConfig &config() const override { return state_.config; }
  Complex log_amplitude() const override { return log_amp_; }
  Complex propose(int i, int k) override {
    const std::array<int, 2> flips{i, k};
    proposed_ = flip_update(state_, *chi_, flips);
    proposed_log_amp_ = evaluate(proposed_);
    return proposed_log_amp_;
  }
  void accept() override {
    state_ = std::move(proposed_);
    log_amp_ = proposed_log_amp_;
  }

 private:
  Complex evaluate(const ChainState &state) const {
    const QAction q = local_q_action(hamiltonian_, z_, *chi_, state);
    if (q.ratio == Complex(0.0)) return {-std::numeric_limits<double>::infinity(), 0.0};
    return q.log_value();
  }

  const ChainHamiltonian &hamiltonian_;
  Complex z_;
  std::shared_ptr<const RbmParameters> chi_;
  ChainState state_;
  Complex log_amp_;
  ChainState proposed_;
  Complex proposed_log_amp_;
};

SamplingOptions with_seed(const SamplingOptions &options, std::uint64_t a) {
  SamplingOptions out = options;
  out.plan.seed = derive_seed(options.plan.seed, a);
  return out;
}

bool finite(Complex v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

}  // namespace

SampleSet sample_p0(const CorrectionVectorProblem &problem, const SamplingOptions &options) {
  return sample_wavefunction(problem.hamiltonian, problem.psi, with_seed(options, 0x50));
}

SampleSet sample_p1(const CorrectionVectorProblem &problem, const RbmParameters &chi,
                    const SamplingOptions &options) {
  const int length = problem.hamiltonian.length();
  if (options.mode == SamplingMode::kExact) {
    return exact_samples(enumerate_sector(length, options.plan.sector), [&](const SpinConfig &c) {
      const QAction q = local_q_action(problem.hamiltonian, problem.z, chi, ChainState::make(chi, c));
      if (q.ratio == Complex(0.0)) return Complex(-std::numeric_limits<double>::infinity(), 0.0);
      return q.log_value();
    });
  }
  const SamplingOptions opts = with_seed(options, 0x51);
  auto shared = std::make_shared<const RbmParameters>(chi);
  const ChainHamiltonian &hamiltonian = problem.hamiltonian;
  const Complex z = problem.z;
  return run_chains(opts.plan, length, [&hamiltonian, z, shared]() {
           return std::make_unique<QChiWalker>(hamiltonian, z, shared);
         }).samples;
}

OverlapSamples evaluate_ratios(const CorrectionVectorProblem &problem, const RbmParameters &chi,
                               const SampleSet &p0, const SampleSet &p1) {
  OverlapSamples out;
  out.exact = p0.exact;
  const bool with_derivatives = p1.size() > 0;

  std::vector<Eigen::Index> kept;
  VectorXc r(Eigen::Index(p0.size()));
  MatrixXc v(with_derivatives ? Eigen::Index(p0.size()) : 0, chi.size());
  for (std::size_t s = 0; s < p0.size(); ++s) {
    const SpinConfig &config = p0.configs[s];
    if (p0.weights[s] == 0.0) continue;
    const QChiLocal local =
        q_chi_local(problem.hamiltonian, problem.z, chi, config, with_derivatives);
    // chi(s) / A(s) with A(s) = (s_j / 2) psi(s)
    const Complex chi_over_a = std::exp(local.state.log_amp - log_psi(problem.psi, config)) /
                               local_operator_ratio(problem.source, config);
    const Complex rs = local.q_ratio * chi_over_a;
    bool ok = finite(rs);
    const auto row = Eigen::Index(kept.size());
    if (ok && with_derivatives) {
      v.row(row) = (local.q_dchi * chi_over_a).transpose();
      ok = v.row(row).allFinite();
    }
    if (!ok) {
      ++out.discarded;
      continue;
    }
    r(row) = rs;
    kept.push_back(Eigen::Index(s));
  }
  const auto n0 = Eigen::Index(kept.size());
  out.r = r.head(n0);
  if (with_derivatives) out.v = v.topRows(n0);
  out.p0_weights.resize(n0);
  for (Eigen::Index k = 0; k < n0; ++k) out.p0_weights(k) = p0.weights[std::size_t(kept[std::size_t(k)])];
  if (n0 > 0) out.p0_weights /= out.p0_weights.sum();

  if (!with_derivatives) return out;
  MatrixXc o(Eigen::Index(p1.size()), chi.size());
  std::vector<double> w1;
  for (std::size_t s = 0; s < p1.size(); ++s) {
    if (p1.weights[s] == 0.0) continue;
    const QChiLocal local = q_chi_local(problem.hamiltonian, problem.z, chi, p1.configs[s], true);
    const auto row = Eigen::Index(w1.size());
    o.row(row) = (local.q_dchi / local.q_ratio).transpose();
    if (!o.row(row).allFinite()) {
      ++out.discarded;
      continue;
    }
    w1.push_back(p1.weights[s]);
  }
  out.o = o.topRows(Eigen::Index(w1.size()));
  out.p1_weights = Eigen::Map<const Eigen::VectorXd>(w1.data(), Eigen::Index(w1.size()));
  if (out.p1_weights.size() > 0) out.p1_weights /= out.p1_weights.sum();
  return out;
}

OverlapSamples sample_ratios(const CorrectionVectorProblem &problem, const RbmParameters &chi,
                             const SamplingOptions &options) {
  const SampleSet p0 = sample_p0(problem, options);
  const SampleSet p1 = sample_p1(problem, chi, options);
  return evaluate_ratios(problem, chi, p0, p1);
}

namespace {

struct RMoments {
  Complex mean;
  double second;
  double variance;
};

RMoments r_moments(const OverlapSamples &samples) {
  if (samples.r.size() == 0) throw ContractViolation("no P0 samples");
  const VectorXc w = samples.p0_weights.cast<Complex>();
  RMoments m;
  m.mean = (samples.r.array() * w.array()).sum();
  m.second = (samples.r.cwiseAbs2().array() * samples.p0_weights.array()).sum();
  m.variance = ((samples.r.array() - m.mean).abs2() * samples.p0_weights.array()).sum();
  if (!(m.second > 0.0)) {
    throw ContractViolation("degenerate correction vector: <|R|^2> = 0");
  }
  return m;
}

}  // namespace

double estimate_x(const OverlapSamples &samples) {
  const RMoments m = r_moments(samples);
  return std::clamp(std::norm(m.mean) / m.second, 0.0, 1.0);
}

double estimate_infidelity(const OverlapSamples &samples) {
  const RMoments m = r_moments(samples);
  return std::clamp(m.variance / m.second, 0.0, 1.0);
}

VectorXc estimate_gamma_gradient(const OverlapSamples &samples) {
  const RMoments m = r_moments(samples);
  const double one_minus_x = std::clamp(m.variance / m.second, 0.0, 1.0);
  const double x = std::clamp(std::norm(m.mean) / m.second, 0.0, 1.0);
  const Eigen::Index n_params = samples.v.cols() > 0 ? samples.v.cols() : samples.o.cols();
  if (one_minus_x <= 1e-12) return VectorXc::Zero(n_params);
  if (x <= 1e-12) {
    throw ConvergenceError("orthogonal start: Q chi has no overlap with the source state");
  }
  if (samples.o.rows() == 0 || samples.v.rows() == 0) {
    throw ContractViolation("gradient needs P0 and P1 samples with derivatives");
  }
  // gamma sqrt(x / (1 - x)) with gamma = arccos sqrt(x) = asin sqrt(1 - x).
  const double s = std::sqrt(one_minus_x);
  const double prefactor = std::sqrt(x) * (s > 1e-8 ? std::asin(s) / s : 1.0);
  const VectorXc o_mean = samples.o.transpose() * samples.p1_weights.cast<Complex>();
  const VectorXc v_mean = samples.v.transpose() * samples.p0_weights.cast<Complex>();
  return prefactor * (o_mean.conjugate() - v_mean.conjugate() / std::conj(m.mean));
}

VectorXc cv_metric_matvec(const OverlapSamples &samples, const VectorXc &v, double shift) {
  const VectorXc w = samples.p1_weights.cast<Complex>();
  const VectorXc o_mean = samples.o.transpose() * w;
  // sum_s w_s (O_s - <O>)^* ((O_s - <O>) . v)
  VectorXc t = samples.o * v;
  t.array() -= (o_mean.array() * v.array()).sum();
  t.array() *= w.array();
  VectorXc out = samples.o.adjoint() * t - o_mean.conjugate() * t.sum();
  if (shift != 0.0) out += shift * v;
  return out;
}

double cv_metric_scale(const OverlapSamples &samples) {
  const VectorXc w = samples.p1_weights.cast<Complex>();
  const VectorXc o_mean = samples.o.transpose() * w;
  const Eigen::VectorXd second = samples.o.cwiseAbs2().transpose() * samples.p1_weights;
  const double trace = (second.array() - o_mean.cwiseAbs2().array()).sum();
  return trace / double(std::max<Eigen::Index>(samples.o.cols(), 1));
}

Complex estimate_beta(const OverlapSamples &samples) {
  const RMoments m = r_moments(samples);
  return std::conj(m.mean) / m.second;
}

NgdUpdate ngd_step(const RbmParameters &chi, const CvSettings &settings,
                   const OverlapSamples &samples, int iteration) {
  const VectorXc gradient = estimate_gamma_gradient(samples);
  NgdUpdate update;
  update.params = chi;
  if (settings.learning_rate == 0.0 || gradient.squaredNorm() == 0.0) return update;
  const double scale = cv_metric_scale(samples);
  double shift = settings.sr.shift(iteration) * (scale > 0.0 ? scale : 1.0);
  const VectorXc rhs = -settings.learning_rate * gradient;
  for (int attempt = 0; attempt < 2; ++attempt) {
    const auto apply = [&](const VectorXc &v) { return cv_metric_matvec(samples, v, shift); };
    CgResult cg = conjugate_gradient(apply, rhs, settings.sr.cg_tolerance,
                                     settings.sr.cg_max_iterations);
    update.cg_iterations += cg.iterations;
    if (cg.converged && cg.x.allFinite()) {
      update.params += cg.x;
      update.shift = shift;
      if (!update.params.all_finite()) {
        throw ConvergenceError("NGD update produced non-finite parameters");
      }
      return update;
    }
    update.retried = true;
    shift *= 10.0;
  }
  throw ConvergenceError("NGD linear solve did not converge in " +
                         std::to_string(settings.sr.cg_max_iterations) + " CG iterations");
}

RbmParameters source_initial_guess(const CorrectionVectorProblem &problem) {
  RbmParameters chi = problem.psi;
  chi.visible_bias()(problem.source.site) += Complex(0.0, std::numbers::pi / 2.0);
  return chi;
}

CvSolution solve_correction_vector(const CorrectionVectorProblem &problem, const RbmParameters &init,
                                   const CvSettings &settings, const SamplingOptions &options) {
  if (problem.eta() == 0.0 || !std::isfinite(problem.eta())) {
    throw ValidationError("the shift z must have a nonzero imaginary part");
  }
  CvSolution solution;
  RbmParameters chi = init;
  double best = std::numeric_limits<double>::infinity();
  int best_iteration = 0;
  RbmParameters best_chi = chi;
  OverlapSamples best_samples;

  // P0 does not depend on chi; in exact mode it is computed once.
  SampleSet exact_p0;
  if (options.mode == SamplingMode::kExact) exact_p0 = sample_p0(problem, options);

  for (int it = 0; it <= settings.max_iterations; ++it) {
    SamplingOptions step_options = options;
    step_options.plan.seed = derive_seed(options.plan.seed, 0xC5, std::uint64_t(it));
    const SampleSet p0 = options.mode == SamplingMode::kExact ? exact_p0 : sample_p0(problem, step_options);
    const SampleSet p1 = sample_p1(problem, chi, step_options);
    OverlapSamples samples = evaluate_ratios(problem, chi, p0, p1);

    CvTraceEntry entry;
    entry.iteration = it;
    entry.one_minus_x = estimate_infidelity(samples);
    entry.x = estimate_x(samples);
    const double s = std::sqrt(entry.one_minus_x);
    entry.gamma_sq = std::asin(std::min(s, 1.0)) * std::asin(std::min(s, 1.0));
    entry.beta = estimate_beta(samples);
    solution.trace.push_back(entry);
    solution.iterations = it;

    if (entry.one_minus_x < best) {
      best = entry.one_minus_x;
      best_iteration = it;
      best_chi = chi;
      best_samples = samples;
    }
    if (entry.one_minus_x < settings.tolerance) {
      solution.converged = true;
      break;
    }
    if (it == settings.max_iterations || it - best_iteration >= settings.patience) break;
    chi = ngd_step(chi, settings, samples, it).params;
  }

  solution.chi = best_chi;
  if (options.mode == SamplingMode::kMonteCarlo) {
    SamplingOptions overlap = options;
    overlap.plan.seed = derive_seed(options.plan.seed, 0xB7);
    overlap.plan.n_samples_per_chain = int(std::max<std::int64_t>(
        1, settings.overlap_samples / std::max(1, overlap.plan.n_chains)));
    const SampleSet p0 = sample_p0(problem, overlap);
    best_samples = evaluate_ratios(problem, best_chi, p0, SampleSet{});
  }
  solution.beta = estimate_beta(best_samples);
  solution.one_minus_x_final = estimate_infidelity(best_samples);
  solution.x_final = estimate_x(best_samples);
  const double s = std::sqrt(solution.one_minus_x_final);
  solution.gamma_sq_final = std::asin(std::min(s, 1.0)) * std::asin(std::min(s, 1.0));
  return solution;
}

}  // namespace nqsdyn
