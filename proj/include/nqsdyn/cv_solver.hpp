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


#ifndef NQSDYN_CV_SOLVER_HPP
#define NQSDYN_CV_SOLVER_HPP

#include <vector>

#include "nqsdyn/ground_state.hpp"

namespace nqsdyn {

/// Q |chi> = |A> with Q = z - H and |A> = S^z_source |psi>.
struct CorrectionVectorProblem {
  ChainHamiltonian hamiltonian;
  RbmParameters psi;
  Complex z;
  SzSource source;

  /// The adjoint problem Q^dagger |chi-> = |A> (z -> conj(z)).
  CorrectionVectorProblem adjoint() const { return {hamiltonian, psi, std::conj(z), source}; }
  double eta() const { return z.imag(); }
};

/// Per-sample ratios under P0 ~ |A|^2 and P1 ~ |Q chi|^2.
///
/// Under P0 we keep R(s) = <s|Q|chi>/<s|A> and the products
/// V_k(s) = O_k(s) R(s) = <s|Q|d_k chi>/<s|A>, which never divide by
/// <s|Q|chi>. Under P1 we keep O_k(s) = <s|Q|d_k chi>/<s|Q|chi>.
struct OverlapSamples {
  Eigen::VectorXd p0_weights;
  VectorXc r;
  MatrixXc v;
  Eigen::VectorXd p1_weights;
  MatrixXc o;
  bool exact = false;
  std::int64_t discarded = 0;
};

/// Configurations drawn from P0 (for S^z sources P0 = |psi|^2).
SampleSet sample_p0(const CorrectionVectorProblem &problem, const SamplingOptions &options);

/// Configurations drawn from P1 ~ |<s|Q|chi>|^2.
SampleSet sample_p1(const CorrectionVectorProblem &problem, const RbmParameters &chi,
                    const SamplingOptions &options);

OverlapSamples evaluate_ratios(const CorrectionVectorProblem &problem, const RbmParameters &chi,
                               const SampleSet &p0, const SampleSet &p1);

OverlapSamples sample_ratios(const CorrectionVectorProblem &problem, const RbmParameters &chi,
                             const SamplingOptions &options);

/// x = |<R>_0|^2 / <|R|^2>_0, clamped to [0, 1].
double estimate_x(const OverlapSamples &samples);
/// 1 - x evaluated as Var_0(R) / <|R|^2>_0 (no cancellation near x = 1).
double estimate_infidelity(const OverlapSamples &samples);

/// d gamma^2 / d alpha_k^* = gamma sqrt(x/(1-x)) [<O_k^*>_1 - <O_k^* R^*>_0 / <R^*>_0].
/// Zero when 1 - x <= 1e-12; ConvergenceError when x <= 1e-12.
VectorXc estimate_gamma_gradient(const OverlapSamples &samples);

/// (g + shift I) v with g the covariance of O under P1.
VectorXc cv_metric_matvec(const OverlapSamples &samples, const VectorXc &v, double shift = 0.0);

/// Mean diagonal of the P1 covariance of O.
double cv_metric_scale(const OverlapSamples &samples);

/// beta = <R>_0^* / <|R|^2>_0, so that beta |chi> ~ Q^{-1}|A>.
Complex estimate_beta(const OverlapSamples &samples);

struct CvSettings {
  double learning_rate = 0.02;
  double tolerance = 1e-4;  // on 1 - x
  int max_iterations = 500;
  int patience = 100;       // iterations without a new best before giving up
  bool warm_start = true;
  std::int64_t overlap_samples = 1000000;
  // Shift schedule and CG, shared with SR.
  SrSettings sr;

  friend bool operator==(const CvSettings &, const CvSettings &) = default;
};

struct NgdUpdate {
  RbmParameters params;
  double shift = 0.0;
  int cg_iterations = 0;
  bool retried = false;
};

/// Solves (g + eps I) delta = -lambda grad and applies delta (retry policy as sr_step).
NgdUpdate ngd_step(const RbmParameters &chi, const CvSettings &settings,
                   const OverlapSamples &samples, int iteration);

struct CvTraceEntry {
  int iteration = 0;
  double x = 0.0;
  double one_minus_x = 0.0;
  double gamma_sq = 0.0;
  Complex beta{0.0, 0.0};
};

struct CvSolution {
  RbmParameters chi;
  Complex beta{0.0, 0.0};
  double gamma_sq_final = 0.0;
  double x_final = 0.0;
  double one_minus_x_final = 1.0;
  bool converged = false;
  int iterations = 0;
  std::vector<CvTraceEntry> trace;
};

/// Starting point for a cold solve: psi with a_source shifted by i pi / 2, so
/// that chi(s) = i s_source psi(s) is proportional to <s|A>.
RbmParameters source_initial_guess(const CorrectionVectorProblem &problem);

/// sample_ratios -> gradient -> ngd_step until 1 - x < tolerance, max
/// iterations, or stagnation. Returns the best iterate; beta is
/// re-estimated for it (with overlap_samples draws in Monte Carlo mode).
CvSolution solve_correction_vector(const CorrectionVectorProblem &problem, const RbmParameters &init,
                                   const CvSettings &settings, const SamplingOptions &options);

}  // namespace nqsdyn

#endif  // NQSDYN_CV_SOLVER_HPP
