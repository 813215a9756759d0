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


#include <gtest/gtest.h>

#include "support.hpp"

namespace nqsdyn {
namespace {

double exact_energy(const ChainHamiltonian &h, const RbmParameters &p, const DenseOperator &dense) {
  const VectorXc psi = testing::rbm_vector(p, dense.basis);
  return (psi.adjoint() * dense.matrix.cast<Complex>() * psi)(0).real() / psi.squaredNorm();
}

SrSamples exact_sr(const ChainHamiltonian &h, const RbmParameters &p, int sector = 0) {
  return collect_sr_samples(h, p, sample_wavefunction(h, p, testing::exact_options(sector)));
}

TEST(Forces, MatchFiniteDifferenceGradient) {
  const ModelSpec model{6, 1.0, 0.2, true};
  const ChainHamiltonian h(model);
  const DenseOperator dense = build_hamiltonian(model);
  const RbmParameters p = init_random(6, 6, 0.2, 31);
  const VectorXc f = estimate_forces(exact_sr(h, p));
  const VectorXc alpha = p.flatten();
  const double step = 1e-5;
  for (Eigen::Index k = 0; k < alpha.size(); ++k) {
    auto energy_at = [&](Complex d) {
      VectorXc a = alpha;
      a(k) += d;
      return exact_energy(h, RbmParameters::from_flat(6, 6, a), dense);
    };
    const double d_re = (energy_at(step) - energy_at(-step)) / (2 * step);
    const double d_im = (energy_at(Complex(0, step)) - energy_at(Complex(0, -step))) / (2 * step);
    const Complex fd = 0.5 * Complex(d_re, d_im);
    EXPECT_LT(std::abs(f(k) - fd), 1e-7) << k;
  }
}

TEST(Forces, VanishInSingleStateSector) {
  const ChainHamiltonian h({4, 1.0, 0.0, true});
  const RbmParameters p = init_random(4, 4, 0.3, 32);
  const SrSamples s = exact_sr(h, p, 4);
  EXPECT_EQ(s.n_samples(), 1);
  EXPECT_LT(estimate_forces(s).norm(), 1e-14);
  EXPECT_NEAR(s.energy.real(), 1.0, 1e-14);
}

TEST(Forces, InvariantUnderConstantEnergyShift) {
  const ChainHamiltonian h({6, 1.0, 0.0, true});
  const RbmParameters p = init_random(6, 6, 0.2, 33);
  SrSamples s = exact_sr(h, p);
  const VectorXc f = estimate_forces(s);
  s.local_energy.array() += 7.5;
  s.energy += 7.5;
  EXPECT_LT((estimate_forces(s) - f).norm(), 1e-12);
}

TEST(Forces, RefuseTinyMonteCarloSets) {
  const ChainHamiltonian h({6, 1.0, 0.0, true});
  const RbmParameters p = init_random(6, 6, 0.2, 34);
  SamplingOptions o;
  o.plan.n_chains = 1;
  o.plan.n_samples_per_chain = 50;
  o.plan.thinning = 2;
  o.plan.burn_in = 10;
  const SrSamples s = collect_sr_samples(h, p, sample_wavefunction(h, p, o));
  EXPECT_THROW(estimate_forces(s), ContractViolation);
}

TEST(MetricMatvec, MatchesDenseMetric) {
  const ChainHamiltonian h({6, 1.0, 0.0, true});
  const RbmParameters p = init_random(6, 4, 0.3, 35);
  SamplingOptions o;
  o.plan.n_chains = 1;
  o.plan.n_samples_per_chain = 10;
  o.plan.thinning = 3;
  o.plan.burn_in = 10;
  const SrSamples s = collect_sr_samples(h, p, sample_wavefunction(h, p, o));
  const Eigen::Index n = p.size();
  MatrixXc g = MatrixXc::Zero(n, n);
  for (Eigen::Index r = 0; r < s.n_samples(); ++r) {
    g += s.weights(r) * s.centered_o.row(r).adjoint() * s.centered_o.row(r);
  }
  Rng rng(36);
  std::normal_distribution<double> normal;
  VectorXc v(n);
  for (auto &x : v) x = Complex(normal(rng), normal(rng));
  EXPECT_LT((metric_matvec(s, v, 0.3) - (g * v + 0.3 * v)).norm(), 1e-12 * v.norm());
  EXPECT_EQ(metric_matvec(s, VectorXc::Zero(n)).norm(), 0.0);
  EXPECT_GE((v.adjoint() * metric_matvec(s, v))(0).real(), -1e-12);
  EXPECT_NEAR(s.metric_scale, g.diagonal().real().mean(), 1e-12);
}

TEST(SrStep, IdentityMetricGivesScaledForce) {
  const int n = 6;
  const RbmParameters p = init_random(2, 1, 0.1, 37);
  ASSERT_EQ(p.size(), 5);
  SrSamples s;
  s.exact = true;
  s.centered_o = std::sqrt(double(n)) * MatrixXc::Identity(n, p.size());
  s.centered_o.row(5).setZero();
  s.weights = Eigen::VectorXd::Constant(n, 1.0 / n);
  s.local_energy.resize(n);
  s.local_energy << 1.0, -2.0, 0.5, 3.0, 0.0, 0.5;
  s.energy = s.local_energy.mean();
  s.metric_scale = 1.0;
  const VectorXc f = estimate_forces(s);
  SrSettings settings;
  settings.learning_rate = 0.1;
  settings.shift_initial = 0.5;
  settings.cg_tolerance = 1e-12;
  const SrUpdate u = sr_step(p, settings, s, 0);
  EXPECT_LT((u.delta - (-0.1 * f / 1.5)).norm(), 1e-12);
  EXPECT_LT((u.params.flatten() - (p.flatten() + u.delta)).norm(), 1e-15);
  EXPECT_DOUBLE_EQ(u.shift, 0.5);

  settings.shift_initial = 1e12;
  settings.shift_floor = 1e11;
  EXPECT_LT(sr_step(p, settings, s, 0).delta.norm(), 1e-11);
}

TEST(SrSettings, ShiftScheduleAndValidation) {
  SrSettings s;
  s.shift_initial = 10.0;
  s.shift_decay = 0.5;
  s.shift_floor = 1.0;
  EXPECT_DOUBLE_EQ(s.shift(0), 10.0);
  EXPECT_DOUBLE_EQ(s.shift(1), 5.0);
  EXPECT_DOUBLE_EQ(s.shift(10), 1.0);
  EXPECT_NO_THROW(s.validate());
  SrSettings bad = s;
  bad.learning_rate = 0.0;
  EXPECT_THROW(bad.validate(), ValidationError);
  bad = s;
  bad.shift_floor = 20.0;
  EXPECT_THROW(bad.validate(), ValidationError);
  bad = s;
  bad.cg_max_iterations = 0;
  EXPECT_THROW(bad.validate(), ValidationError);
}

TEST(Optimize, EnergyDecreasesWithSmallSteps) {
  const ChainHamiltonian h({6, 1.0, 0.0, true});
  SrSettings s;
  s.learning_rate = 0.01;
  s.max_steps = 50;
  const GroundStateResult r =
      optimize_ground_state(h, init_random(6, 12, 0.01, 38), s, testing::exact_options());
  ASSERT_EQ(r.energy_trace.size(), 50u);
  EXPECT_LT(r.energy_trace.back().energy.real(), r.energy_trace.front().energy.real() - 1e-3);
  for (std::size_t k = 1; k < r.energy_trace.size(); ++k) {
    EXPECT_LE(r.energy_trace[k].energy.real(), r.energy_trace[k - 1].energy.real());
  }
}

TEST(Optimize, FourSiteGroundState) {
  const GroundStateResult r = testing::converged_ground_state({4, 1.0, 0.0, true});
  EXPECT_NEAR(r.e0_estimate.real(), -2.0, 0.002 * 2.0);
  EXPECT_LT(std::abs(r.e0_estimate.imag()), 1e-10);
  EXPECT_LT(r.energy_trace.back().variance, r.energy_trace.front().variance);
}

TEST(Optimize, SixSiteGroundStateAndFixedPoint) {
  const ModelSpec model{6, 1.0, 0.2, true};
  const GroundStateResult r = testing::converged_ground_state(model);
  const double e0 = exact_ground_state(model).energy;
  EXPECT_NEAR(r.e0_estimate.real(), e0, 1e-3 * std::abs(e0));
  EXPECT_TRUE(r.converged);

  SrSettings s;
  s.learning_rate = 0.05;
  s.shift_initial = 1e-3;
  s.energy_tolerance = 1e-6;
  const GroundStateResult again =
      optimize_ground_state(ChainHamiltonian(model), r.params, s, testing::exact_options());
  EXPECT_TRUE(again.converged);
  EXPECT_EQ(again.steps, 2 * s.convergence_window);
}

TEST(Optimize, MonteCarloSixSites) {
  const ModelSpec model{6, 1.0, 0.0, true};
  SamplingOptions o;
  o.plan.n_chains = 2;
  o.plan.n_samples_per_chain = 500;
  o.plan.thinning = 6;
  o.plan.burn_in = 300;
  o.plan.seed = 39;
  SrSettings s;
  s.learning_rate = 0.05;
  s.shift_initial = 1.0;
  s.max_steps = 300;
  s.energy_tolerance = 1e-4;
  const GroundStateResult r =
      optimize_ground_state(ChainHamiltonian(model), init_random(6, 12, 0.01, 40), s, o);
  const double e0 = exact_ground_state(model).energy;
  EXPECT_NEAR(r.e0_estimate.real(), e0, 0.01 * std::abs(e0));
  EXPECT_GT(r.e0_error, 0.0);
}

TEST(Optimize, RejectsMismatchedInput) {
  const ChainHamiltonian h({6, 1.0, 0.0, true});
  EXPECT_THROW(optimize_ground_state(h, init_random(4, 4, 0.01, 1), SrSettings{}, testing::exact_options()),
               ContractViolation);
  SrSettings bad;
  bad.max_steps = 0;
  EXPECT_THROW(optimize_ground_state(h, init_random(6, 4, 0.01, 1), bad, testing::exact_options()),
               ValidationError);
}

}  // namespace
}  // namespace nqsdyn
