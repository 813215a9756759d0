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

SpinConfig neel(int length) {
  SpinConfig c(length);
  for (int i = 0; i < length; ++i) c(i) = i % 2 == 0 ? 1 : -1;
  return c;
}

TEST(ConnectedStates, NeelRowOnFourSites) {
  const ChainHamiltonian h({4, 1.0, 0.0, true});
  const SparseRow row = connected_states(h, neel(4));
  ASSERT_EQ(row.size(), 5u);
  EXPECT_EQ(row[0].n_flips, 0);
  EXPECT_DOUBLE_EQ(row[0].element, -1.0);
  for (std::size_t e = 1; e < row.size(); ++e) {
    EXPECT_DOUBLE_EQ(row[e].element, 0.5);
    EXPECT_EQ(row[e].n_flips, 2);
    EXPECT_EQ(row[e].config.sum(), 0);
    EXPECT_EQ((row[e].config - neel(4)).cwiseAbs().sum(), 4);
  }
}

TEST(ConnectedStates, FerromagnetIsDiagonal) {
  const ChainHamiltonian h({4, 1.0, 0.0, true});
  const SparseRow row = connected_states(h, SpinConfig::Constant(4, 1));
  ASSERT_EQ(row.size(), 1u);
  EXPECT_DOUBLE_EQ(row[0].element, 1.0);
}

TEST(ConnectedStates, OpenDimer) {
  const ChainHamiltonian h({2, 1.0, 0.0, false});
  SpinConfig c(2);
  c << 1, -1;
  const SparseRow row = connected_states(h, c);
  ASSERT_EQ(row.size(), 2u);
  EXPECT_DOUBLE_EQ(row[0].element, -0.25);
  EXPECT_DOUBLE_EQ(row[1].element, 0.5);
  EXPECT_EQ(row[1].config(0), -1);
  EXPECT_EQ(row[1].config(1), 1);
}

TEST(ConnectedStates, NextNearestNeighbourNeel) {
  const ChainHamiltonian h({6, 1.0, 0.2, true});
  EXPECT_EQ(h.bonds().size(), 12u);
  const SparseRow row = connected_states(h, neel(6));
  // All six J1 bonds antiparallel, all six J2 bonds parallel.
  ASSERT_EQ(row.size(), 7u);
  EXPECT_NEAR(row[0].element, -1.5 + 0.3, 1e-15);
}

TEST(ChainHamiltonian, DuplicateBondsAreRejected) {
  EXPECT_THROW(ChainHamiltonian({4, 1.0, 0.5, true}), ValidationError);
  EXPECT_THROW(ChainHamiltonian({1, 1.0, 0.0, true}), ValidationError);
  EXPECT_NO_THROW(ChainHamiltonian({4, 1.0, 0.5, false}));
  EXPECT_NO_THROW(ChainHamiltonian({4, 1.0, 0.0, true}));
}

TEST(ChainHamiltonian, DenseMatrixMatchesSpinOperators) {
  const std::vector<std::pair<ModelSpec, int>> cases = {
      {{2, 1.0, 0.0, false}, 0}, {{4, 1.0, 0.0, true}, 0}, {{5, 1.0, 0.0, true}, 1},
      {{6, 1.0, 0.2, true}, 0},  {{6, 0.7, 0.4, false}, 2}, {{8, 1.0, 0.2, true}, 0}};
  for (const auto &[model, sector] : cases) {
    const DenseOperator h = build_hamiltonian(model, sector);
    const Eigen::MatrixXd reference = testing::spin_operator_hamiltonian(model, h.basis);
    EXPECT_LT((h.matrix - reference).cwiseAbs().maxCoeff(), 1e-14) << model.length;
    EXPECT_LT((h.matrix - h.matrix.transpose()).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(ChainHamiltonian, RowsConserveTotalSpin) {
  const ChainHamiltonian h({8, 1.0, 0.3, true});
  for (int sector : {-2, 0, 4}) {
    for (const SpinConfig &c : enumerate_sector(8, sector)) {
      for (const RowEntry &e : connected_states(h, c)) EXPECT_EQ(e.config.sum(), sector);
    }
  }
}

TEST(LocalEnergy, UniformAmplitudeSumsTheRow) {
  const ChainHamiltonian h({4, 1.0, 0.0, true});
  const RbmParameters p(4, 4);
  const ChainState s = ChainState::make(p, neel(4));
  EXPECT_LT(std::abs(local_energy(h, p, s) - Complex(1.0)), 1e-14);
}

TEST(LocalEnergy, EigenstateHasNoVariance) {
  const ChainHamiltonian h({6, 1.0, 0.0, true});
  const RbmParameters p = init_random(6, 6, 0.3, 2);
  const ChainState s = ChainState::make(p, SpinConfig::Constant(6, 1));
  EXPECT_LT(std::abs(local_energy(h, p, s) - Complex(1.5)), 1e-14);
}

TEST(LocalEnergy, MatchesDenseMatrixAction) {
  const ModelSpec model{6, 1.0, 0.2, true};
  const ChainHamiltonian h(model);
  const DenseOperator dense = build_hamiltonian(model);
  const RbmParameters p = init_random(6, 12, 0.3, 4);
  const VectorXc psi = testing::rbm_vector(p, dense.basis);
  const VectorXc h_psi = dense.matrix.cast<Complex>() * psi;
  for (Eigen::Index i = 0; i < dense.basis.size(); ++i) {
    const ChainState s = ChainState::make(p, dense.basis.state(i));
    EXPECT_TRUE(testing::close(local_energy(h, p, s), h_psi(i) / psi(i), 1e-12));
  }
}

TEST(LocalEnergy, VanishingVarianceAtConvergedGroundState) {
  const ModelSpec model{6, 1.0, 0.0, true};
  const GroundStateResult gs = testing::converged_ground_state(model);
  const ChainHamiltonian h(model);
  const ExactGroundState ed = exact_ground_state(model);
  const VectorXc psi = testing::rbm_vector(gs.params, ed.basis);
  const double norm = psi.squaredNorm();
  Complex mean = 0.0;
  double second = 0.0;
  for (Eigen::Index i = 0; i < ed.basis.size(); ++i) {
    const Complex e = local_energy(h, gs.params, ChainState::make(gs.params, ed.basis.state(i)));
    const double w = std::norm(psi(i)) / norm;
    mean += w * e;
    second += w * std::norm(e);
  }
  EXPECT_NEAR(mean.real(), ed.energy, 1e-5 * std::abs(ed.energy));
  EXPECT_LT(second - std::norm(mean), 1e-4);
}

TEST(SzSource, RatioIsHalfTheSpin) {
  const SpinConfig c = neel(4);
  EXPECT_DOUBLE_EQ(local_operator_ratio({0}, c), 0.5);
  EXPECT_DOUBLE_EQ(local_operator_ratio({1}, c), -0.5);
  EXPECT_THROW(local_operator_ratio({4}, c), ContractViolation);

  const RbmParameters p = init_random(4, 4, 0.5, 8);
  const double psi_sq = std::norm(std::exp(log_psi(p, c)));
  const double a_sq = std::norm(std::exp(log_psi(p, c)) * local_operator_ratio({2}, c));
  EXPECT_NEAR(a_sq, psi_sq / 4.0, 1e-14 * psi_sq);
}

TEST(QAction, FerromagnetIsDiagonal) {
  const ChainHamiltonian h({4, 1.0, 0.0, true});
  const RbmParameters chi = init_random(4, 4, 0.3, 3);
  const ChainState s = ChainState::make(chi, SpinConfig::Constant(4, 1));
  const Complex z(1.5, 0.1);
  const QAction q = local_q_action(h, z, chi, s);
  EXPECT_LT(std::abs(q.ratio - (z - 1.0)), 1e-14);
  EXPECT_LT(std::abs(q.value() - std::exp(log_psi(chi, s.config)) * (z - 1.0)), 1e-13);
}

TEST(QAction, MatchesDenseShiftedOperator) {
  const ModelSpec model{6, 1.0, 0.2, true};
  const ChainHamiltonian h(model);
  const DenseOperator dense = build_hamiltonian(model);
  const RbmParameters chi = init_random(6, 12, 0.3, 6);
  const VectorXc c = testing::rbm_vector(chi, dense.basis);
  for (const Complex z : {Complex(-2.0, 0.1), Complex(0.5, -0.3), Complex(40.0, 5.0)}) {
    const VectorXc expected =
        z * c - dense.matrix.cast<Complex>() * c;
    for (Eigen::Index i = 0; i < dense.basis.size(); ++i) {
      const QAction q = local_q_action(h, z, chi, ChainState::make(chi, dense.basis.state(i)));
      EXPECT_TRUE(testing::close(q.value(), expected(i), 1e-12));
      EXPECT_LT(std::abs(std::exp(q.log_value()) - expected(i)), 1e-12 * std::abs(expected(i)));
    }
  }
}

TEST(QAction, LargeShiftApproachesIdentity) {
  const ChainHamiltonian h({6, 1.0, 0.0, true});
  const RbmParameters chi = init_random(6, 6, 0.2, 1);
  const ChainState s = ChainState::make(chi, neel(6));
  for (double scale : {1e3, 1e6}) {
    const Complex z(scale, scale);
    const QAction q = local_q_action(h, z, chi, s);
    EXPECT_LT(std::abs(q.ratio / z - 1.0), 10.0 / scale);
  }
}

}  // namespace
}  // namespace nqsdyn
