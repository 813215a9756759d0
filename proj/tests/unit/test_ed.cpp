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

TEST(SectorBasis, IndexingAndDiagonal) {
  const SectorBasis basis(6, 2);
  EXPECT_EQ(basis.size(), 15);
  for (Eigen::Index i = 0; i < basis.size(); ++i) EXPECT_EQ(basis.index_of(basis.state(i)), i);
  EXPECT_EQ(basis.index_of(SpinConfig::Constant(6, 1)), -1);
  const Eigen::VectorXd sz = basis.sz_diagonal(3);
  for (Eigen::Index i = 0; i < basis.size(); ++i) EXPECT_EQ(sz(i), 0.5 * basis.state(i)(3));
  EXPECT_THROW(SectorBasis(5, 0), ValidationError);
}

TEST(ExactDiagonalization, DimerSpectrum) {
  const DenseOperator h = build_hamiltonian({2, 1.0, 0.0, false});
  const EigenDecomposition eig = diagonalize(h);
  ASSERT_EQ(eig.energies.size(), 2);
  EXPECT_NEAR(eig.energies(0), -0.75, 1e-14);
  EXPECT_NEAR(eig.energies(1), 0.25, 1e-14);
  // Singlet (|ud> - |du>)/sqrt 2
  EXPECT_NEAR(std::abs(eig.vectors(0, 0)), std::sqrt(0.5), 1e-14);
  EXPECT_NEAR(eig.vectors(0, 0) + eig.vectors(1, 0), 0.0, 1e-14);
}

TEST(ExactDiagonalization, KnownChainEnergies) {
  EXPECT_NEAR(exact_ground_state({4, 1.0, 0.0, true}).energy, -2.0, 1e-12);
  EXPECT_NEAR(exact_ground_state({6, 1.0, 0.0, true}).energy, -2.802775637732, 1e-10);
  EXPECT_NEAR(exact_ground_state({8, 1.0, 0.0, true}).energy, -3.651093408937, 1e-10);
  EXPECT_NEAR(exact_ground_state({10, 1.0, 0.0, true}).energy, -4.515446354492, 1e-10);
  // Majumdar-Ghosh point: dimer product states with E0 = -3 L / 8.
  EXPECT_NEAR(exact_ground_state({8, 1.0, 0.5, true}).energy, -3.0, 1e-10);
}

TEST(ExactDiagonalization, LanczosMatchesDense) {
  const ModelSpec model{10, 1.0, 0.2, true};
  const ExactGroundState dense = exact_ground_state(model);
  OracleLimits sparse_only;
  sparse_only.dense_cap = 100;
  const ExactGroundState lanczos = exact_ground_state(model, 0, sparse_only);
  EXPECT_NEAR(lanczos.energy, dense.energy, 1e-10);
  EXPECT_NEAR(std::abs(lanczos.state.dot(dense.state)), 1.0, 1e-8);
  EXPECT_NEAR(lanczos.state.norm(), 1.0, 1e-12);

  const ChainHamiltonian h(model);
  const Eigen::SparseMatrix<double> sparse = build_sparse_hamiltonian(h, dense.basis);
  const Eigen::MatrixXd reference = testing::spin_operator_hamiltonian(model, dense.basis);
  EXPECT_LT((Eigen::MatrixXd(sparse) - reference).cwiseAbs().maxCoeff(), 1e-14);
  const Eigen::VectorXd residual = sparse * lanczos.state - lanczos.energy * lanczos.state;
  EXPECT_LT(residual.norm(), 1e-6);
}

TEST(ExactDiagonalization, CapsAreEnforced) {
  OracleLimits tight;
  tight.cap = 100;
  EXPECT_THROW(exact_ground_state({10, 1.0, 0.0, true}, 0, tight), OracleCapError);
  OracleLimits dense_tight;
  dense_tight.dense_cap = 100;
  EXPECT_THROW(build_hamiltonian({10, 1.0, 0.0, true}, 0, dense_tight), OracleCapError);
  EXPECT_NO_THROW(build_hamiltonian({8, 1.0, 0.0, true}, 0, dense_tight));
}

TEST(ExactGreens, RowMatchesPairwiseAndIsSymmetric) {
  const ModelSpec model{8, 1.0, 0.2, true};
  const DenseOperator h = build_hamiltonian(model);
  const ExactGroundState gs = exact_ground_state(model);
  const Complex z(gs.energy + 1.2, 0.1);
  const VectorXc row = exact_greens_row(h, gs.state, z);
  for (int d = 0; d < 8; ++d) {
    EXPECT_LT(std::abs(row(d) - exact_greens(h, gs.state, z, 0, d)), 1e-12);
    EXPECT_LT(std::abs(row(d) - row((8 - d) % 8)), 1e-10);
    EXPECT_LT(std::abs(row(d) - exact_greens(h, gs.state, z, 2, (2 + d) % 8)), 1e-10);
  }
  // Unnormalized input gives the same result.
  EXPECT_LT((exact_greens_row(h, 3.0 * gs.state, z) - row).norm(), 1e-12);
}

TEST(ExactGreens, DiagonalHasNegativeImaginaryPart) {
  const ModelSpec model{6, 1.0, 0.0, true};
  const DenseOperator h = build_hamiltonian(model);
  const ExactGroundState gs = exact_ground_state(model);
  for (double omega = -1.0; omega <= 4.0; omega += 0.1) {
    for (int j = 0; j < 6; ++j) {
      EXPECT_LT(exact_greens(h, gs.state, Complex(gs.energy + omega, 0.05), j, j).imag(), 0.0);
    }
  }
}

TEST(ExactGreens, LargeBroadeningLimit) {
  const ModelSpec model{6, 1.0, 0.0, true};
  const DenseOperator h = build_hamiltonian(model);
  const ExactGroundState gs = exact_ground_state(model);
  for (double eta : {1e2, 1e4}) {
    const Complex g = exact_greens(h, gs.state, Complex(gs.energy, eta), 0, 0);
    EXPECT_LT(std::abs(g * Complex(0.0, eta) - 0.25), 10.0 / eta);
  }
}

TEST(ExactCorrectionVector, SolvesShiftedSystem) {
  const ModelSpec model{6, 1.0, 0.2, true};
  const DenseOperator h = build_hamiltonian(model);
  const ExactGroundState gs = exact_ground_state(model);
  const Complex z(gs.energy + 0.9, 0.1);
  const VectorXc chi = exact_correction_vector(h, gs.state, z, 1);
  const VectorXc a = h.basis.sz_diagonal(1).cwiseProduct(gs.state).cast<Complex>();
  EXPECT_LT((z * chi - h.matrix.cast<Complex>() * chi - a).norm(), 1e-12);
  EXPECT_LT(std::abs(a.dot(chi) - exact_greens(h, gs.state, z, 1, 1)), 1e-12);
}

TEST(Perturbation, DirectionsAndZeroEpsilon) {
  VectorXc chi(5);
  chi << 1.0, Complex(0, 1), 2.0, -1.0, 0.5;
  EXPECT_EQ(perturb_and_project(chi, 0.0, RandomDirection{3}), chi);
  const VectorXc d = perturbation_direction(5, RandomDirection{3});
  EXPECT_NEAR(d.norm(), 1.0, 1e-14);
  EXPECT_EQ(d, perturbation_direction(5, RandomDirection{3}));
  EXPECT_LT((perturb_and_project(chi, 0.1, RandomDirection{3}) - chi - 0.1 * d).norm(), 1e-15);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(5);
  e(2) = 4.0;
  const VectorXc de = perturbation_direction(5, EigenstateDirection{e});
  EXPECT_NEAR(std::abs(de(2)), 1.0, 1e-15);
  EXPECT_THROW(perturbation_direction(4, EigenstateDirection{e}), ContractViolation);
}

TEST(Perturbation, DominantEigenstateAtPole) {
  const ModelSpec model{2, 1.0, 0.0, false};
  const DenseOperator h = build_hamiltonian(model);
  const EigenDecomposition eig = diagonalize(h);
  EXPECT_EQ(dominant_eigenstate(eig, eig.vectors.col(0), h.basis, 0, eig.energies(0), 1.0, 0.1), 1);
}

}  // namespace
}  // namespace nqsdyn
