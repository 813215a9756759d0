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


#ifndef NQSDYN_ED_HPP
#define NQSDYN_ED_HPP

#include <cstdint>
#include <unordered_map>
#include <variant>
#include <vector>

#include <Eigen/Sparse>

#include "nqsdyn/hamiltonian.hpp"

namespace nqsdyn {

/// All configurations of one S^z_tot sector, ordered as enumerate_sector.
class SectorBasis {
 public:
  SectorBasis(int length, int sector);

  int length() const { return length_; }
  int sector() const { return sector_; }
  Eigen::Index size() const { return Eigen::Index(states_.size()); }
  const SpinConfig &state(Eigen::Index index) const { return states_[std::size_t(index)]; }
  const std::vector<SpinConfig> &states() const { return states_; }
  /// -1 when the configuration is not in the sector.
  Eigen::Index index_of(const SpinConfig &config) const;

  /// Diagonal of S^z_site over the basis.
  Eigen::VectorXd sz_diagonal(int site) const;

 private:
  int length_;
  int sector_;
  std::vector<SpinConfig> states_;
  std::unordered_map<std::uint64_t, Eigen::Index> index_;
};

struct OracleLimits {
  Eigen::Index cap = 20000;        // any exact treatment
  Eigen::Index dense_cap = 4096;   // dense matrices and full diagonalization

  friend bool operator==(const OracleLimits &, const OracleLimits &) = default;
};

struct DenseOperator {
  SectorBasis basis;
  Eigen::MatrixXd matrix;
};

/// Dense H assembled from connected_states rows.
DenseOperator build_hamiltonian(const ModelSpec &model, int sector = 0,
                                const OracleLimits &limits = {});

/// Sparse H for the Lanczos path.
Eigen::SparseMatrix<double> build_sparse_hamiltonian(const ChainHamiltonian &hamiltonian,
                                                     const SectorBasis &basis);

struct LanczosResult {
  double eigenvalue = 0.0;
  Eigen::VectorXd eigenvector;
  int iterations = 0;
};

/// Lowest eigenpair by Lanczos with full reorthogonalization.
LanczosResult lanczos_ground_state(const Eigen::SparseMatrix<double> &h,
                                   double tolerance = 1e-12,
                                   int max_iterations = 300,
                                   std::uint64_t seed = 7);

struct ExactGroundState {
  double energy = 0.0;
  Eigen::VectorXd state;  // normalized, over `basis`
  SectorBasis basis;
};

/// Dense diagonalization up to dense_cap, Lanczos up to cap.
ExactGroundState exact_ground_state(const ModelSpec &model, int sector = 0,
                                    const OracleLimits &limits = {});

struct EigenDecomposition {
  Eigen::VectorXd energies;
  Eigen::MatrixXd vectors;  // columns
};

EigenDecomposition diagonalize(const DenseOperator &h);

/// (z - H)^{-1} S^z_source |psi0>
VectorXc exact_correction_vector(const DenseOperator &h, const Eigen::VectorXd &psi0,
                                 Complex z, int source);

/// <psi0| S^z_i (z - H)^{-1} S^z_j |psi0> with psi0 normalized. E0 only
/// enters through z.
Complex exact_greens(const DenseOperator &h, const Eigen::VectorXd &psi0,
                     Complex z, int i, int j);

/// G_{0n}(z) = <S^z_0 psi0| (z - H)^{-1} S^z_n psi0> for n = 0..L-1 from one
/// factorization of z - H.
VectorXc exact_greens_row(const DenseOperator &h, const Eigen::VectorXd &psi0,
                          Complex z);

struct RandomDirection {
  std::uint64_t seed = 0;
};
struct EigenstateDirection {
  Eigen::VectorXd eigenstate;
};
using DirectionSpec = std::variant<RandomDirection, EigenstateDirection>;

/// Unit vector for the direction (random complex Gaussian, or the eigenstate).
VectorXc perturbation_direction(Eigen::Index dim, const DirectionSpec &direction);

/// chi + epsilon * direction / |direction|
VectorXc perturb_and_project(const VectorXc &chi, double epsilon,
                             const DirectionSpec &direction);

/// Index of the eigenstate with the largest |<n|S^z_source psi0>|^2 / |E_n - E0 - omega + i eta|^2.
Eigen::Index dominant_eigenstate(const EigenDecomposition &eig,
                                 const Eigen::VectorXd &psi0, const SectorBasis &basis,
                                 int source, double e0, double omega, double eta);

}  // namespace nqsdyn

#endif  // NQSDYN_ED_HPP
