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


#include "nqsdyn/ed.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>
#include <random>
#include <string>

#include "nqsdyn/sampler.hpp"

namespace nqsdyn {

namespace {

std::uint64_t config_bits(const SpinConfig &config) {
  std::uint64_t bits = 0;
  for (Eigen::Index i = 0; i < config.size(); ++i) {
    bits = (bits << 1) | (config(i) > 0 ? 1u : 0u);
  }
  return bits;
}

void check_cap(Eigen::Index size, Eigen::Index cap, const char *what) {
  if (size > cap) {
    throw OracleCapError(std::string(what) + ": sector dimension " +
                         std::to_string(size) + " exceeds the oracle cap " +
                         std::to_string(cap));
  }
}

Eigen::Index sector_dimension(int length, int sector) {
  const int n_up = (length + sector) / 2;
  double c = 1.0;
  for (int k = 1; k <= n_up; ++k) c = c * double(length - n_up + k) / double(k);
  return Eigen::Index(std::llround(c));
}

}  // namespace

SectorBasis::SectorBasis(int length, int sector)
    : length_(length), sector_(sector), states_(enumerate_sector(length, sector)) {
  index_.reserve(states_.size());
  for (std::size_t k = 0; k < states_.size(); ++k) {
    index_.emplace(config_bits(states_[k]), Eigen::Index(k));
  }
}

Eigen::Index SectorBasis::index_of(const SpinConfig &config) const {
  if (config.size() != length_) return -1;
  const auto it = index_.find(config_bits(config));
  return it == index_.end() ? -1 : it->second;
}

Eigen::VectorXd SectorBasis::sz_diagonal(int site) const {
  Eigen::VectorXd d(size());
  for (Eigen::Index k = 0; k < size(); ++k) d(k) = 0.5 * state(k)(site);
  return d;
}

DenseOperator build_hamiltonian(const ModelSpec &model, int sector,
                                const OracleLimits &limits) {
  const ChainHamiltonian hamiltonian(model);
  check_cap(sector_dimension(model.length, sector), std::min(limits.cap, limits.dense_cap),
            "dense Hamiltonian");
  DenseOperator op{SectorBasis(model.length, sector), {}};
  const Eigen::Index n = op.basis.size();
  op.matrix = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index col = 0; col < n; ++col) {
    for (const RowEntry &entry : connected_states(hamiltonian, op.basis.state(col))) {
      // The row of s lists <s'|H|s>; H is real symmetric.
      op.matrix(op.basis.index_of(entry.config), col) += entry.element;
    }
  }
  return op;
}

Eigen::SparseMatrix<double> build_sparse_hamiltonian(const ChainHamiltonian &hamiltonian,
                                                     const SectorBasis &basis) {
  std::vector<Eigen::Triplet<double>> triplets;
  for (Eigen::Index col = 0; col < basis.size(); ++col) {
    for (const RowEntry &entry : connected_states(hamiltonian, basis.state(col))) {
      triplets.emplace_back(basis.index_of(entry.config), col, entry.element);
    }
  }
  Eigen::SparseMatrix<double> h(basis.size(), basis.size());
  h.setFromTriplets(triplets.begin(), triplets.end());
  return h;
}

LanczosResult lanczos_ground_state(const Eigen::SparseMatrix<double> &h,
                                   double tolerance, int max_iterations,
                                   std::uint64_t seed) {
  const Eigen::Index n = h.rows();
  const int k_max = int(std::min<Eigen::Index>(n, max_iterations));
  Eigen::MatrixXd v(n, k_max);
  std::vector<double> alpha;
  std::vector<double> beta;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd q(n);
  for (Eigen::Index k = 0; k < n; ++k) q(k) = normal(rng);
  q.normalize();

  LanczosResult result;
  double previous = std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz;
  int m = 0;
  for (; m < k_max; ++m) {
    v.col(m) = q;
    Eigen::VectorXd w = h * q;
    const double a = q.dot(w);
    alpha.push_back(a);
    // Full reorthogonalization (twice is enough).
    for (int pass = 0; pass < 2; ++pass) {
      w -= v.leftCols(m + 1) * (v.leftCols(m + 1).transpose() * w);
    }
    const double b = w.norm();

    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, m + 1);
    for (int k = 0; k <= m; ++k) {
      t(k, k) = alpha[std::size_t(k)];
      if (k > 0) t(k, k - 1) = t(k - 1, k) = beta[std::size_t(k - 1)];
    }
    ritz.compute(t);
    const double lowest = ritz.eigenvalues()(0);
    const bool done = std::abs(lowest - previous) < tolerance * std::max(1.0, std::abs(lowest)) ||
                      b < 1e-14 || m + 1 == k_max;
    previous = lowest;
    if (done) {
      ++m;
      break;
    }
    beta.push_back(b);
    q = w / b;
  }
  result.iterations = m;
  result.eigenvalue = ritz.eigenvalues()(0);
  result.eigenvector = v.leftCols(m) * ritz.eigenvectors().col(0);
  result.eigenvector.normalize();
  return result;
}

ExactGroundState exact_ground_state(const ModelSpec &model, int sector,
                                    const OracleLimits &limits) {
  const ChainHamiltonian hamiltonian(model);
  const Eigen::Index dim = sector_dimension(model.length, sector);
  check_cap(dim, limits.cap, "exact ground state");
  if (dim <= limits.dense_cap) {
    DenseOperator op = build_hamiltonian(model, sector, limits);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(op.matrix);
    return {solver.eigenvalues()(0), solver.eigenvectors().col(0), std::move(op.basis)};
  }
  SectorBasis basis(model.length, sector);
  const LanczosResult lz = lanczos_ground_state(build_sparse_hamiltonian(hamiltonian, basis));
  return {lz.eigenvalue, lz.eigenvector, std::move(basis)};
}

EigenDecomposition diagonalize(const DenseOperator &h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.matrix);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

namespace {

Eigen::PartialPivLU<MatrixXc> shifted_lu(const DenseOperator &h, Complex z) {
  MatrixXc q = -h.matrix.cast<Complex>();
  q.diagonal().array() += z;
  return Eigen::PartialPivLU<MatrixXc>(q);
}

}  // namespace

VectorXc exact_correction_vector(const DenseOperator &h, const Eigen::VectorXd &psi0,
                                 Complex z, int source) {
  const Eigen::VectorXd psi = psi0.normalized();
  const VectorXc a = (h.basis.sz_diagonal(source).array() * psi.array()).matrix().cast<Complex>();
  return shifted_lu(h, z).solve(a);
}

Complex exact_greens(const DenseOperator &h, const Eigen::VectorXd &psi0, Complex z,
                     int i, int j) {
  const Eigen::VectorXd psi = psi0.normalized();
  const VectorXc x = exact_correction_vector(h, psi, z, j);
  const VectorXc ai = (h.basis.sz_diagonal(i).array() * psi.array()).matrix().cast<Complex>();
  return ai.dot(x);
}

VectorXc exact_greens_row(const DenseOperator &h, const Eigen::VectorXd &psi0, Complex z) {
  const Eigen::VectorXd psi = psi0.normalized();
  const int length = h.basis.length();
  MatrixXc sources(h.basis.size(), length);
  for (int n = 0; n < length; ++n) {
    sources.col(n) = (h.basis.sz_diagonal(n).array() * psi.array()).matrix().cast<Complex>();
  }
  const MatrixXc x = shifted_lu(h, z).solve(sources);
  return (sources.col(0).adjoint() * x).transpose();
}

VectorXc perturbation_direction(Eigen::Index dim, const DirectionSpec &direction) {
  VectorXc d(dim);
  if (const auto *random = std::get_if<RandomDirection>(&direction)) {
    std::mt19937_64 rng(random->seed);
    std::normal_distribution<double> normal;
    for (Eigen::Index k = 0; k < dim; ++k) {
      const double re = normal(rng);
      const double im = normal(rng);
      d(k) = Complex(re, im);
    }
  } else {
    const auto &eigen = std::get<EigenstateDirection>(direction).eigenstate;
    if (eigen.size() != dim) throw ContractViolation("eigenstate dimension mismatch");
    d = eigen.cast<Complex>();
  }
  return d.normalized();
}

VectorXc perturb_and_project(const VectorXc &chi, double epsilon,
                             const DirectionSpec &direction) {
  if (epsilon == 0.0) return chi;
  return chi + epsilon * perturbation_direction(chi.size(), direction);
}

Eigen::Index dominant_eigenstate(const EigenDecomposition &eig, const Eigen::VectorXd &psi0,
                                 const SectorBasis &basis, int source, double e0,
                                 double omega, double eta) {
  const Eigen::VectorXd a = basis.sz_diagonal(source).array() * psi0.normalized().array();
  const Eigen::VectorXd overlaps = eig.vectors.transpose() * a;
  Eigen::Index best = 0;
  double best_weight = -1.0;
  for (Eigen::Index n = 0; n < overlaps.size(); ++n) {
    const double de = e0 + omega - eig.energies(n);
    const double weight = overlaps(n) * overlaps(n) / (de * de + eta * eta);
    if (weight > best_weight) {
      best_weight = weight;
      best = n;
    }
  }
  return best;
}

}  // namespace nqsdyn
