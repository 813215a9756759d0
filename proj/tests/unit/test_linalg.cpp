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

#include <random>

#include "nqsdyn/linalg.hpp"

namespace nqsdyn {
namespace {

MatrixXc random_hpd(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  MatrixXc b(n, n);
  for (auto &x : b.reshaped()) x = Complex(normal(rng), normal(rng));
  return b.adjoint() * b + 0.1 * MatrixXc::Identity(n, n);
}

TEST(ConjugateGradient, SolvesHermitianSystem) {
  const MatrixXc a = random_hpd(30, 1);
  const VectorXc x = VectorXc::LinSpaced(30, 1.0, 2.0) * Complex(1.0, -0.5);
  const VectorXc b = a * x;
  const CgResult r = conjugate_gradient([&](const VectorXc &v) { return VectorXc(a * v); }, b, 1e-12, 500);
  EXPECT_TRUE(r.converged);
  EXPECT_LT((r.x - x).norm(), 1e-8 * x.norm());
  EXPECT_LE(r.relative_residual, 1e-12);
}

TEST(ConjugateGradient, ZeroRightHandSide) {
  const MatrixXc a = random_hpd(5, 2);
  const CgResult r =
      conjugate_gradient([&](const VectorXc &v) { return VectorXc(a * v); }, VectorXc::Zero(5), 1e-10, 10);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 0);
  EXPECT_EQ(r.x.norm(), 0.0);
}

TEST(ConjugateGradient, ReportsIterationCap) {
  const MatrixXc a = random_hpd(40, 3);
  const VectorXc b = VectorXc::Ones(40);
  const CgResult r = conjugate_gradient([&](const VectorXc &v) { return VectorXc(a * v); }, b, 1e-14, 3);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 3);
}

TEST(ConjugateGradient, StopsOnIndefiniteOperator) {
  const VectorXc b = VectorXc::Ones(4);
  const CgResult r = conjugate_gradient([](const VectorXc &v) { return VectorXc(-v); }, b, 1e-10, 50);
  EXPECT_FALSE(r.converged);
}

}  // namespace
}  // namespace nqsdyn
