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


#ifndef NQSDYN_RBM_HPP
#define NQSDYN_RBM_HPP

#include <cstdint>
#include <span>

#include "nqsdyn/types.hpp"

namespace nqsdyn {

/// Complex restricted Boltzmann machine amplitude
///
///   psi(s) = exp(sum_i a_i s_i) prod_j 2 cosh(theta_j),
///   theta_j = b_j + sum_i W_ij s_i.
///
/// The flat parameter vector is ordered [a (N) | b (M) | W (N x M, row
/// major)], so W_ij lives at N + M + i * M + j.
class RbmParameters {
 public:
  RbmParameters() = default;
  RbmParameters(int n_visible, int n_hidden);

  int n_visible() const { return n_visible_; }
  int n_hidden() const { return n_hidden_; }
  Eigen::Index size() const {
    return Eigen::Index(n_visible_) + n_hidden_ +
           Eigen::Index(n_visible_) * n_hidden_;
  }

  Eigen::Index visible_index(int i) const { return i; }
  Eigen::Index hidden_index(int j) const { return n_visible_ + j; }
  Eigen::Index weight_index(int i, int j) const {
    return Eigen::Index(n_visible_) + n_hidden_ + Eigen::Index(i) * n_hidden_ +
           j;
  }

  const VectorXc &visible_bias() const { return a_; }
  const VectorXc &hidden_bias() const { return b_; }
  const MatrixXc &weights() const { return w_; }
  VectorXc &visible_bias() { return a_; }
  VectorXc &hidden_bias() { return b_; }
  MatrixXc &weights() { return w_; }

  VectorXc flatten() const;
  void assign_flat(const VectorXc &alpha);
  static RbmParameters from_flat(int n_visible, int n_hidden,
                                 const VectorXc &alpha);

  RbmParameters &operator+=(const VectorXc &delta);

  bool all_finite() const;

  friend bool operator==(const RbmParameters &lhs, const RbmParameters &rhs) {
    return lhs.n_visible_ == rhs.n_visible_ && lhs.n_hidden_ == rhs.n_hidden_ &&
           lhs.a_ == rhs.a_ && lhs.b_ == rhs.b_ && lhs.w_ == rhs.w_;
  }

 private:
  int n_visible_ = 0;
  int n_hidden_ = 0;
  VectorXc a_;
  VectorXc b_;
  MatrixXc w_;
};

/// log(2 cosh(theta)) without overflow for large |Re theta|.
Complex log_cosh2(Complex theta);

/// theta_j = b_j + sum_i W_ij s_i.
VectorXc hidden_activations(const RbmParameters &params,
                            const SpinConfig &config);

Complex log_psi(const RbmParameters &params, const SpinConfig &config);

/// O_k = d log psi / d alpha_k, in flat parameter order.
VectorXc log_derivatives(const RbmParameters &params,
                         const SpinConfig &config);

/// Same as above, reusing already computed activations.
void log_derivatives(const RbmParameters &params, const SpinConfig &config,
                     const VectorXc &theta, Eigen::Ref<VectorXc> out);

/// Independent normal entries (real and imaginary parts) of standard
/// deviation `scale`.
RbmParameters init_random(int n_visible, int n_hidden, double scale,
                          std::uint64_t seed);

/// Parameters of the translated amplitude chi'(s) = chi(shift(s, n)) where
/// shift(s, n)_i = s_{(i + n) mod N}.
RbmParameters translate(const RbmParameters &params, int shift);

/// shift(s, n)_i = s_{(i + n) mod N}.
SpinConfig shift_config(const SpinConfig &config, int shift);

/// Markov-chain cache: configuration, activations and log-amplitude.
struct ChainState {
  SpinConfig config;
  VectorXc theta;
  Complex visible_term{0.0, 0.0};  // sum_i a_i s_i
  Complex log_amp{0.0, 0.0};
  std::int64_t updates_since_refresh = 0;

  static ChainState make(const RbmParameters &params, const SpinConfig &config);
};

/// Number of incremental updates after which a state is rebuilt from scratch.
inline constexpr std::int64_t kRefreshInterval = 10000;

/// Log-amplitude of the configuration with `flips` negated, without touching
/// the state.
Complex log_amp_after_flips(const ChainState &state,
                            const RbmParameters &params,
                            std::span<const int> flips);

/// In-place version of flip_update.
void apply_flips(ChainState &state, const RbmParameters &params,
                 std::span<const int> flips);

ChainState flip_update(const ChainState &state, const RbmParameters &params,
                       std::span<const int> flips);

}  // namespace nqsdyn

#endif  // NQSDYN_RBM_HPP
