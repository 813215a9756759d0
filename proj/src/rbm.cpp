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


#include "nqsdyn/rbm.hpp"

#include <algorithm>
#include <random>
#include <string>

namespace nqsdyn {

namespace {

void check_dimensions(const RbmParameters &params, const SpinConfig &config) {
  if (config.size() != params.n_visible()) {
    throw ContractViolation("configuration length " +
                            std::to_string(config.size()) +
                            " does not match n_visible " +
                            std::to_string(params.n_visible()));
  }
}

void check_flips(const ChainState &state, std::span<const int> flips) {
  const auto n = static_cast<int>(state.config.size());
  for (std::size_t p = 0; p < flips.size(); ++p) {
    if (flips[p] < 0 || flips[p] >= n) {
      throw ContractViolation("flip index " + std::to_string(flips[p]) +
                              " out of range");
    }
    for (std::size_t q = 0; q < p; ++q) {
      if (flips[q] == flips[p]) {
        throw ContractViolation("duplicate flip index " +
                                std::to_string(flips[p]));
      }
    }
  }
}

}  // namespace

RbmParameters::RbmParameters(int n_visible, int n_hidden)
    : n_visible_(n_visible),
      n_hidden_(n_hidden),
      a_(VectorXc::Zero(n_visible)),
      b_(VectorXc::Zero(n_hidden)),
      w_(MatrixXc::Zero(n_visible, n_hidden)) {
  if (n_visible <= 0 || n_hidden <= 0) {
    throw ContractViolation("RBM layer sizes must be positive");
  }
}

VectorXc RbmParameters::flatten() const {
  VectorXc alpha(size());
  alpha.head(n_visible_) = a_;
  alpha.segment(n_visible_, n_hidden_) = b_;
  for (int i = 0; i < n_visible_; ++i) {
    alpha.segment(weight_index(i, 0), n_hidden_) = w_.row(i).transpose();
  }
  return alpha;
}

void RbmParameters::assign_flat(const VectorXc &alpha) {
  if (alpha.size() != size()) {
    throw ContractViolation("flat parameter vector has wrong length");
  }
  a_ = alpha.head(n_visible_);
  b_ = alpha.segment(n_visible_, n_hidden_);
  for (int i = 0; i < n_visible_; ++i) {
    w_.row(i) = alpha.segment(weight_index(i, 0), n_hidden_).transpose();
  }
}

RbmParameters RbmParameters::from_flat(int n_visible, int n_hidden,
                                       const VectorXc &alpha) {
  RbmParameters params(n_visible, n_hidden);
  params.assign_flat(alpha);
  return params;
}

RbmParameters &RbmParameters::operator+=(const VectorXc &delta) {
  assign_flat(flatten() + delta);
  return *this;
}

bool RbmParameters::all_finite() const {
  return a_.allFinite() && b_.allFinite() && w_.allFinite();
}

Complex log_cosh2(Complex theta) {
  // log(e^t + e^-t) = t + log(1 + e^-2t) for Re t >= 0; cosh is even.
  if (theta.real() < 0.0) theta = -theta;
  return theta + std::log(1.0 + std::exp(-2.0 * theta));
}

VectorXc hidden_activations(const RbmParameters &params,
                            const SpinConfig &config) {
  check_dimensions(params, config);
  return params.hidden_bias() +
         params.weights().transpose() * config.cast<double>().cast<Complex>();
}

Complex log_psi(const RbmParameters &params, const SpinConfig &config) {
  const VectorXc theta = hidden_activations(params, config);
  Complex value = 0.0;
  for (Eigen::Index i = 0; i < config.size(); ++i) {
    value += params.visible_bias()(i) * double(config(i));
  }
  for (Eigen::Index j = 0; j < theta.size(); ++j) value += log_cosh2(theta(j));
  return value;
}

void log_derivatives(const RbmParameters &params, const SpinConfig &config,
                     const VectorXc &theta, Eigen::Ref<VectorXc> out) {
  const int n = params.n_visible();
  const int m = params.n_hidden();
  if (out.size() != params.size()) {
    throw ContractViolation("derivative buffer has wrong length");
  }
  for (int i = 0; i < n; ++i) out(i) = static_cast<double>(config(i));
  for (int j = 0; j < m; ++j) out(n + j) = std::tanh(theta(j));
  for (int i = 0; i < n; ++i) {
    const double s = config(i);
    out.segment(params.weight_index(i, 0), m) = s * out.segment(n, m);
  }
}

VectorXc log_derivatives(const RbmParameters &params,
                         const SpinConfig &config) {
  const VectorXc theta = hidden_activations(params, config);
  VectorXc out(params.size());
  log_derivatives(params, config, theta, out);
  return out;
}

RbmParameters init_random(int n_visible, int n_hidden, double scale,
                          std::uint64_t seed) {
  if (scale < 0.0) throw ContractViolation("init scale must be >= 0");
  RbmParameters params(n_visible, n_hidden);
  if (scale == 0.0) return params;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, scale);
  VectorXc alpha(params.size());
  for (Eigen::Index k = 0; k < alpha.size(); ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    alpha(k) = Complex(re, im);
  }
  params.assign_flat(alpha);
  return params;
}

SpinConfig shift_config(const SpinConfig &config, int shift) {
  const auto n = static_cast<int>(config.size());
  SpinConfig out(n);
  const int s = ((shift % n) + n) % n;
  for (int i = 0; i < n; ++i) out(i) = config((i + s) % n);
  return out;
}

RbmParameters translate(const RbmParameters &params, int shift) {
  // chi(shift(s, n)) = exp(sum_i a_i s_{i+n}) ..., so a'_{i+n} = a_i.
  const int n = params.n_visible();
  const int s = ((shift % n) + n) % n;
  RbmParameters out(n, params.n_hidden());
  out.hidden_bias() = params.hidden_bias();
  for (int i = 0; i < n; ++i) {
    out.visible_bias()((i + s) % n) = params.visible_bias()(i);
    out.weights().row((i + s) % n) = params.weights().row(i);
  }
  return out;
}

ChainState ChainState::make(const RbmParameters &params,
                            const SpinConfig &config) {
  ChainState state;
  state.config = config;
  state.theta = hidden_activations(params, config);
  state.visible_term = 0.0;
  for (Eigen::Index i = 0; i < config.size(); ++i) {
    state.visible_term += params.visible_bias()(i) * double(config(i));
  }
  state.log_amp = state.visible_term;
  for (Eigen::Index j = 0; j < state.theta.size(); ++j) {
    state.log_amp += log_cosh2(state.theta(j));
  }
  return state;
}

Complex log_amp_after_flips(const ChainState &state,
                            const RbmParameters &params,
                            std::span<const int> flips) {
  if (flips.empty()) return state.log_amp;
  Complex value = state.visible_term;
  for (int i : flips) value -= 2.0 * params.visible_bias()(i) * double(state.config(i));
  const auto &w = params.weights();
  for (Eigen::Index j = 0; j < state.theta.size(); ++j) {
    Complex t = state.theta(j);
    for (int i : flips) t -= 2.0 * w(i, j) * double(state.config(i));
    value += log_cosh2(t);
  }
  return value;
}

void apply_flips(ChainState &state, const RbmParameters &params,
                 std::span<const int> flips) {
  check_flips(state, flips);
  if (flips.empty()) return;
  for (int i : flips) {
    const double s = state.config(i);
    state.visible_term -= 2.0 * params.visible_bias()(i) * s;
    state.theta -= 2.0 * s * params.weights().row(i).transpose();
    state.config(i) = -state.config(i);
  }
  if (++state.updates_since_refresh >= kRefreshInterval) {
    state = ChainState::make(params, state.config);
    return;
  }
  state.log_amp = state.visible_term;
  for (Eigen::Index j = 0; j < state.theta.size(); ++j) {
    state.log_amp += log_cosh2(state.theta(j));
  }
}

ChainState flip_update(const ChainState &state, const RbmParameters &params,
                       std::span<const int> flips) {
  ChainState next = state;
  apply_flips(next, params, flips);
  return next;
}

}  // namespace nqsdyn
