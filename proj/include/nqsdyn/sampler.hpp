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


#ifndef NQSDYN_SAMPLER_HPP
#define NQSDYN_SAMPLER_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "nqsdyn/rbm.hpp"

namespace nqsdyn {

using Rng = std::mt19937_64;

/// Independent stream for chain `chain` of a run seeded with `seed`.
Rng chain_rng(std::uint64_t seed, std::uint64_t chain);

/// Mixes a base seed with stage identifiers (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                          std::uint64_t b = 0);

struct SamplerPlan {
  int n_chains = 4;
  int n_samples_per_chain = 5000;  // 20000 kept samples in total
  int thinning = 100;
  int burn_in = 100000;
  std::uint64_t seed = 1;
  int sector = 0;   // sum of spins (2 S^z_tot)
  int workers = 1;  // execution only; results do not depend on it

  void validate() const;
  std::int64_t total_samples() const {
    return std::int64_t(n_chains) * n_samples_per_chain;
  }

  friend bool operator==(const SamplerPlan &, const SamplerPlan &) = default;
};

/// Monte Carlo sampling or exact summation over the whole sector.
enum class SamplingMode { kMonteCarlo, kExact };

struct SamplingOptions {
  SamplingMode mode = SamplingMode::kMonteCarlo;
  SamplerPlan plan;
};

/// Configurations with normalized weights. Monte Carlo runs give uniform
/// weights; exact enumeration gives |phi(s)|^2 / sum |phi|^2.
struct SampleSet {
  std::vector<SpinConfig> configs;
  std::vector<double> weights;
  bool exact = false;

  std::size_t size() const { return configs.size(); }
};

/// Running weighted first and second moments of K complex estimators.
class Accumulator {
 public:
  explicit Accumulator(int n_estimators = 0);

  int n_estimators() const { return k_; }
  std::int64_t count() const { return count_; }
  double weight_sum() const { return weight_sum_; }

  void add(std::span<const Complex> values, double weight = 1.0);
  void merge(const Accumulator &other);

  Complex mean(int k) const;
  /// <f_k^* f_l>
  Complex second_moment(int k, int l) const;
  /// <f_k^* f_l> - <f_k>^* <f_l>
  Complex covariance(int k, int l) const;
  double variance(int k) const;
  /// sqrt(variance / count); ignores autocorrelation (thinned samples).
  double standard_error(int k) const;

  friend bool operator==(const Accumulator &, const Accumulator &) = default;

 private:
  int k_ = 0;
  std::int64_t count_ = 0;
  double weight_sum_ = 0.0;
  std::vector<Complex> sums_;
  std::vector<Complex> products_;  // row-major K x K
};

/// A Markov chain position together with whatever cache is needed to
/// evaluate log-amplitudes of exchanged configurations.
class Walker {
 public:
  virtual ~Walker() = default;
  virtual void reset(const SpinConfig &config) = 0;
  virtual const SpinConfig &config() const = 0;
  virtual Complex log_amplitude() const = 0;
  /// Log-amplitude after exchanging the spins at sites i and k. The proposal
  /// is remembered until accept() or the next propose().
  virtual Complex propose(int i, int k) = 0;
  virtual void accept() = 0;
};

class RbmWalker final : public Walker {
 public:
  explicit RbmWalker(std::shared_ptr<const RbmParameters> params);

  void reset(const SpinConfig &config) override;
  const SpinConfig &config() const override { return state_.config; }
  Complex log_amplitude() const override { return state_.log_amp; }
  Complex propose(int i, int k) override;
  void accept() override;

  const ChainState &state() const { return state_; }
  const RbmParameters &params() const { return *params_; }

 private:
  std::shared_ptr<const RbmParameters> params_;
  ChainState state_;
  std::array<int, 2> pending_{-1, -1};
};

/// Walker over an arbitrary log-amplitude function (tests, oracle injection).
class FunctionWalker final : public Walker {
 public:
  using LogAmplitude = std::function<Complex(const SpinConfig &)>;
  explicit FunctionWalker(LogAmplitude f);

  void reset(const SpinConfig &config) override;
  const SpinConfig &config() const override { return config_; }
  Complex log_amplitude() const override { return log_amp_; }
  Complex propose(int i, int k) override;
  void accept() override;

 private:
  LogAmplitude f_;
  SpinConfig config_;
  Complex log_amp_{0.0, 0.0};
  SpinConfig proposed_;
  Complex proposed_log_amp_{0.0, 0.0};
};

struct Exchange {
  int up;    // site holding +1 before the move
  int down;  // site holding -1 before the move
};

/// Uniform choice of an (up, down) site pair; std::nullopt when the
/// configuration is fully polarized.
std::optional<Exchange> propose_exchange(const SpinConfig &config, Rng &rng);

SpinConfig apply_exchange(const SpinConfig &config, Exchange move);

/// min(1, |phi'|^2 / |phi|^2) from log-amplitudes.
double acceptance_probability(Complex log_current, Complex log_proposed);

/// One Metropolis update with acceptance min(1, |phi'|^2 / |phi|^2).
/// Returns true when the move was accepted.
bool metropolis_step(Walker &walker, Rng &rng);

/// Uniformly random configuration with sum of spins equal to `sector`.
SpinConfig random_sector_config(int length, int sector, Rng &rng);

/// Writes K values for the walker's current configuration.
struct EstimatorSet {
  int count = 0;
  std::function<void(const Walker &, std::span<Complex>)> evaluate;
};

struct ChainResult {
  SampleSet samples;
  Accumulator accumulator;
  std::int64_t rejected_non_finite = 0;
  double acceptance_rate = 0.0;
  /// Last configuration of every chain, usable as a warm start.
  std::vector<SpinConfig> final_configs;
};

using WalkerFactory = std::function<std::unique_ptr<Walker>()>;

/// Runs plan.n_chains independent chains; chain c uses chain_rng(seed, c).
/// Samples and accumulators are merged in chain order so the result is
/// identical for any plan.workers.
ChainResult run_chains(const SamplerPlan &plan, int length,
                       const WalkerFactory &make_walker,
                       const EstimatorSet &estimators = {},
                       const std::vector<SpinConfig> &start = {});

/// Accumulator of the estimators over weighted samples.
Accumulator accumulate(const SampleSet &samples, const EstimatorSet &estimators,
                       const WalkerFactory &make_walker);

/// All configurations of the sector in lexicographic order of their
/// occupation bits (site 0 most significant, +1 = 1).
std::vector<SpinConfig> enumerate_sector(int length, int sector);

/// Exact |phi|^2 weights over `configs`.
SampleSet exact_samples(std::vector<SpinConfig> configs,
                        const std::function<Complex(const SpinConfig &)> &log_amplitude);

}  // namespace nqsdyn

#endif  // NQSDYN_SAMPLER_HPP
