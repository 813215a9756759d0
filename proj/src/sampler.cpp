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


#include "nqsdyn/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <limits>
#include <cmath>
#include <string>
#include <thread>

namespace nqsdyn {

Rng chain_rng(std::uint64_t seed, std::uint64_t chain) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32),
                    std::uint32_t(chain), std::uint32_t(chain >> 32),
                    std::uint32_t(0x6e717364)};
  return Rng(seq);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                          std::uint64_t b) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(seed) ^ a) ^ b);
}

void SamplerPlan::validate() const {
  if (n_chains < 1) throw ValidationError("sampler.chains must be >= 1");
  if (n_samples_per_chain < 1) throw ValidationError("sampler.samples must be >= 1");
  if (thinning < 1) throw ValidationError("sampler.thinning must be >= 1");
  if (burn_in < 0) throw ValidationError("sampler.burn_in must be >= 0");
  if (workers < 1) throw ValidationError("workers must be >= 1");
}

// ---------------------------------------------------------------------------

Accumulator::Accumulator(int n_estimators)
    : k_(n_estimators),
      sums_(std::size_t(n_estimators), Complex(0.0)),
      products_(std::size_t(n_estimators) * std::size_t(n_estimators),
                Complex(0.0)) {}

void Accumulator::add(std::span<const Complex> values, double weight) {
  if (int(values.size()) != k_) {
    throw ContractViolation("estimator count mismatch in Accumulator::add");
  }
  ++count_;
  weight_sum_ += weight;
  for (int k = 0; k < k_; ++k) {
    sums_[k] += weight * values[k];
    for (int l = 0; l < k_; ++l) {
      products_[k * k_ + l] += weight * std::conj(values[k]) * values[l];
    }
  }
}

void Accumulator::merge(const Accumulator &other) {
  if (other.k_ != k_) throw ContractViolation("cannot merge accumulators of different width");
  count_ += other.count_;
  weight_sum_ += other.weight_sum_;
  for (std::size_t k = 0; k < sums_.size(); ++k) sums_[k] += other.sums_[k];
  for (std::size_t k = 0; k < products_.size(); ++k) products_[k] += other.products_[k];
}

Complex Accumulator::mean(int k) const { return sums_.at(k) / weight_sum_; }

Complex Accumulator::second_moment(int k, int l) const {
  return products_.at(std::size_t(k) * k_ + l) / weight_sum_;
}

Complex Accumulator::covariance(int k, int l) const {
  return second_moment(k, l) - std::conj(mean(k)) * mean(l);
}

double Accumulator::variance(int k) const {
  return std::max(0.0, covariance(k, k).real());
}

double Accumulator::standard_error(int k) const {
  if (count_ < 2) return 0.0;
  return std::sqrt(variance(k) / double(count_ - 1));
}

// ---------------------------------------------------------------------------

RbmWalker::RbmWalker(std::shared_ptr<const RbmParameters> params)
    : params_(std::move(params)) {}

void RbmWalker::reset(const SpinConfig &config) {
  state_ = ChainState::make(*params_, config);
}

Complex RbmWalker::propose(int i, int k) {
  pending_ = {i, k};
  return log_amp_after_flips(state_, *params_, pending_);
}

void RbmWalker::accept() { apply_flips(state_, *params_, pending_); }

FunctionWalker::FunctionWalker(LogAmplitude f) : f_(std::move(f)) {}

void FunctionWalker::reset(const SpinConfig &config) {
  config_ = config;
  log_amp_ = f_(config_);
}

Complex FunctionWalker::propose(int i, int k) {
  proposed_ = config_;
  proposed_(i) = -proposed_(i);
  proposed_(k) = -proposed_(k);
  proposed_log_amp_ = f_(proposed_);
  return proposed_log_amp_;
}

void FunctionWalker::accept() {
  config_ = proposed_;
  log_amp_ = proposed_log_amp_;
}

// ---------------------------------------------------------------------------

std::optional<Exchange> propose_exchange(const SpinConfig &config, Rng &rng) {
  const auto n = int(config.size());
  int n_up = 0;
  for (int i = 0; i < n; ++i) n_up += config(i) > 0;
  const int n_down = n - n_up;
  if (n_up == 0 || n_down == 0) return std::nullopt;
  std::uniform_int_distribution<int> pick_up(0, n_up - 1);
  std::uniform_int_distribution<int> pick_down(0, n_down - 1);
  int up_rank = pick_up(rng);
  int down_rank = pick_down(rng);
  Exchange move{-1, -1};
  for (int i = 0; i < n; ++i) {
    if (config(i) > 0) {
      if (up_rank-- == 0) move.up = i;
    } else {
      if (down_rank-- == 0) move.down = i;
    }
  }
  return move;
}

SpinConfig apply_exchange(const SpinConfig &config, Exchange move) {
  SpinConfig out = config;
  out(move.up) = -out(move.up);
  out(move.down) = -out(move.down);
  return out;
}

double acceptance_probability(Complex log_current, Complex log_proposed) {
  const double log_ratio = 2.0 * (log_proposed.real() - log_current.real());
  return log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
}

bool metropolis_step(Walker &walker, Rng &rng) {
  const auto move = propose_exchange(walker.config(), rng);
  if (!move) return false;
  const Complex proposed = walker.propose(move->up, move->down);
  const double p = acceptance_probability(walker.log_amplitude(), proposed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  // Draw unconditionally so the stream position does not depend on the ratio.
  const double u = uniform(rng);
  if (p >= 1.0 || u < p) {
    walker.accept();
    return true;
  }
  return false;
}

SpinConfig random_sector_config(int length, int sector, Rng &rng) {
  if ((length + sector) % 2 != 0 || std::abs(sector) > length) {
    throw ValidationError("sector " + std::to_string(sector) +
                          " is incompatible with length " + std::to_string(length));
  }
  const int n_up = (length + sector) / 2;
  SpinConfig config = SpinConfig::Constant(length, -1);
  config.head(n_up).setConstant(1);
  std::shuffle(config.data(), config.data() + length, rng);
  return config;
}

// ---------------------------------------------------------------------------

namespace {

struct ChainOutput {
  std::vector<SpinConfig> configs;
  Accumulator accumulator;
  std::int64_t rejected = 0;
  std::int64_t accepted = 0;
  std::int64_t steps = 0;
  SpinConfig final_config;
};

ChainOutput run_one_chain(const SamplerPlan &plan, int length, int chain,
                          const WalkerFactory &make_walker,
                          const EstimatorSet &estimators,
                          const std::vector<SpinConfig> &start) {
  Rng rng = chain_rng(plan.seed, std::uint64_t(chain));
  ChainOutput out;
  out.accumulator = Accumulator(estimators.count);
  auto walker = make_walker();
  if (!start.empty()) {
    walker->reset(start[std::size_t(chain) % start.size()]);
  } else {
    walker->reset(random_sector_config(length, plan.sector, rng));
  }
  for (int s = 0; s < plan.burn_in; ++s) metropolis_step(*walker, rng);
  std::vector<Complex> values(std::size_t(estimators.count));
  out.configs.reserve(std::size_t(plan.n_samples_per_chain));
  for (int n = 0; n < plan.n_samples_per_chain; ++n) {
    for (int s = 0; s < plan.thinning; ++s) {
      out.accepted += metropolis_step(*walker, rng);
      ++out.steps;
    }
    if (estimators.count > 0) {
      estimators.evaluate(*walker, values);
      const bool finite = std::all_of(values.begin(), values.end(), [](Complex v) {
        return std::isfinite(v.real()) && std::isfinite(v.imag());
      });
      if (!finite) {
        ++out.rejected;
        continue;
      }
      out.accumulator.add(values);
    }
    out.configs.push_back(walker->config());
  }
  out.final_config = walker->config();
  return out;
}

}  // namespace

ChainResult run_chains(const SamplerPlan &plan, int length,
                       const WalkerFactory &make_walker,
                       const EstimatorSet &estimators,
                       const std::vector<SpinConfig> &start) {
  plan.validate();
  std::vector<ChainOutput> outputs(std::size_t(plan.n_chains));
  std::atomic<int> next{0};
  auto work = [&]() {
    for (int c = next++; c < plan.n_chains; c = next++) {
      outputs[std::size_t(c)] =
          run_one_chain(plan, length, c, make_walker, estimators, start);
    }
  };
  const int n_threads = std::min(plan.workers, plan.n_chains);
  if (n_threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(work);
    for (auto &t : pool) t.join();
  }

  ChainResult result;
  result.accumulator = Accumulator(estimators.count);
  std::int64_t accepted = 0;
  std::int64_t steps = 0;
  for (auto &out : outputs) {
    result.accumulator.merge(out.accumulator);
    result.rejected_non_finite += out.rejected;
    accepted += out.accepted;
    steps += out.steps;
    for (auto &c : out.configs) result.samples.configs.push_back(std::move(c));
    result.final_configs.push_back(out.final_config);
  }
  const std::size_t n = result.samples.configs.size();
  result.samples.weights.assign(n, n > 0 ? 1.0 / double(n) : 0.0);
  result.acceptance_rate = steps > 0 ? double(accepted) / double(steps) : 0.0;
  if (double(result.rejected_non_finite) > 1e-3 * double(plan.total_samples())) {
    throw ConvergenceError("sampler rejected " +
                           std::to_string(result.rejected_non_finite) +
                           " samples with non-finite estimators (> 0.1%)");
  }
  return result;
}

Accumulator accumulate(const SampleSet &samples, const EstimatorSet &estimators,
                       const WalkerFactory &make_walker) {
  Accumulator acc(estimators.count);
  auto walker = make_walker();
  std::vector<Complex> values(std::size_t(estimators.count));
  for (std::size_t s = 0; s < samples.size(); ++s) {
    walker->reset(samples.configs[s]);
    estimators.evaluate(*walker, values);
    acc.add(values, samples.weights[s]);
  }
  return acc;
}

std::vector<SpinConfig> enumerate_sector(int length, int sector) {
  if (length > 62) throw ContractViolation("enumeration limited to 62 sites");
  if ((length + sector) % 2 != 0 || std::abs(sector) > length) {
    throw ValidationError("sector " + std::to_string(sector) +
                          " is incompatible with length " + std::to_string(length));
  }
  const int n_up = (length + sector) / 2;
  std::vector<SpinConfig> out;
  for (std::uint64_t bits = 0; bits < (std::uint64_t(1) << length); ++bits) {
    if (std::popcount(bits) != n_up) continue;
    SpinConfig config(length);
    for (int i = 0; i < length; ++i) {
      config(i) = (bits >> (length - 1 - i)) & 1 ? 1 : -1;
    }
    out.push_back(std::move(config));
  }
  return out;
}

SampleSet exact_samples(std::vector<SpinConfig> configs,
                        const std::function<Complex(const SpinConfig &)> &log_amplitude) {
  SampleSet samples;
  samples.exact = true;
  std::vector<double> log_w(configs.size());
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < configs.size(); ++s) {
    log_w[s] = 2.0 * log_amplitude(configs[s]).real();
    max_log = std::max(max_log, log_w[s]);
  }
  samples.weights.resize(configs.size());
  double total = 0.0;
  for (std::size_t s = 0; s < configs.size(); ++s) {
    samples.weights[s] = std::exp(log_w[s] - max_log);
    total += samples.weights[s];
  }
  for (double &w : samples.weights) w /= total;
  samples.configs = std::move(configs);
  return samples;
}

}  // namespace nqsdyn
