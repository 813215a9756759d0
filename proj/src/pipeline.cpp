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


#include "nqsdyn/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "nqsdyn/checkpoint.hpp"

#ifndef NQSDYN_VERSION
#define NQSDYN_VERSION "0.0.0"
#endif

namespace nqsdyn {

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void write_text_atomic(const std::filesystem::path &path, const std::string &text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + tmp.string());
    out << text;
    if (!out.flush()) throw ValidationError("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void prepare_directory(const std::filesystem::path &dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw ValidationError("cannot create output directory " + dir.string());
  }
}

json file_entry(const std::filesystem::path &path) {
  return {{"file", path.filename().string()},
          {"bytes", std::uintmax_t(std::filesystem::file_size(path))}};
}

json complex_json(Complex v) { return json::array({v.real(), v.imag()}); }

json manifest_head(const std::string &command, const RunConfig &config) {
  json m;
  m["schema"] = "nqsdyn-manifest v1";
  m["command"] = command;
  m["code_version"] = NQSDYN_VERSION;
  m["config"] = format_config(config);
  m["seeds"] = {{"rbm", config.rbm_seed}, {"sampler", config.sampler.seed}};
  return m;
}

void write_json(const std::filesystem::path &path, const json &value) {
  write_text_atomic(path, value.dump(2) + "\n");
}

std::string format_energy_trace(const GroundStateResult &result) {
  std::string out = "step,energy_re,energy_im,variance,error,shift,cg_iterations\n";
  for (const EnergyTraceEntry &e : result.energy_trace) {
    out += fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{}\n", e.step, e.energy.real(),
                       e.energy.imag(), e.variance, e.error, e.shift, e.cg_iterations);
  }
  return out;
}

SpectrumTable assemble_table(const RunConfig &config, const std::vector<double> &omegas,
                             const std::vector<FrequencyResult> &results,
                             Complex GreensEstimates::*field) {
  const std::vector<int> ks = config.momenta();
  const int length = config.model.length;
  SpectrumTable table;
  table.length = length;
  table.k_indices = ks;
  table.omegas = omegas;
  std::vector<std::vector<MomentumValue>> by_omega;
  for (const FrequencyResult &r : results) {
    VectorXc row = VectorXc::Constant(length, Complex(std::numeric_limits<double>::quiet_NaN(), 0.0));
    if (r.failure.empty()) {
      for (int d = 0; d < length; ++d) row(d) = r.estimates[std::size_t(d)].*field;
    }
    by_omega.push_back(momentum_assemble(row, ks));
  }
  for (std::size_t kp = 0; kp < ks.size(); ++kp) {
    for (std::size_t i = 0; i < omegas.size(); ++i) {
      const MomentumValue &v = by_omega[i][kp];
      const FrequencyResult &r = results[i];
      table.points.push_back(
          {v.k_index, v.k, omegas[i], v.g, v.s, r.x_plus, r.x_minus, r.converged});
    }
  }
  table.validate();
  return table;
}

FrequencyResult solve_frequency(const RunConfig &config, const ChainHamiltonian &hamiltonian,
                                const RbmParameters &psi, double e0, std::size_t index,
                                double omega, std::optional<RbmParameters> &warm_plus,
                                std::optional<RbmParameters> &warm_minus) {
  FrequencyResult out;
  out.omega = omega;
  const CorrectionVectorProblem problem{hamiltonian, psi, Complex(e0 + omega, config.sweep.eta),
                                        SzSource{0}};
  const CorrectionVectorProblem adjoint = problem.adjoint();
  SamplingOptions base = config.sampling();
  base.plan.workers = 1;
  auto seeded = [&](std::uint64_t tag) {
    SamplingOptions o = base;
    o.plan.seed = derive_seed(config.sampler.seed, tag, index);
    return o;
  };
  SamplingOptions overlap = seeded(0xC2);
  const std::int64_t chains = overlap.plan.n_chains;
  overlap.plan.n_samples_per_chain =
      int(std::max<std::int64_t>(1, (config.cv.overlap_samples + chains - 1) / chains));

  const bool warm = config.cv.warm_start && warm_plus && warm_minus;
  try {
    const CvSolution plus = solve_correction_vector(
        problem, warm ? *warm_plus : source_initial_guess(problem), config.cv, seeded(0xC0));
    const CvSolution minus = solve_correction_vector(
        adjoint, warm ? *warm_minus : source_initial_guess(adjoint), config.cv, seeded(0xC1));
    out.estimates = estimate_overlaps(problem, plus, minus, overlap);
    out.beta_plus = plus.beta;
    out.beta_minus = minus.beta;
    out.x_plus = plus.x_final;
    out.x_minus = minus.x_final;
    out.iterations_plus = plus.iterations;
    out.iterations_minus = minus.iterations;
    out.converged = plus.converged && minus.converged;
    warm_plus = plus.chi;
    warm_minus = minus.chi;
  } catch (const ConvergenceError &e) {
    out.failure = e.what();
    out.converged = false;
    warm_plus.reset();
    warm_minus.reset();
  }
  return out;
}

}  // namespace

RunConfig apply_overrides(RunConfig config, const RunOptions &options) {
  if (options.output) config.output_directory = *options.output;
  if (options.seed) {
    config.rbm_seed = *options.seed;
    config.sampler.seed = *options.seed;
  }
  if (options.workers < 1) throw ValidationError("--workers must be at least 1");
  config.validate();
  return config;
}

std::filesystem::path checkpoint_path(const RunConfig &config, const RunOptions &options) {
  return options.checkpoint ? *options.checkpoint
                            : config.output_directory / config.checkpoint_name;
}

GroundStateOutcome cmd_ground_state(const RunConfig &input, const RunOptions &options,
                                    std::ostream &log) {
  const auto start = Clock::now();
  const RunConfig config = apply_overrides(input, options);
  prepare_directory(config.output_directory);
  const ChainHamiltonian hamiltonian(config.model);
  const RbmParameters init = init_random(config.model.length, config.hidden_units(),
                                         config.init_scale, config.rbm_seed);
  SamplingOptions sampling = config.sampling();
  sampling.plan.workers = options.workers;

  GroundStateOutcome outcome{optimize_ground_state(hamiltonian, init, config.sr, sampling), {}};
  const GroundStateResult &r = outcome.result;
  const double optimize_seconds = seconds_since(start);

  outcome.checkpoint = checkpoint_path(config, options);
  if (outcome.checkpoint.has_parent_path()) prepare_directory(outcome.checkpoint.parent_path());
  write_checkpoint(outcome.checkpoint,
                   {r.params, config.sampler.sector, r.e0_estimate.real(), r.e0_error});
  const auto trace_path = config.output_directory / "energy_trace.csv";
  write_text_atomic(trace_path, format_energy_trace(r));

  json m = manifest_head("ground-state", config);
  m["checkpoint"] = file_entry(outcome.checkpoint);
  m["outputs"] = json::array({file_entry(trace_path)});
  m["ground_state"] = {{"e0", r.e0_estimate.real()},
                       {"e0_imag", r.e0_estimate.imag()},
                       {"e0_error", r.e0_error},
                       {"e0_per_site", r.e0_estimate.real() / config.model.length},
                       {"steps", r.steps},
                       {"converged", r.converged}};
  write_json(config.output_directory / "manifest.json", m);
  write_json(config.output_directory / "timings.json",
             {{"command", "ground-state"},
              {"workers", options.workers},
              {"stages", {{"optimize_seconds", optimize_seconds},
                          {"total_seconds", seconds_since(start)}}}});

  const std::size_t n = r.energy_trace.size();
  for (std::size_t i = 0; i < n; i += std::max<std::size_t>(1, n / 10)) {
    const EnergyTraceEntry &e = r.energy_trace[i];
    log << fmt::format("step {:5d}  E = {:.8f}  var = {:.3e}\n", e.step, e.energy.real(),
                       e.variance);
  }
  log << fmt::format("E0 = {:.10f} +- {:.2e} (E0/L = {:.10f}), {} steps, {}\n",
                     r.e0_estimate.real(), r.e0_error, r.e0_estimate.real() / config.model.length,
                     r.steps, r.converged ? "converged" : "not converged");
  log << "checkpoint written to " << outcome.checkpoint.string() << "\n";
  return outcome;
}

SpectrumOutcome compute_spectrum(const RunConfig &config, const RbmParameters &psi, double e0,
                                 int workers) {
  config.validate();
  if (!config.model.periodic) {
    throw ValidationError("spectrum sweeps need a periodic chain (model.periodic = on)");
  }
  if (psi.n_visible() != config.model.length) {
    throw ValidationError(fmt::format("checkpoint has {} sites but model.length is {}",
                                      psi.n_visible(), config.model.length));
  }
  const ChainHamiltonian hamiltonian(config.model);
  const std::vector<double> omegas = frequency_grid(
      config.sweep.omega_min, config.sweep.omega_max, config.sweep.omega_step);
  const std::size_t n = omegas.size();
  const auto block = std::size_t(config.sweep.block_size);
  const std::size_t n_blocks = (n + block - 1) / block;

  std::vector<FrequencyResult> results(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&]() {
    for (std::size_t b = next++; b < n_blocks; b = next++) {
      try {
        std::optional<RbmParameters> warm_plus, warm_minus;
        for (std::size_t i = b * block; i < std::min(n, (b + 1) * block); ++i) {
          results[i] = solve_frequency(config, hamiltonian, psi, e0, i, omegas[i], warm_plus,
                                       warm_minus);
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const auto n_threads = std::size_t(std::clamp<std::size_t>(std::size_t(std::max(workers, 1)), 1, n_blocks));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(work);
  work();
  for (std::thread &t : pool) t.join();
  if (error) std::rethrow_exception(error);

  SpectrumOutcome out;
  out.frequencies = std::move(results);
  out.combined = assemble_table(config, omegas, out.frequencies, &GreensEstimates::combined);
  out.first_order = assemble_table(config, omegas, out.frequencies, &GreensEstimates::first);
  out.uncorrected = assemble_table(config, omegas, out.frequencies, &GreensEstimates::g_plus);
  std::size_t failed = 0;
  for (const FrequencyResult &r : out.frequencies) failed += r.converged ? 0 : 1;
  out.non_converged_fraction = double(failed) / double(n);
  return out;
}

SpectrumOutcome cmd_spectrum(const RunConfig &input, const RunOptions &options,
                             std::ostream &log) {
  const auto start = Clock::now();
  const RunConfig config = apply_overrides(input, options);
  prepare_directory(config.output_directory);
  const std::filesystem::path ckpt = checkpoint_path(config, options);
  const Checkpoint checkpoint = read_checkpoint(ckpt);
  if (!checkpoint.e0) throw ValidationError("checkpoint " + ckpt.string() + " carries no E0");
  if (checkpoint.sector != config.sampler.sector) {
    throw ValidationError("checkpoint sector differs from sampler.sector");
  }

  SpectrumOutcome out = compute_spectrum(config, checkpoint.params, *checkpoint.e0, options.workers);
  const double sweep_seconds = seconds_since(start);

  const auto dir = config.output_directory;
  write_spectrum_csv(dir / "spectrum.csv", out.combined);
  write_spectrum_csv(dir / "spectrum_first_order.csv", out.first_order);
  write_spectrum_csv(dir / "spectrum_uncorrected.csv", out.uncorrected);

  json m = manifest_head("spectrum", config);
  m["checkpoint"] = file_entry(ckpt);
  m["ground_state"] = {{"e0", *checkpoint.e0}, {"e0_error", checkpoint.e0_error}};
  m["outputs"] = json::array({file_entry(dir / "spectrum.csv"),
                              file_entry(dir / "spectrum_first_order.csv"),
                              file_entry(dir / "spectrum_uncorrected.csv")});
  json points = json::array();
  for (const FrequencyResult &r : out.frequencies) {
    json p = {{"omega", r.omega},
              {"converged", r.converged},
              {"x_plus", r.x_plus},
              {"x_minus", r.x_minus},
              {"iterations_plus", r.iterations_plus},
              {"iterations_minus", r.iterations_minus},
              {"beta_plus", complex_json(r.beta_plus)},
              {"beta_minus", complex_json(r.beta_minus)}};
    if (!r.failure.empty()) p["failure"] = r.failure;
    points.push_back(p);
  }
  m["points"] = points;
  m["non_converged_fraction"] = out.non_converged_fraction;
  write_json(dir / "manifest.json", m);
  write_json(dir / "timings.json", {{"command", "spectrum"},
                                    {"workers", options.workers},
                                    {"stages", {{"sweep_seconds", sweep_seconds},
                                                {"total_seconds", seconds_since(start)}}}});

  log << fmt::format("{} frequencies x {} momenta, {:.1f}% not converged\n",
                     out.frequencies.size(), out.combined.k_indices.size(),
                     100.0 * out.non_converged_fraction);
  log << "spectrum written to " << (dir / "spectrum.csv").string() << "\n";
  if (out.non_converged_fraction > 0.25) {
    throw ConvergenceError(fmt::format("{:.1f}% of the frequency points did not converge",
                                       100.0 * out.non_converged_fraction));
  }
  return out;
}

SpectrumTable cmd_ed(const RunConfig &input, const RunOptions &options, std::ostream &log) {
  const auto start = Clock::now();
  const RunConfig config = apply_overrides(input, options);
  prepare_directory(config.output_directory);
  const std::vector<double> omegas = frequency_grid(
      config.sweep.omega_min, config.sweep.omega_max, config.sweep.omega_step);
  const std::vector<int> ks = config.momenta();
  const SpectrumTable table = exact_spectrum(config.model, omegas, config.sweep.eta, ks, config.oracle);
  const std::vector<SpectralPoles> poles = spectral_poles(config.model, ks, config.oracle);
  const ExactGroundState gs = exact_ground_state(config.model, 0, config.oracle);

  const auto path = config.output_directory / "oracle.csv";
  write_spectrum_csv(path, table);
  json m = manifest_head("ed", config);
  m["outputs"] = json::array({file_entry(path)});
  m["ground_state"] = {{"e0", gs.energy}, {"e0_per_site", gs.energy / config.model.length}};
  json sk = json::array();
  for (const SpectralPoles &p : poles) {
    sk.push_back({{"k_index", p.k_index}, {"static_structure_factor", p.static_factor()}});
  }
  m["static_structure_factor"] = sk;
  write_json(config.output_directory / "manifest.json", m);
  write_json(config.output_directory / "timings.json",
             {{"command", "ed"}, {"stages", {{"total_seconds", seconds_since(start)}}}});
  log << fmt::format("E0 = {:.12f}, {} frequencies x {} momenta\n", gs.energy, omegas.size(),
                     ks.size());
  log << "oracle spectrum written to " << path.string() << "\n";
  return table;
}

ComparisonReport compare_spectra(const SpectrumTable &candidate, const SpectrumTable &oracle,
                                 const RunConfig &config,
                                 const std::optional<SpectrumTable> &first_order) {
  auto same_grid = [](const SpectrumTable &a, const SpectrumTable &b) {
    if (a.length != b.length || a.k_indices != b.k_indices || a.omegas.size() != b.omegas.size()) {
      return false;
    }
    for (std::size_t i = 0; i < a.omegas.size(); ++i) {
      if (std::abs(a.omegas[i] - b.omegas[i]) > 1e-9) return false;
    }
    return true;
  };
  candidate.validate();
  oracle.validate();
  if (!same_grid(candidate, oracle)) throw ValidationError("spectrum grids do not match");
  if (first_order && !same_grid(*first_order, oracle)) {
    throw ValidationError("first-order spectrum grid does not match");
  }
  if (config.model.length != oracle.length) {
    throw ValidationError("model.length does not match the spectrum tables");
  }

  ComparisonReport report;
  report.has_first_order = first_order.has_value();
  double oracle_max = 0.0;
  for (const SpectrumPoint &p : oracle.points) oracle_max = std::max(oracle_max, p.s);
  report.min_value = std::numeric_limits<double>::infinity();
  for (const SpectrumPoint &p : candidate.points) {
    const double s = std::isfinite(p.s) ? p.s : std::numeric_limits<double>::infinity();
    report.global_max = std::max(report.global_max, std::isfinite(p.s) ? p.s : 0.0);
    report.min_value = std::min(report.min_value, s);
    if (p.k_index == 0) report.zero_k_max = std::max(report.zero_k_max, std::abs(p.s));
  }
  const std::vector<SpectralPoles> poles =
      spectral_poles(config.model, oracle.k_indices, config.oracle);
  const double span = oracle.omegas.back() - oracle.omegas.front();
  const double tol = 1e-9;

  report.l2_pass = report.peaks_pass = report.sum_rule_pass = true;
  for (std::size_t kp = 0; kp < oracle.k_indices.size(); ++kp) {
    MomentumComparison c;
    c.k_index = oracle.k_indices[kp];
    const std::vector<double> o = oracle.column(kp);
    const std::vector<double> v = candidate.column(kp);
    double diff2 = 0.0, norm2 = 0.0;
    std::size_t io = 0, iv = 0;
    for (std::size_t i = 0; i < o.size(); ++i) {
      diff2 += (v[i] - o[i]) * (v[i] - o[i]);
      norm2 += o[i] * o[i];
      if (o[i] > o[io]) io = i;
      if (v[i] > v[iv]) iv = i;
    }
    c.oracle_max = o[io];
    c.absolute_l2 = std::sqrt(diff2);
    c.relative_l2 = norm2 > 0.0 ? std::sqrt(diff2 / norm2) : c.absolute_l2;
    if (!std::isfinite(c.relative_l2)) c.relative_l2 = std::numeric_limits<double>::infinity();
    c.has_peak = c.oracle_max > 1e-3 * oracle_max;
    c.oracle_peak = oracle.omegas[io];
    c.peak = oracle.omegas[iv];
    c.peak_delta = std::abs(c.peak - c.oracle_peak);
    const double allowance = c.has_peak ? 0.0 : config.compare.zero_k_fraction * report.global_max * span;
    c.sum_rule = check_sum_rule(oracle.omegas, v, poles[kp], config.sweep.eta, allowance);
    if (c.has_peak) {
      report.l2_pass = report.l2_pass && c.relative_l2 <= config.compare.l2_tolerance;
      report.peaks_pass = report.peaks_pass && c.peak_delta <= config.compare.peak_tolerance + tol;
      if (first_order) {
        const double s1 = first_order->at(kp, io).s;
        c.first_order_peak_error = std::abs(s1 - o[io]);
        c.second_order_peak_error = std::abs(v[io] - o[io]);
        report.second_order_pass =
            report.second_order_pass && c.second_order_peak_error <= c.first_order_peak_error;
      }
    }
    report.sum_rule_pass = report.sum_rule_pass && c.sum_rule.pass;
    report.momenta.push_back(c);
  }
  const bool has_zero_k =
      std::find(oracle.k_indices.begin(), oracle.k_indices.end(), 0) != oracle.k_indices.end();
  report.symmetry_pass =
      report.min_value >= -config.compare.negative_fraction * report.global_max &&
      (!has_zero_k || report.zero_k_max < config.compare.zero_k_fraction * report.global_max);
  report.pass = report.l2_pass && report.peaks_pass && report.sum_rule_pass &&
                report.symmetry_pass && report.second_order_pass;
  return report;
}

std::string format_report(const ComparisonReport &report) {
  std::string out = fmt::format("{:>3} {:>10} {:>10} {:>8} {:>8} {:>8} {:>10} {:>10} {:>10}\n",
                                "k", "rel_L2", "abs_L2", "peak", "oracle", "delta", "sum_dev",
                                "sum_bound", "2nd/1st");
  for (const MomentumComparison &c : report.momenta) {
    const std::string ratio =
        report.has_first_order && c.has_peak && c.first_order_peak_error > 0.0
            ? fmt::format("{:.3g}", c.second_order_peak_error / c.first_order_peak_error)
            : "-";
    out += fmt::format("{:>3} {:>10.3e} {:>10.3e} {:>8.3f} {:>8.3f} {:>8.3f} {:>10.3e} {:>10.3e} {:>10}\n",
                       c.k_index, c.relative_l2, c.absolute_l2, c.peak, c.oracle_peak,
                       c.peak_delta, c.sum_rule.discrepancy, c.sum_rule.bound, ratio);
  }
  out += fmt::format("global max {:.4g}, max |S(0,w)| {:.3g}, min S {:.3g}\n", report.global_max,
                     report.zero_k_max, report.min_value);
  auto verdict = [](bool ok) { return ok ? "pass" : "FAIL"; };
  out += fmt::format("l2 {}, peaks {}, sum rule {}, symmetry {}, second order {}\n",
                     verdict(report.l2_pass), verdict(report.peaks_pass),
                     verdict(report.sum_rule_pass), verdict(report.symmetry_pass),
                     report.has_first_order ? verdict(report.second_order_pass) : "n/a");
  out += fmt::format("verdict: {}\n", report.pass ? "PASS" : "FAIL");
  return out;
}

ComparisonReport cmd_compare(const RunConfig &input, const RunOptions &options,
                             const std::filesystem::path &candidate,
                             const std::filesystem::path &oracle,
                             const std::optional<std::filesystem::path> &first_order,
                             std::ostream &log) {
  const RunConfig config = apply_overrides(input, options);
  prepare_directory(config.output_directory);
  std::optional<SpectrumTable> first;
  if (first_order) first = read_spectrum_csv(*first_order);
  const ComparisonReport report =
      compare_spectra(read_spectrum_csv(candidate), read_spectrum_csv(oracle), config, first);

  json momenta = json::array();
  for (const MomentumComparison &c : report.momenta) {
    json entry = {{"k_index", c.k_index},
                  {"relative_l2", c.relative_l2},
                  {"absolute_l2", c.absolute_l2},
                  {"has_peak", c.has_peak},
                  {"peak", c.peak},
                  {"oracle_peak", c.oracle_peak},
                  {"peak_delta", c.peak_delta},
                  {"sum_rule", {{"integral", c.sum_rule.integral},
                                {"static_structure_factor", c.sum_rule.static_factor},
                                {"tail_mass", c.sum_rule.tail_mass},
                                {"quadrature", c.sum_rule.quadrature},
                                {"discrepancy", c.sum_rule.discrepancy},
                                {"bound", c.sum_rule.bound},
                                {"pass", c.sum_rule.pass}}}};
    if (report.has_first_order && c.has_peak) {
      entry["first_order_peak_error"] = c.first_order_peak_error;
      entry["second_order_peak_error"] = c.second_order_peak_error;
    }
    momenta.push_back(entry);
  }
  json out = {{"schema", "nqsdyn-compare v1"},
              {"candidate", candidate.filename().string()},
              {"oracle", oracle.filename().string()},
              {"momenta", momenta},
              {"global_max", report.global_max},
              {"zero_k_max", report.zero_k_max},
              {"min_value", report.min_value},
              {"l2_pass", report.l2_pass},
              {"peaks_pass", report.peaks_pass},
              {"sum_rule_pass", report.sum_rule_pass},
              {"symmetry_pass", report.symmetry_pass},
              {"second_order_pass", report.second_order_pass},
              {"pass", report.pass}};
  write_json(config.output_directory / "compare.json", out);
  log << format_report(report);
  return report;
}

}  // namespace nqsdyn
