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


#include "nqsdyn/greens.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <fmt/format.h>

namespace nqsdyn {

namespace {

constexpr double kPi = std::numbers::pi;

bool finite(Complex v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

}  // namespace

CorrectionVectorFn rbm_correction_vector(const ChainHamiltonian &hamiltonian, Complex z,
                                         const RbmParameters &chi, Complex beta) {
  return [hamiltonian, z, chi, beta](const SpinConfig &config, Complex log_ref) {
    const ChainState state = ChainState::make(chi, config);
    const QAction q = local_q_action(hamiltonian, z, chi, state);
    LocalPair out;
    out.value = beta * std::exp(state.log_amp - log_ref);
    out.q_value = out.value * q.ratio;
    return out;
  };
}

CorrectionVectorFn dense_correction_vector(const DenseOperator &h, const VectorXc &chi,
                                           Complex z) {
  if (chi.size() != h.basis.size()) {
    throw ContractViolation("dense correction vector does not match the basis");
  }
  VectorXc q_chi = z * chi - h.matrix.cast<Complex>() * chi;
  return [basis = h.basis, chi, q_chi](const SpinConfig &config, Complex log_ref) {
    const Eigen::Index index = basis.index_of(config);
    LocalPair out;
    if (index < 0) return out;
    const Complex scale = std::exp(-log_ref);
    out.value = chi(index) * scale;
    out.q_value = q_chi(index) * scale;
    return out;
  };
}

std::vector<GreensEstimates> estimate_overlaps(
    int length, Complex z, const SampleSet &p0,
    const std::function<Complex(const SpinConfig &)> &log_psi_fn,
    const CorrectionVectorFn &chi_plus, const CorrectionVectorFn &chi_minus) {
  if (p0.size() == 0) throw ContractViolation("no samples for the overlaps");
  const auto n = std::size_t(length);

  // Translation eigenvalue of psi for every shift: psi(T^d s) = lambda_d psi(s).
  std::vector<Complex> lambda(n, Complex(0.0));
  std::vector<Complex> log_psi_values(p0.size());
  for (std::size_t s = 0; s < p0.size(); ++s) {
    log_psi_values[s] = log_psi_fn(p0.configs[s]);
    if (p0.weights[s] == 0.0) continue;
    for (std::size_t d = 0; d < n; ++d) {
      const Complex ratio =
          std::exp(log_psi_fn(shift_config(p0.configs[s], int(d))) - log_psi_values[s]);
      if (finite(ratio)) lambda[d] += p0.weights[s] * ratio;
    }
  }
  for (Complex &l : lambda) {
    if (std::abs(l) < 1e-3) {
      throw ContractViolation("wavefunction is not translation invariant");
    }
    l /= std::abs(l);
  }

  std::vector<GreensEstimates> sums(n);
  std::vector<GreensEstimates> local(n);
  double kept_weight = 0.0;
  std::int64_t dropped = 0;
  for (std::size_t s = 0; s < p0.size(); ++s) {
    const double w = p0.weights[s];
    if (w == 0.0) continue;
    const SpinConfig &config = p0.configs[s];
    const Complex lp = log_psi_values[s];
    const LocalPair minus = chi_minus(config, lp);
    const double a0 = 0.5 * config(0);
    bool ok = finite(minus.value) && finite(minus.q_value);
    for (std::size_t d = 0; d < n && ok; ++d) {
      LocalPair plus = chi_plus(shift_config(config, int(d)), lp);
      plus.value /= lambda[d];
      plus.q_value /= lambda[d];
      const double ad = 0.5 * config(Eigen::Index(d));
      GreensEstimates &e = local[d];
      e.g_plus = a0 * plus.value;
      e.g_minus = std::conj(minus.value) * ad;
      e.g_mixed = std::conj(minus.value) * plus.q_value;
      e.q_plus = a0 * plus.q_value;
      e.q_minus = std::conj(minus.q_value) * ad;
      e.q_squared = std::conj(minus.q_value) * plus.q_value;
      e.aa = a0 * ad;
      ok = finite(e.g_plus) && finite(e.g_mixed) && finite(e.q_plus) && finite(e.q_squared);
    }
    if (!ok) {
      ++dropped;
      continue;
    }
    kept_weight += w;
    for (std::size_t d = 0; d < n; ++d) {
      sums[d].g_plus += w * local[d].g_plus;
      sums[d].g_minus += w * local[d].g_minus;
      sums[d].g_mixed += w * local[d].g_mixed;
      sums[d].q_plus += w * local[d].q_plus;
      sums[d].q_minus += w * local[d].q_minus;
      sums[d].q_squared += w * local[d].q_squared;
      sums[d].aa += w * local[d].aa;
    }
  }
  if (double(dropped) > 1e-3 * double(p0.size()) || kept_weight <= 0.0) {
    throw ConvergenceError(fmt::format("{} of {} overlap samples were not finite", dropped,
                                       p0.size()));
  }
  const double eta = z.imag();
  for (std::size_t d = 0; d < n; ++d) {
    GreensEstimates &e = sums[d];
    e.separation = int(d);
    e.g_plus /= kept_weight;
    e.g_minus /= kept_weight;
    e.g_mixed /= kept_weight;
    e.q_plus /= kept_weight;
    e.q_minus /= kept_weight;
    e.q_squared /= kept_weight;
    e.aa = d == 0 ? Complex(0.25) : e.aa / kept_weight;
    e.first = first_order_combined(e);
    e.combined = second_order_combined(e, eta);
  }
  return sums;
}

std::vector<GreensEstimates> estimate_overlaps(const CorrectionVectorProblem &problem,
                                               const CvSolution &plus, const CvSolution &minus,
                                               const SamplingOptions &options) {
  if (problem.source.site != 0) {
    throw ContractViolation("overlaps are measured for a source at site 0");
  }
  if (plus.beta == Complex(0.0) || minus.beta == Complex(0.0)) {
    throw ContractViolation("correction vectors carry a zero normalization");
  }
  SamplingOptions opts = options;
  opts.plan.seed = derive_seed(options.plan.seed, 0x60);
  const SampleSet p0 = sample_wavefunction(problem.hamiltonian, problem.psi, opts);
  const RbmParameters &psi = problem.psi;
  return estimate_overlaps(
      problem.hamiltonian.length(), problem.z, p0,
      [&psi](const SpinConfig &c) { return log_psi(psi, c); },
      rbm_correction_vector(problem.hamiltonian, problem.z, plus.chi, plus.beta),
      rbm_correction_vector(problem.hamiltonian, std::conj(problem.z), minus.chi, minus.beta));
}

Complex first_order_combined(const GreensEstimates &raw) {
  return raw.g_plus + raw.g_minus - raw.g_mixed;
}

Complex second_order_combined(const GreensEstimates &raw, double eta) {
  if (!(eta > 0.0)) throw ContractViolation("eta must be positive");
  const Complex correction = raw.aa + raw.q_squared - raw.q_plus - raw.q_minus;
  return first_order_combined(raw) + correction / Complex(0.0, eta);
}

double spectral_value(Complex g) { return -g.imag() / kPi; }

std::vector<MomentumValue> momentum_assemble(const VectorXc &g_row,
                                             const std::vector<int> &k_indices) {
  const auto length = int(g_row.size());
  if (length == 0) throw ContractViolation("no site separations to assemble");
  std::vector<MomentumValue> out;
  out.reserve(k_indices.size());
  for (int m : k_indices) {
    if (m < 0 || m >= length) throw ContractViolation(fmt::format("k index {} out of range", m));
    MomentumValue v;
    v.k_index = m;
    v.k = 2.0 * kPi * m / length;
    Complex forward = 0.0;
    Complex backward = 0.0;
    for (int n = 0; n < length; ++n) {
      forward += std::polar(1.0, v.k * n) * g_row(n);
      backward += std::polar(1.0, -v.k * n) * g_row(n);
    }
    v.g = forward / double(length);
    v.s = spectral_value(v.g);
    v.imaginary_residue = std::abs(forward - backward) / (length * kPi);
    out.push_back(v);
  }
  return out;
}

std::vector<double> SpectrumTable::column(std::size_t k_pos) const {
  std::vector<double> out(omegas.size());
  for (std::size_t i = 0; i < omegas.size(); ++i) out[i] = at(k_pos, i).s;
  return out;
}

void SpectrumTable::validate() const {
  if (omegas.empty() || k_indices.empty()) throw ValidationError("spectrum table is empty");
  for (std::size_t i = 1; i < omegas.size(); ++i) {
    if (!(omegas[i] > omegas[i - 1])) {
      throw ValidationError("frequency grid is not strictly increasing");
    }
  }
  if (points.size() != k_indices.size() * omegas.size()) {
    throw ValidationError("spectrum table has the wrong number of rows");
  }
}

std::string format_spectrum_csv(const SpectrumTable &table) {
  table.validate();
  std::string out = fmt::format("{} L={}\n", kSpectrumSchema, table.length);
  out += "k_index,k,omega,re_G,im_G,S,x_plus,x_minus,converged\n";
  for (const SpectrumPoint &p : table.points) {
    out += fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{}\n",
                       p.k_index, p.k, p.omega, p.g.real(), p.g.imag(), p.s, p.x_plus,
                       p.x_minus, p.converged ? 1 : 0);
  }
  return out;
}

SpectrumTable parse_spectrum_csv(const std::string &text) {
  std::istringstream in(text);
  std::string line;
  SpectrumTable table;
  if (!std::getline(in, line) || line.rfind(kSpectrumSchema, 0) != 0) {
    throw ValidationError("missing spectrum schema header");
  }
  const auto pos = line.find("L=");
  if (pos == std::string::npos) throw ValidationError("spectrum header lacks the chain length");
  table.length = std::stoi(line.substr(pos + 2));
  if (!std::getline(in, line) || line != "k_index,k,omega,re_G,im_G,S,x_plus,x_minus,converged") {
    throw ValidationError("unexpected spectrum columns");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    if (f.size() != 9) throw ValidationError("malformed spectrum row: " + line);
    SpectrumPoint p;
    try {
      p.k_index = std::stoi(f[0]);
      p.k = std::stod(f[1]);
      p.omega = std::stod(f[2]);
      p.g = Complex(std::stod(f[3]), std::stod(f[4]));
      p.s = std::stod(f[5]);
      p.x_plus = std::stod(f[6]);
      p.x_minus = std::stod(f[7]);
      p.converged = std::stoi(f[8]) != 0;
    } catch (const std::exception &) {
      throw ValidationError("malformed spectrum row: " + line);
    }
    if (table.k_indices.empty() || table.k_indices.back() != p.k_index) {
      table.k_indices.push_back(p.k_index);
    }
    if (table.k_indices.size() == 1) table.omegas.push_back(p.omega);
    table.points.push_back(p);
  }
  table.validate();
  for (std::size_t kp = 0; kp < table.k_indices.size(); ++kp) {
    for (std::size_t i = 0; i < table.omegas.size(); ++i) {
      const SpectrumPoint &p = table.at(kp, i);
      if (p.k_index != table.k_indices[kp] || p.omega != table.omegas[i]) {
        throw ValidationError("spectrum rows are not k-major on a common grid");
      }
    }
  }
  return table;
}

void write_spectrum_csv(const std::filesystem::path &path, const SpectrumTable &table) {
  const std::string text = format_spectrum_csv(table);
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

SpectrumTable read_spectrum_csv(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_spectrum_csv(buffer.str());
}

std::vector<double> frequency_grid(double omega_min, double omega_max, double step) {
  if (!(step > 0.0)) throw ValidationError("sweep.omega_step must be positive");
  if (!(omega_max >= omega_min)) throw ValidationError("frequency grid is empty");
  const auto count = static_cast<std::size_t>(std::floor((omega_max - omega_min) / step + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) grid[i] = omega_min + double(i) * step;
  return grid;
}

SpectrumTable exact_spectrum(const ModelSpec &model, const std::vector<double> &omegas,
                             double eta, const std::vector<int> &k_indices,
                             const OracleLimits &limits) {
  if (!(eta > 0.0)) throw ValidationError("sweep.eta must be positive");
  const DenseOperator h = build_hamiltonian(model, 0, limits);
  const ExactGroundState gs = exact_ground_state(model, 0, limits);
  SpectrumTable table;
  table.length = model.length;
  table.k_indices = k_indices;
  table.omegas = omegas;
  std::vector<std::vector<MomentumValue>> by_omega;
  for (double omega : omegas) {
    const VectorXc row = exact_greens_row(h, gs.state, Complex(gs.energy + omega, eta));
    by_omega.push_back(momentum_assemble(row, k_indices));
  }
  for (std::size_t kp = 0; kp < k_indices.size(); ++kp) {
    for (std::size_t i = 0; i < omegas.size(); ++i) {
      const MomentumValue &v = by_omega[i][kp];
      table.points.push_back({v.k_index, v.k, omegas[i], v.g, v.s, 1.0, 1.0, true});
    }
  }
  table.validate();
  return table;
}

double SpectralPoles::static_factor() const {
  double total = 0.0;
  for (double w : weights) total += w;
  return total;
}

std::vector<SpectralPoles> spectral_poles(const ModelSpec &model,
                                          const std::vector<int> &k_indices,
                                          const OracleLimits &limits) {
  const DenseOperator h = build_hamiltonian(model, 0, limits);
  const EigenDecomposition eig = diagonalize(h);
  const Eigen::VectorXd psi0 = eig.vectors.col(0);
  const int length = model.length;
  std::vector<Eigen::VectorXd> projections;
  for (int j = 0; j < length; ++j) {
    projections.push_back(eig.vectors.transpose() * h.basis.sz_diagonal(j).cwiseProduct(psi0));
  }
  std::vector<SpectralPoles> out;
  for (int m : k_indices) {
    SpectralPoles poles;
    poles.k_index = m;
    const double k = 2.0 * kPi * m / length;
    for (Eigen::Index n = 0; n < eig.energies.size(); ++n) {
      Complex amp = 0.0;
      for (int j = 0; j < length; ++j) amp += std::polar(1.0, k * j) * projections[j](n);
      const double w = std::norm(amp) / double(length * length);
      if (w < 1e-14) continue;
      poles.energies.push_back(eig.energies(n) - eig.energies(0));
      poles.weights.push_back(w);
    }
    out.push_back(std::move(poles));
  }
  return out;
}

double lorentzian_window_mass(double pole, double eta, double lo, double hi) {
  return (std::atan((hi - pole) / eta) - std::atan((lo - pole) / eta)) / kPi;
}

SumRuleCheck check_sum_rule(const std::vector<double> &omegas, const std::vector<double> &s,
                            const SpectralPoles &poles, double eta, double allowance) {
  if (omegas.size() != s.size() || omegas.size() < 2) {
    throw ContractViolation("sum rule needs a spectrum column on at least two frequencies");
  }
  auto trapezoid = [&](const std::vector<double> &f) {
    double total = 0.0;
    for (std::size_t i = 1; i < omegas.size(); ++i) {
      total += 0.5 * (f[i] + f[i - 1]) * (omegas[i] - omegas[i - 1]);
    }
    return total;
  };
  std::vector<double> oracle(omegas.size(), 0.0);
  double window = 0.0;
  for (std::size_t p = 0; p < poles.energies.size(); ++p) {
    const double e = poles.energies[p];
    window += poles.weights[p] * lorentzian_window_mass(e, eta, omegas.front(), omegas.back());
    for (std::size_t i = 0; i < omegas.size(); ++i) {
      const double x = omegas[i] - e;
      oracle[i] += poles.weights[p] * eta / (kPi * (x * x + eta * eta));
    }
  }
  SumRuleCheck check;
  check.integral = trapezoid(s);
  check.static_factor = poles.static_factor();
  check.tail_mass = check.static_factor - window;
  check.quadrature = std::abs(trapezoid(oracle) - window);
  check.discrepancy = std::abs(check.integral - check.static_factor);
  check.bound = check.tail_mass + check.quadrature + allowance;
  // The oracle itself sits on the bound when the trapezoid rule underestimates.
  check.pass = check.discrepancy <= check.bound + 1e-12 * std::max(check.static_factor, 1.0);
  return check;
}

}  // namespace nqsdyn
