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


#ifndef NQSDYN_GREENS_HPP
#define NQSDYN_GREENS_HPP

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "nqsdyn/cv_solver.hpp"
#include "nqsdyn/ed.hpp"

namespace nqsdyn {

/// Raw overlaps for one source separation d at one frequency, all divided by
/// <psi|psi>. With A_d = S^z_d |psi> and chi+ (chi-) the scaled solutions of
/// Q chi+ = A_0 (Q^dagger chi- = A_0), translated where needed:
///
///   g_plus       <A_0|chi+_d>
///   g_minus      <chi-_0|A_d>
///   g_mixed      <chi-_0|Q|chi+_d>
///   q_plus       <A_0|Q|chi+_d>
///   q_minus      <chi-_0|Q|A_d>
///   q_squared    <chi-_0|Q Q|chi+_d>
///   aa           <A_0|A_d>   (exactly 1/4 for d = 0)
///
/// first and combined approximate G_0d = <A_0|(z - H)^{-1}|A_d>.
struct GreensEstimates {
  int separation = 0;
  Complex g_plus{0.0, 0.0};
  Complex g_minus{0.0, 0.0};
  Complex g_mixed{0.0, 0.0};
  Complex q_plus{0.0, 0.0};
  Complex q_minus{0.0, 0.0};
  Complex q_squared{0.0, 0.0};
  Complex aa{0.0, 0.0};
  Complex first{0.0, 0.0};
  Complex combined{0.0, 0.0};
};

/// Values of a correction vector relative to a reference amplitude:
/// (phi(s) / e^ref, (Q phi)(s) / e^ref).
struct LocalPair {
  Complex value{0.0, 0.0};
  Complex q_value{0.0, 0.0};
};
using CorrectionVectorFn = std::function<LocalPair(const SpinConfig &, Complex log_ref)>;

/// beta * chi for an RBM chi; q_value uses Q = z - H (pass conj(z) for chi-).
CorrectionVectorFn rbm_correction_vector(const ChainHamiltonian &hamiltonian, Complex z,
                                         const RbmParameters &chi, Complex beta);

/// A dense vector over `basis`; q_value uses Q = z - H with the dense H.
CorrectionVectorFn dense_correction_vector(const DenseOperator &h, const VectorXc &chi, Complex z);

/// All overlaps as averages of ratios to psi(s) over samples of |psi|^2.
/// Returns one entry per separation d = 0..L-1. Samples whose ratios are not
/// finite are dropped; more than 0.1% dropped raises ConvergenceError.
std::vector<GreensEstimates> estimate_overlaps(
    int length, Complex z, const SampleSet &p0,
    const std::function<Complex(const SpinConfig &)> &log_psi,
    const CorrectionVectorFn &chi_plus, const CorrectionVectorFn &chi_minus);

/// RBM convenience: samples P0 from the problem's psi (overlap_samples draws
/// in Monte Carlo mode) and evaluates both solutions. The source must be site 0.
std::vector<GreensEstimates> estimate_overlaps(const CorrectionVectorProblem &problem,
                                               const CvSolution &plus, const CvSolution &minus,
                                               const SamplingOptions &options);

/// G ~ <A|chi+> + <chi-|A> - <chi-|Q|chi+>
Complex first_order_combined(const GreensEstimates &raw);

/// first + (<A|A> + <chi-|QQ|chi+> - <A|Q|chi+> - <chi-|Q|A>) / (i eta)
Complex second_order_combined(const GreensEstimates &raw, double eta);

/// -Im(G) / pi
double spectral_value(Complex g);

struct MomentumValue {
  int k_index = 0;
  double k = 0.0;
  Complex g{0.0, 0.0};  // (1/L) sum_n e^{ikn} G_0n
  double s = 0.0;       // -Im(g) / pi
  double imaginary_residue = 0.0;
};

/// S(k) = -(1/(L pi)) Im sum_n e^{ikn} G_0n for k = 2 pi m / L, m in k_indices.
std::vector<MomentumValue> momentum_assemble(const VectorXc &g_row,
                                             const std::vector<int> &k_indices);

struct SpectrumPoint {
  int k_index = 0;
  double k = 0.0;
  double omega = 0.0;
  Complex g{0.0, 0.0};
  double s = 0.0;
  double x_plus = 1.0;
  double x_minus = 1.0;
  bool converged = true;

  friend bool operator==(const SpectrumPoint &, const SpectrumPoint &) = default;
};

/// Rows ordered k-major, omega-minor.
struct SpectrumTable {
  int length = 0;
  std::vector<int> k_indices;
  std::vector<double> omegas;
  std::vector<SpectrumPoint> points;

  const SpectrumPoint &at(std::size_t k_pos, std::size_t omega_pos) const {
    return points[k_pos * omegas.size() + omega_pos];
  }
  std::vector<double> column(std::size_t k_pos) const;
  void validate() const;

  friend bool operator==(const SpectrumTable &, const SpectrumTable &) = default;
};

inline constexpr const char *kSpectrumSchema = "# nqsdyn-spectrum v1";

std::string format_spectrum_csv(const SpectrumTable &table);
SpectrumTable parse_spectrum_csv(const std::string &text);
/// Written to a temporary file and renamed into place.
void write_spectrum_csv(const std::filesystem::path &path, const SpectrumTable &table);
SpectrumTable read_spectrum_csv(const std::filesystem::path &path);

/// Strictly increasing omega_min, omega_min + step, ... <= omega_max.
std::vector<double> frequency_grid(double omega_min, double omega_max, double step);

/// Exact S(k, omega) from the oracle on the given grid.
SpectrumTable exact_spectrum(const ModelSpec &model, const std::vector<double> &omegas,
                             double eta, const std::vector<int> &k_indices,
                             const OracleLimits &limits = {});

/// Poles of S(k, omega): excitation energies and weights |<n|S_k|psi0>|^2 / L^2,
/// so that S(k, omega) = sum_p w_p (eta/pi) / ((omega - omega_p)^2 + eta^2).
struct SpectralPoles {
  int k_index = 0;
  std::vector<double> energies;
  std::vector<double> weights;
  double static_factor() const;
};

std::vector<SpectralPoles> spectral_poles(const ModelSpec &model,
                                          const std::vector<int> &k_indices,
                                          const OracleLimits &limits = {});

/// Fraction of a unit Lorentzian centred at `pole` inside [lo, hi].
double lorentzian_window_mass(double pole, double eta, double lo, double hi);

struct SumRuleCheck {
  double integral = 0.0;       // trapezoid over the grid
  double static_factor = 0.0;  // oracle S(k)
  double tail_mass = 0.0;      // oracle weight outside the window
  double quadrature = 0.0;     // |trapezoid(oracle) - window mass|
  double discrepancy = 0.0;    // |integral - static_factor|
  double bound = 0.0;          // tail_mass + quadrature + allowance
  bool pass = false;
};

/// Checks one spectrum column against the oracle poles. `allowance` is added
/// to the bound (used for the k = 0 column).
SumRuleCheck check_sum_rule(const std::vector<double> &omegas, const std::vector<double> &s,
                            const SpectralPoles &poles, double eta, double allowance = 0.0);

}  // namespace nqsdyn

#endif  // NQSDYN_GREENS_HPP
