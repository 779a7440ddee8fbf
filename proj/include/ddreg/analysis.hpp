// Copyright 2026 The ddregister Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DDREG_ANALYSIS_HPP
#define DDREG_ANALYSIS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ddreg/circuit.hpp"
#include "ddreg/protocols.hpp"

namespace ddreg {

// ---- MQC signal fits ----

struct Tone {
  double frequency = 0.0;
  double amplitude = 0.0;
  double phase = 0.0;  // [0, 2pi)
  double frequency_err = 0.0;
  double amplitude_err = 0.0;
  double phase_err = 0.0;
};

/// P(phi) = offset + sum_k amplitude_k cos(frequency_k phi - phase_k).
struct MqcModel {
  double offset = 0.0;
  double offset_err = 0.0;
  /// Ascending by frequency.
  std::vector<Tone> tones;
  double residual_norm = 0.0;
  int evaluations = 0;

  double operator()(double phi) const;
  /// The tone with the largest amplitude.
  const Tone &dominant() const;
};

struct SinusoidFitOptions {
  int tones = 1;
  /// Start frequency; empty scans [f_lo, f_hi] for the best linear fit.
  std::optional<double> initial_frequency;
  double f_lo = 0.5;
  double f_hi = 5.5;
  double f_step = 0.01;
  /// Number of grid candidates tried before giving up.
  int restarts = 3;
};

/// Levenberg-Marquardt fit with covariance-based 1-sigma errors. Two-tone fits
/// start the second frequency at the first plus two. Throws DomainError if no
/// start converges.
MqcModel fit_sinusoid(const std::vector<double> &phi, const std::vector<double> &p,
                      const SinusoidFitOptions &opts = {});

// ---- Residual entanglement with a mixed spectator ----

/// Conditional crosstalk on one mixed nucleus: axes in the xz-plane, angle theta.
struct ResidualCrosstalk {
  Vec3 n0 = Vec3::UnitZ();
  Vec3 n1 = Vec3::UnitZ();
  double theta = 0.0;
  // Phase gate seen by the mixed nucleus. With phase_step == 0 it is Z_phi;
  // otherwise Z of round(wrap(phi) / phase_step) * phase_unit, as a compiled
  // parallel Z digitizes it.
  double phase_unit = 0.0;
  double phase_step = 0.0;

  void validate() const;
  double spectator_phase(double phi) const;
};

/// tr[R0 Z_phi R0 R1^dag Z_phi^dag R1^dag], closed form.
double residual_trace_closed(const ResidualCrosstalk &c, double phi);
/// Same trace from the 2x2 matrix product.
cplx residual_trace_matrix(const ResidualCrosstalk &c, double phi);

/// Crosstalk of the strongest non-target nucleus during the DD gate (t, N).
ResidualCrosstalk spectator_crosstalk(const RegisterConfig &cfg, const std::vector<int> &targets,
                                      double t, int repeats);
/// Same, at the backend's parallel entangler for `targets`. Compiled
/// backends also record the spectator's share of the parallel Z gate.
ResidualCrosstalk spectator_crosstalk(const Backend &b, const std::vector<int> &targets);

struct ResidualPoint {
  double phi = 0.0;
  double closed_form = 0.0;
  double matrix = 0.0;
};
/// P(phi) = (1 + Re(e^{i(L phi - delta)} tr A) / 2) / 2 by both evaluations,
/// with tr A taken at the spectator's phase angle.
std::vector<ResidualPoint> residual_mqc_theory(const ResidualCrosstalk &c, int l, double delta,
                                               const std::vector<double> &phi_grid);

/// Fits offset + contrast * theory(phi; delta) to a signal, scanning delta.
/// Returns the RMS residual divided by the signal's standard deviation.
double residual_shape_rms(const ResidualCrosstalk &c, int l, const std::vector<double> &phi,
                          const std::vector<double> &p, double *best_delta = nullptr);

// ---- GHZ preparation search ----

struct AnnealingOptions {
  std::uint64_t seed = 1;
  int chains = 4;
  int steps = 600;
  double t_start = 0.2;
  double t_end = 1e-3;
  int threads = 0;
};

struct GhzOptimization {
  LocalPrep prep;
  double fidelity = 0.0;
  /// Fidelity of the default X_{pi/2} preparation.
  double baseline_fidelity = 0.0;
  std::vector<int> bounds;  // X then Z upper bounds per target
  int evaluations = 0;
  std::uint64_t seed = 0;
};

/// Simulated annealing over the integer X/Z repeat counts of every target,
/// maximizing ghz_fidelity of the entangled state. Chain c uses seed + c;
/// chain 0 starts at the calibrated X_{pi/2} point. Best chain wins, ties to
/// the lowest index.
GhzOptimization optimize_ghz_prep(const Backend &b, MqcMode mode, const std::vector<int> &targets,
                                  const AnnealingOptions &opts = {});

// ---- Fidelity estimators and the bit-flip error model ----

/// 2^{-M} prod (1 + <Z_i>).
double state_fidelity_approx(const std::vector<double> &z);
/// <0..0|rho|0..0> as 2^{-M} times the sum of all I/Z correlators.
double state_fidelity_exact(const DensityState &rho);

/// Independent X flips with probability eps on each of the M qubits, as the
/// explicit sum over all 2^M Kraus patterns.
DensityState bitflip_channel(const DensityState &rho, int m, double eps);
/// <0..0| bitflip_channel(rho, M, eps) |0..0>, from the diagonal only.
double bitflip_zero_overlap(const DensityState &rho, double eps);

struct ErrorChannelFit {
  double eps_spam = 0.0;
  double eps_spam_err = 0.0;
  double eps_gate = 0.0;
  double eps_gate_err = 0.0;
  int m = 0;
  double gate_fidelity = 1.0;  // (1 - eps_gate)^M
  double residual_norm = 0.0;
  std::vector<std::string> warnings;
};

/// Model: F(N_E) = <0|B_gate^{N_E}(B_spam(rho_N_E))|0> with rho_N_E the ideal
/// state after N_E gates.
double gate_error_model(const DensityState &ideal, int n_e, double eps_spam, double eps_gate);

ErrorChannelFit fit_gate_error(const std::vector<int> &n_e, const std::vector<double> &f, int m,
                               const std::vector<DensityState> &initial_states);

}  // namespace ddreg

#endif
