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

#ifndef DDREG_PROTOCOLS_HPP
#define DDREG_PROTOCOLS_HPP

#include <optional>
#include <string>
#include <vector>

#include "ddreg/circuit.hpp"

namespace ddreg {

/// Moves the electron's polarization onto `nucleus` and re-pumps the electron.
/// Two dressed CX_{pi/2} gates, then ElectronReset.
Circuit swap_init(int nucleus);

/// Maps <basis> of `nucleus` onto <Z_e>. Resets the electron first.
Circuit tomography_circuit(int nucleus, char basis);

struct SpectroscopyPoint {
  double t = 0.0;
  double closed_form = 0.0;
  /// Density-matrix value; NaN when not simulated.
  double simulated = 0.0;
};

/// P_e(|X>) after a DD sequence (t, N) with the included nuclei maximally
/// mixed. The simulated column propagates the pulse-level schedule.
std::vector<SpectroscopyPoint> dd_spectroscopy(const RegisterConfig &cfg,
                                               const std::vector<double> &t_grid, int repeats,
                                               const std::vector<int> &include, bool simulate,
                                               const ImperfectPulseParams *noise = nullptr,
                                               int threads = 0);

enum class MqcMode { Bipartite, Sequential, Parallel };
std::string to_string(MqcMode m);
MqcMode parse_mqc_mode(const std::string &s);

/// Per-target repeat counts of the calibrated X and Z local gates.
struct LocalPrep {
  std::vector<int> x_repeats;
  std::vector<int> z_repeats;
};

struct MqcSetup {
  MqcMode mode = MqcMode::Parallel;
  std::vector<int> targets;
  /// Empty: X_{pi/2} on every target.
  std::optional<LocalPrep> prep;
  /// Depolarizing probability applied to the electron and targets after
  /// initialization and to the electron before readout.
  double spam_depolarize = 0.0;

  void validate(const RegisterConfig &cfg) const;
};

Circuit entangler_circuit(MqcMode mode, const std::vector<int> &targets);
Circuit initialization_circuit(const MqcSetup &s);
Circuit local_prep_circuit(const MqcSetup &s);

/// Thermal register -> swap init of every target (with SPAM knob).
DensityState mqc_initialized_state(const Backend &b, const MqcSetup &s);
/// Initialized state -> local prep -> Y_e(pi/2) -> entangler.
DensityState mqc_entangled_state(const Backend &b, const MqcSetup &s);

/// Multiples of `resolution` from 0 to `max_phase` inclusive.
std::vector<double> mqc_phase_grid(double resolution, double max_phase);

struct MqcPoint {
  double phi = 0.0;
  double p0 = 0.0;
};
/// Compiled backends require phi on the phase gate's resolution grid.
std::vector<MqcPoint> mqc_experiment(const Backend &b, const MqcSetup &s,
                                     const std::vector<double> &phi_grid, int threads = 0);

/// Fidelity of the electron+targets reduction to
/// (|0,1..1> + e^{i theta}|1,0..0>)/sqrt(2), maximized over theta.
double ghz_fidelity(const DensityState &s, const std::vector<int> &targets);

struct RepetitionRow {
  int n_e = 0;
  /// <Z> of the electron followed by each target.
  std::vector<double> z;
  double f_approx = 0.0;
  double f_exact = 0.0;
  /// Electron + targets reduction after N_E entanglers.
  DensityState reduced;
};

/// One repetition: the entangler between Y_e(pi/2) and Y_e(-pi/2), so the
/// electron control axis is X and odd repeats of CX_{pi/2} entangle |0..0>.
Circuit repetition_unit(MqcMode mode, const std::vector<int> &targets);

/// repetition_unit applied N_E times to electron and targets in |0>. Compiled
/// modes read nuclei through the Z tomography circuit; ideal mode reads directly.
std::vector<RepetitionRow> repetition_experiment(const Backend &b, MqcMode mode,
                                                 const std::vector<int> &targets,
                                                 const std::vector<int> &n_e_list,
                                                 int threads = 0);

/// Ideal reference states for a repetition fit. Bipartite and sequential use the
/// crosstalk-free entangler; parallel uses the designed gate on a register that
/// holds only the targets.
std::vector<DensityState> ideal_repetition_states(const RegisterConfig &cfg, MqcMode mode,
                                                  const std::vector<int> &targets,
                                                  const std::vector<int> &n_e_list);

/// The `count` N_E in [1, n_max] whose ideal parallel-entangler state overlaps
/// |0..0> best, ascending.
std::vector<int> select_parallel_repeats(const RegisterConfig &cfg,
                                         const std::vector<int> &targets, int n_max = 40,
                                         int count = 4);

}  // namespace ddreg

#endif
