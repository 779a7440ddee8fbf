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

#ifndef DDREG_DD_ENGINE_HPP
#define DDREG_DD_ENGINE_HPP

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "ddreg/register_model.hpp"
#include "ddreg/spin_core.hpp"

namespace ddreg {

enum class SequenceFamily { CPMG, XY4, XY6, XY8 };
enum class PulseAxis { X, Y };

std::string to_string(SequenceFamily f);
std::string to_string(PulseAxis a);

/// Pi-pulse axes of one block of the family (2 pulses per unit time).
std::vector<PulseAxis> family_axes(SequenceFamily f);
/// Units of length t consumed by one block.
int family_units(SequenceFamily f);

struct Pulse {
  double time = 0.0;  // us from the start of the schedule
  PulseAxis axis = PulseAxis::X;
};

/// N units of length t. Blocks: floor(N/4) XY8 blocks, then one CPMG/XY4/XY6
/// block for N mod 4 = 1/2/3. Pulses sit at t/4 and 3t/4 within each unit.
struct PulseSchedule {
  double unit_time = 0.0;
  int repeats = 0;
  std::vector<std::pair<SequenceFamily, int>> family_plan;
  std::vector<Pulse> timeline;

  static PulseSchedule build(double t, int repeats);
  double total_time() const { return unit_time * repeats; }
  /// Throws ValidationError if the plan or timeline are inconsistent.
  void validate() const;
};

/// Error of one electron gate. For X gates (off_a, off_b) = (eps_y, eps_z);
/// for Y gates (off_a, off_b) = (nu_x, nu_z).
struct PulseError {
  double angle_error = 0.0;
  double off_a = 0.0;
  double off_b = 0.0;
};

struct ImperfectPulseParams {
  PulseError x_half;
  PulseError x_pi;
  PulseError y_half;
  PulseError y_pi;

  bool is_zero() const;
  void validate() const;
  /// Same angle error and off-axis tilt (into the second transverse axis) on every gate.
  static ImperfectPulseParams uniform(double angle_error, double off_axis);
};

/// Electron rotation about X or Y by the nominal angle. With noise, the axis is
/// tilted by the off-axis terms and the angle grows by angle_error per pi/2.
Mat2 electron_pulse(PulseAxis axis, double angle, const ImperfectPulseParams *noise);

struct NuclearRotation {
  std::array<Vec3, 2> axis{Vec3::UnitZ(), Vec3::UnitZ()};
  double angle = 0.0;  // per unit, [0, 2pi)
  double dot = 1.0;
  bool degenerate = false;
};

struct GateDecomposition {
  double unit_time = 0.0;
  int repeats = 0;
  std::vector<NuclearRotation> nuclei;
};

/// Per-unit branch operators R_j(t/4) R_{1-j}(t/2) R_j(t/4).
std::array<Mat2, 2> unit_branch_ops(const ConditionalFrame &f, double t);
NuclearRotation decompose_unit(const ConditionalFrame &f, double t);
NuclearRotation decompose_unit(const RegisterConfig &cfg, int nucleus, double t);

/// Per-nucleus branch operators R_{n_j}(N phi) of the whole sequence.
std::vector<std::array<Mat2, 2>> dd_branch_ops(const RegisterConfig &cfg, double t, int repeats);

struct DDUnitary {
  Mat unitary;
  GateDecomposition decomposition;
};
DDUnitary dd_unitary_analytic(const RegisterConfig &cfg, double t, int repeats);

/// Ordered product of free-evolution segments and electron pi pulses.
Mat dd_unitary_pulsed(const RegisterConfig &cfg, const PulseSchedule &schedule,
                      const ImperfectPulseParams *noise = nullptr);

struct Resonance {
  int m = 0;
  double t_approx = 0.0;
  double t_refined = 0.0;
  double dot = 0.0;  // at t_refined
};

/// t_m = 4 pi m / (omega_0 + omega_1). Odd m are refined to the minimum of
/// dot + 1; even m to the point where the rotation axis lies in the xy-plane.
std::vector<Resonance> resonance_times(const RegisterConfig &cfg, int nucleus,
                                       const std::vector<int> &m_values);
double resonance_approx(const RegisterConfig &cfg, int nucleus, int m);

struct AlignmentRow {
  double t = 0.0;
  std::vector<double> dot;
  std::vector<double> phi;
};
std::vector<AlignmentRow> axis_alignment_scan(const RegisterConfig &cfg, double t_lo, double t_hi,
                                              double step, int threads = 0);

}  // namespace ddreg

#endif
