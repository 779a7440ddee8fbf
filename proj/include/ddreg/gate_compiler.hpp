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

#ifndef DDREG_GATE_COMPILER_HPP
#define DDREG_GATE_COMPILER_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ddreg/dd_engine.hpp"
#include "ddreg/register_model.hpp"

namespace ddreg {

enum class GateKind { ConditionalX, UnconditionalX, Z, ParallelEntangler, ParallelZ };
std::string to_string(GateKind k);

struct CalibrationEntry {
  GateKind kind = GateKind::ConditionalX;
  std::vector<int> targets;
  std::vector<std::string> target_names;
  double target_angle = 0.0;
  int order = 0;
  double unit_time = 0.0;
  int repeats = 0;
  double total_time = 0.0;
  /// Per target: rotation angle of one unit, sign-fixed to [0, pi].
  std::vector<double> unit_angle;
  /// Per target: branch-0 rotation axis of one unit (sign-fixed with unit_angle).
  std::vector<Vec3> unit_axis;
  /// Per target: |N * unit_angle - target_angle|.
  std::vector<double> angular_error;
  std::vector<double> achieved_dot;
  std::vector<double> g1;
  std::optional<double> epower;
  std::optional<double> residual_epower;
  std::optional<double> process_fidelity;

  PulseSchedule schedule() const { return PulseSchedule::build(unit_time, repeats); }
  double max_angular_error() const;
};

/// CX at the odd resonance m = 2k - 1.
CalibrationEntry calibrate_conditional_x(const RegisterConfig &cfg, int nucleus, int order,
                                         double target_angle);
/// Unconditional X at the even resonance m = 2k.
CalibrationEntry calibrate_unconditional_x(const RegisterConfig &cfg, int nucleus, int order,
                                           double target_angle);

struct TimeWindow {
  double lo = 0.10;
  double hi = 0.25;
};
/// Off-resonant Z: t in the window minimizing |N_fixed * phi - target| with a
/// z-dominant axis (|n_z| > 0.99) in both branches.
CalibrationEntry calibrate_z(const RegisterConfig &cfg, int nucleus, double target_angle,
                             int n_fixed = 4, TimeWindow window = {});

struct EntanglerOptions {
  /// Search range for the common negative-dot window; empty uses 0.8..1.2 of
  /// the targets' first-order resonance times.
  std::optional<TimeWindow> window;
  double grid_step = 1e-4;
  int n_max = 12;
};
/// Throws DomainError when no window exists where all targets have dot < 0 and
/// every other nucleus has dot >= 0.
CalibrationEntry design_parallel_entangler(const RegisterConfig &cfg,
                                           const std::vector<int> &targets,
                                           const EntanglerOptions &opts = {});

/// Parallel Z: t = mean of per-target Z times, N per target_angle / phi.
/// process_fidelity is against I_e (x) Z_theta^{(x) L} on electron + targets.
CalibrationEntry design_parallel_z(const RegisterConfig &cfg, const std::vector<int> &targets,
                                   double target_angle, int n_fixed = 4, TimeWindow window = {});

/// Repeats realizing a signed rotation `angle` about the gate's principal
/// axis, wrapping through 2pi when the unit rotates the other way.
int signed_repeats(const CalibrationEntry &entry, int target_slot, double angle);

/// Nine-row gate table (CX and X at order 2, Z at N = 4) for the given nuclei.
std::vector<CalibrationEntry> calibration_table(const RegisterConfig &cfg,
                                                const std::vector<int> &nuclei);

struct FieldScanCell {
  double cx_time = 0.0;
  int cx_repeats = 0;
  double cx_error = 0.0;
  double x_time = 0.0;  // N * t
  int x_repeats = 0;
  double x_error = 0.0;
  double x_time_continuous = 0.0;  // t * (pi/2) / phi
};

struct FieldScanRow {
  double field = 0.0;
  /// cells[nucleus slot][order - 1]
  std::vector<std::vector<FieldScanCell>> cells;
  double mean_conditional_error = 0.0;  // orders 1 and 2
};

struct FieldScan {
  std::vector<int> nuclei;
  std::vector<int> orders;
  std::vector<FieldScanRow> rows;
  /// Local minima of mean_conditional_error, ascending by error.
  std::vector<double> recommended;
};

FieldScan field_scan(const RegisterConfig &cfg, const std::vector<int> &nuclei, double b_lo,
                     double b_hi, double b_step, const std::vector<int> &orders = {1, 2, 3},
                     int threads = 0);

}  // namespace ddreg

#endif
