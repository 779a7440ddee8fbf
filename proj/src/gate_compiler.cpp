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

#include "ddreg/gate_compiler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ddreg/entanglement.hpp"
#include "ddreg/numerics.hpp"

namespace ddreg {

std::string to_string(GateKind k) {
  switch (k) {
    case GateKind::ConditionalX:
      return "CX";
    case GateKind::UnconditionalX:
      return "X";
    case GateKind::Z:
      return "Z";
    case GateKind::ParallelEntangler:
      return "parallel-entangler";
    case GateKind::ParallelZ:
      return "parallel-Z";
  }
  return "?";
}

double CalibrationEntry::max_angular_error() const {
  double m = 0.0;
  for (double e : angular_error) {
    m = std::max(m, e);
  }
  return m;
}

namespace {

struct UnitGeometry {
  double angle = 0.0;  // [0, pi]
  Vec3 axis0 = Vec3::UnitZ();
  Vec3 axis1 = Vec3::UnitZ();
  double dot = 1.0;
};

UnitGeometry unit_geometry(const ConditionalFrame &f, double t) {
  auto ops = unit_branch_ops(f, t);
  AxisAngle a0 = axis_angle(canonical_su2(ops[0]));
  AxisAngle a1 = axis_angle(canonical_su2(ops[1]));
  UnitGeometry g;
  g.angle = a0.angle;
  g.axis0 = a0.axis;
  g.axis1 = a1.axis;
  g.dot = (a0.degenerate || a1.degenerate) ? 1.0 : a0.axis.dot(a1.axis);
  return g;
}

CalibrationEntry single_entry(const RegisterConfig &cfg, GateKind kind, int nucleus, int order,
                              double target_angle, double t, int repeats_override = -1) {
  ConditionalFrame f = build_frame(cfg, nucleus);
  UnitGeometry g = unit_geometry(f, t);
  CalibrationEntry e;
  e.kind = kind;
  e.targets = {nucleus};
  e.target_names = {cfg.nuclei.at(nucleus).name};
  e.target_angle = target_angle;
  e.order = order;
  e.unit_time = t;
  double target = std::abs(target_angle);
  if (repeats_override >= 0) {
    e.repeats = repeats_override;
  } else if (target == 0.0) {
    e.repeats = 0;
  } else {
    if (g.angle < 1e-12) {
      throw DomainError("rotation angle per unit vanishes at t = " + std::to_string(t) +
                        " us; axis is undefined");
    }
    e.repeats = round_half_away(target / g.angle);
  }
  e.total_time = e.repeats * t;
  e.unit_angle = {g.angle};
  e.unit_axis = {g.axis0};
  e.angular_error = {std::abs(e.repeats * g.angle - target)};
  e.achieved_dot = {g.dot};
  return e;
}

int check_order(int order) {
  if (order < 1) {
    throw ValidationError("resonance order k must be >= 1");
  }
  return order;
}

// Sign-change points of g on a sorted grid, refined by bisection.
double bisect_root(const std::function<double(double)> &g, double a, double b) {
  double ga = g(a);
  for (int it = 0; it < 80 && b - a > 1e-12; ++it) {
    double m = 0.5 * (a + b);
    double gm = g(m);
    if ((gm < 0) == (ga < 0)) {
      a = m;
      ga = gm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

CalibrationEntry calibrate_conditional_x(const RegisterConfig &cfg, int nucleus, int order,
                                         double target_angle) {
  check_order(order);
  int m = 2 * order - 1;
  double t = resonance_times(cfg, nucleus, {m}).front().t_refined;
  return single_entry(cfg, GateKind::ConditionalX, nucleus, order, target_angle, t);
}

CalibrationEntry calibrate_unconditional_x(const RegisterConfig &cfg, int nucleus, int order,
                                           double target_angle) {
  check_order(order);
  int m = 2 * order;
  double t = resonance_times(cfg, nucleus, {m}).front().t_refined;
  return single_entry(cfg, GateKind::UnconditionalX, nucleus, order, target_angle, t);
}

CalibrationEntry calibrate_z(const RegisterConfig &cfg, int nucleus, double target_angle,
                             int n_fixed, TimeWindow window) {
  if (n_fixed < 1) {
    throw ValidationError("calibrate_z: N must be >= 1");
  }
  if (!(window.lo > 0.0) || !(window.hi > window.lo)) {
    throw ValidationError("calibrate_z: invalid time window");
  }
  ConditionalFrame f = build_frame(cfg, nucleus);
  double target = std::abs(target_angle);
  if (target == 0.0) {
    return single_entry(cfg, GateKind::Z, nucleus, 0, target_angle, window.lo, 0);
  }
  auto admissible = [&](double t) {
    UnitGeometry g = unit_geometry(f, t);
    return std::abs(g.axis0.z()) > 0.99 && std::abs(g.axis1.z()) > 0.99;
  };
  auto cost = [&](double t) { return std::abs(n_fixed * unit_geometry(f, t).angle - target); };
  std::vector<double> grid = linspace_step(window.lo, window.hi, 1e-4);
  double best_t = -1.0;
  double best_c = std::numeric_limits<double>::infinity();
  for (double t : grid) {
    if (!admissible(t)) {
      continue;
    }
    double c = cost(t);
    if (c < best_c) {
      best_c = c;
      best_t = t;
    }
  }
  if (best_t < 0) {
    std::ostringstream os;
    os << "no admissible Z-gate time in [" << window.lo << ", " << window.hi << "] us for "
       << cfg.nuclei.at(nucleus).name;
    throw DomainError(os.str());
  }
  double lo = std::max(window.lo, best_t - 1e-4);
  double hi = std::min(window.hi, best_t + 1e-4);
  double t = golden_section_minimize(cost, lo, hi, 1e-10);
  if (!admissible(t) || cost(t) > best_c) {
    t = best_t;
  }
  return single_entry(cfg, GateKind::Z, nucleus, 0, target_angle, t, n_fixed);
}

CalibrationEntry design_parallel_entangler(const RegisterConfig &cfg,
                                           const std::vector<int> &targets,
                                           const EntanglerOptions &opts) {
  if (targets.size() < 2) {
    throw ValidationError("parallel entangler needs at least two targets");
  }
  std::vector<int> sorted = targets;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ValidationError("duplicate target");
  }
  for (int q : targets) {
    if (q < 0 || q >= cfg.num_nuclei()) {
      throw ValidationError("target index out of range");
    }
  }
  TimeWindow range;
  if (opts.window) {
    range = *opts.window;
  } else {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (int q : targets) {
      double t1 = resonance_approx(cfg, q, 1);
      lo = std::min(lo, t1);
      hi = std::max(hi, t1);
    }
    range = {0.8 * lo, 1.2 * hi};
  }
  auto frames = build_frames(cfg);
  std::vector<char> is_target(cfg.num_nuclei(), 0);
  for (int q : targets) {
    is_target[q] = 1;
  }
  // Signed margin: positive inside the isolated window.
  auto margin = [&](double t) {
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < cfg.num_nuclei(); ++i) {
      double d = decompose_unit(frames[i], t).dot;
      m = std::min(m, is_target[i] ? -d : d + 1e-15);
    }
    return m;
  };
  std::vector<double> grid = linspace_step(range.lo, range.hi, opts.grid_step);
  std::vector<double> g(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { g[i] = margin(grid[i]); });
  // Collect maximal runs of grid points inside the window.
  std::vector<std::pair<double, double>> windows;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (g[i] <= 0) {
      continue;
    }
    std::size_t j = i;
    while (j + 1 < grid.size() && g[j + 1] > 0) {
      ++j;
    }
    double a = i > 0 ? bisect_root(margin, grid[i - 1], grid[i]) : grid[i];
    double b = j + 1 < grid.size() ? bisect_root(margin, grid[j], grid[j + 1]) : grid[j];
    windows.emplace_back(a, b);
    i = j;
  }
  if (windows.empty()) {
    std::ostringstream os;
    os << "no parallel entangler exists for {";
    for (size_t k = 0; k < targets.size(); ++k) {
      os << (k ? "," : "") << cfg.nuclei[targets[k]].name;
    }
    os << "}: no common negative-dot window that leaves the other nuclei at dot >= 0";
    throw DomainError(os.str());
  }
  auto widest = std::max_element(windows.begin(), windows.end(), [](auto &x, auto &y) {
    return x.second - x.first < y.second - y.first;
  });
  double wa = widest->first;
  double wb = widest->second;
  double t = 0.5 * (wa + wb);
  if (targets.size() == 2) {
    auto diff = [&](double s) {
      return decompose_unit(frames[targets[0]], s).dot - decompose_unit(frames[targets[1]], s).dot;
    };
    std::vector<double> sub = linspace_step(wa, wb, std::max((wb - wa) / 200.0, 1e-9));
    double best_worst = std::numeric_limits<double>::infinity();
    bool found = false;
    for (std::size_t i = 0; i + 1 < sub.size(); ++i) {
      double da = diff(sub[i]);
      double db = diff(sub[i + 1]);
      if ((da < 0) != (db < 0) || da == 0.0) {
        double c = da == 0.0 ? sub[i] : bisect_root(diff, sub[i], sub[i + 1]);
        double worst = std::max(decompose_unit(frames[targets[0]], c).dot,
                                decompose_unit(frames[targets[1]], c).dot);
        if (worst < best_worst) {
          best_worst = worst;
          t = c;
          found = true;
        }
      }
    }
    if (!found) {
      t = golden_section_minimize(
          [&](double s) {
            return std::max(decompose_unit(frames[targets[0]], s).dot,
                            decompose_unit(frames[targets[1]], s).dot);
          },
          wa, wb, 1e-9);
    }
  }
  MetricScan scan = metric_scan(cfg, targets, {t}, 1, opts.n_max, 1);
  const MetricPoint &best = scan.points[scan.argmax];
  CalibrationEntry e;
  e.kind = GateKind::ParallelEntangler;
  e.targets = targets;
  for (int q : targets) {
    e.target_names.push_back(cfg.nuclei[q].name);
    UnitGeometry ug = unit_geometry(frames[q], t);
    e.unit_angle.push_back(ug.angle);
    e.unit_axis.push_back(ug.axis0);
    e.achieved_dot.push_back(ug.dot);
  }
  e.target_angle = kPi / 2.0;
  e.order = 1;
  e.unit_time = t;
  e.repeats = best.repeats;
  e.total_time = t * best.repeats;
  e.g1 = best.g1;
  e.epower = best.epower;
  e.residual_epower = best.residual_epower;
  return e;
}

CalibrationEntry design_parallel_z(const RegisterConfig &cfg, const std::vector<int> &targets,
                                   double target_angle, int n_fixed, TimeWindow window) {
  if (targets.empty()) {
    throw ValidationError("parallel Z needs at least one target");
  }
  if (targets.size() == 1) {
    CalibrationEntry e = calibrate_z(cfg, targets[0], target_angle, n_fixed, window);
    e.kind = GateKind::ParallelZ;
    RegisterConfig sub = cfg.subset(targets);
    Mat actual = conditional_unitary(dd_branch_ops(sub, e.unit_time, e.repeats));
    Mat ideal = kron(Mat::Identity(2, 2), rot_z(target_angle));
    e.process_fidelity = process_fidelity(ideal, actual);
    return e;
  }
  double t = 0.0;
  for (int q : targets) {
    t += calibrate_z(cfg, q, target_angle, n_fixed, window).unit_time;
  }
  t /= static_cast<double>(targets.size());
  CalibrationEntry e;
  e.kind = GateKind::ParallelZ;
  e.targets = targets;
  e.target_angle = target_angle;
  e.unit_time = t;
  e.repeats = target_angle == 0.0 ? 0 : n_fixed;
  e.total_time = t * e.repeats;
  for (int q : targets) {
    UnitGeometry g = unit_geometry(build_frame(cfg, q), t);
    e.target_names.push_back(cfg.nuclei[q].name);
    e.unit_angle.push_back(g.angle);
    e.unit_axis.push_back(g.axis0);
    e.achieved_dot.push_back(g.dot);
    e.angular_error.push_back(std::abs(e.repeats * g.angle - std::abs(target_angle)));
  }
  RegisterConfig sub = cfg.subset(targets);
  Mat actual = conditional_unitary(dd_branch_ops(sub, t, e.repeats));
  std::vector<Mat> ideal_factors{Mat::Identity(2, 2)};
  for (std::size_t k = 0; k < targets.size(); ++k) {
    ideal_factors.push_back(rot_z(target_angle));
  }
  e.process_fidelity = process_fidelity(tensor(ideal_factors), actual);
  return e;
}

int signed_repeats(const CalibrationEntry &entry, int target_slot, double angle) {
  if (angle == 0.0) {
    return 0;
  }
  double a = entry.unit_angle.at(target_slot);
  const Vec3 &n = entry.unit_axis.at(target_slot);
  double principal = entry.kind == GateKind::Z || entry.kind == GateKind::ParallelZ ? n.z() : n.x();
  double s = principal < 0 ? -1.0 : 1.0;
  return round_half_away(wrap_two_pi(s * angle) / a);
}

std::vector<CalibrationEntry> calibration_table(const RegisterConfig &cfg,
                                                const std::vector<int> &nuclei) {
  std::vector<CalibrationEntry> out;
  for (int q : nuclei) {
    out.push_back(calibrate_conditional_x(cfg, q, 2, kPi / 2.0));
  }
  for (int q : nuclei) {
    out.push_back(calibrate_unconditional_x(cfg, q, 2, kPi / 2.0));
  }
  for (int q : nuclei) {
    out.push_back(calibrate_z(cfg, q, kPi / 2.0));
  }
  return out;
}

FieldScan field_scan(const RegisterConfig &cfg, const std::vector<int> &nuclei, double b_lo,
                     double b_hi, double b_step, const std::vector<int> &orders, int threads) {
  if (!(b_lo > 0.0)) {
    throw ValidationError("field range must be positive");
  }
  if (nuclei.empty() || orders.empty()) {
    throw ValidationError("field_scan needs nuclei and orders");
  }
  for (int k : orders) {
    check_order(k);
  }
  std::vector<double> fields =
      b_hi > b_lo ? linspace_step(b_lo, b_hi, b_step) : std::vector<double>{b_lo};
  FieldScan scan;
  scan.nuclei = nuclei;
  scan.orders = orders;
  scan.rows.resize(fields.size());
  parallel_for(
      fields.size(),
      [&](std::size_t i) {
        RegisterConfig c = cfg.with_field(fields[i]);
        FieldScanRow &row = scan.rows[i];
        row.field = fields[i];
        double err_sum = 0.0;
        int err_count = 0;
        for (int q : nuclei) {
          ConditionalFrame f = build_frame(c, q);
          std::vector<FieldScanCell> cells;
          for (int k : orders) {
            FieldScanCell cell;
            double tc = resonance_approx(c, q, 2 * k - 1);
            UnitGeometry gc = unit_geometry(f, tc);
            cell.cx_repeats = std::max(1, round_half_away(kPi / 2.0 / gc.angle));
            cell.cx_time = cell.cx_repeats * tc;
            cell.cx_error = std::abs(cell.cx_repeats * gc.angle - kPi / 2.0);
            double tx = resonance_approx(c, q, 2 * k);
            UnitGeometry gx = unit_geometry(f, tx);
            cell.x_repeats = std::max(1, round_half_away(kPi / 2.0 / gx.angle));
            cell.x_time = cell.x_repeats * tx;
            cell.x_error = std::abs(cell.x_repeats * gx.angle - kPi / 2.0);
            cell.x_time_continuous = tx * (kPi / 2.0) / gx.angle;
            if (k <= 2) {
              err_sum += cell.cx_error;
              ++err_count;
            }
            cells.push_back(cell);
          }
          row.cells.push_back(cells);
        }
        row.mean_conditional_error = err_count ? err_sum / err_count : 0.0;
      },
      threads);
  std::vector<std::pair<double, double>> minima;
  for (std::size_t i = 1; i + 1 < scan.rows.size(); ++i) {
    double e = scan.rows[i].mean_conditional_error;
    if (e < scan.rows[i - 1].mean_conditional_error && e <= scan.rows[i + 1].mean_conditional_error) {
      minima.emplace_back(e, scan.rows[i].field);
    }
  }
  std::sort(minima.begin(), minima.end());
  for (const auto &[e, b] : minima) {
    scan.recommended.push_back(b);
  }
  return scan;
}

}  // namespace ddreg
