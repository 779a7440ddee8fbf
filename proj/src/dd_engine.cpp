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

#include "ddreg/dd_engine.hpp"

#include <cmath>

#include "ddreg/numerics.hpp"

namespace ddreg {

std::string to_string(SequenceFamily f) {
  switch (f) {
    case SequenceFamily::CPMG:
      return "CPMG";
    case SequenceFamily::XY4:
      return "XY4";
    case SequenceFamily::XY6:
      return "XY6";
    case SequenceFamily::XY8:
      return "XY8";
  }
  return "?";
}

std::string to_string(PulseAxis a) { return a == PulseAxis::X ? "X" : "Y"; }

std::vector<PulseAxis> family_axes(SequenceFamily f) {
  constexpr auto X = PulseAxis::X;
  constexpr auto Y = PulseAxis::Y;
  switch (f) {
    case SequenceFamily::CPMG:
      return {X, X};
    case SequenceFamily::XY4:
      return {X, Y, X, Y};
    case SequenceFamily::XY6:
      // Palindromic so the electron frame returns to itself.
      return {X, Y, X, X, Y, X};
    case SequenceFamily::XY8:
      return {X, Y, X, Y, Y, X, Y, X};
  }
  return {};
}

int family_units(SequenceFamily f) { return static_cast<int>(family_axes(f).size()) / 2; }

PulseSchedule PulseSchedule::build(double t, int repeats) {
  if (!(t > 0.0)) {
    throw ValidationError("unit time must be positive");
  }
  if (repeats < 0) {
    throw ValidationError("repeats must be >= 0");
  }
  PulseSchedule s;
  s.unit_time = t;
  s.repeats = repeats;
  if (int blocks = repeats / 4; blocks > 0) {
    s.family_plan.emplace_back(SequenceFamily::XY8, blocks);
  }
  switch (repeats % 4) {
    case 1:
      s.family_plan.emplace_back(SequenceFamily::CPMG, 1);
      break;
    case 2:
      s.family_plan.emplace_back(SequenceFamily::XY4, 1);
      break;
    case 3:
      s.family_plan.emplace_back(SequenceFamily::XY6, 1);
      break;
    default:
      break;
  }
  int unit = 0;
  for (const auto &[family, count] : s.family_plan) {
    auto axes = family_axes(family);
    for (int b = 0; b < count; ++b) {
      for (size_t p = 0; p < axes.size(); p += 2) {
        double start = unit * t;
        s.timeline.push_back({start + t / 4.0, axes[p]});
        s.timeline.push_back({start + 3.0 * t / 4.0, axes[p + 1]});
        ++unit;
      }
    }
  }
  return s;
}

void PulseSchedule::validate() const {
  int units = 0;
  for (const auto &[family, count] : family_plan) {
    if (count < 0) {
      throw ValidationError("negative family count");
    }
    units += family_units(family) * count;
  }
  if (units != repeats) {
    throw ValidationError("family plan does not consume exactly N units");
  }
  if (static_cast<int>(timeline.size()) != 2 * repeats) {
    throw ValidationError("timeline must hold 2N pulses");
  }
  double prev = 0.0;
  for (size_t i = 0; i < timeline.size(); ++i) {
    double expected = (i == 0) ? unit_time / 4.0 : unit_time / 2.0;
    if (std::abs(timeline[i].time - prev - expected) > 1e-9) {
      throw ValidationError("timeline spacing is not t/4 - t/2 - ... - t/4");
    }
    prev = timeline[i].time;
  }
  if (repeats > 0 && std::abs(total_time() - prev - unit_time / 4.0) > 1e-9) {
    throw ValidationError("timeline does not end with a t/4 delay");
  }
}

bool ImperfectPulseParams::is_zero() const {
  for (const PulseError *e : {&x_half, &x_pi, &y_half, &y_pi}) {
    if (e->angle_error != 0.0 || e->off_a != 0.0 || e->off_b != 0.0) {
      return false;
    }
  }
  return true;
}

void ImperfectPulseParams::validate() const {
  for (const PulseError *e : {&x_half, &x_pi, &y_half, &y_pi}) {
    if (e->off_a * e->off_a + e->off_b * e->off_b > 1.0) {
      throw ValidationError("off-axis components exceed unit norm");
    }
  }
}

ImperfectPulseParams ImperfectPulseParams::uniform(double angle_error, double off_axis) {
  PulseError e{angle_error, 0.0, off_axis};
  return {e, e, e, e};
}

Mat2 electron_pulse(PulseAxis axis, double angle, const ImperfectPulseParams *noise) {
  if (noise == nullptr || noise->is_zero()) {
    return axis == PulseAxis::X ? rot_x(angle) : rot_y(angle);
  }
  bool pi_gate = std::abs(angle) > 0.75 * kPi;
  const PulseError &e = axis == PulseAxis::X ? (pi_gate ? noise->x_pi : noise->x_half)
                                             : (pi_gate ? noise->y_pi : noise->y_half);
  double main = std::sqrt(std::max(0.0, 1.0 - e.off_a * e.off_a - e.off_b * e.off_b));
  Vec3 n = axis == PulseAxis::X ? Vec3(main, e.off_a, e.off_b) : Vec3(e.off_a, main, e.off_b);
  n.normalize();
  // pi/2 gates rotate by pi/2 + err, pi gates by pi + 2 err.
  double actual = angle + std::copysign(e.angle_error * std::abs(angle) / (kPi / 2.0), angle);
  return rotation_matrix(n, actual);
}

std::array<Mat2, 2> unit_branch_ops(const ConditionalFrame &f, double t) {
  std::array<Mat2, 2> out;
  for (int j = 0; j < 2; ++j) {
    Mat2 q = branch_rotation(f, j, t / 4.0);
    out[j] = q * branch_rotation(f, 1 - j, t / 2.0) * q;
  }
  return out;
}

namespace {

NuclearRotation decompose_ops(const std::array<Mat2, 2> &ops) {
  NuclearRotation r;
  AxisAngle a0 = axis_angle(ops[0]);
  AxisAngle a1 = axis_angle(ops[1]);
  r.axis = {a0.axis, a1.axis};
  r.angle = a0.angle;
  r.degenerate = a0.degenerate || a1.degenerate;
  r.dot = r.degenerate ? 1.0 : a0.axis.dot(a1.axis);
  return r;
}

}  // namespace

NuclearRotation decompose_unit(const ConditionalFrame &f, double t) {
  return decompose_ops(unit_branch_ops(f, t));
}

NuclearRotation decompose_unit(const RegisterConfig &cfg, int nucleus, double t) {
  return decompose_unit(build_frame(cfg, nucleus), t);
}

std::vector<std::array<Mat2, 2>> dd_branch_ops(const RegisterConfig &cfg, double t, int repeats) {
  if (repeats < 0) {
    throw ValidationError("repeats must be >= 0");
  }
  std::vector<std::array<Mat2, 2>> out;
  for (const auto &f : build_frames(cfg)) {
    NuclearRotation r = decompose_unit(f, t);
    // A degenerate unit is +-identity; the z axis with angle 0 or 2pi reproduces it.
    out.push_back({rotation_matrix(r.axis[0], repeats * r.angle),
                   rotation_matrix(r.axis[1], repeats * r.angle)});
  }
  return out;
}

DDUnitary dd_unitary_analytic(const RegisterConfig &cfg, double t, int repeats) {
  if (!(t > 0.0)) {
    throw ValidationError("unit time must be positive");
  }
  DDUnitary out;
  out.decomposition.unit_time = t;
  out.decomposition.repeats = repeats;
  for (const auto &f : build_frames(cfg)) {
    out.decomposition.nuclei.push_back(decompose_unit(f, t));
  }
  out.unitary = conditional_unitary(dd_branch_ops(cfg, t, repeats));
  return out;
}

Mat dd_unitary_pulsed(const RegisterConfig &cfg, const PulseSchedule &schedule,
                      const ImperfectPulseParams *noise) {
  schedule.validate();
  int nq = cfg.num_qubits();
  Eigen::Index dim = Eigen::Index{1} << nq;
  Mat u = Mat::Identity(dim, dim);
  if (schedule.repeats == 0) {
    return u;
  }
  double t = schedule.unit_time;
  Mat quarter = free_evolution(cfg, t / 4.0);
  Mat half = free_evolution(cfg, t / 2.0);
  Mat px = embed(electron_pulse(PulseAxis::X, kPi, noise), 0, nq);
  Mat py = embed(electron_pulse(PulseAxis::Y, kPi, noise), 0, nq);
  u = quarter;
  for (size_t i = 0; i < schedule.timeline.size(); ++i) {
    const Mat &p = schedule.timeline[i].axis == PulseAxis::X ? px : py;
    u = p * u;
    u = (i + 1 == schedule.timeline.size() ? quarter : half) * u;
  }
  return u;
}

double resonance_approx(const RegisterConfig &cfg, int nucleus, int m) {
  if (m < 1) {
    throw ValidationError("resonance index m must be >= 1");
  }
  ConditionalFrame f = build_frame(cfg, nucleus);
  return 4.0 * kPi * m / (f.omega[0] + f.omega[1]);
}

std::vector<Resonance> resonance_times(const RegisterConfig &cfg, int nucleus,
                                       const std::vector<int> &m_values) {
  ConditionalFrame f = build_frame(cfg, nucleus);
  std::vector<Resonance> out;
  for (int m : m_values) {
    Resonance r;
    r.m = m;
    r.t_approx = resonance_approx(cfg, nucleus, m);
    double lo = 0.98 * r.t_approx;
    double hi = 1.02 * r.t_approx;
    if (m % 2 == 1) {
      r.t_refined = golden_section_minimize(
          [&](double t) { return decompose_unit(f, t).dot + 1.0; }, lo, hi, 1e-6);
    } else {
      // Maximizing dot runs into the window edge: away from the resonance both
      // axes drift toward z together. The even resonance is instead where the
      // (unconditional) rotation axis is purely transverse.
      r.t_refined = golden_section_minimize(
          [&](double t) {
            AxisAngle a = axis_angle(canonical_su2(unit_branch_ops(f, t)[0]));
            return std::abs(a.axis.z());
          },
          lo, hi, 1e-6);
    }
    r.dot = decompose_unit(f, r.t_refined).dot;
    out.push_back(r);
  }
  return out;
}

std::vector<AlignmentRow> axis_alignment_scan(const RegisterConfig &cfg, double t_lo, double t_hi,
                                              double step, int threads) {
  if (!(t_lo > 0.0)) {
    throw ValidationError("scan times must be positive");
  }
  std::vector<double> grid = linspace_step(t_lo, t_hi, step);
  auto frames = build_frames(cfg);
  std::vector<AlignmentRow> rows(grid.size());
  parallel_for(
      grid.size(),
      [&](std::size_t i) {
        AlignmentRow &row = rows[i];
        row.t = grid[i];
        for (const auto &f : frames) {
          NuclearRotation r = decompose_unit(f, grid[i]);
          row.dot.push_back(r.dot);
          row.phi.push_back(r.angle);
        }
      },
      threads);
  return rows;
}

}  // namespace ddreg
