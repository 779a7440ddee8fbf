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

#include "ddreg/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ddreg/numerics.hpp"

namespace ddreg {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string targets_key(const std::vector<int> &targets) {
  std::ostringstream os;
  for (int t : targets) {
    os << t << ',';
  }
  return os.str();
}

// Electron-controlled X(+-angle) on the listed nuclei, identity elsewhere.
Mat ideal_conditional_x(int num_nuclei, const std::vector<int> &targets, double angle) {
  std::vector<std::array<Mat2, 2>> ops(num_nuclei, {Mat2::Identity(), Mat2::Identity()});
  for (int q : targets) {
    ops[q] = {rot_x(angle), rot_x(-angle)};
  }
  return conditional_unitary(ops);
}

void check_nucleus(const RegisterConfig &cfg, int q) {
  if (q < 0 || q >= cfg.num_nuclei()) {
    throw ValidationError("instruction targets unknown nucleus index " + std::to_string(q));
  }
}

}  // namespace

Circuit &Circuit::append(const Circuit &other) {
  instructions.insert(instructions.end(), other.instructions.begin(), other.instructions.end());
  return *this;
}

std::string instruction_name(const Instruction &i) {
  return std::visit(overloaded{
                        [](const ElectronRotation &) { return std::string("electron_rotation"); },
                        [](const NuclearLocal &) { return std::string("nuclear_local"); },
                        [](const ConditionalX &) { return std::string("conditional_x"); },
                        [](const ParallelEntangler &) { return std::string("parallel_entangler"); },
                        [](const ParallelZ &) { return std::string("parallel_z"); },
                        [](const ElectronReset &) { return std::string("electron_reset"); },
                        [](const MeasureZ &) { return std::string("measure_z"); },
                        [](const Depolarize &) { return std::string("depolarize"); },
                    },
                    i);
}

void Circuit::validate(const RegisterConfig &cfg) const {
  bool measured = false;
  for (const auto &ins : instructions) {
    bool is_marker = std::holds_alternative<MeasureZ>(ins);
    if (measured && !is_marker) {
      throw ValidationError("MeasureZ must be terminal");
    }
    measured = measured || is_marker;
    std::visit(overloaded{
                   [&](const ElectronRotation &g) {
                     if (g.axis != 'X' && g.axis != 'Y' && g.axis != 'Z') {
                       throw ValidationError("electron rotation axis must be X, Y or Z");
                     }
                   },
                   [&](const NuclearLocal &g) {
                     check_nucleus(cfg, g.target);
                     if (g.kind != 'X' && g.kind != 'Z') {
                       throw ValidationError("nuclear local kind must be X or Z");
                     }
                   },
                   [&](const ConditionalX &g) { check_nucleus(cfg, g.target); },
                   [&](const ParallelEntangler &g) {
                     if (g.targets.empty()) {
                       throw ValidationError("parallel entangler without targets");
                     }
                     for (int q : g.targets) {
                       check_nucleus(cfg, q);
                     }
                   },
                   [&](const ParallelZ &g) {
                     if (g.targets.empty()) {
                       throw ValidationError("parallel Z without targets");
                     }
                     for (int q : g.targets) {
                       check_nucleus(cfg, q);
                     }
                   },
                   [&](const ElectronReset &) {},
                   [&](const MeasureZ &g) {
                     if (g.subject < 0 || g.subject >= cfg.num_qubits()) {
                       throw ValidationError("MeasureZ subject out of range");
                     }
                   },
                   [&](const Depolarize &g) {
                     if (g.qubit < 0 || g.qubit >= cfg.num_qubits()) {
                       throw ValidationError("depolarize qubit out of range");
                     }
                     if (g.p < 0.0 || g.p > 1.0) {
                       throw ValidationError("depolarizing probability must be in [0, 1]");
                     }
                   },
               },
               ins);
  }
}

std::string to_string(BackendMode m) {
  switch (m) {
    case BackendMode::Ideal:
      return "ideal";
    case BackendMode::Compiled:
      return "compiled";
    case BackendMode::CompiledNoisy:
      return "compiled+noise";
  }
  return "?";
}

BackendMode parse_backend_mode(const std::string &s) {
  if (s == "ideal") {
    return BackendMode::Ideal;
  }
  if (s == "compiled") {
    return BackendMode::Compiled;
  }
  if (s == "compiled+noise" || s == "noisy") {
    return BackendMode::CompiledNoisy;
  }
  throw ValidationError("unknown backend '" + s + "' (ideal, compiled, compiled+noise)");
}

Backend::Backend(RegisterConfig cfg, BackendOptions opts)
    : cfg_(std::move(cfg)), opts_(std::move(opts)) {
  cfg_.validate();
  opts_.noise.validate();
  if (!(opts_.phase_resolution > 0.0)) {
    throw ValidationError("phase resolution must be positive");
  }
}

const CalibrationEntry &Backend::cached_entry(
    const std::string &key, const std::function<CalibrationEntry()> &make) const {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = entries_.find(key);
    if (it != entries_.end()) {
      return *it->second;
    }
  }
  auto entry = std::make_unique<CalibrationEntry>(make());
  std::lock_guard<std::mutex> lock(mutex_);
  auto [it, inserted] = entries_.emplace(key, std::move(entry));
  return *it->second;
}

const CalibrationEntry &Backend::conditional_x_entry(int nucleus) const {
  return cached_entry("cx:" + std::to_string(nucleus), [&] {
    return calibrate_conditional_x(cfg_, nucleus, opts_.cx_order, kPi / 2.0);
  });
}

const CalibrationEntry &Backend::local_entry(int nucleus, char kind) const {
  if (kind == 'X') {
    return cached_entry("x:" + std::to_string(nucleus), [&] {
      return calibrate_unconditional_x(cfg_, nucleus, opts_.x_order, kPi / 2.0);
    });
  }
  if (kind == 'Z') {
    return cached_entry("z:" + std::to_string(nucleus), [&] {
      return calibrate_z(cfg_, nucleus, kPi / 2.0, 4, opts_.z_window);
    });
  }
  throw ValidationError("nuclear local kind must be X or Z");
}

const CalibrationEntry &Backend::parallel_entangler_entry(const std::vector<int> &targets) const {
  if (targets.size() == 1) {
    return conditional_x_entry(targets[0]);
  }
  return cached_entry("pe:" + targets_key(targets),
                      [&] { return design_parallel_entangler(cfg_, targets); });
}

const CalibrationEntry &Backend::parallel_z_entry(const std::vector<int> &targets) const {
  return cached_entry("pz:" + targets_key(targets), [&] {
    return design_parallel_z(cfg_, targets, opts_.phase_resolution, 1, opts_.z_window);
  });
}

Mat Backend::electron_gate(char axis, double angle) const {
  int nq = num_qubits();
  const ImperfectPulseParams *noise =
      opts_.mode == BackendMode::CompiledNoisy ? &opts_.noise : nullptr;
  switch (axis) {
    case 'X':
      return embed(electron_pulse(PulseAxis::X, angle, noise), 0, nq);
    case 'Y':
      return embed(electron_pulse(PulseAxis::Y, angle, noise), 0, nq);
    case 'Z':
      // Virtual phase; exact in every backend.
      return embed(rot_z(angle), 0, nq);
    default:
      throw ValidationError("electron rotation axis must be X, Y or Z");
  }
}

Mat Backend::dd_gate(double t, int repeats) const {
  auto key = std::make_pair(std::llround(t * 1e12), repeats);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = dd_cache_.find(key);
    if (it != dd_cache_.end()) {
      return it->second;
    }
  }
  Mat u;
  if (opts_.mode == BackendMode::CompiledNoisy) {
    u = dd_unitary_pulsed(cfg_, PulseSchedule::build(t, repeats), &opts_.noise);
  } else {
    u = conditional_unitary(dd_branch_ops(cfg_, t, repeats));
  }
  std::lock_guard<std::mutex> lock(mutex_);
  dd_cache_.emplace(key, u);
  return u;
}

int Backend::local_repeats(const NuclearLocal &g) const {
  if (g.repeats >= 0) {
    return g.repeats;
  }
  return signed_repeats(local_entry(g.target, g.kind), 0, g.angle);
}

double Backend::local_step(int nucleus, char kind) const {
  const CalibrationEntry &e = local_entry(nucleus, kind);
  const Vec3 &axis = e.unit_axis[0];
  double s = (kind == 'X' ? axis.x() : axis.z()) < 0 ? -1.0 : 1.0;
  if (opts_.mode == BackendMode::Ideal) {
    return s * e.target_angle / e.repeats;
  }
  return s * e.unit_angle[0];
}

int Backend::local_period(int nucleus, char kind) const {
  return round_half_away(kTwoPi / std::abs(local_step(nucleus, kind)));
}

bool Backend::is_unitary_instruction(const Instruction &ins) const {
  return !(std::holds_alternative<ElectronReset>(ins) || std::holds_alternative<MeasureZ>(ins) ||
           std::holds_alternative<Depolarize>(ins));
}

Mat Backend::ideal_unitary(const Instruction &ins) const {
  int nn = cfg_.num_nuclei();
  int nq = num_qubits();
  return std::visit(
      overloaded{
          [&](const ElectronRotation &g) -> Mat {
            RotationOp r;
            r.axis = g.axis == 'X' ? Vec3::UnitX() : g.axis == 'Y' ? Vec3::UnitY() : Vec3::UnitZ();
            r.angle = g.angle;
            return embed(rotation_matrix(r), 0, nq);
          },
          [&](const NuclearLocal &g) -> Mat {
            double angle = g.repeats >= 0 ? g.repeats * local_step(g.target, g.kind) : g.angle;
            return embed(g.kind == 'X' ? rot_x(angle) : rot_z(angle), g.target + 1, nq);
          },
          [&](const ConditionalX &g) -> Mat { return ideal_conditional_x(nn, {g.target}, g.angle); },
          [&](const ParallelEntangler &g) -> Mat {
            return ideal_conditional_x(nn, g.targets, kPi / 2.0);
          },
          [&](const ParallelZ &g) -> Mat {
            Mat u = Mat::Identity(Eigen::Index{1} << nq, Eigen::Index{1} << nq);
            for (int q : g.targets) {
              u = embed(rot_z(g.angle), q + 1, nq) * u;
            }
            return u;
          },
          [&](const auto &) -> Mat { throw ValidationError("instruction is not a unitary gate"); },
      },
      ins);
}

Mat Backend::compiled_unitary(const Instruction &ins) const {
  return std::visit(
      overloaded{
          [&](const ElectronRotation &g) -> Mat { return electron_gate(g.axis, g.angle); },
          [&](const NuclearLocal &g) -> Mat {
            const CalibrationEntry &e = local_entry(g.target, g.kind);
            return dd_gate(e.unit_time, local_repeats(g));
          },
          [&](const ConditionalX &g) -> Mat {
            const CalibrationEntry &e = conditional_x_entry(g.target);
            int n = round_half_away(std::abs(g.angle) / e.unit_angle[0]);
            Mat u = dd_gate(e.unit_time, n);
            // The sequence realizes CX(s * N * phi) with s the sign of the
            // branch-0 axis along x; flip direction with electron pi pulses.
            double s = e.unit_axis[0].x() < 0 ? -1.0 : 1.0;
            if (s * g.angle < 0) {
              Mat flip = electron_gate('X', kPi);
              u = flip * u * flip;
            }
            return u;
          },
          [&](const ParallelEntangler &g) -> Mat {
            if (g.targets.size() == 1) {
              return compiled_unitary(ConditionalX{g.targets[0], kPi / 2.0});
            }
            const CalibrationEntry &e = parallel_entangler_entry(g.targets);
            return dd_gate(e.unit_time, e.repeats);
          },
          [&](const ParallelZ &g) -> Mat {
            const CalibrationEntry &e = parallel_z_entry(g.targets);
            int n = round_half_away(wrap_two_pi(g.angle) / opts_.phase_resolution);
            return dd_gate(e.unit_time, n);
          },
          [&](const auto &) -> Mat { throw ValidationError("instruction is not a unitary gate"); },
      },
      ins);
}

Mat Backend::unitary(const Instruction &ins) const {
  if (opts_.mode == BackendMode::Ideal) {
    return ideal_unitary(ins);
  }
  return compiled_unitary(ins);
}

DensityState apply_unitary(const DensityState &s, const Mat &u) {
  return DensityState(u * s.matrix() * u.adjoint());
}

DensityState electron_reset(const DensityState &s) {
  int n = s.num_qubits();
  Mat zero = Mat::Zero(2, 2);
  zero(0, 0) = 1.0;
  if (n == 1) {
    return DensityState(zero);
  }
  std::vector<int> keep;
  for (int q = 1; q < n; ++q) {
    keep.push_back(q);
  }
  return DensityState(kron(zero, partial_trace(s, keep).matrix()));
}

DensityState depolarize(const DensityState &s, int qubit, double p) {
  int n = s.num_qubits();
  Mat out = (1.0 - 0.75 * p) * s.matrix();
  for (int k = 1; k <= 3; ++k) {
    Mat op = embed(pauli(k), qubit, n);
    out += (p / 4.0) * op * s.matrix() * op.adjoint();
  }
  return DensityState(out);
}

DensityState apply_instruction(const DensityState &s, const Instruction &ins, const Backend &b) {
  if (s.num_qubits() != b.num_qubits()) {
    throw ValidationError("state size does not match the register");
  }
  if (std::holds_alternative<ElectronReset>(ins)) {
    return electron_reset(s);
  }
  if (std::holds_alternative<MeasureZ>(ins)) {
    return s;
  }
  if (const auto *d = std::get_if<Depolarize>(&ins)) {
    return depolarize(s, d->qubit, d->p);
  }
  return apply_unitary(s, b.unitary(ins));
}

DensityState run_circuit(const Circuit &c, const Backend &b, const DensityState &initial) {
  c.validate(b.config());
  DensityState s = initial;
  for (const auto &ins : c.instructions) {
    s = apply_instruction(s, ins, b);
    if (std::abs(s.matrix().trace().real() - 1.0) > 1e-10) {
      throw DomainError("trace not preserved after " + instruction_name(ins));
    }
#ifndef NDEBUG
    s.validate(1e-9);
#endif
  }
  return s;
}

DensityState thermal_register(int num_nuclei) { return polarized_register(num_nuclei, {}); }

DensityState polarized_register(int num_nuclei, const std::vector<int> &polarized) {
  Mat zero = Mat::Zero(2, 2);
  zero(0, 0) = 1.0;
  Mat mixed = Mat::Identity(2, 2) / 2.0;
  std::vector<Mat> factors{zero};
  for (int q = 0; q < num_nuclei; ++q) {
    bool pol = std::find(polarized.begin(), polarized.end(), q) != polarized.end();
    factors.push_back(pol ? zero : mixed);
  }
  return DensityState::product(factors);
}

double z_expectation(const DensityState &s, int qubit) {
  DensityState r = partial_trace(s, {qubit});
  return (r.matrix()(0, 0) - r.matrix()(1, 1)).real();
}

}  // namespace ddreg
