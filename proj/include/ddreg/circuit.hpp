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

#ifndef DDREG_CIRCUIT_HPP
#define DDREG_CIRCUIT_HPP

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <variant>
#include <vector>

#include "ddreg/dd_engine.hpp"
#include "ddreg/gate_compiler.hpp"
#include "ddreg/register_model.hpp"

namespace ddreg {

// Nucleus indices below refer to RegisterConfig::nuclei; register qubit = index + 1.

struct ElectronRotation {
  char axis = 'X';  // 'X', 'Y' or 'Z'
  double angle = 0.0;
};

struct NuclearLocal {
  int target = 0;
  char kind = 'X';  // 'X' or 'Z'
  double angle = 0.0;
  /// Explicit unit count for compiled backends; -1 derives it from angle.
  int repeats = -1;
};

/// |0><0| (x) X(angle) + |1><1| (x) X(-angle)
struct ConditionalX {
  int target = 0;
  double angle = kPi / 2.0;
};

struct ParallelEntangler {
  std::vector<int> targets;
};

struct ParallelZ {
  std::vector<int> targets;
  double angle = 0.0;
};

/// rho -> |0><0|_e (x) Tr_e(rho)
struct ElectronReset {};

/// Marker only; the state is left untouched. subject = register qubit index.
struct MeasureZ {
  int subject = 0;
};

/// Single-qubit depolarizing channel on register qubit `qubit`.
struct Depolarize {
  int qubit = 0;
  double p = 0.0;
};

using Instruction = std::variant<ElectronRotation, NuclearLocal, ConditionalX, ParallelEntangler,
                                 ParallelZ, ElectronReset, MeasureZ, Depolarize>;

struct Circuit {
  std::vector<Instruction> instructions;

  Circuit &add(Instruction i) {
    instructions.push_back(std::move(i));
    return *this;
  }
  Circuit &append(const Circuit &other);
  std::size_t size() const { return instructions.size(); }
  /// Throws ValidationError for bad targets or a MeasureZ followed by gates.
  void validate(const RegisterConfig &cfg) const;
};

std::string instruction_name(const Instruction &i);

enum class BackendMode { Ideal, Compiled, CompiledNoisy };
std::string to_string(BackendMode m);
BackendMode parse_backend_mode(const std::string &s);

struct BackendOptions {
  BackendMode mode = BackendMode::Ideal;
  ImperfectPulseParams noise;
  int cx_order = 2;
  int x_order = 2;
  TimeWindow z_window;
  /// Angle of one parallel-Z unit.
  double phase_resolution = kPi / 6.0;
};

/// Maps instructions to register unitaries. Calibrations and gate unitaries are
/// computed on first use and cached; the cache is guarded so a backend can be
/// shared between threads.
class Backend {
 public:
  Backend(RegisterConfig cfg, BackendOptions opts = {});

  const RegisterConfig &config() const { return cfg_; }
  const BackendOptions &options() const { return opts_; }
  BackendMode mode() const { return opts_.mode; }
  int num_qubits() const { return cfg_.num_qubits(); }

  /// Unitary of a gate instruction. Throws ValidationError for channels.
  Mat unitary(const Instruction &ins) const;
  bool is_unitary_instruction(const Instruction &ins) const;

  const CalibrationEntry &conditional_x_entry(int nucleus) const;
  const CalibrationEntry &local_entry(int nucleus, char kind) const;
  const CalibrationEntry &parallel_entangler_entry(const std::vector<int> &targets) const;
  const CalibrationEntry &parallel_z_entry(const std::vector<int> &targets) const;

  /// Register unitary of the DD sequence (t, N) in this backend's mode.
  Mat dd_gate(double t, int repeats) const;
  Mat electron_gate(char axis, double angle) const;

  /// Unit count a NuclearLocal resolves to in compiled modes.
  int local_repeats(const NuclearLocal &g) const;
  /// Signed rotation per unit of a calibrated local gate about its principal
  /// axis. Ideal mode uses target_angle / repeats, so the calibrated count is exact.
  double local_step(int nucleus, char kind) const;
  /// Units spanning one 2pi rotation; the search bound for local preparations.
  int local_period(int nucleus, char kind) const;

 private:
  Mat ideal_unitary(const Instruction &ins) const;
  Mat compiled_unitary(const Instruction &ins) const;
  const CalibrationEntry &cached_entry(const std::string &key,
                                       const std::function<CalibrationEntry()> &make) const;

  RegisterConfig cfg_;
  BackendOptions opts_;
  mutable std::mutex mutex_;
  mutable std::map<std::string, std::unique_ptr<CalibrationEntry>> entries_;
  mutable std::map<std::pair<long long, int>, Mat> dd_cache_;
};

/// rho -> U rho U^dag
DensityState apply_unitary(const DensityState &s, const Mat &u);
DensityState electron_reset(const DensityState &s);
DensityState depolarize(const DensityState &s, int qubit, double p);

DensityState apply_instruction(const DensityState &s, const Instruction &ins, const Backend &b);
DensityState run_circuit(const Circuit &c, const Backend &b, const DensityState &initial);

/// Electron |0>, every nucleus maximally mixed.
DensityState thermal_register(int num_nuclei);
/// Electron |0>, listed nuclei |0>, others maximally mixed.
DensityState polarized_register(int num_nuclei, const std::vector<int> &polarized);

/// <Z> of register qubit q.
double z_expectation(const DensityState &s, int qubit);

}  // namespace ddreg

#endif
