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

#ifndef DDREG_REGISTER_MODEL_HPP
#define DDREG_REGISTER_MODEL_HPP

#include <array>
#include <string>
#include <vector>

#include "ddreg/spin_core.hpp"

namespace ddreg {

/// Hyperfine couplings are ordinary frequencies in kHz.
struct NuclearSpec {
  std::string name;
  double a_par_khz = 0.0;
  double a_perp_khz = 0.0;

  /// |A| in kHz; used to rank coupling strength.
  double strength() const;
};

/// Register layout: qubit 0 is the electron, qubit 1 + i is nuclei[i].
struct RegisterConfig {
  double field_gauss = 338.0;
  double gamma_khz_per_gauss = 1.07084;
  double s0 = 0.0;
  double s1 = -1.0;
  std::vector<NuclearSpec> nuclei;

  void validate() const;
  int num_nuclei() const { return static_cast<int>(nuclei.size()); }
  int num_qubits() const { return num_nuclei() + 1; }
  /// Angular Larmor frequency in rad/us.
  double larmor() const;
  /// Index into `nuclei`; throws ValidationError for unknown names.
  int index_of(const std::string &name) const;
  std::vector<int> indices_of(const std::vector<std::string> &names) const;
  double spin_projection(int branch) const { return branch == 0 ? s0 : s1; }

  /// Copy restricted to the listed nuclei, in the listed order.
  RegisterConfig subset(const std::vector<int> &keep) const;
  RegisterConfig with_field(double field) const;

  /// The four-nucleus register at 338 G used throughout the tests.
  static RegisterConfig reference_default();
};

/// kHz -> rad/us.
double khz_to_angular(double khz);

struct ConditionalFrame {
  std::array<double, 2> omega{};  // rad/us
  std::array<Vec3, 2> axis{Vec3::UnitZ(), Vec3::UnitZ()};
};

ConditionalFrame build_frame(const RegisterConfig &cfg, int nucleus);
std::vector<ConditionalFrame> build_frames(const RegisterConfig &cfg);

/// Free precession of one nucleus for time t with the electron in `branch`.
Mat2 branch_rotation(const ConditionalFrame &f, int branch, double t);

/// Block-diagonal unitary sum_j |j><j| (x) prod_l ops[j][l].
Mat conditional_unitary(const std::vector<std::array<Mat2, 2>> &ops);

/// Free evolution of the whole register for time t (us).
Mat free_evolution(const RegisterConfig &cfg, double t);

}  // namespace ddreg

#endif
