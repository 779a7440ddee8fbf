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

#include "ddreg/register_model.hpp"

#include <cmath>
#include <set>

namespace ddreg {

double NuclearSpec::strength() const { return std::hypot(a_par_khz, a_perp_khz); }

double khz_to_angular(double khz) { return kTwoPi * khz * 1e-3; }

void RegisterConfig::validate() const {
  if (!(field_gauss > 0.0)) {
    throw ValidationError("field_gauss must be positive");
  }
  if (!(gamma_khz_per_gauss > 0.0)) {
    throw ValidationError("gamma_khz_per_gauss must be positive");
  }
  if (s0 == s1) {
    throw ValidationError("spin projections s0 and s1 must differ");
  }
  std::set<std::string> names;
  for (const auto &n : nuclei) {
    if (n.name.empty()) {
      throw ValidationError("nucleus name must not be empty");
    }
    if (!names.insert(n.name).second) {
      throw ValidationError("duplicate nucleus name '" + n.name + "'");
    }
    if (n.a_perp_khz < 0.0) {
      throw ValidationError("a_perp_khz must be >= 0 for '" + n.name + "'");
    }
  }
}

double RegisterConfig::larmor() const {
  return khz_to_angular(gamma_khz_per_gauss * field_gauss);
}

int RegisterConfig::index_of(const std::string &name) const {
  for (size_t i = 0; i < nuclei.size(); ++i) {
    if (nuclei[i].name == name) {
      return static_cast<int>(i);
    }
  }
  throw ValidationError("unknown nucleus '" + name + "'");
}

std::vector<int> RegisterConfig::indices_of(const std::vector<std::string> &names) const {
  std::vector<int> out;
  for (const auto &n : names) {
    out.push_back(index_of(n));
  }
  return out;
}

RegisterConfig RegisterConfig::subset(const std::vector<int> &keep) const {
  RegisterConfig out = *this;
  out.nuclei.clear();
  for (int i : keep) {
    out.nuclei.push_back(nuclei.at(i));
  }
  return out;
}

RegisterConfig RegisterConfig::with_field(double field) const {
  RegisterConfig out = *this;
  out.field_gauss = field;
  return out;
}

RegisterConfig RegisterConfig::reference_default() {
  RegisterConfig cfg;
  cfg.nuclei = {
      {"q1", -118.8, 68.4},
      {"q2", -86.1, 58.3},
      {"q3", -46.4, 67.7},
      {"q4", 10.1, 25.4},
  };
  return cfg;
}

ConditionalFrame build_frame(const RegisterConfig &cfg, int nucleus) {
  const NuclearSpec &n = cfg.nuclei.at(nucleus);
  ConditionalFrame f;
  double wl = cfg.larmor();
  for (int j = 0; j < 2; ++j) {
    double s = cfg.spin_projection(j);
    Vec3 v(s * khz_to_angular(n.a_perp_khz), 0.0, wl + s * khz_to_angular(n.a_par_khz));
    f.omega[j] = v.norm();
    f.axis[j] = f.omega[j] > 0.0 ? Vec3(v / f.omega[j]) : Vec3(Vec3::UnitZ());
  }
  return f;
}

std::vector<ConditionalFrame> build_frames(const RegisterConfig &cfg) {
  std::vector<ConditionalFrame> out;
  for (int i = 0; i < cfg.num_nuclei(); ++i) {
    out.push_back(build_frame(cfg, i));
  }
  return out;
}

Mat2 branch_rotation(const ConditionalFrame &f, int branch, double t) {
  return rotation_matrix(f.axis[branch], f.omega[branch] * t);
}

Mat conditional_unitary(const std::vector<std::array<Mat2, 2>> &ops) {
  Eigen::Index half = Eigen::Index{1} << ops.size();
  Mat u = Mat::Zero(2 * half, 2 * half);
  for (int j = 0; j < 2; ++j) {
    std::vector<Mat> factors;
    for (const auto &o : ops) {
      factors.push_back(o[j]);
    }
    u.block(j * half, j * half, half, half) = tensor(factors);
  }
  return u;
}

Mat free_evolution(const RegisterConfig &cfg, double t) {
  if (t < 0.0) {
    throw ValidationError("free_evolution: t must be >= 0");
  }
  std::vector<std::array<Mat2, 2>> ops;
  for (const auto &f : build_frames(cfg)) {
    ops.push_back({branch_rotation(f, 0, t), branch_rotation(f, 1, t)});
  }
  return conditional_unitary(ops);
}

}  // namespace ddreg
