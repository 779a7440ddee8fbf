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

#ifndef DDREG_ENTANGLEMENT_HPP
#define DDREG_ENTANGLEMENT_HPP

#include <optional>
#include <vector>

#include "ddreg/register_model.hpp"

namespace ddreg {

/// (cos^2(a/2) + dot sin^2(a/2))^2 with a = total angle reduced mod 2pi.
double makhlin_g1(double dot, double total_angle);

/// G1 of one nucleus for the (t, N) sequence.
double nucleus_g1(const RegisterConfig &cfg, int nucleus, double t, int repeats);

/// prod_l (1 - G1_l); with normalized = false the (2/3)^M prefactor is applied,
/// M = |targets| + 1.
double entangling_power(const RegisterConfig &cfg, const std::vector<int> &targets, double t,
                        int repeats, bool normalized = true);

/// Strongest (largest |A|) nucleus not in targets; throws ValidationError if none.
int strongest_spectator(const RegisterConfig &cfg, const std::vector<int> &targets);

/// entangling_power with the strongest spectator appended to the targets.
double residual_entangling_power(const RegisterConfig &cfg, const std::vector<int> &targets,
                                 double t, int repeats);

struct MetricPoint {
  double t = 0.0;
  int repeats = 0;
  std::vector<double> g1;
  double epower = 0.0;
  std::optional<double> residual_epower;
};

struct MetricScan {
  std::vector<MetricPoint> points;  // t-major, then N ascending
  std::size_t argmax = 0;
  /// False when every target keeps dot >= 0 over the whole scan.
  bool maximal_entangler = true;
};

MetricScan metric_scan(const RegisterConfig &cfg, const std::vector<int> &targets,
                       const std::vector<double> &t_grid, int n_min, int n_max, int threads = 0);

}  // namespace ddreg

#endif
