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

#include "ddreg/entanglement.hpp"

#include <algorithm>
#include <cmath>

#include "ddreg/dd_engine.hpp"
#include "ddreg/numerics.hpp"

namespace ddreg {

double makhlin_g1(double dot, double total_angle) {
  double a = wrap_two_pi(total_angle);
  double c = std::cos(a / 2.0);
  double s = std::sin(a / 2.0);
  double v = c * c + dot * s * s;
  return v * v;
}

double nucleus_g1(const RegisterConfig &cfg, int nucleus, double t, int repeats) {
  if (repeats == 0) {
    return 1.0;
  }
  NuclearRotation r = decompose_unit(cfg, nucleus, t);
  return makhlin_g1(r.dot, repeats * r.angle);
}

namespace {

void check_targets(const RegisterConfig &cfg, const std::vector<int> &targets) {
  if (targets.empty()) {
    throw ValidationError("target set is empty");
  }
  for (int q : targets) {
    if (q < 0 || q >= cfg.num_nuclei()) {
      throw ValidationError("target index out of range");
    }
  }
}

}  // namespace

double entangling_power(const RegisterConfig &cfg, const std::vector<int> &targets, double t,
                        int repeats, bool normalized) {
  check_targets(cfg, targets);
  double e = 1.0;
  for (int q : targets) {
    e *= 1.0 - nucleus_g1(cfg, q, t, repeats);
  }
  if (!normalized) {
    e *= std::pow(2.0 / 3.0, static_cast<double>(targets.size() + 1));
  }
  return e;
}

int strongest_spectator(const RegisterConfig &cfg, const std::vector<int> &targets) {
  int best = -1;
  for (int i = 0; i < cfg.num_nuclei(); ++i) {
    if (std::find(targets.begin(), targets.end(), i) != targets.end()) {
      continue;
    }
    if (best < 0 || cfg.nuclei[i].strength() > cfg.nuclei[best].strength()) {
      best = i;
    }
  }
  if (best < 0) {
    throw ValidationError("no spectator nucleus outside the target set");
  }
  return best;
}

double residual_entangling_power(const RegisterConfig &cfg, const std::vector<int> &targets,
                                 double t, int repeats) {
  check_targets(cfg, targets);
  std::vector<int> ext = targets;
  ext.push_back(strongest_spectator(cfg, targets));
  return entangling_power(cfg, ext, t, repeats);
}

MetricScan metric_scan(const RegisterConfig &cfg, const std::vector<int> &targets,
                       const std::vector<double> &t_grid, int n_min, int n_max, int threads) {
  check_targets(cfg, targets);
  if (t_grid.empty() || n_max < n_min || n_min < 0) {
    throw ValidationError("metric_scan: empty t grid or N range");
  }
  bool has_spectator = static_cast<int>(targets.size()) < cfg.num_nuclei();
  int spectator = has_spectator ? strongest_spectator(cfg, targets) : -1;
  int n_count = n_max - n_min + 1;
  MetricScan scan;
  scan.points.resize(t_grid.size() * n_count);
  std::vector<char> negative(t_grid.size(), 0);
  parallel_for(
      t_grid.size(),
      [&](std::size_t i) {
        double t = t_grid[i];
        std::vector<NuclearRotation> rot;
        bool all_negative = true;
        for (int q : targets) {
          rot.push_back(decompose_unit(cfg, q, t));
          all_negative = all_negative && rot.back().dot < 0.0;
        }
        negative[i] = all_negative;
        std::optional<NuclearRotation> spec;
        if (spectator >= 0) {
          spec = decompose_unit(cfg, spectator, t);
        }
        for (int k = 0; k < n_count; ++k) {
          int n = n_min + k;
          MetricPoint &p = scan.points[i * n_count + k];
          p.t = t;
          p.repeats = n;
          p.epower = 1.0;
          for (const auto &r : rot) {
            double g = n == 0 ? 1.0 : makhlin_g1(r.dot, n * r.angle);
            p.g1.push_back(g);
            p.epower *= 1.0 - g;
          }
          if (spec) {
            double g = n == 0 ? 1.0 : makhlin_g1(spec->dot, n * spec->angle);
            p.residual_epower = p.epower * (1.0 - g);
          }
        }
      },
      threads);
  scan.maximal_entangler = std::any_of(negative.begin(), negative.end(), [](char c) { return c; });
  // Sequential argmax keeps ties deterministic: shortest N*t wins.
  for (std::size_t i = 1; i < scan.points.size(); ++i) {
    const MetricPoint &a = scan.points[i];
    const MetricPoint &b = scan.points[scan.argmax];
    if (a.epower > b.epower + 1e-12 ||
        (std::abs(a.epower - b.epower) <= 1e-12 && a.repeats * a.t < b.repeats * b.t)) {
      scan.argmax = i;
    }
  }
  return scan;
}

}  // namespace ddreg
