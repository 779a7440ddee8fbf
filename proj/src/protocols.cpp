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

#include "ddreg/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ddreg/analysis.hpp"
#include "ddreg/numerics.hpp"

namespace ddreg {

namespace {

// Product of the unitary instructions of `c`, in time order.
Mat circuit_unitary(const Circuit &c, const Backend &b) {
  int dim = 1 << b.num_qubits();
  Mat u = Mat::Identity(dim, dim);
  for (const auto &ins : c.instructions) {
    u = b.unitary(ins) * u;
  }
  return u;
}

std::vector<int> reduced_qubits(const std::vector<int> &targets) {
  std::vector<int> keep{0};
  for (int q : targets) {
    keep.push_back(q + 1);
  }
  return keep;
}

BackendOptions mode_options(BackendMode m) {
  BackendOptions o;
  o.mode = m;
  return o;
}

}  // namespace

Circuit swap_init(int nucleus) {
  Circuit c;
  c.add(ElectronRotation{'X', kPi / 2.0})
      .add(ConditionalX{nucleus, kPi / 2.0})
      .add(ElectronRotation{'Y', kPi / 2.0})
      .add(NuclearLocal{nucleus, 'Z', -kPi / 2.0})
      .add(ConditionalX{nucleus, kPi / 2.0})
      .add(ElectronReset{});
  return c;
}

Circuit tomography_circuit(int nucleus, char basis) {
  // Y_e(pi/2), exp(-i pi/4 Z_e P_n), X_e(pi/2) sends <P_n> to <Z_e>. The
  // nuclear locals rotate X onto P; the trailing inverse locals only touch the
  // nucleus and are dropped.
  Circuit c;
  c.add(ElectronReset{}).add(ElectronRotation{'Y', kPi / 2.0});
  switch (basis) {
    case 'X':
      break;
    case 'Y':
      c.add(NuclearLocal{nucleus, 'Z', -kPi / 2.0});
      break;
    case 'Z':
      c.add(NuclearLocal{nucleus, 'X', -kPi / 2.0}).add(NuclearLocal{nucleus, 'Z', -kPi / 2.0});
      break;
    default:
      throw ValidationError("tomography basis must be X, Y or Z");
  }
  c.add(ConditionalX{nucleus, kPi / 2.0}).add(ElectronRotation{'X', kPi / 2.0});
  c.add(MeasureZ{0});
  return c;
}

std::vector<SpectroscopyPoint> dd_spectroscopy(const RegisterConfig &cfg,
                                               const std::vector<double> &t_grid, int repeats,
                                               const std::vector<int> &include, bool simulate,
                                               const ImperfectPulseParams *noise, int threads) {
  if (include.empty()) {
    throw ValidationError("spectroscopy needs at least one nucleus");
  }
  if (repeats < 0) {
    throw ValidationError("repeats must be non-negative");
  }
  RegisterConfig sub = cfg.subset(include);
  int nn = sub.num_nuclei();
  Mat plus = Mat::Constant(2, 2, 0.5);
  std::vector<Mat> factors{plus};
  for (int i = 0; i < nn; ++i) {
    factors.push_back(Mat::Identity(2, 2) / 2.0);
  }
  DensityState rho0 = DensityState::product(factors);

  std::vector<SpectroscopyPoint> out(t_grid.size());
  parallel_for(
      t_grid.size(),
      [&](std::size_t i) {
        double t = t_grid[i];
        if (!(t > 0.0)) {
          throw ValidationError("spectroscopy times must be positive");
        }
        SpectroscopyPoint &p = out[i];
        p.t = t;
        cplx prod = 1.0;
        for (const auto &ops : dd_branch_ops(sub, t, repeats)) {
          prod *= (ops[0] * ops[1].adjoint()).trace() / 2.0;
        }
        p.closed_form = 0.5 * (1.0 + prod.real());
        p.simulated = std::numeric_limits<double>::quiet_NaN();
        if (simulate) {
          Mat u = dd_unitary_pulsed(sub, PulseSchedule::build(t, repeats), noise);
          DensityState r = partial_trace(apply_unitary(rho0, u), {0});
          p.simulated = 0.5 + r.matrix()(0, 1).real();
        }
      },
      threads);
  return out;
}

std::string to_string(MqcMode m) {
  switch (m) {
    case MqcMode::Bipartite:
      return "bipartite";
    case MqcMode::Sequential:
      return "sequential";
    case MqcMode::Parallel:
      return "parallel";
  }
  return "?";
}

MqcMode parse_mqc_mode(const std::string &s) {
  if (s == "bipartite") {
    return MqcMode::Bipartite;
  }
  if (s == "sequential") {
    return MqcMode::Sequential;
  }
  if (s == "parallel") {
    return MqcMode::Parallel;
  }
  throw ValidationError("unknown MQC mode '" + s + "' (bipartite, sequential, parallel)");
}

void MqcSetup::validate(const RegisterConfig &cfg) const {
  if (targets.empty()) {
    throw ValidationError("MQC needs at least one target");
  }
  if (mode == MqcMode::Bipartite && targets.size() != 1) {
    throw ValidationError("bipartite MQC takes exactly one target");
  }
  std::vector<int> sorted = targets;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ValidationError("duplicate MQC target");
  }
  for (int q : targets) {
    if (q < 0 || q >= cfg.num_nuclei()) {
      throw ValidationError("MQC target out of range");
    }
  }
  if (prep) {
    if (prep->x_repeats.size() != targets.size() || prep->z_repeats.size() != targets.size()) {
      throw ValidationError("local prep needs one X and one Z count per target");
    }
    for (std::size_t i = 0; i < targets.size(); ++i) {
      if (prep->x_repeats[i] < 0 || prep->z_repeats[i] < 0) {
        throw ValidationError("local prep repeat counts must be non-negative");
      }
    }
  }
  if (spam_depolarize < 0.0 || spam_depolarize > 1.0) {
    throw ValidationError("SPAM depolarizing probability must be in [0, 1]");
  }
}

Circuit entangler_circuit(MqcMode mode, const std::vector<int> &targets) {
  Circuit c;
  if (mode == MqcMode::Parallel) {
    c.add(ParallelEntangler{targets});
  } else {
    for (int q : targets) {
      c.add(ConditionalX{q, kPi / 2.0});
    }
  }
  return c;
}

Circuit initialization_circuit(const MqcSetup &s) {
  Circuit c;
  for (int q : s.targets) {
    c.append(swap_init(q));
  }
  if (s.spam_depolarize > 0.0) {
    c.add(Depolarize{0, s.spam_depolarize});
    for (int q : s.targets) {
      c.add(Depolarize{q + 1, s.spam_depolarize});
    }
  }
  return c;
}

Circuit local_prep_circuit(const MqcSetup &s) {
  Circuit c;
  for (std::size_t i = 0; i < s.targets.size(); ++i) {
    int q = s.targets[i];
    if (s.prep) {
      c.add(NuclearLocal{q, 'X', 0.0, s.prep->x_repeats[i]});
      c.add(NuclearLocal{q, 'Z', 0.0, s.prep->z_repeats[i]});
    } else {
      c.add(NuclearLocal{q, 'X', kPi / 2.0});
    }
  }
  return c;
}

DensityState mqc_initialized_state(const Backend &b, const MqcSetup &s) {
  s.validate(b.config());
  return run_circuit(initialization_circuit(s), b, thermal_register(b.config().num_nuclei()));
}

DensityState mqc_entangled_state(const Backend &b, const MqcSetup &s) {
  Circuit c = local_prep_circuit(s);
  c.add(ElectronRotation{'Y', kPi / 2.0});
  c.append(entangler_circuit(s.mode, s.targets));
  return run_circuit(c, b, mqc_initialized_state(b, s));
}

std::vector<double> mqc_phase_grid(double resolution, double max_phase) {
  if (!(resolution > 0.0) || max_phase < 0.0) {
    throw ValidationError("phase grid needs a positive resolution and non-negative range");
  }
  int n = static_cast<int>(std::floor(max_phase / resolution + 1e-9));
  std::vector<double> out;
  for (int i = 0; i <= n; ++i) {
    out.push_back(i * resolution);
  }
  return out;
}

std::vector<MqcPoint> mqc_experiment(const Backend &b, const MqcSetup &s,
                                     const std::vector<double> &phi_grid, int threads) {
  if (b.mode() != BackendMode::Ideal) {
    double res = b.options().phase_resolution;
    for (double phi : phi_grid) {
      double k = phi / res;
      if (std::abs(k - std::round(k)) > 1e-9) {
        throw ValidationError("phase " + std::to_string(phi) +
                              " is not a multiple of the phase-gate resolution");
      }
    }
  }
  DensityState entangled = mqc_entangled_state(b, s);
  Circuit tail = entangler_circuit(s.mode, s.targets);
  tail.add(ElectronRotation{'Y', -kPi / 2.0});
  Mat u_tail = circuit_unitary(tail, b);

  std::vector<MqcPoint> out(phi_grid.size());
  parallel_for(
      phi_grid.size(),
      [&](std::size_t i) {
        Mat u = u_tail * b.unitary(ParallelZ{s.targets, phi_grid[i]});
        DensityState r = apply_unitary(entangled, u);
        if (s.spam_depolarize > 0.0) {
          r = depolarize(r, 0, s.spam_depolarize);
        }
        out[i] = {phi_grid[i], 0.5 * (1.0 + z_expectation(r, 0))};
      },
      threads);
  return out;
}

double ghz_fidelity(const DensityState &s, const std::vector<int> &targets) {
  DensityState r = partial_trace(s, reduced_qubits(targets));
  int l = static_cast<int>(targets.size());
  Eigen::Index a = (Eigen::Index{1} << l) - 1;  // |0, 1..1>
  Eigen::Index b = Eigen::Index{1} << l;        // |1, 0..0>
  const Mat &m = r.matrix();
  return 0.5 * (m(a, a).real() + m(b, b).real()) + std::abs(m(a, b));
}

Circuit repetition_unit(MqcMode mode, const std::vector<int> &targets) {
  Circuit c;
  c.add(ElectronRotation{'Y', kPi / 2.0});
  c.append(entangler_circuit(mode, targets));
  c.add(ElectronRotation{'Y', -kPi / 2.0});
  return c;
}

std::vector<RepetitionRow> repetition_experiment(const Backend &b, MqcMode mode,
                                                 const std::vector<int> &targets,
                                                 const std::vector<int> &n_e_list, int threads) {
  MqcSetup setup;
  setup.mode = mode;
  setup.targets = targets;
  setup.validate(b.config());
  for (int n : n_e_list) {
    if (n < 0) {
      throw ValidationError("N_E must be non-negative");
    }
  }
  Mat u = circuit_unitary(repetition_unit(mode, targets), b);
  DensityState s = polarized_register(b.config().num_nuclei(), targets);
  std::vector<int> order = n_e_list;
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());

  std::vector<DensityState> states;
  int applied = 0;
  for (int n : order) {
    for (; applied < n; ++applied) {
      s = apply_unitary(s, u);
    }
    states.push_back(s);
  }

  std::vector<RepetitionRow> rows(order.size());
  parallel_for(
      order.size(),
      [&](std::size_t i) {
        RepetitionRow &row = rows[i];
        row.n_e = order[i];
        row.z.push_back(z_expectation(states[i], 0));
        for (int q : targets) {
          if (b.mode() == BackendMode::Ideal) {
            row.z.push_back(z_expectation(states[i], q + 1));
          } else {
            DensityState m = run_circuit(tomography_circuit(q, 'Z'), b, states[i]);
            row.z.push_back(z_expectation(m, 0));
          }
        }
        row.reduced = partial_trace(states[i], reduced_qubits(targets));
        row.f_approx = state_fidelity_approx(row.z);
        row.f_exact = state_fidelity_exact(row.reduced);
      },
      threads);
  return rows;
}

std::vector<DensityState> ideal_repetition_states(const RegisterConfig &cfg, MqcMode mode,
                                                  const std::vector<int> &targets,
                                                  const std::vector<int> &n_e_list) {
  std::vector<DensityState> out;
  if (mode == MqcMode::Parallel && targets.size() > 1) {
    CalibrationEntry e = design_parallel_entangler(cfg, targets);
    RegisterConfig sub = cfg.subset(targets);
    Backend iso(sub, mode_options(BackendMode::Compiled));
    int nq = sub.num_qubits();
    Mat u = embed(rot_y(-kPi / 2.0), 0, nq) * iso.dd_gate(e.unit_time, e.repeats) *
            embed(rot_y(kPi / 2.0), 0, nq);
    for (int n : n_e_list) {
      Mat un = Mat::Identity(Eigen::Index{1} << nq, Eigen::Index{1} << nq);
      for (int k = 0; k < n; ++k) {
        un = u * un;
      }
      out.push_back(apply_unitary(DensityState::basis(nq, 0), un));
    }
    return out;
  }
  Backend ideal(cfg, mode_options(BackendMode::Ideal));
  for (const auto &row : repetition_experiment(ideal, mode, targets, n_e_list, 1)) {
    out.push_back(row.reduced);
  }
  // repetition_experiment sorts and deduplicates; map back to the given order.
  std::vector<int> order = n_e_list;
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());
  std::vector<DensityState> mapped;
  for (int n : n_e_list) {
    auto it = std::lower_bound(order.begin(), order.end(), n);
    mapped.push_back(out[it - order.begin()]);
  }
  return mapped;
}

std::vector<int> select_parallel_repeats(const RegisterConfig &cfg,
                                         const std::vector<int> &targets, int n_max, int count) {
  if (n_max < 1 || count < 1 || count > n_max) {
    throw ValidationError("select_parallel_repeats: need 1 <= count <= n_max");
  }
  std::vector<int> sweep;
  for (int n = 1; n <= n_max; ++n) {
    sweep.push_back(n);
  }
  auto states = ideal_repetition_states(cfg, MqcMode::Parallel, targets, sweep);
  std::vector<std::pair<double, int>> scored;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    scored.emplace_back(state_fidelity_exact(states[i]), sweep[i]);
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto &a, const auto &b) { return a.first > b.first; });
  std::vector<int> best;
  for (int i = 0; i < count; ++i) {
    best.push_back(scored[i].second);
  }
  std::sort(best.begin(), best.end());
  return best;
}

}  // namespace ddreg
