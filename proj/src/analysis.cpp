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

#include "ddreg/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include <unsupported/Eigen/LevenbergMarquardt>
#include <unsupported/Eigen/NumericalDiff>

#include "ddreg/entanglement.hpp"
#include "ddreg/numerics.hpp"

namespace ddreg {

namespace {

using LmStatus = Eigen::LevenbergMarquardtSpace::Status;

bool lm_failed(LmStatus s) {
  return s == Eigen::LevenbergMarquardtSpace::ImproperInputParameters ||
         s == Eigen::LevenbergMarquardtSpace::TooManyFunctionEvaluation ||
         s == Eigen::LevenbergMarquardtSpace::UserAsked;
}

// Parameters: [c, a1, f1, d1, a2, f2, d2, ...].
struct SinusoidFunctor : Eigen::DenseFunctor<double> {
  const std::vector<double> &phi;
  const std::vector<double> &p;
  int tones;

  SinusoidFunctor(const std::vector<double> &phi_, const std::vector<double> &p_, int tones_)
      : DenseFunctor<double>(1 + 3 * tones_, static_cast<int>(phi_.size())),
        phi(phi_),
        p(p_),
        tones(tones_) {}

  int operator()(const Eigen::VectorXd &x, Eigen::VectorXd &f) const {
    for (std::size_t i = 0; i < phi.size(); ++i) {
      double v = x[0];
      for (int k = 0; k < tones; ++k) {
        v += x[1 + 3 * k] * std::cos(x[2 + 3 * k] * phi[i] - x[3 + 3 * k]);
      }
      f[i] = v - p[i];
    }
    return 0;
  }

  int df(const Eigen::VectorXd &x, Eigen::MatrixXd &j) const {
    for (std::size_t i = 0; i < phi.size(); ++i) {
      j(i, 0) = 1.0;
      for (int k = 0; k < tones; ++k) {
        double a = x[1 + 3 * k];
        double arg = x[2 + 3 * k] * phi[i] - x[3 + 3 * k];
        j(i, 1 + 3 * k) = std::cos(arg);
        j(i, 2 + 3 * k) = -a * phi[i] * std::sin(arg);
        j(i, 3 + 3 * k) = a * std::sin(arg);
      }
    }
    return 0;
  }
};

struct LinearTones {
  double rss = 0.0;
  Eigen::VectorXd coef;  // [c, cos1, sin1, cos2, sin2, ...]
};

LinearTones linear_tones(const std::vector<double> &phi, const std::vector<double> &p,
                         const std::vector<double> &freqs) {
  Eigen::Index n = static_cast<Eigen::Index>(phi.size());
  Eigen::MatrixXd a(n, 1 + 2 * freqs.size());
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, 0) = 1.0;
    for (std::size_t k = 0; k < freqs.size(); ++k) {
      a(i, 1 + 2 * k) = std::cos(freqs[k] * phi[i]);
      a(i, 2 + 2 * k) = std::sin(freqs[k] * phi[i]);
    }
    y[i] = p[i];
  }
  LinearTones out;
  out.coef = a.colPivHouseholderQr().solve(y);
  out.rss = (a * out.coef - y).squaredNorm();
  return out;
}

// Covariance s^2 (J^T J)^{-1}; zero when there are no spare degrees of freedom.
Eigen::MatrixXd covariance(const Eigen::MatrixXd &j, double rss) {
  Eigen::Index dof = j.rows() - j.cols();
  double s2 = dof > 0 ? rss / static_cast<double>(dof) : 0.0;
  Eigen::MatrixXd jtj = j.transpose() * j;
  return s2 * jtj.completeOrthogonalDecomposition().pseudoInverse();
}

}  // namespace

double MqcModel::operator()(double phi) const {
  double v = offset;
  for (const auto &t : tones) {
    v += t.amplitude * std::cos(t.frequency * phi - t.phase);
  }
  return v;
}

const Tone &MqcModel::dominant() const {
  if (tones.empty()) {
    throw DomainError("model has no tones");
  }
  return *std::max_element(tones.begin(), tones.end(), [](const Tone &a, const Tone &b) {
    return a.amplitude < b.amplitude;
  });
}

MqcModel fit_sinusoid(const std::vector<double> &phi, const std::vector<double> &p,
                      const SinusoidFitOptions &opts) {
  if (phi.size() != p.size()) {
    throw ValidationError("fit_sinusoid: phi and signal lengths differ");
  }
  if (opts.tones != 1 && opts.tones != 2) {
    throw ValidationError("fit_sinusoid: tones must be 1 or 2");
  }
  std::size_t n_params = 1 + 3 * opts.tones;
  if (phi.size() < std::max<std::size_t>(8, n_params + 1)) {
    throw ValidationError("fit_sinusoid: need at least 8 points");
  }
  auto [lo, hi] = std::minmax_element(phi.begin(), phi.end());
  double f_min = opts.initial_frequency.value_or(opts.f_lo);
  if (f_min > 0 && *hi - *lo < kTwoPi / f_min - 1e-9) {
    throw ValidationError("fit_sinusoid: data must span at least one period");
  }

  auto freqs_for = [&](double f1) {
    std::vector<double> f{f1};
    if (opts.tones == 2) {
      f.push_back(f1 + 2.0);
    }
    return f;
  };
  std::vector<std::pair<double, double>> candidates;  // (rss, f1)
  if (opts.initial_frequency) {
    candidates.emplace_back(0.0, *opts.initial_frequency);
  } else {
    for (double f : linspace_step(opts.f_lo, opts.f_hi, opts.f_step)) {
      candidates.emplace_back(linear_tones(phi, p, freqs_for(f)).rss, f);
    }
    std::stable_sort(candidates.begin(), candidates.end());
    // Keep distinct local starts rather than neighbours of the same minimum.
    std::vector<std::pair<double, double>> distinct;
    for (const auto &c : candidates) {
      bool near = std::any_of(distinct.begin(), distinct.end(), [&](const auto &d) {
        return std::abs(d.second - c.second) < 0.25;
      });
      if (!near) {
        distinct.push_back(c);
      }
      if (static_cast<int>(distinct.size()) >= opts.restarts) {
        break;
      }
    }
    candidates = distinct;
  }

  SinusoidFunctor functor(phi, p, opts.tones);
  std::optional<MqcModel> best;
  for (const auto &cand : candidates) {
    std::vector<double> freqs = freqs_for(cand.second);
    LinearTones lin = linear_tones(phi, p, freqs);
    Eigen::VectorXd x(n_params);
    x[0] = lin.coef[0];
    for (int k = 0; k < opts.tones; ++k) {
      double c = lin.coef[1 + 2 * k];
      double s = lin.coef[2 + 2 * k];
      x[1 + 3 * k] = std::hypot(c, s);
      x[2 + 3 * k] = freqs[k];
      x[3 + 3 * k] = std::atan2(s, c);
    }
    Eigen::LevenbergMarquardt<SinusoidFunctor> lm(functor);
    lm.setXtol(1e-14);
    lm.setFtol(1e-14);
    lm.setMaxfev(4000);
    LmStatus status = lm.minimize(x);
    if (lm_failed(status)) {
      continue;
    }
    Eigen::VectorXd f(phi.size());
    Eigen::MatrixXd j(phi.size(), n_params);
    functor(x, f);
    functor.df(x, j);
    double rss = f.squaredNorm();
    Eigen::MatrixXd cov = covariance(j, rss);
    MqcModel m;
    m.offset = x[0];
    m.offset_err = std::sqrt(std::max(0.0, cov(0, 0)));
    m.residual_norm = std::sqrt(rss);
    m.evaluations = static_cast<int>(lm.nfev());
    for (int k = 0; k < opts.tones; ++k) {
      Tone t;
      t.amplitude = x[1 + 3 * k];
      t.frequency = x[2 + 3 * k];
      t.phase = x[3 + 3 * k];
      if (t.amplitude < 0) {
        t.amplitude = -t.amplitude;
        t.phase += kPi;
      }
      if (t.frequency < 0) {
        t.frequency = -t.frequency;
        t.phase = -t.phase;
      }
      t.phase = wrap_two_pi(t.phase);
      t.amplitude_err = std::sqrt(std::max(0.0, cov(1 + 3 * k, 1 + 3 * k)));
      t.frequency_err = std::sqrt(std::max(0.0, cov(2 + 3 * k, 2 + 3 * k)));
      t.phase_err = std::sqrt(std::max(0.0, cov(3 + 3 * k, 3 + 3 * k)));
      m.tones.push_back(t);
    }
    std::sort(m.tones.begin(), m.tones.end(),
              [](const Tone &a, const Tone &b) { return a.frequency < b.frequency; });
    if (!best || m.residual_norm < best->residual_norm) {
      best = m;
    }
  }
  if (!best) {
    throw DomainError("sinusoid fit did not converge from any start");
  }
  return *best;
}

void ResidualCrosstalk::validate() const {
  for (const Vec3 *n : {&n0, &n1}) {
    if (std::abs(n->norm() - 1.0) > 1e-9) {
      throw ValidationError("crosstalk axes must be unit vectors");
    }
    if (std::abs(n->y()) > 1e-8) {
      throw ValidationError("crosstalk axes must lie in the xz-plane");
    }
  }
  if (phase_step < 0.0) {
    throw ValidationError("crosstalk phase step must be non-negative");
  }
}

double ResidualCrosstalk::spectator_phase(double phi) const {
  if (phase_step == 0.0) {
    return phi;
  }
  return round_half_away(wrap_two_pi(phi) / phase_step) * phase_unit;
}

double residual_trace_closed(const ResidualCrosstalk &r, double phi) {
  double x0 = r.n0.x(), z0 = r.n0.z(), x1 = r.n1.x(), z1 = r.n1.z();
  double c = std::cos(r.theta / 2.0);
  double s = std::sin(r.theta / 2.0);
  double st = std::sin(r.theta);
  double cp = std::cos(phi);
  double dot = x0 * x1 + z0 * z1;
  double cross = z0 * x1 - x0 * z1;
  return 2.0 * std::pow(c, 4) + 2.0 * (dot * dot + cross * cross * cp) * std::pow(s, 4) -
         0.5 * st * st *
             (z0 * z0 - 2.0 * x0 * x1 - 4.0 * z0 * z1 + z1 * z1 + (x0 - x1) * (x0 - x1) * cp) +
         2.0 * s * s * st * std::sin(phi) * (x0 - x1) * (x0 * z1 - x1 * z0);
}

cplx residual_trace_matrix(const ResidualCrosstalk &r, double phi) {
  Mat2 r0 = rotation_matrix(r.n0, r.theta);
  Mat2 r1 = rotation_matrix(r.n1, r.theta);
  Mat2 z = rot_z(phi);
  Mat2 a = r0 * z * r0 * r1.adjoint() * z.adjoint() * r1.adjoint();
  return a.trace();
}

ResidualCrosstalk spectator_crosstalk(const RegisterConfig &cfg, const std::vector<int> &targets,
                                      double t, int repeats) {
  int spec = strongest_spectator(cfg, targets);
  NuclearRotation rot = decompose_unit(cfg, spec, t);
  ResidualCrosstalk c;
  c.n0 = rot.axis[0];
  c.n1 = rot.axis[1];
  c.theta = wrap_two_pi(repeats * rot.angle);
  c.validate();
  return c;
}

ResidualCrosstalk spectator_crosstalk(const Backend &b, const std::vector<int> &targets) {
  const CalibrationEntry &e = b.parallel_entangler_entry(targets);
  ResidualCrosstalk c = spectator_crosstalk(b.config(), targets, e.unit_time, e.repeats);
  if (b.options().mode != BackendMode::Ideal) {
    const CalibrationEntry &z = b.parallel_z_entry(targets);
    c.phase_unit = decompose_unit(b.config(), strongest_spectator(b.config(), targets), z.unit_time).angle;
    c.phase_step = b.options().phase_resolution;
  }
  return c;
}

std::vector<ResidualPoint> residual_mqc_theory(const ResidualCrosstalk &c, int l, double delta,
                                               const std::vector<double> &phi_grid) {
  c.validate();
  std::vector<ResidualPoint> out;
  for (double phi : phi_grid) {
    cplx ph = std::polar(1.0, l * phi - delta);
    double psi = c.spectator_phase(phi);
    double closed = 0.5 * (1.0 + 0.5 * (ph * residual_trace_closed(c, psi)).real());
    double matrix = 0.5 * (1.0 + 0.5 * (ph * residual_trace_matrix(c, psi)).real());
    out.push_back({phi, closed, matrix});
  }
  return out;
}

double residual_shape_rms(const ResidualCrosstalk &c, int l, const std::vector<double> &phi,
                          const std::vector<double> &p, double *best_delta) {
  if (phi.size() != p.size() || phi.size() < 3) {
    throw ValidationError("residual_shape_rms: need matching phi/signal with >= 3 points");
  }
  Eigen::Index n = static_cast<Eigen::Index>(phi.size());
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    y[i] = p[i];
  }
  double best = std::numeric_limits<double>::infinity();
  for (double delta : linspace_step(0.0, kTwoPi, 1e-3)) {
    Eigen::MatrixXd a(n, 2);
    auto theory = residual_mqc_theory(c, l, delta, phi);
    for (Eigen::Index i = 0; i < n; ++i) {
      a(i, 0) = 1.0;
      a(i, 1) = theory[i].closed_form;
    }
    Eigen::VectorXd coef = a.colPivHouseholderQr().solve(y);
    double rss = (a * coef - y).squaredNorm();
    if (rss < best) {
      best = rss;
      if (best_delta) {
        *best_delta = delta;
      }
    }
  }
  double mean = y.mean();
  double sd = std::sqrt((y.array() - mean).square().mean());
  if (sd == 0.0) {
    throw DomainError("residual_shape_rms: flat signal");
  }
  return std::sqrt(best / n) / sd;
}

GhzOptimization optimize_ghz_prep(const Backend &b, MqcMode mode, const std::vector<int> &targets,
                                  const AnnealingOptions &opts) {
  if (opts.chains < 1 || opts.steps < 1 || !(opts.t_start > 0) || !(opts.t_end > 0)) {
    throw ValidationError("annealing needs positive chains, steps and temperatures");
  }
  MqcSetup setup;
  setup.mode = mode;
  setup.targets = targets;
  setup.validate(b.config());
  const int l = static_cast<int>(targets.size());
  const int dims = 2 * l;

  GhzOptimization result;
  result.seed = opts.seed;
  for (int kind = 0; kind < 2; ++kind) {
    for (int q : targets) {
      result.bounds.push_back(b.local_period(q, kind == 0 ? 'X' : 'Z'));
    }
  }
  // Coordinate d: X counts for d < l, Z counts otherwise.
  auto coord_gate = [&](int d) {
    return std::make_pair(targets[d % l], d < l ? 'X' : 'Z');
  };

  // Every local unitary the search can touch, built once.
  std::vector<std::vector<Mat>> locals(dims);
  for (int d = 0; d < dims; ++d) {
    locals[d].resize(result.bounds[d] + 1);
  }
  std::vector<std::pair<int, int>> jobs;
  for (int d = 0; d < dims; ++d) {
    for (int r = 0; r <= result.bounds[d]; ++r) {
      jobs.emplace_back(d, r);
    }
  }
  parallel_for(
      jobs.size(),
      [&](std::size_t i) {
        auto [d, r] = jobs[i];
        auto [q, kind] = coord_gate(d);
        locals[d][r] = b.unitary(NuclearLocal{q, kind, 0.0, r});
      },
      opts.threads);

  // The target state assumes electron and targets start in |0>; initialization
  // errors are left to the experiment itself.
  DensityState init = polarized_register(b.config().num_nuclei(), targets);
  int dim = 1 << b.num_qubits();
  Mat head = Mat::Identity(dim, dim);
  for (const auto &ins : entangler_circuit(mode, targets).instructions) {
    head = b.unitary(ins) * head;
  }
  head = head * b.unitary(ElectronRotation{'Y', kPi / 2.0});

  auto fidelity = [&](const std::vector<int> &x) {
    Mat u = Mat::Identity(dim, dim);
    for (int i = 0; i < l; ++i) {
      u = locals[l + i][x[l + i]] * locals[i][x[i]] * u;
    }
    return ghz_fidelity(apply_unitary(init, head * u), targets);
  };

  std::vector<int> start(dims, 0);
  for (int i = 0; i < l; ++i) {
    int r = b.local_repeats(NuclearLocal{targets[i], 'X', kPi / 2.0});
    start[i] = std::min(r, result.bounds[i]);
  }
  {
    Circuit base = local_prep_circuit(setup);
    base.add(ElectronRotation{'Y', kPi / 2.0});
    base.append(entangler_circuit(mode, targets));
    result.baseline_fidelity = ghz_fidelity(run_circuit(base, b, init), targets);
  }

  struct ChainResult {
    std::vector<int> x;
    double f = -1.0;
    int evaluations = 0;
  };
  std::vector<ChainResult> chains(opts.chains);
  double cooling = std::pow(opts.t_end / opts.t_start, 1.0 / std::max(1, opts.steps - 1));
  parallel_for(
      chains.size(),
      [&](std::size_t c) {
        std::mt19937_64 rng(opts.seed + c);
        std::map<std::vector<int>, double> cache;
        ChainResult &res = chains[c];
        auto eval = [&](const std::vector<int> &x) {
          auto it = cache.find(x);
          if (it != cache.end()) {
            return it->second;
          }
          ++res.evaluations;
          double f = fidelity(x);
          cache.emplace(x, f);
          return f;
        };
        std::vector<int> x = start;
        if (c > 0) {
          for (int d = 0; d < dims; ++d) {
            x[d] = std::uniform_int_distribution<int>(0, result.bounds[d])(rng);
          }
        }
        double f = eval(x);
        res.x = x;
        res.f = f;
        double temp = opts.t_start;
        std::uniform_int_distribution<int> pick(0, dims - 1);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int step = 0; step < opts.steps; ++step, temp *= cooling) {
          std::vector<int> y = x;
          int d = pick(rng);
          int span = result.bounds[d] + 1;
          int reach = std::max(1, static_cast<int>(std::lround(0.5 * span * temp / opts.t_start)));
          int delta = std::uniform_int_distribution<int>(1, reach)(rng);
          if (unit(rng) < 0.5) {
            delta = -delta;
          }
          // 2pi of rotation is a global sign, so the lattice is periodic.
          y[d] = ((y[d] + delta) % span + span) % span;
          double fy = eval(y);
          if (fy >= f || unit(rng) < std::exp((fy - f) / temp)) {
            x = y;
            f = fy;
          }
          if (f > res.f) {
            res.f = f;
            res.x = x;
          }
        }
      },
      opts.threads);

  std::size_t best = 0;
  for (std::size_t c = 1; c < chains.size(); ++c) {
    if (chains[c].f > chains[best].f) {
      best = c;
    }
  }
  for (const auto &ch : chains) {
    result.evaluations += ch.evaluations;
  }
  result.fidelity = chains[best].f;
  result.prep.x_repeats.assign(chains[best].x.begin(), chains[best].x.begin() + l);
  result.prep.z_repeats.assign(chains[best].x.begin() + l, chains[best].x.end());
  return result;
}

double state_fidelity_approx(const std::vector<double> &z) {
  double f = 1.0;
  for (double v : z) {
    if (v < -1.0 - 1e-9 || v > 1.0 + 1e-9) {
      throw ValidationError("<Z> values must lie in [-1, 1]");
    }
    f *= 0.5 * (1.0 + v);
  }
  return f;
}

double state_fidelity_exact(const DensityState &rho) {
  int m = rho.num_qubits();
  unsigned dim = 1u << m;
  // <Z_S> for every subset S (bit q of S <-> register qubit with that bit).
  double sum = 0.0;
  for (unsigned s = 0; s < dim; ++s) {
    double corr = 0.0;
    for (unsigned x = 0; x < dim; ++x) {
      double sign = (std::popcount(x & s) & 1u) ? -1.0 : 1.0;
      corr += sign * rho.matrix()(x, x).real();
    }
    sum += corr;
  }
  return sum / dim;
}

DensityState bitflip_channel(const DensityState &rho, int m, double eps) {
  if (m != rho.num_qubits()) {
    throw ValidationError("bit-flip channel size does not match the state");
  }
  if (eps < 0.0 || eps > 1.0) {
    throw ValidationError("bit-flip probability must be in [0, 1]");
  }
  unsigned patterns = 1u << m;
  Mat out = Mat::Zero(rho.dim(), rho.dim());
  for (unsigned k = 0; k < patterns; ++k) {
    int flips = std::popcount(k);
    double c = std::sqrt(std::pow(eps, flips) * std::pow(1.0 - eps, m - flips));
    if (c == 0.0) {
      continue;
    }
    std::vector<Mat> ops;
    for (int q = 0; q < m; ++q) {
      bool flip = (k >> (m - 1 - q)) & 1u;
      ops.push_back(flip ? Mat(pauli_x()) : Mat(Mat::Identity(2, 2)));
    }
    Mat kraus = c * tensor(ops);
    out += kraus * rho.matrix() * kraus.adjoint();
  }
  return DensityState(out);
}

double bitflip_zero_overlap(const DensityState &rho, double eps) {
  int m = rho.num_qubits();
  double f = 0.0;
  for (int x = 0; x < rho.dim(); ++x) {
    int k = std::popcount(static_cast<unsigned>(x));
    f += rho.matrix()(x, x).real() * std::pow(eps, k) * std::pow(1.0 - eps, m - k);
  }
  return f;
}

double gate_error_model(const DensityState &ideal, int n_e, double eps_spam, double eps_gate) {
  double keep = (1.0 - 2.0 * eps_spam) * std::pow(1.0 - 2.0 * eps_gate, n_e);
  return bitflip_zero_overlap(ideal, 0.5 * (1.0 - keep));
}

namespace {

struct GateErrorFunctor : Eigen::DenseFunctor<double> {
  const std::vector<int> &n_e;
  const std::vector<double> &f;
  const std::vector<DensityState> &states;

  GateErrorFunctor(const std::vector<int> &n, const std::vector<double> &f_,
                   const std::vector<DensityState> &s)
      : DenseFunctor<double>(2, static_cast<int>(n.size())), n_e(n), f(f_), states(s) {}

  int operator()(const Eigen::VectorXd &x, Eigen::VectorXd &r) const {
    for (std::size_t i = 0; i < n_e.size(); ++i) {
      r[i] = gate_error_model(states[i], n_e[i], x[0], x[1]) - f[i];
    }
    return 0;
  }
};

}  // namespace

ErrorChannelFit fit_gate_error(const std::vector<int> &n_e, const std::vector<double> &f, int m,
                               const std::vector<DensityState> &initial_states) {
  if (n_e.size() != f.size() || n_e.size() != initial_states.size()) {
    throw ValidationError("fit_gate_error: N_E, F and state lists differ in length");
  }
  if (n_e.size() < 3) {
    throw ValidationError("fit_gate_error: need at least 3 points");
  }
  for (const auto &s : initial_states) {
    if (s.num_qubits() != m) {
      throw ValidationError("fit_gate_error: initial state size does not match M");
    }
  }
  GateErrorFunctor functor(n_e, f, initial_states);
  Eigen::VectorXd r(n_e.size());
  Eigen::VectorXd x(2);
  double best = std::numeric_limits<double>::infinity();
  for (double es : linspace_step(0.0, 0.5, 0.01)) {
    for (double eg : linspace_step(0.0, 0.5, 0.01)) {
      Eigen::VectorXd trial(2);
      trial << es, eg;
      functor(trial, r);
      if (r.squaredNorm() < best) {
        best = r.squaredNorm();
        x = trial;
      }
    }
  }
  Eigen::NumericalDiff<GateErrorFunctor, Eigen::Central> numdiff(functor, 1e-7);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<GateErrorFunctor, Eigen::Central>> lm(numdiff);
  lm.setXtol(1e-14);
  lm.setFtol(1e-14);
  lm.setMaxfev(2000);
  LmStatus status = lm.minimize(x);

  ErrorChannelFit fit;
  fit.m = m;
  if (lm_failed(status)) {
    fit.warnings.push_back("least-squares refinement did not converge; grid estimate kept");
  }
  for (int k = 0; k < 2; ++k) {
    if (x[k] < 0.0 || x[k] > 1.0) {
      fit.warnings.push_back(std::string(k == 0 ? "eps_spam" : "eps_gate") +
                             " left [0, 1] and was clamped");
      x[k] = std::clamp(x[k], 0.0, 1.0);
    }
  }
  functor(x, r);
  Eigen::MatrixXd j(n_e.size(), 2);
  numdiff.df(x, j);
  Eigen::MatrixXd cov = covariance(j, r.squaredNorm());
  fit.eps_spam = x[0];
  fit.eps_gate = x[1];
  fit.eps_spam_err = std::sqrt(std::max(0.0, cov(0, 0)));
  fit.eps_gate_err = std::sqrt(std::max(0.0, cov(1, 1)));
  fit.residual_norm = r.norm();
  fit.gate_fidelity = std::pow(1.0 - fit.eps_gate, m);
  return fit;
}

}  // namespace ddreg
