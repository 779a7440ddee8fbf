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

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "ddreg/dd_engine.hpp"
#include "ddreg/numerics.hpp"

using namespace ddreg;

namespace {

RegisterConfig cfg3() { return RegisterConfig::reference_default().subset({0, 1, 2}); }

// Pulse-by-pulse product built here from free precession and ideal pi pulses.
Mat hand_pulsed(const RegisterConfig &cfg, double t, int n) {
  PulseSchedule s = PulseSchedule::build(t, n);
  int nq = cfg.num_qubits();
  Mat u = Mat::Identity(Eigen::Index{1} << nq, Eigen::Index{1} << nq);
  double now = 0.0;
  for (const auto &p : s.timeline) {
    u = free_evolution(cfg, p.time - now) * u;
    Mat2 pulse = p.axis == PulseAxis::X ? rot_x(kPi) : rot_y(kPi);
    u = embed(pulse, 0, nq) * u;
    now = p.time;
  }
  return free_evolution(cfg, s.total_time() - now) * u;
}

}  // namespace

TEST(Schedule, TimelineInvariants) {
  for (int n = 0; n <= 13; ++n) {
    PulseSchedule s = PulseSchedule::build(1.3, n);
    EXPECT_NO_THROW(s.validate());
    EXPECT_EQ(static_cast<int>(s.timeline.size()), 2 * n);
    int units = 0;
    for (const auto &[fam, count] : s.family_plan) {
      units += family_units(fam) * count;
    }
    EXPECT_EQ(units, n);
    EXPECT_NEAR(s.total_time(), n * 1.3, 1e-12);
    if (n > 0) {
      EXPECT_NEAR(s.timeline.front().time, 1.3 / 4, 1e-12);
      EXPECT_NEAR(s.total_time() - s.timeline.back().time, 1.3 / 4, 1e-12);
    }
  }
}

TEST(Schedule, RemainderFamilies) {
  EXPECT_EQ(PulseSchedule::build(1.0, 9).family_plan.back().first, SequenceFamily::CPMG);
  EXPECT_EQ(PulseSchedule::build(1.0, 10).family_plan.back().first, SequenceFamily::XY4);
  EXPECT_EQ(PulseSchedule::build(1.0, 11).family_plan.back().first, SequenceFamily::XY6);
  EXPECT_EQ(PulseSchedule::build(1.0, 8).family_plan.size(), 1u);
}

TEST(Analytic, ZeroRepeatsIsIdentity) {
  DDUnitary d = dd_unitary_analytic(cfg3(), 2.0, 0);
  EXPECT_LT((d.unitary - Mat::Identity(16, 16)).norm(), 1e-14);
  EXPECT_LT((dd_unitary_pulsed(cfg3(), PulseSchedule::build(2.0, 0)) - Mat::Identity(16, 16)).norm(),
            1e-14);
}

TEST(Analytic, Q1AntiParallelAtOddResonance) {
  RegisterConfig cfg = RegisterConfig::reference_default();
  Resonance r = resonance_times(cfg, 0, {3}).front();
  EXPECT_NEAR(decompose_unit(cfg, 0, r.t_refined).dot, -1.0, 1e-6);
}

TEST(Analytic, AnglesComposeLinearly) {
  // The six-unit branch operator is the one-unit rotation with six times the angle.
  RegisterConfig cfg = cfg3();
  DDUnitary one = dd_unitary_analytic(cfg, 2.472, 1);
  for (int q = 0; q < 3; ++q) {
    const NuclearRotation &r = one.decomposition.nuclei[q];
    Mat u6 = dd_unitary_analytic(cfg.subset({q}), 2.472, 6).unitary;
    for (int j = 0; j < 2; ++j) {
      Mat2 block = u6.block(2 * j, 2 * j, 2, 2);
      EXPECT_LT(phase_distance(block, rotation_matrix(r.axis[j], 6.0 * r.angle)), 1e-9);
    }
  }
}

TEST(Analytic, PowerOfOneUnit) {
  RegisterConfig cfg = cfg3();
  Mat u1 = dd_unitary_analytic(cfg, 3.1, 1).unitary;
  Mat un = dd_unitary_analytic(cfg, 3.1, 7).unitary;
  Mat p = Mat::Identity(16, 16);
  for (int i = 0; i < 7; ++i) {
    p = u1 * p;
  }
  EXPECT_LT((un - p).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Analytic, BranchesShareTheAngle) {
  RegisterConfig cfg = RegisterConfig::reference_default();
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> time(0.1, 12.0);
  for (int k = 0; k < 100; ++k) {
    double t = time(rng);
    for (int q = 0; q < 4; ++q) {
      auto ops = unit_branch_ops(build_frame(cfg, q), t);
      double a0 = 2.0 * std::acos(std::clamp(ops[0].trace().real() / 2.0, -1.0, 1.0));
      double a1 = 2.0 * std::acos(std::clamp(ops[1].trace().real() / 2.0, -1.0, 1.0));
      EXPECT_NEAR(a0, a1, 1e-10);
    }
  }
}

TEST(Analytic, DecompositionReconstructsUnitary) {
  RegisterConfig cfg = cfg3();
  for (double t : {0.7, 2.472, 7.081}) {
    DDUnitary d = dd_unitary_analytic(cfg, t, 5);
    std::vector<std::array<Mat2, 2>> ops;
    for (const auto &r : d.decomposition.nuclei) {
      ops.push_back({rotation_matrix(r.axis[0], 5 * r.angle), rotation_matrix(r.axis[1], 5 * r.angle)});
    }
    EXPECT_LT(phase_distance(conditional_unitary(ops), d.unitary), 1e-9);
  }
}

TEST(Pulsed, MatchesAnalyticOnRandomSamples) {
  RegisterConfig cfg = cfg3();
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> time(0.1, 12.0);
  std::uniform_int_distribution<int> reps(1, 12);
  for (int k = 0; k < 200; ++k) {
    double t = time(rng);
    int n = reps(rng);
    Mat analytic = dd_unitary_analytic(cfg, t, n).unitary;
    EXPECT_LT(phase_distance(dd_unitary_pulsed(cfg, PulseSchedule::build(t, n)), analytic), 1e-9);
  }
}

TEST(Pulsed, LibraryMatchesHandBuiltProduct) {
  RegisterConfig cfg = cfg3();
  for (int n : {1, 2, 3, 4, 5, 8, 11}) {
    Mat a = dd_unitary_pulsed(cfg, PulseSchedule::build(2.3, n));
    EXPECT_LT(phase_distance(a, hand_pulsed(cfg, 2.3, n)), 1e-10);
  }
}

TEST(Pulsed, FullTurnPulsesDiffer) {
  RegisterConfig cfg = cfg3();
  ImperfectPulseParams p;
  // angle_error is per pi/2 of nominal rotation, so pi/2 turns pi pulses into 2pi pulses.
  p.x_pi.angle_error = kPi / 2;
  p.y_pi.angle_error = kPi / 2;
  Mat noisy = dd_unitary_pulsed(cfg, PulseSchedule::build(2.4, 4), &p);
  EXPECT_LT(process_fidelity(noisy, dd_unitary_analytic(cfg, 2.4, 4).unitary), 1.0 - 1e-3);
}

TEST(Pulsed, NoiseValidation) {
  ImperfectPulseParams p;
  p.x_pi.off_a = 0.9;
  p.x_pi.off_b = 0.9;
  EXPECT_THROW(p.validate(), ValidationError);
  EXPECT_TRUE(ImperfectPulseParams{}.is_zero());
}

TEST(Resonances, CxTimesMatchTable) {
  RegisterConfig cfg = RegisterConfig::reference_default();
  EXPECT_NEAR(resonance_times(cfg, 0, {3})[0].t_refined, 7.081, 7.081 * 5e-3);
  EXPECT_NEAR(resonance_times(cfg, 1, {3})[0].t_refined, 7.375, 7.375 * 5e-3);
}

TEST(Resonances, ApproximateFormula) {
  RegisterConfig cfg = RegisterConfig::reference_default();
  ConditionalFrame f = build_frame(cfg, 1);
  for (int m = 1; m <= 4; ++m) {
    EXPECT_NEAR(resonance_approx(cfg, 1, m), 4.0 * kPi * m / (f.omega[0] + f.omega[1]), 1e-12);
  }
}

TEST(Resonances, EvenOrdersAreNearlyParallel) {
  // Second-order (m = 4) resonances used by the X gates. q1 lands at 0.9985.
  RegisterConfig cfg = RegisterConfig::reference_default();
  const double floor[3] = {0.998, 0.999, 0.999};
  for (int q = 0; q < 3; ++q) {
    for (const auto &r : resonance_times(cfg, q, {4})) {
      EXPECT_GE(r.dot, floor[q]) << "q" << q + 1 << " m=" << r.m;
    }
  }
}

TEST(Alignment, FarFromResonanceIsParallel) {
  RegisterConfig cfg;
  cfg.nuclei = {{"weak", 5.0, 1.0}};
  for (const auto &row : axis_alignment_scan(cfg, 0.2, 0.6, 0.05)) {
    EXPECT_GT(row.dot[0], 0.999);
  }
}

TEST(Alignment, ParallelWindowAndIsolatedQ3) {
  RegisterConfig cfg = RegisterConfig::reference_default();
  bool common = false;
  for (const auto &row : axis_alignment_scan(cfg, 2.3, 2.6, 0.002)) {
    common = common || (row.dot[0] < 0 && row.dot[1] < 0 && row.dot[2] < 0);
  }
  EXPECT_TRUE(common);
  bool q3_alone = false;
  for (const auto &row : axis_alignment_scan(cfg, 7.6, 7.85, 0.002)) {
    q3_alone = q3_alone || (row.dot[2] < 0 && row.dot[0] >= 0 && row.dot[1] >= 0);
  }
  EXPECT_TRUE(q3_alone);
}

TEST(Alignment, ThreadCountDoesNotChangeResults) {
  RegisterConfig cfg = RegisterConfig::reference_default();
  auto a = axis_alignment_scan(cfg, 1.0, 3.0, 0.01, 1);
  auto b = axis_alignment_scan(cfg, 1.0, 3.0, 0.01, 4);
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].dot, b[i].dot);
    EXPECT_EQ(a[i].phi, b[i].phi);
  }
}
