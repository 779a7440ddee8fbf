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
#include "ddreg/entanglement.hpp"
#include "ddreg/numerics.hpp"

using namespace ddreg;

namespace {

// Makhlin G1 from the magic-basis form, Re[tr^2(m)] / (16 det U), m = U_B^T U_B.
double magic_basis_g1(const Mat &u) {
  const cplx i(0.0, 1.0);
  Mat q(4, 4);
  q << 1, 0, 0, i,
       0, i, 1, 0,
       0, i, -1, 0,
       1, 0, 0, -i;
  q /= std::sqrt(2.0);
  Mat ub = q.adjoint() * u * q;
  Mat m = ub.transpose() * ub;
  cplx tr = m.trace();
  return (tr * tr / (16.0 * u.determinant())).real();
}

}  // namespace

TEST(Makhlin, TrivialValues) {
  EXPECT_NEAR(makhlin_g1(-1.0, kPi / 2), 0.0, 1e-15);
  for (double a : {0.3, 1.7, 4.0}) {
    EXPECT_NEAR(makhlin_g1(1.0, a), 1.0, 1e-14);
  }
  for (double d : {-1.0, -0.2, 0.5}) {
    EXPECT_NEAR(makhlin_g1(d, 0.0), 1.0, 1e-15);
  }
}

TEST(Makhlin, ClosedFormMatchesMagicBasisOracle) {
  RegisterConfig cfg = RegisterConfig::reference_default();
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> time(0.5, 12.0);
  std::uniform_int_distribution<int> reps(1, 16), nuc(0, 3);
  for (int k = 0; k < 100; ++k) {
    double t = time(rng);
    int n = reps(rng);
    int q = nuc(rng);
    RegisterConfig one = cfg.subset({q});
    Mat u = dd_unitary_analytic(one, t, n).unitary;
    EXPECT_NEAR(nucleus_g1(cfg, q, t, n), magic_basis_g1(u), 1e-8) << "t=" << t << " N=" << n;
  }
}

TEST(EntanglingPower, ParallelDesignPoints) {
  RegisterConfig cfg = RegisterConfig::reference_default();
  EXPECT_NEAR(entangling_power(cfg, {0, 1, 2}, 2.472, 6), 0.993, 0.01);
  EXPECT_NEAR(entangling_power(cfg, {0, 1}, 2.418, 6), 0.980, 0.01);
}

TEST(EntanglingPower, ResidualWithSpectator) {
  RegisterConfig cfg = RegisterConfig::reference_default();
  EXPECT_EQ(strongest_spectator(cfg, {0, 1}), 2);
  EXPECT_NEAR(residual_entangling_power(cfg, {0, 1}, 2.418, 6), 0.873, 0.02);
  EXPECT_THROW(residual_entangling_power(cfg, {0, 1, 2, 3}, 2.4, 6), ValidationError);
}

TEST(EntanglingPower, ZeroRepeatsIsZero) {
  EXPECT_EQ(entangling_power(RegisterConfig::reference_default(), {0, 1}, 2.4, 0), 0.0);
}

TEST(EntanglingPower, EmptyTargetsThrow) {
  EXPECT_THROW(entangling_power(RegisterConfig::reference_default(), {}, 2.4, 6), ValidationError);
}

TEST(EntanglingPower, ProductOfOneMinusG1) {
  RegisterConfig cfg = RegisterConfig::reference_default();
  for (double t : {1.1, 2.45, 6.2}) {
    double p = 1.0;
    for (int q : {0, 1, 3}) {
      p *= 1.0 - nucleus_g1(cfg, q, t, 4);
    }
    EXPECT_NEAR(entangling_power(cfg, {0, 1, 3}, t, 4), p, 1e-12);
    EXPECT_NEAR(entangling_power(cfg, {0, 1, 3}, t, 4, false), p * std::pow(2.0 / 3.0, 4), 1e-12);
  }
}

TEST(EntanglingPower, AddingTargetsNeverIncreases) {
  RegisterConfig cfg = RegisterConfig::reference_default();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> time(0.5, 10.0);
  for (int k = 0; k < 100; ++k) {
    double t = time(rng);
    EXPECT_LE(entangling_power(cfg, {0, 1, 2}, t, 5), entangling_power(cfg, {0, 1}, t, 5) + 1e-15);
  }
}

TEST(EntanglingPower, DesignTimeReachesMaximum) {
  RegisterConfig cfg = RegisterConfig::reference_default();
  double best = 0.0;
  for (int n = 1; n <= 64; ++n) {
    best = std::max(best, entangling_power(cfg, {0, 1, 2}, 2.472, n));
  }
  EXPECT_GE(best, 0.99);
}

TEST(MetricScan, ThreeTargetArgmaxAtSixRepeats) {
  RegisterConfig cfg = RegisterConfig::reference_default();
  MetricScan s = metric_scan(cfg, {0, 1, 2}, linspace_step(2.3, 2.7, 0.001), 1, 12);
  EXPECT_EQ(s.points[s.argmax].repeats, 6);
  EXPECT_NEAR(s.points[s.argmax].t, 2.472, 2.472 * 5e-3);
  EXPECT_TRUE(s.maximal_entangler);
  for (const auto &p : s.points) {
    ASSERT_TRUE(p.residual_epower.has_value());
  }
}

TEST(MetricScan, IsolatedQ3Entangler) {
  RegisterConfig cfg = RegisterConfig::reference_default();
  MetricScan s = metric_scan(cfg, {2}, linspace_step(7.70, 7.77, 0.0005), 5, 5);
  double g1 = 1.0;
  for (const auto &p : s.points) {
    g1 = std::min(g1, p.g1[0]);
  }
  EXPECT_LT(g1, 0.01);
}

TEST(MetricScan, NoMaximalEntanglerFlag) {
  RegisterConfig cfg;
  cfg.nuclei = {{"weak", 5.0, 1.0}};
  MetricScan s = metric_scan(cfg, {0}, linspace_step(0.2, 0.6, 0.01), 1, 4);
  EXPECT_FALSE(s.maximal_entangler);
  EXPECT_LT(s.points[s.argmax].epower, 1.0);
}

TEST(MetricScan, DeterministicAcrossThreads) {
  RegisterConfig cfg = RegisterConfig::reference_default();
  auto grid = linspace_step(2.3, 2.6, 0.005);
  MetricScan a = metric_scan(cfg, {0, 1}, grid, 1, 8, 1);
  MetricScan b = metric_scan(cfg, {0, 1}, grid, 1, 8, 3);
  ASSERT_EQ(a.points.size(), b.points.size());
  EXPECT_EQ(a.argmax, b.argmax);
  for (size_t i = 0; i < a.points.size(); ++i) {
    EXPECT_EQ(a.points[i].epower, b.points[i].epower);
  }
}
