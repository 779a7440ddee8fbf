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

#include <random>

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "ddreg/register_model.hpp"

using namespace ddreg;

namespace {

// Full register Hamiltonian built term by term from Pauli operators, with
// the electron as qubit 0. Angular units, rad/us.
Mat dense_hamiltonian(const RegisterConfig &cfg) {
  int nq = cfg.num_qubits();
  Eigen::Index dim = Eigen::Index{1} << nq;
  Mat h = Mat::Zero(dim, dim);
  Mat2 proj[2];
  proj[0] << 1, 0, 0, 0;
  proj[1] << 0, 0, 0, 1;
  double wl = 2.0 * kPi * cfg.gamma_khz_per_gauss * cfg.field_gauss * 1e-3;
  for (int j = 0; j < 2; ++j) {
    double s = j == 0 ? cfg.s0 : cfg.s1;
    Mat pj = embed(proj[j], 0, nq);
    for (int l = 0; l < cfg.num_nuclei(); ++l) {
      double apar = 2.0 * kPi * cfg.nuclei[l].a_par_khz * 1e-3;
      double aperp = 2.0 * kPi * cfg.nuclei[l].a_perp_khz * 1e-3;
      Mat2 hl = 0.5 * (wl + s * apar) * pauli_z() + 0.5 * s * aperp * pauli_x();
      h += pj * embed(hl, l + 1, nq);
    }
  }
  return h;
}

Mat dense_evolution(const RegisterConfig &cfg, double t) {
  Mat a = (cplx(0.0, -t) * dense_hamiltonian(cfg)).eval();
  return a.exp();
}

RegisterConfig random_config(std::mt19937_64 &rng, int n) {
  std::uniform_real_distribution<double> par(-150.0, 150.0), perp(0.0, 100.0), field(100.0, 800.0);
  RegisterConfig cfg;
  cfg.field_gauss = field(rng);
  for (int i = 0; i < n; ++i) {
    cfg.nuclei.push_back({"n" + std::to_string(i), par(rng), perp(rng)});
  }
  return cfg;
}

}  // namespace

TEST(Frames, Q1BranchOneFrequency) {
  // Independent arithmetic: omega_1 / 2pi = sqrt(A_perp^2 + (gamma B - A_par)^2) in kHz.
  RegisterConfig cfg = RegisterConfig::reference_default();
  double larmor_khz = 1.07084 * 338.0;
  double expect_khz = std::sqrt(68.4 * 68.4 + std::pow(larmor_khz + 118.8, 2));
  ConditionalFrame f = build_frame(cfg, 0);
  EXPECT_NEAR(f.omega[1] / (2.0 * kPi) * 1e3, expect_khz, 1e-9);
  EXPECT_NEAR(f.omega[1] / (2.0 * kPi) * 1e3, 485.6, 0.05);
}

TEST(Frames, BareLarmorWithoutCoupling) {
  RegisterConfig cfg;
  cfg.nuclei = {{"a", 0.0, 0.0}};
  ConditionalFrame f = build_frame(cfg, 0);
  EXPECT_LT((f.axis[1] - Vec3::UnitZ()).norm(), 1e-15);
  EXPECT_NEAR(f.omega[1], cfg.larmor(), 1e-15);
}

TEST(Frames, ZeroProjectionBranchIsLarmor) {
  RegisterConfig cfg = RegisterConfig::reference_default();
  for (const auto &f : build_frames(cfg)) {
    EXPECT_LT((f.axis[0] - Vec3::UnitZ()).norm(), 1e-15);
    EXPECT_NEAR(f.omega[0], cfg.larmor(), 1e-15);
    EXPECT_NEAR(f.axis[1].norm(), 1.0, 1e-12);
    EXPECT_EQ(f.axis[1].y(), 0.0);
  }
}

TEST(Config, ValidationErrors) {
  RegisterConfig cfg = RegisterConfig::reference_default();
  cfg.nuclei[0].a_perp_khz = -1.0;
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg = RegisterConfig::reference_default();
  cfg.nuclei[1].name = "q1";
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg = RegisterConfig::reference_default();
  cfg.field_gauss = 0.0;
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg = RegisterConfig::reference_default();
  cfg.s1 = cfg.s0;
  EXPECT_THROW(cfg.validate(), ValidationError);
  EXPECT_THROW(RegisterConfig::reference_default().index_of("q9"), ValidationError);
}

TEST(FreeEvolution, ZeroTimeIsIdentity) {
  RegisterConfig cfg = RegisterConfig::reference_default();
  EXPECT_LT((free_evolution(cfg, 0.0) - Mat::Identity(32, 32)).norm(), 1e-15);
  EXPECT_THROW(free_evolution(cfg, -1.0), ValidationError);
}

TEST(FreeEvolution, FullLarmorPeriodIsMinusIdentityInBranchZero) {
  RegisterConfig cfg;
  cfg.nuclei = {{"a", -50.0, 30.0}};
  double t = 2.0 * kPi / build_frame(cfg, 0).omega[0];
  Mat u = free_evolution(cfg, t);
  EXPECT_LT((u.topLeftCorner(2, 2) + Mat::Identity(2, 2)).norm(), 1e-12);
}

TEST(FreeEvolution, MatchesDenseExponential) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> time(0.0, 20.0);
  std::uniform_int_distribution<int> size(1, 4);
  for (int k = 0; k < 100; ++k) {
    RegisterConfig cfg = random_config(rng, size(rng));
    double t = time(rng);
    EXPECT_LT((free_evolution(cfg, t) - dense_evolution(cfg, t)).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(FreeEvolution, ComposesAdditively) {
  RegisterConfig cfg = RegisterConfig::reference_default();
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> time(0.0, 10.0);
  for (int k = 0; k < 20; ++k) {
    double a = time(rng), b = time(rng);
    EXPECT_LT((free_evolution(cfg, a) * free_evolution(cfg, b) - free_evolution(cfg, a + b)).norm(),
              1e-10);
  }
}

TEST(FreeEvolution, ElectronOffDiagonalBlocksVanish) {
  Mat u = free_evolution(RegisterConfig::reference_default(), 3.7);
  EXPECT_EQ(u.topRightCorner(16, 16).norm(), 0.0);
  EXPECT_EQ(u.bottomLeftCorner(16, 16).norm(), 0.0);
}
