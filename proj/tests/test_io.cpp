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

#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "ddreg/io.hpp"
#include "ddreg/protocols.hpp"

using namespace ddreg;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name) {
  fs::path dir = fs::temp_directory_path() / "ddreg_io_test";
  fs::create_directories(dir);
  return dir / name;
}

void write_text(const fs::path &p, const std::string &s) {
  std::ofstream(p) << s;
}

}  // namespace

TEST(Config, ShippedPresetMatchesDefault) {
  RegisterConfig cfg = load_config(std::string(DDREG_SOURCE_DIR) + "/registers/reference.json");
  RegisterConfig ref = RegisterConfig::reference_default();
  ASSERT_EQ(cfg.num_nuclei(), 4);
  EXPECT_EQ(cfg.field_gauss, ref.field_gauss);
  EXPECT_EQ(cfg.gamma_khz_per_gauss, ref.gamma_khz_per_gauss);
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(cfg.nuclei[i].name, ref.nuclei[i].name);
    EXPECT_EQ(cfg.nuclei[i].a_par_khz, ref.nuclei[i].a_par_khz);
    EXPECT_EQ(cfg.nuclei[i].a_perp_khz, ref.nuclei[i].a_perp_khz);
  }
  RegisterConfig measured =
      load_config(std::string(DDREG_SOURCE_DIR) + "/registers/measured_field.json");
  EXPECT_EQ(measured.field_gauss, 338.19);
}

TEST(Config, RoundTrip) {
  RegisterConfig cfg = RegisterConfig::reference_default().with_field(412.5);
  cfg.s1 = 1.0;
  save_config(scratch("cfg.json").string(), cfg);
  RegisterConfig back = load_config(scratch("cfg.json").string());
  EXPECT_EQ(back.field_gauss, 412.5);
  EXPECT_EQ(back.s1, 1.0);
  EXPECT_EQ(back.nuclei[3].a_perp_khz, 25.4);
}

TEST(Config, MalformedInputs) {
  write_text(scratch("bad1.json"), "{\"nuclei\": [{\"name\": \"a\"}]}");
  EXPECT_THROW(load_config(scratch("bad1.json").string()), ValidationError);
  write_text(scratch("bad2.json"), "{not json");
  EXPECT_THROW(load_config(scratch("bad2.json").string()), ValidationError);
  write_text(scratch("bad3.json"),
             "{\"nuclei\": [{\"name\": \"a\", \"a_par_khz\": 1, \"a_perp_khz\": -2}]}");
  EXPECT_THROW(load_config(scratch("bad3.json").string()), ValidationError);
  EXPECT_THROW(load_config(scratch("missing.json").string()), ValidationError);
}

TEST(Csv, LosslessRoundTrip) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Table t;
  t.header = {"t_us", "value", "tiny"};
  for (int i = 0; i < 500; ++i) {
    t.rows.push_back({u(rng) * 1e3, u(rng), u(rng) * 1e-300});
  }
  t.rows.push_back({std::numeric_limits<double>::max(), std::numeric_limits<double>::denorm_min(), -0.0});
  write_csv(scratch("t.csv").string(), t);
  Table back = read_csv(scratch("t.csv").string());
  EXPECT_EQ(back.header, t.header);
  ASSERT_EQ(back.rows.size(), t.rows.size());
  for (size_t i = 0; i < t.rows.size(); ++i) {
    for (size_t j = 0; j < 3; ++j) {
      EXPECT_EQ(back.rows[i][j], t.rows[i][j]);
    }
  }
}

TEST(Csv, FormatIsLocaleIndependent) {
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(2.472), "2.472");
  EXPECT_EQ(parse_double(" 1.25 "), 1.25);
  EXPECT_THROW(parse_double("1,25"), ValidationError);
  EXPECT_THROW(parse_double(""), ValidationError);
}

TEST(Csv, ColumnLookupAndErrors) {
  Table t;
  t.header = {"a", "b"};
  t.rows = {{1, 2}, {3, 4}};
  EXPECT_EQ(t.values("b"), (std::vector<double>{2, 4}));
  EXPECT_THROW(t.column("c"), ValidationError);
  t.rows.push_back({1});
  EXPECT_THROW(write_csv(scratch("bad.csv").string(), t), ValidationError);
  write_text(scratch("ragged.csv"), "a,b\n1,2\n3\n");
  EXPECT_THROW(read_csv(scratch("ragged.csv").string()), ValidationError);
  write_text(scratch("empty.csv"), "");
  EXPECT_THROW(read_csv(scratch("empty.csv").string()), ValidationError);
}

TEST(Json, CircuitRoundTrip) {
  Circuit c = swap_init(2);
  c.add(ParallelEntangler{{0, 1, 2}}).add(ParallelZ{{0, 1}, kPi / 3}).add(Depolarize{1, 0.1});
  c.add(NuclearLocal{1, 'X', 0.0, 5}).add(MeasureZ{0});
  write_json(scratch("c.json").string(), circuit_to_json(c));
  Circuit back = circuit_from_json(read_json(scratch("c.json").string()));
  EXPECT_EQ(circuit_to_json(back).dump(), circuit_to_json(c).dump());
  EXPECT_THROW(circuit_from_json(json::parse(R"([{"op": "teleport"}])")), ValidationError);
  EXPECT_THROW(circuit_from_json(json::parse(R"([{"op": "conditional_x"}])")), ValidationError);
}

TEST(Json, CalibrationReportKeys) {
  RegisterConfig cfg = RegisterConfig::reference_default();
  json j = calibration_to_json(design_parallel_entangler(cfg, {0, 1, 2}));
  for (const char *k : {"gate", "targets", "t_us", "repeats", "total_us", "angular_error_rad", "epower",
                        "residual_epower"}) {
    EXPECT_TRUE(j.contains(k)) << k;
  }
  EXPECT_EQ(j["repeats"].get<int>(), 6);
  EXPECT_EQ(j["targets"], json({"q1", "q2", "q3"}));
}

TEST(Json, ManifestFields) {
  RunManifest m;
  m.command = "simulate mqc";
  m.seed = 7;
  m.version = DDREG_VERSION;
  m.outputs = {"mqc.csv"};
  json j = manifest_to_json(m);
  EXPECT_EQ(j["seed"].get<std::uint64_t>(), 7u);
  EXPECT_EQ(j["outputs"][0], "mqc.csv");
  EXPECT_TRUE(j.contains("parameters"));
}
