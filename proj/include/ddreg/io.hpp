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

#ifndef DDREG_IO_HPP
#define DDREG_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "ddreg/analysis.hpp"
#include "ddreg/circuit.hpp"
#include "ddreg/gate_compiler.hpp"
#include "ddreg/register_model.hpp"

namespace ddreg {

using json = nlohmann::json;

// ---- register config ----

RegisterConfig config_from_json(const json &j);
json config_to_json(const RegisterConfig &cfg);
/// Throws ValidationError on unreadable or malformed files.
RegisterConfig load_config(const std::string &path);
void save_config(const std::string &path, const RegisterConfig &cfg);

// ---- CSV ----

/// Numeric table with a single header row.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string &name) const;
  std::vector<double> values(const std::string &name) const;
};

/// 17 significant digits, '.' decimal separator, independent of the C locale.
std::string format_double(double v);
double parse_double(const std::string &s);

void write_csv(const std::string &path, const Table &t);
Table read_csv(const std::string &path);

// ---- reports ----

json calibration_to_json(const CalibrationEntry &e);
json mqc_model_to_json(const MqcModel &m);
json error_fit_to_json(const ErrorChannelFit &f);

json circuit_to_json(const Circuit &c);
Circuit circuit_from_json(const json &j);

void write_json(const std::string &path, const json &j);
json read_json(const std::string &path);

struct RunManifest {
  std::string command;
  std::string config_path;
  json parameters = json::object();
  std::uint64_t seed = 0;
  std::string version;
  std::vector<std::string> outputs;
};
json manifest_to_json(const RunManifest &m);

}  // namespace ddreg

#endif
