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

#include "ddreg/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ddreg {

RegisterConfig config_from_json(const json &j) {
  try {
    RegisterConfig cfg;
    cfg.field_gauss = j.value("field_gauss", cfg.field_gauss);
    cfg.gamma_khz_per_gauss = j.value("gamma_khz_per_gauss", cfg.gamma_khz_per_gauss);
    if (j.contains("spin_projections")) {
      const auto &sp = j.at("spin_projections");
      if (!sp.is_array() || sp.size() != 2) {
        throw ValidationError("spin_projections must be [s0, s1]");
      }
      cfg.s0 = sp[0].get<double>();
      cfg.s1 = sp[1].get<double>();
    }
    for (const auto &n : j.at("nuclei")) {
      cfg.nuclei.push_back(
          {n.at("name").get<std::string>(), n.at("a_par_khz").get<double>(),
           n.at("a_perp_khz").get<double>()});
    }
    cfg.validate();
    return cfg;
  } catch (const json::exception &e) {
    throw ValidationError(std::string("malformed register config: ") + e.what());
  }
}

json config_to_json(const RegisterConfig &cfg) {
  json nuclei = json::array();
  for (const auto &n : cfg.nuclei) {
    nuclei.push_back({{"name", n.name}, {"a_par_khz", n.a_par_khz}, {"a_perp_khz", n.a_perp_khz}});
  }
  return {{"field_gauss", cfg.field_gauss},
          {"gamma_khz_per_gauss", cfg.gamma_khz_per_gauss},
          {"spin_projections", {cfg.s0, cfg.s1}},
          {"nuclei", nuclei}};
}

RegisterConfig load_config(const std::string &path) {
  return config_from_json(read_json(path));
}

void save_config(const std::string &path, const RegisterConfig &cfg) {
  write_json(path, config_to_json(cfg));
}

std::size_t Table::column(const std::string &name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) {
      return i;
    }
  }
  throw ValidationError("table has no column '" + name + "'");
}

std::vector<double> Table::values(const std::string &name) const {
  std::size_t c = column(name);
  std::vector<double> out;
  for (const auto &r : rows) {
    out.push_back(r.at(c));
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string &s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  std::size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) {
    throw ValidationError("empty numeric field");
  }
  const char *first = s.data() + b;
  const char *last = s.data() + e + 1;
  double v = 0.0;
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw ValidationError("not a number: '" + s + "'");
  }
  return v;
}

void write_csv(const std::string &path, const Table &t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ValidationError("cannot write " + path);
  }
  for (std::size_t i = 0; i < t.header.size(); ++i) {
    out << (i ? "," : "") << t.header[i];
  }
  out << '\n';
  for (const auto &r : t.rows) {
    if (r.size() != t.header.size()) {
      throw ValidationError("CSV row width does not match the header");
    }
    for (std::size_t i = 0; i < r.size(); ++i) {
      out << (i ? "," : "") << format_double(r[i]);
    }
    out << '\n';
  }
}

Table read_csv(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError("cannot read " + path);
  }
  auto split = [](const std::string &line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      cells.push_back(cell);
    }
    return cells;
  };
  Table t;
  std::string line;
  if (!std::getline(in, line)) {
    throw ValidationError(path + " is empty");
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  for (auto &h : split(line)) {
    std::size_t b = h.find_first_not_of(' ');
    t.header.push_back(b == std::string::npos ? "" : h.substr(b));
  }
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") {
      continue;
    }
    std::vector<double> row;
    for (const auto &c : split(line)) {
      row.push_back(parse_double(c));
    }
    if (row.size() != t.header.size()) {
      throw ValidationError(path + ": row width does not match the header");
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

json calibration_to_json(const CalibrationEntry &e) {
  json j;
  j["gate"] = to_string(e.kind);
  j["targets"] = e.target_names;
  j["target_angle_rad"] = e.target_angle;
  if (e.order > 0) {
    j["order"] = e.order;
  }
  j["t_us"] = e.unit_time;
  j["repeats"] = e.repeats;
  j["total_us"] = e.total_time;
  j["angular_error_rad"] = e.max_angular_error();
  j["angular_errors_rad"] = e.angular_error;
  j["unit_angle_rad"] = e.unit_angle;
  j["achieved_dot"] = e.achieved_dot;
  j["g1"] = e.g1;
  if (e.epower) {
    j["epower"] = *e.epower;
  }
  if (e.residual_epower) {
    j["residual_epower"] = *e.residual_epower;
  }
  if (e.process_fidelity) {
    j["process_fidelity"] = *e.process_fidelity;
  }
  return j;
}

json mqc_model_to_json(const MqcModel &m) {
  json tones = json::array();
  for (const auto &t : m.tones) {
    tones.push_back({{"frequency", t.frequency},
                     {"frequency_err", t.frequency_err},
                     {"amplitude", t.amplitude},
                     {"amplitude_err", t.amplitude_err},
                     {"phase_rad", t.phase},
                     {"phase_err", t.phase_err}});
  }
  return {{"offset", m.offset},
          {"offset_err", m.offset_err},
          {"tones", tones},
          {"residual_norm", m.residual_norm},
          {"evaluations", m.evaluations}};
}

json error_fit_to_json(const ErrorChannelFit &f) {
  return {{"eps_spam", f.eps_spam},         {"eps_spam_err", f.eps_spam_err},
          {"eps_gate", f.eps_gate},         {"eps_gate_err", f.eps_gate_err},
          {"M", f.m},                       {"gate_fidelity", f.gate_fidelity},
          {"residual_norm", f.residual_norm}, {"warnings", f.warnings}};
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

char single_char(const json &j, const char *key) {
  std::string s = j.at(key).get<std::string>();
  if (s.size() != 1) {
    throw ValidationError(std::string(key) + " must be a single letter");
  }
  return s[0];
}

}  // namespace

json circuit_to_json(const Circuit &c) {
  json out = json::array();
  for (const auto &ins : c.instructions) {
    json j = std::visit(
        overloaded{
            [](const ElectronRotation &g) -> json {
              return {{"axis", std::string(1, g.axis)}, {"angle", g.angle}};
            },
            [](const NuclearLocal &g) -> json {
              return {{"target", g.target},
                      {"kind", std::string(1, g.kind)},
                      {"angle", g.angle},
                      {"repeats", g.repeats}};
            },
            [](const ConditionalX &g) -> json { return {{"target", g.target}, {"angle", g.angle}}; },
            [](const ParallelEntangler &g) -> json { return {{"targets", g.targets}}; },
            [](const ParallelZ &g) -> json { return {{"targets", g.targets}, {"angle", g.angle}}; },
            [](const ElectronReset &) -> json { return json::object(); },
            [](const MeasureZ &g) -> json { return {{"subject", g.subject}}; },
            [](const Depolarize &g) -> json { return {{"qubit", g.qubit}, {"p", g.p}}; },
        },
        ins);
    j["op"] = instruction_name(ins);
    out.push_back(j);
  }
  return out;
}

Circuit circuit_from_json(const json &arr) {
  try {
    Circuit c;
    for (const auto &j : arr) {
      std::string op = j.at("op").get<std::string>();
      if (op == "electron_rotation") {
        c.add(ElectronRotation{single_char(j, "axis"), j.at("angle").get<double>()});
      } else if (op == "nuclear_local") {
        c.add(NuclearLocal{j.at("target").get<int>(), single_char(j, "kind"),
                           j.at("angle").get<double>(), j.value("repeats", -1)});
      } else if (op == "conditional_x") {
        c.add(ConditionalX{j.at("target").get<int>(), j.value("angle", kPi / 2.0)});
      } else if (op == "parallel_entangler") {
        c.add(ParallelEntangler{j.at("targets").get<std::vector<int>>()});
      } else if (op == "parallel_z") {
        c.add(ParallelZ{j.at("targets").get<std::vector<int>>(), j.at("angle").get<double>()});
      } else if (op == "electron_reset") {
        c.add(ElectronReset{});
      } else if (op == "measure_z") {
        c.add(MeasureZ{j.at("subject").get<int>()});
      } else if (op == "depolarize") {
        c.add(Depolarize{j.at("qubit").get<int>(), j.at("p").get<double>()});
      } else {
        throw ValidationError("unknown instruction '" + op + "'");
      }
    }
    return c;
  } catch (const json::exception &e) {
    throw ValidationError(std::string("malformed circuit: ") + e.what());
  }
}

void write_json(const std::string &path, const json &j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ValidationError("cannot write " + path);
  }
  out << j.dump(2) << '\n';
}

json read_json(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError("cannot read " + path);
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error &e) {
    throw ValidationError(path + ": " + e.what());
  }
}

json manifest_to_json(const RunManifest &m) {
  return {{"command", m.command},       {"config", m.config_path}, {"parameters", m.parameters},
          {"seed", m.seed},             {"version", m.version},    {"outputs", m.outputs}};
}

}  // namespace ddreg
