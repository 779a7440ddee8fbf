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

// ddregister: command-line front end for calibration, simulation and fitting.
// Every run writes its artifacts plus manifest.json into --out.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ddreg/analysis.hpp"
#include "ddreg/dd_engine.hpp"
#include "ddreg/entanglement.hpp"
#include "ddreg/gate_compiler.hpp"
#include "ddreg/io.hpp"
#include "ddreg/numerics.hpp"
#include "ddreg/protocols.hpp"

namespace fs = std::filesystem;
using namespace ddreg;

namespace {

struct Common {
  std::string config;
  std::string out = ".";
  int threads = 0;
  std::uint64_t seed = 1;
};

struct Context {
  Common common;
  RegisterConfig cfg;
  RunManifest manifest;

  std::string path(const std::string &name) {
    std::string p = (fs::path(common.out) / name).string();
    manifest.outputs.push_back(p);
    return p;
  }
};

void add_common(CLI::App *app, Common &c) {
  app->add_option("--config", c.config, "Register config JSON")->required()->check(CLI::ExistingFile);
  app->add_option("--out", c.out, "Output directory");
  app->add_option("--threads", c.threads, "Worker threads (0: DDREGISTER_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--seed", c.seed, "Random seed");
}

Context open_context(const Common &c, const std::string &command) {
  Context ctx;
  ctx.common = c;
  ctx.cfg = load_config(c.config);
  fs::create_directories(c.out);
  set_default_threads(resolve_threads(c.threads));
  ctx.manifest.command = command;
  ctx.manifest.config_path = c.config;
  ctx.manifest.seed = c.seed;
  ctx.manifest.version = DDREG_VERSION;
  return ctx;
}

void finish(Context &ctx) {
  write_json((fs::path(ctx.common.out) / "manifest.json").string(),
             manifest_to_json(ctx.manifest));
}

std::vector<int> qubit_indices(const RegisterConfig &cfg, const std::vector<std::string> &names) {
  if (names.empty()) {
    std::vector<int> all(cfg.num_nuclei());
    for (int i = 0; i < cfg.num_nuclei(); ++i) {
      all[i] = i;
    }
    return all;
  }
  return cfg.indices_of(names);
}

struct NoiseArgs {
  double angle_error = 0.0;
  double off_axis = 0.0;
};

void add_noise(CLI::App *app, NoiseArgs &n) {
  app->add_option("--pulse-angle-error", n.angle_error, "Electron pulse angle error per pi/2 (rad)");
  app->add_option("--pulse-off-axis", n.off_axis, "Electron pulse axis tilt component");
}

// ---- subcommands ----

void run_resonances(Context &ctx, const std::string &qubit, const std::vector<int> &orders) {
  int q = ctx.cfg.index_of(qubit);
  json rows = json::array();
  for (int k : orders) {
    if (k < 1) {
      throw ValidationError("orders must be >= 1");
    }
    for (const auto &r : resonance_times(ctx.cfg, q, {2 * k - 1, 2 * k})) {
      rows.push_back({{"order", k},
                      {"m", r.m},
                      {"kind", r.m % 2 ? "conditional" : "unconditional"},
                      {"t_approx_us", r.t_approx},
                      {"t_refined_us", r.t_refined},
                      {"dot", r.dot}});
    }
  }
  json j = {{"qubit", qubit}, {"resonances", rows}};
  write_json(ctx.path("resonances.json"), j);
  ctx.manifest.parameters = {{"qubit", qubit}, {"orders", orders}};
  std::cout << j.dump(2) << '\n';
}

void run_scan(Context &ctx, const std::string &kind, double lo, double hi, double step,
              const std::vector<std::string> &names, int n_min, int n_max) {
  ctx.manifest.parameters = {{"kind", kind}, {"t_lo", lo}, {"t_hi", hi}, {"step", step}};
  if (kind == "alignment") {
    Table t;
    t.header.push_back("t_us");
    for (const auto &n : ctx.cfg.nuclei) {
      t.header.push_back("dot_" + n.name);
    }
    for (const auto &n : ctx.cfg.nuclei) {
      t.header.push_back("phi_" + n.name);
    }
    for (const auto &r : axis_alignment_scan(ctx.cfg, lo, hi, step, ctx.common.threads)) {
      std::vector<double> row{r.t};
      row.insert(row.end(), r.dot.begin(), r.dot.end());
      row.insert(row.end(), r.phi.begin(), r.phi.end());
      t.rows.push_back(row);
    }
    write_csv(ctx.path("alignment.csv"), t);
    return;
  }
  if (kind != "g1" && kind != "epower") {
    throw ValidationError("scan kind must be alignment, g1 or epower");
  }
  std::vector<int> targets = qubit_indices(ctx.cfg, names);
  MetricScan scan =
      metric_scan(ctx.cfg, targets, linspace_step(lo, hi, step), n_min, n_max, ctx.common.threads);
  Table t;
  t.header = {"t_us", "N"};
  for (int q : targets) {
    t.header.push_back("g1_" + ctx.cfg.nuclei[q].name);
  }
  t.header.push_back("epower");
  bool has_residual = !scan.points.empty() && scan.points[0].residual_epower.has_value();
  if (has_residual) {
    t.header.push_back("residual_epower");
  }
  for (const auto &p : scan.points) {
    std::vector<double> row{p.t, static_cast<double>(p.repeats)};
    row.insert(row.end(), p.g1.begin(), p.g1.end());
    row.push_back(p.epower);
    if (has_residual) {
      row.push_back(*p.residual_epower);
    }
    t.rows.push_back(row);
  }
  write_csv(ctx.path(kind + ".csv"), t);
  const MetricPoint &best = scan.points[scan.argmax];
  json j = {{"t_us", best.t},
            {"N", best.repeats},
            {"epower", best.epower},
            {"maximal_entangler", scan.maximal_entangler}};
  write_json(ctx.path(kind + "_argmax.json"), j);
  ctx.manifest.parameters["qubits"] = names;
  ctx.manifest.parameters["n_min"] = n_min;
  ctx.manifest.parameters["n_max"] = n_max;
  if (!scan.maximal_entangler) {
    std::cerr << "note: no maximal entangler in this scan (dot >= 0 for some target everywhere)\n";
  }
}

void run_spectroscopy(Context &ctx, double lo, double hi, double step, int repeats,
                      const std::vector<std::string> &names, bool simulate, const NoiseArgs &na) {
  std::vector<int> include = qubit_indices(ctx.cfg, names);
  ImperfectPulseParams noise = ImperfectPulseParams::uniform(na.angle_error, na.off_axis);
  auto pts = dd_spectroscopy(ctx.cfg, linspace_step(lo, hi, step), repeats, include, simulate,
                             noise.is_zero() ? nullptr : &noise, ctx.common.threads);
  Table t;
  t.header = {"t_us", "p_x_closed"};
  if (simulate) {
    t.header.push_back("p_x_simulated");
  }
  for (const auto &p : pts) {
    std::vector<double> row{p.t, p.closed_form};
    if (simulate) {
      row.push_back(p.simulated);
    }
    t.rows.push_back(row);
  }
  write_csv(ctx.path("spectroscopy.csv"), t);
  ctx.manifest.parameters = {{"t_lo", lo}, {"t_hi", hi},         {"step", step},
                             {"N", repeats}, {"qubits", names}, {"simulate", simulate}};
}

void run_calibrate(Context &ctx, const std::vector<std::string> &names, int cx_order, int x_order,
                   const std::vector<std::string> &parallel_z) {
  std::vector<int> nuclei = qubit_indices(ctx.cfg, names);
  json entries = json::array();
  for (int q : nuclei) {
    entries.push_back(calibration_to_json(calibrate_conditional_x(ctx.cfg, q, cx_order, kPi / 2)));
  }
  for (int q : nuclei) {
    entries.push_back(calibration_to_json(calibrate_unconditional_x(ctx.cfg, q, x_order, kPi / 2)));
  }
  for (int q : nuclei) {
    entries.push_back(calibration_to_json(calibrate_z(ctx.cfg, q, kPi / 2)));
  }
  if (!parallel_z.empty()) {
    entries.push_back(
        calibration_to_json(design_parallel_z(ctx.cfg, ctx.cfg.indices_of(parallel_z), kPi / 2)));
  }
  write_json(ctx.path("calibration.json"), entries);
  ctx.manifest.parameters = {{"qubits", names}, {"cx_order", cx_order}, {"x_order", x_order}};
  std::cout << entries.dump(2) << '\n';
}

void run_design_parallel(Context &ctx, const std::vector<std::string> &names) {
  CalibrationEntry e = design_parallel_entangler(ctx.cfg, ctx.cfg.indices_of(names));
  json j = calibration_to_json(e);
  write_json(ctx.path("parallel_entangler.json"), j);
  ctx.manifest.parameters = {{"qubits", names}};
  std::cout << j.dump(2) << '\n';
}

Backend make_backend(const RegisterConfig &cfg, const std::string &mode, const NoiseArgs &na,
                     double resolution) {
  BackendOptions o;
  o.mode = parse_backend_mode(mode);
  if (o.mode == BackendMode::CompiledNoisy) {
    o.noise = ImperfectPulseParams::uniform(na.angle_error, na.off_axis);
  }
  o.phase_resolution = resolution;
  return Backend(cfg, o);
}

struct MqcArgs {
  std::string mode = "parallel";
  std::vector<std::string> qubits;
  std::string backend = "ideal";
  bool optimize = false;
  int tones = 1;
  double resolution = kPi / 6.0;
  double max_phase = 4.0 * kPi;
  double spam = 0.0;
  int anneal_steps = 600;
  int anneal_chains = 4;
  NoiseArgs noise;
};

void run_simulate_mqc(Context &ctx, const MqcArgs &a) {
  Backend b = make_backend(ctx.cfg, a.backend, a.noise, a.resolution);
  MqcSetup s;
  s.mode = parse_mqc_mode(a.mode);
  s.targets = ctx.cfg.indices_of(a.qubits);
  s.spam_depolarize = a.spam;
  s.validate(ctx.cfg);
  json report;
  if (a.optimize) {
    AnnealingOptions ao;
    ao.seed = ctx.common.seed;
    ao.steps = a.anneal_steps;
    ao.chains = a.anneal_chains;
    ao.threads = ctx.common.threads;
    GhzOptimization opt = optimize_ghz_prep(b, s.mode, s.targets, ao);
    s.prep = opt.prep;
    report["prep"] = {{"x_repeats", opt.prep.x_repeats},
                      {"z_repeats", opt.prep.z_repeats},
                      {"bounds", opt.bounds},
                      {"ghz_fidelity", opt.fidelity},
                      {"baseline_ghz_fidelity", opt.baseline_fidelity},
                      {"evaluations", opt.evaluations},
                      {"seed", opt.seed}};
  }
  auto pts = mqc_experiment(b, s, mqc_phase_grid(a.resolution, a.max_phase), ctx.common.threads);
  Table t;
  t.header = {"phi_rad", "p0_electron"};
  std::vector<double> phi, p;
  for (const auto &pt : pts) {
    t.rows.push_back({pt.phi, pt.p0});
    phi.push_back(pt.phi);
    p.push_back(pt.p0);
  }
  write_csv(ctx.path("mqc.csv"), t);
  SinusoidFitOptions fo;
  fo.tones = a.tones;
  report["fit"] = mqc_model_to_json(fit_sinusoid(phi, p, fo));
  report["backend"] = to_string(b.mode());
  report["mode"] = to_string(s.mode);
  report["qubits"] = a.qubits;
  write_json(ctx.path("mqc_fit.json"), report);
  ctx.manifest.parameters = {{"mode", a.mode},         {"qubits", a.qubits},
                             {"backend", a.backend},   {"optimize", a.optimize},
                             {"tones", a.tones},       {"resolution", a.resolution},
                             {"max_phase", a.max_phase}, {"spam", a.spam},
                             {"pulse_angle_error", a.noise.angle_error},
                             {"pulse_off_axis", a.noise.off_axis}};
  std::cout << report["fit"].dump(2) << '\n';
}

void run_simulate_repeat(Context &ctx, const std::string &mode,
                         const std::vector<std::string> &names, const std::string &backend,
                         std::vector<int> n_e, const NoiseArgs &na) {
  Backend b = make_backend(ctx.cfg, backend, na, kPi / 6.0);
  MqcMode m = parse_mqc_mode(mode);
  std::vector<int> targets = ctx.cfg.indices_of(names);
  if (n_e.empty()) {
    n_e = m == MqcMode::Parallel && targets.size() > 1
              ? select_parallel_repeats(ctx.cfg, targets)
              : std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8};
  }
  auto rows = repetition_experiment(b, m, targets, n_e, ctx.common.threads);
  Table t;
  t.header = {"N_E", "z_e"};
  for (int q : targets) {
    t.header.push_back("z_" + ctx.cfg.nuclei[q].name);
  }
  t.header.push_back("f_approx");
  t.header.push_back("f_exact");
  for (const auto &r : rows) {
    std::vector<double> row{static_cast<double>(r.n_e)};
    row.insert(row.end(), r.z.begin(), r.z.end());
    row.push_back(r.f_approx);
    row.push_back(r.f_exact);
    t.rows.push_back(row);
  }
  write_csv(ctx.path("repeat.csv"), t);
  ctx.manifest.parameters = {{"mode", mode},   {"qubits", names}, {"backend", backend},
                             {"N_E", n_e},     {"pulse_angle_error", na.angle_error},
                             {"pulse_off_axis", na.off_axis}};
}

void run_fit_mqc(Context &ctx, const std::string &in, int tones) {
  Table t = read_csv(in);
  SinusoidFitOptions fo;
  fo.tones = tones;
  json j = mqc_model_to_json(fit_sinusoid(t.values("phi_rad"), t.values("p0_electron"), fo));
  write_json(ctx.path("mqc_fit.json"), j);
  ctx.manifest.parameters = {{"in", in}, {"tones", tones}};
  std::cout << j.dump(2) << '\n';
}

void run_fit_gatefid(Context &ctx, const std::string &in, const std::string &mode,
                     const std::vector<std::string> &names, const std::string &column) {
  Table t = read_csv(in);
  std::vector<int> n_e;
  for (double v : t.values("N_E")) {
    n_e.push_back(static_cast<int>(std::lround(v)));
  }
  std::vector<int> targets = ctx.cfg.indices_of(names);
  auto states = ideal_repetition_states(ctx.cfg, parse_mqc_mode(mode), targets, n_e);
  ErrorChannelFit fit =
      fit_gate_error(n_e, t.values(column), static_cast<int>(targets.size()) + 1, states);
  for (const auto &w : fit.warnings) {
    std::cerr << "warning: " << w << '\n';
  }
  json j = error_fit_to_json(fit);
  write_json(ctx.path("gate_fit.json"), j);
  ctx.manifest.parameters = {{"in", in}, {"mode", mode}, {"qubits", names}, {"column", column}};
  std::cout << j.dump(2) << '\n';
}

void run_scan_field(Context &ctx, double lo, double hi, double step,
                    const std::vector<std::string> &names) {
  std::vector<int> nuclei = names.empty() ? std::vector<int>{0, 1, 2} : ctx.cfg.indices_of(names);
  FieldScan fs_ = field_scan(ctx.cfg, nuclei, lo, hi, step, {1, 2, 3}, ctx.common.threads);
  Table t;
  t.header = {"field_gauss"};
  for (int q : nuclei) {
    for (int k : fs_.orders) {
      std::string tag = ctx.cfg.nuclei[q].name + "_k" + std::to_string(k);
      for (const char *col : {"cx_time_us", "cx_error_rad", "x_time_us", "x_error_rad",
                              "x_time_continuous_us"}) {
        t.header.push_back(tag + "_" + col);
      }
    }
  }
  t.header.push_back("mean_conditional_error_rad");
  for (const auto &r : fs_.rows) {
    std::vector<double> row{r.field};
    for (const auto &per_q : r.cells) {
      for (const auto &c : per_q) {
        row.insert(row.end(),
                   {c.cx_time * c.cx_repeats, c.cx_error, c.x_time, c.x_error, c.x_time_continuous});
      }
    }
    row.push_back(r.mean_conditional_error);
    t.rows.push_back(row);
  }
  write_csv(ctx.path("field_scan.csv"), t);
  json j = {{"recommended_fields_gauss", fs_.recommended}};
  write_json(ctx.path("field_scan.json"), j);
  ctx.manifest.parameters = {{"b_lo", lo}, {"b_hi", hi}, {"step", step}, {"qubits", names}};
  std::cout << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"ddregister: DD gate compilation and register simulation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(DDREG_VERSION));

  Common common;
  std::string qubit = "q1";
  std::vector<int> orders{1, 2, 3};
  auto *res = app.add_subcommand("resonances", "Resonance times of one nucleus");
  add_common(res, common);
  res->add_option("--qubit", qubit, "Nucleus name");
  res->add_option("--orders", orders, "Resonance orders k")->delimiter(',');

  std::string scan_kind = "alignment";
  double t_lo = 0.5, t_hi = 12.0, t_step = 0.005;
  std::vector<std::string> qubits;
  int n_min = 1, n_max = 12;
  auto *scan = app.add_subcommand("scan", "Axis alignment, G1 or entangling-power scans");
  add_common(scan, common);
  scan->add_option("kind", scan_kind, "alignment | g1 | epower")
      ->check(CLI::IsMember({"alignment", "g1", "epower"}));
  scan->add_option("--t-lo", t_lo, "First unit time (us)");
  scan->add_option("--t-hi", t_hi, "Last unit time (us)");
  scan->add_option("--step", t_step, "Unit time step (us)");
  scan->add_option("--qubits", qubits, "Target nuclei")->delimiter(',');
  scan->add_option("--n-min", n_min, "Smallest N");
  scan->add_option("--n-max", n_max, "Largest N");

  int spec_n = 12;
  bool spec_sim = false;
  NoiseArgs noise;
  auto *spec = app.add_subcommand("spectroscopy", "DD spectroscopy of thermal nuclei");
  add_common(spec, common);
  spec->add_option("--t-lo", t_lo);
  spec->add_option("--t-hi", t_hi);
  spec->add_option("--step", t_step);
  spec->add_option("--repeats", spec_n, "Units N");
  spec->add_option("--qubits", qubits)->delimiter(',');
  spec->add_flag("--simulate", spec_sim, "Also run the density-matrix simulation");
  add_noise(spec, noise);

  int cx_order = 2, x_order = 2;
  std::vector<std::string> pz;
  auto *cal = app.add_subcommand("calibrate", "CX, X and Z pi/2 calibration table");
  add_common(cal, common);
  cal->add_option("--qubits", qubits)->delimiter(',');
  cal->add_option("--cx-order", cx_order);
  cal->add_option("--x-order", x_order);
  cal->add_option("--parallel-z", pz, "Also design a parallel Z on these nuclei")->delimiter(',');

  auto *dp = app.add_subcommand("design-parallel", "Parallel entangling gate");
  add_common(dp, common);
  dp->add_option("--qubits", qubits)->delimiter(',')->required();

  auto *sim = app.add_subcommand("simulate", "Protocol simulations");
  sim->require_subcommand(1);
  MqcArgs mqc;
  auto *sim_mqc = sim->add_subcommand("mqc", "Multiple-quantum-coherence signal and fit");
  add_common(sim_mqc, common);
  sim_mqc->add_option("--mode", mqc.mode)->check(CLI::IsMember({"bipartite", "sequential", "parallel"}));
  sim_mqc->add_option("--qubits", mqc.qubits)->delimiter(',')->required();
  sim_mqc->add_option("--backend", mqc.backend)
      ->check(CLI::IsMember({"ideal", "compiled", "compiled+noise"}));
  sim_mqc->add_flag("--optimize", mqc.optimize, "Anneal the local preparation");
  sim_mqc->add_option("--tones", mqc.tones)->check(CLI::Range(1, 2));
  sim_mqc->add_option("--resolution", mqc.resolution, "Phase-gate resolution (rad)");
  sim_mqc->add_option("--max-phase", mqc.max_phase, "Largest phase (rad)");
  sim_mqc->add_option("--spam", mqc.spam, "Depolarizing SPAM probability");
  sim_mqc->add_option("--anneal-steps", mqc.anneal_steps);
  sim_mqc->add_option("--anneal-chains", mqc.anneal_chains);
  add_noise(sim_mqc, mqc.noise);

  std::string rep_mode = "bipartite", rep_backend = "ideal";
  std::vector<int> n_e;
  auto *sim_rep = sim->add_subcommand("repeat", "Entangler repetition experiment");
  add_common(sim_rep, common);
  sim_rep->add_option("--mode", rep_mode)->check(CLI::IsMember({"bipartite", "sequential", "parallel"}));
  sim_rep->add_option("--qubits", qubits)->delimiter(',')->required();
  sim_rep->add_option("--backend", rep_backend)
      ->check(CLI::IsMember({"ideal", "compiled", "compiled+noise"}));
  sim_rep->add_option("--ne", n_e, "Repeat counts N_E")->delimiter(',');
  add_noise(sim_rep, noise);

  auto *sim_spec = sim->add_subcommand("spectroscopy", "Spectroscopy with density-matrix check");
  add_common(sim_spec, common);
  sim_spec->add_option("--t-lo", t_lo);
  sim_spec->add_option("--t-hi", t_hi);
  sim_spec->add_option("--step", t_step);
  sim_spec->add_option("--repeats", spec_n);
  sim_spec->add_option("--qubits", qubits)->delimiter(',');
  add_noise(sim_spec, noise);

  auto *fit = app.add_subcommand("fit", "Fit simulated or external data");
  fit->require_subcommand(1);
  std::string fit_in;
  int fit_tones = 1;
  auto *fit_mqc = fit->add_subcommand("mqc", "Sinusoid fit of an MQC CSV");
  add_common(fit_mqc, common);
  fit_mqc->add_option("--in", fit_in)->required()->check(CLI::ExistingFile);
  fit_mqc->add_option("--tones", fit_tones)->check(CLI::Range(1, 2));
  std::string fit_mode = "bipartite", fit_column = "f_approx";
  auto *fit_gf = fit->add_subcommand("gatefid", "SPAM / gate bit-flip fit of a repeat CSV");
  add_common(fit_gf, common);
  fit_gf->add_option("--in", fit_in)->required()->check(CLI::ExistingFile);
  fit_gf->add_option("--mode", fit_mode)->check(CLI::IsMember({"bipartite", "sequential", "parallel"}));
  fit_gf->add_option("--qubits", qubits)->delimiter(',')->required();
  fit_gf->add_option("--column", fit_column, "Fidelity column (f_approx or f_exact)");

  double b_lo = 250.0, b_hi = 700.0, b_step = 1.0;
  auto *sf = app.add_subcommand("scan-field", "Gate errors and times versus field");
  add_common(sf, common);
  sf->add_option("--b-lo", b_lo);
  sf->add_option("--b-hi", b_hi);
  sf->add_option("--b-step", b_step);
  sf->add_option("--qubits", qubits)->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    auto ctx_for = [&](const std::string &cmd) { return open_context(common, cmd); };
    if (res->parsed()) {
      Context ctx = ctx_for("resonances");
      run_resonances(ctx, qubit, orders);
      finish(ctx);
    } else if (scan->parsed()) {
      Context ctx = ctx_for("scan " + scan_kind);
      run_scan(ctx, scan_kind, t_lo, t_hi, t_step, qubits, n_min, n_max);
      finish(ctx);
    } else if (spec->parsed()) {
      Context ctx = ctx_for("spectroscopy");
      run_spectroscopy(ctx, t_lo, t_hi, t_step, spec_n, qubits, spec_sim, noise);
      finish(ctx);
    } else if (cal->parsed()) {
      Context ctx = ctx_for("calibrate");
      run_calibrate(ctx, qubits, cx_order, x_order, pz);
      finish(ctx);
    } else if (dp->parsed()) {
      Context ctx = ctx_for("design-parallel");
      run_design_parallel(ctx, qubits);
      finish(ctx);
    } else if (sim_mqc->parsed()) {
      Context ctx = ctx_for("simulate mqc");
      run_simulate_mqc(ctx, mqc);
      finish(ctx);
    } else if (sim_rep->parsed()) {
      Context ctx = ctx_for("simulate repeat");
      run_simulate_repeat(ctx, rep_mode, qubits, rep_backend, n_e, noise);
      finish(ctx);
    } else if (sim_spec->parsed()) {
      Context ctx = ctx_for("simulate spectroscopy");
      run_spectroscopy(ctx, t_lo, t_hi, t_step, spec_n, qubits, true, noise);
      finish(ctx);
    } else if (fit_mqc->parsed()) {
      Context ctx = ctx_for("fit mqc");
      run_fit_mqc(ctx, fit_in, fit_tones);
      finish(ctx);
    } else if (fit_gf->parsed()) {
      Context ctx = ctx_for("fit gatefid");
      run_fit_gatefid(ctx, fit_in, fit_mode, qubits, fit_column);
      finish(ctx);
    } else if (sf->parsed()) {
      Context ctx = ctx_for("scan-field");
      run_scan_field(ctx, b_lo, b_hi, b_step, qubits);
      finish(ctx);
    }
  } catch (const ValidationError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
