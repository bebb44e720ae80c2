#include "fhn/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "fhn/config.hpp"
#include "fhn/experiments.hpp"
#include "fhn/sim.hpp"
#include "fhn/stability.hpp"
#include "fhn/sturm.hpp"
#include "fhn/verify.hpp"

namespace fhn {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json to_json(const Check& c) {
  return {{"name", c.name}, {"value", c.value}, {"relation", c.relation}, {"threshold", c.threshold}, {"pass", c.pass}};
}

json checks_json(const std::vector<Check>& checks) {
  json a = json::array();
  for (const auto& c : checks) a.push_back(to_json(c));
  return a;
}

std::string out_path(const std::string& dir, const std::string& file) {
  fs::create_directories(dir);
  return (fs::path(dir) / file).string();
}

void write_json(const std::string& path, const json& j) {
  std::ofstream os(path);
  os << j.dump(2) << '\n';
}

int cmd_simulate(const std::string& config_path, const std::string& out, std::optional<std::uint64_t> seed) {
  ExperimentConfig c = load_config(config_path);
  if (!out.empty()) c.output.dir = out;
  if (seed) c.ic.seed = *seed;
  json summary{{"status", "ok"}, {"model", to_string(c.model.kind)}};
  json artifacts = json::array();

  if (c.model.kind == ModelKind::OdeFhn) {
    const auto traj = simulate_ode(c.model, c.ode_u0, c.ode_v0, c.sim.dt, c.sim.t_end, c.sim.record_every);
    const auto path = out_path(c.output.dir, "ode.csv");
    std::ofstream os(path);
    os << "# fhnlab ode trajectory v1\nt,u,v\n";
    os.precision(12);
    for (std::size_t i = 0; i < traj.t.size(); ++i) os << traj.t[i] << ',' << traj.u[i] << ',' << traj.v[i] << '\n';
    artifacts.push_back(path);
    summary["final"] = {traj.u.back(), traj.v.back()};
  } else {
    const auto grid = c.grid();
    const auto traj = simulate(c.model, build_ic(c, grid), c.sim);
    if (c.output.snapshots) {
      const auto path = out_path(c.output.dir, "snapshots.csv");
      std::ofstream os(path);
      write_snapshots_csv(os, traj);
      artifacts.push_back(path);
    }
    if (c.output.diagnostics) {
      const auto path = out_path(c.output.dir, "diagnostics.csv");
      std::ofstream os(path);
      write_diagnostics_csv(os, traj);
      artifacts.push_back(path);
    }
    const auto e = energy_trace(traj);
    summary["steps"] = c.sim.steps();
    summary["final_norm"] = traj.diagnostics.back().norm;
    summary["max_energy_residual"] = e.max_residual;
    summary["energy_nonincreasing"] = e.nonincreasing;
  }
  summary["artifacts"] = artifacts;
  std::cout << summary.dump(2) << '\n';
  return kExitOk;
}

int cmd_spectrum(const std::string& config_path, const std::string& out) {
  ExperimentConfig c = load_config(config_path);
  if (!out.empty()) c.output.dir = out;
  if (!c.model.is_fhn_pde()) throw ConfigError("spectrum needs model.kind = nh_fhn or const_c_fhn");
  if (c.spectrum.n_modes == 0) throw ConfigError("spectrum.n_modes must be at least 1");
  const auto grid = c.grid();
  const auto st = stationary_solution(c.model, grid);
  const auto problem = SlProblem::from_stationary(st.state.u, c.model.d);
  const auto spectrum = sl_spectrum(problem, c.spectrum.n_modes);

  const auto path = out_path(c.output.dir, "spectrum.csv");
  {
    std::ofstream os(path);
    write_spectrum_csv(os, spectrum);
  }
  std::vector<double> lambdas;
  for (const auto& p : spectrum) lambdas.push_back(p.lambda);
  const auto cascade = unstable_mode_count_nhfhn(lambdas, c.model.epsilon);
  const auto integral = integral_instability_criterion(problem);

  json summary{{"status", "ok"},
               {"lambda_0", lambdas.front()},
               {"eigenvalues", lambdas},
               {"unstable_count", cascade.unstable_count},
               {"truncated", cascade.truncated},
               {"integral_f_prime", integral.integral},
               {"integral_predicts_instability", integral.predicts_instability},
               {"artifacts", {path}}};
  if (spectrum.size() > 1) summary["weyl_ratio_last"] = weyl_ratio(problem, spectrum.back());
  if (spectrum.size() >= 5) {
    const auto linf = linf_uniformity_stats(spectrum);
    summary["linf"] = {{"max_abs", linf.max_abs}, {"ratio", linf.ratio},
                       {"trend_slope", linf.trend_slope}, {"growth_flag", linf.growth_flag}};
  }
  json warnings = json::array();
  for (auto w : st.warnings) warnings.push_back(to_string(w));
  summary["profile_warnings"] = warnings;
  std::cout << summary.dump(2) << '\n';
  return kExitOk;
}

int cmd_bifurcate(const std::string& config_path, const std::string& out) {
  ExperimentConfig c = load_config(config_path);
  if (!out.empty()) c.output.dir = out;
  const auto& b = c.bifurcate;
  const auto path = out_path(c.output.dir, "cascade.csv");
  std::ofstream os(path);
  write_cascade_csv_header(os);
  json summary{{"status", "ok"}, {"parameter", b.parameter}};
  json counts = json::array();

  auto sample = [&](std::size_t i) {
    return b.samples == 1 ? b.lo : b.lo + (b.hi - b.lo) * static_cast<double>(i) / (b.samples - 1);
  };
  if (b.parameter == "alpha") {
    if (!c.model.is_toy()) throw ConfigError("alpha sweeps need a toy model");
    for (std::size_t i = 0; i < b.samples; ++i) {
      const auto r = toy_cascade_report(sample(i), b.k_max, c.model.domain, 1.0);
      write_cascade_csv_rows(os, r);
      counts.push_back({{"param", r.parameter}, {"unstable_count", r.unstable_count}});
    }
    summary["crossings"] = b.samples > 1 ? hopf_cascade_toy(b.lo, b.hi, b.k_max, c.model.domain, 1.0)
                                         : std::vector<double>{};
  } else {
    if (c.model.kind != ModelKind::NhFhn || !c.model.c_profile->is_well())
      throw ConfigError("p sweeps need model.kind = nh_fhn with c_profile = well");
    const WellFamily family{c.grid(), c.model.d};
    for (std::size_t i = 0; i < b.samples; ++i) {
      const auto r = unstable_mode_count_nhfhn(family.at(sample(i)), b.k_max, c.model.epsilon, sample(i));
      write_cascade_csv_rows(os, r);
      counts.push_back({{"param", r.parameter}, {"unstable_count", r.unstable_count}, {"truncated", r.truncated}});
    }
    if (b.find_p_star) {
      const auto ps = find_p_star(family, b.p_lo, b.p_hi);
      summary["p_star"] = {{"value", ps.p_star}, {"lambda_0", ps.lambda0_at_p_star},
                           {"monotone_samples", ps.monotone_samples}};
    }
  }
  summary["samples"] = counts;
  summary["artifacts"] = {path};
  std::cout << summary.dump(2) << '\n';
  return kExitOk;
}

int cmd_reproduce(const std::string& preset, const std::string& out, const PresetOptions& opt) {
  if (!is_preset(preset)) throw ConfigError("unknown preset '" + preset + "'");
  const auto v = reproduce(preset, opt, out);
  json j{{"preset", v.preset}, {"pass", v.pass}, {"fast", opt.fast}, {"checks", checks_json(v.checks)},
         {"artifacts", v.artifacts}};
  if (!out.empty()) write_json(out_path(out, preset + "_verdict.json"), j);
  std::cout << j.dump(2) << '\n';
  return v.pass ? kExitOk : kExitCheckFailed;
}

int cmd_verify(const std::string& suite, const std::string& out) {
  if (suite != "all") {
    const auto names = suite_names();
    if (std::find(names.begin(), names.end(), suite) == names.end())
      throw ConfigError("unknown verification suite '" + suite + "'");
  }
  const auto reports = run_suites(suite, thread_budget());
  bool pass = true;
  json suites = json::array();
  for (const auto& r : reports) {
    pass = pass && r.pass;
    suites.push_back({{"suite", r.suite}, {"pass", r.pass}, {"checks", checks_json(r.checks)}});
  }
  json j{{"suite", suite}, {"pass", pass}, {"suites", suites}};
  if (!out.empty()) write_json(out_path(out, "verify_" + suite + ".json"), j);
  std::cout << j.dump(2) << '\n';
  return pass ? kExitOk : kExitCheckFailed;
}

int report_error(const Error& e, int code) {
  json j{{"error", e.kind()}, {"message", e.what()}, {"exit_code", code}};
  if (const auto* b = dynamic_cast<const BlowUpError*>(&e)) j["time"] = b->time();
  if (const auto* b = dynamic_cast<const BracketError*>(&e))
    j["bracket"] = {{"lo", b->lo}, {"hi", b->hi}, {"f_lo", b->f_lo}, {"f_hi", b->f_hi}};
  std::cerr << j.dump() << '\n';
  return code;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Reaction-diffusion FitzHugh-Nagumo laboratory"};
  app.require_subcommand(1);

  std::string config, out, preset, suite;
  std::optional<std::uint64_t> seed;
  PresetOptions opt;

  auto* sim = app.add_subcommand("simulate", "Integrate a configured experiment");
  sim->add_option("--config", config, "Experiment config file")->required();
  sim->add_option("--out", out, "Output directory (overrides output.dir)");
  sim->add_option("--seed", seed, "Seed for random initial conditions");

  auto* spec = app.add_subcommand("spectrum", "Sturm-Liouville spectrum about the stationary state");
  spec->add_option("--config", config, "Experiment config file")->required();
  spec->add_option("--out", out, "Output directory");

  auto* bif = app.add_subcommand("bifurcate", "Mode-stability sweep in alpha or p");
  bif->add_option("--config", config, "Experiment config file")->required();
  bif->add_option("--out", out, "Output directory");

  auto* rep = app.add_subcommand("reproduce", "Run a named preset and evaluate its checks");
  rep->add_option("preset", preset, "Preset name")->required();
  rep->add_option("--out", out, "Output directory for CSV and verdict");
  rep->add_flag("--fast", opt.fast, "Halve resolution and horizon of the nhFHN presets");
  rep->add_flag("--long-window", opt.long_window, "nhFHN: run to t = 600 and probe over (500, 600)");

  auto* ver = app.add_subcommand("verify", "Run the oracle suites");
  ver->add_option("suite", suite, "lemmas, sturm, energy, backends, symmetry or all")->required();
  ver->add_option("--out", out, "Output directory for the JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*sim) return cmd_simulate(config, out, seed);
    if (*spec) return cmd_spectrum(config, out);
    if (*bif) return cmd_bifurcate(config, out);
    if (*rep) return cmd_reproduce(preset, out, opt);
    if (*ver) return cmd_verify(suite, out);
  } catch (const ConfigError& e) {
    return report_error(e, kExitConfig);
  } catch (const GuardError& e) {
    return report_error(e, kExitGuard);
  } catch (const BlowUpError& e) {
    return report_error(e, kExitBlowUp);
  } catch (const BracketError& e) {
    return report_error(e, kExitBracket);
  } catch (const SolverError& e) {
    return report_error(e, kExitSolver);
  } catch (const ResolutionError& e) {
    return report_error(e, kExitSolver);
  } catch (const Error& e) {
    return report_error(e, kExitConfig);
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "internal"}, {"message", e.what()}}.dump() << '\n';
    return kExitCheckFailed;
  }
  return kExitConfig;
}

}  // namespace fhn
