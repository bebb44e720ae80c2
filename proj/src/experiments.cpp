#include "fhn/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "fhn/analysis.hpp"
#include "fhn/stability.hpp"

namespace fhn {

Check make_check(std::string name, double value, std::string relation, double threshold) {
  Check c{std::move(name), value, threshold, std::move(relation), false};
  if (c.relation == "<") c.pass = value < threshold;
  else if (c.relation == "<=") c.pass = value <= threshold;
  else if (c.relation == ">") c.pass = value > threshold;
  else if (c.relation == ">=") c.pass = value >= threshold;
  else c.pass = value != 0.0;
  return c;
}

std::vector<std::string> preset_names() {
  return {"fig1", "fig2", "fig3", "fig4", "nhfhn_p1.1", "nhfhn_p2", "ode_c-1.5", "ode_c0"};
}

bool is_preset(const std::string& name) {
  const auto names = preset_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

ProbeWindow nhfhn_window(const PresetOptions& opt) {
  if (opt.long_window) return {500.0, 600.0};
  return opt.fast ? ProbeWindow{50.0, 100.0} : ProbeWindow{100.0, 200.0};
}

namespace {

ExperimentConfig toy_preset(double alpha, double left, double right) {
  ExperimentConfig c;
  c.model = ModelSpec::toy(alpha);
  c.h = 0.02;
  c.sim.dt = 1e-5;
  c.sim.t_end = 100.0;
  c.sim.record_every = 100000;
  c.sim.diagnostic_every = 1000;
  c.sim.probes = {0.0};
  c.ic.kind = IcSpec::Kind::Step;
  c.ic.left = left;
  c.ic.right = right;
  return c;
}

ExperimentConfig nhfhn_preset(double p, const PresetOptions& opt) {
  ExperimentConfig c;
  c.model = ModelSpec::nh_fhn(CProfile::well(p), 0.1, 1.0, {-50.0, 50.0});
  c.h = opt.fast ? 0.1 : 0.05;
  c.sim.dt = 1e-4;
  c.sim.t_end = nhfhn_window(opt).t_hi;
  c.sim.record_every = 10000;
  c.sim.diagnostic_every = 100;
  c.sim.probes = {-46.0, 0.0};
  c.ic.kind = IcSpec::Kind::Stationary;
  c.ic.bump_amplitude = 0.1;
  c.ic.bump_center = 0.0;
  c.ic.bump_width = 1.0;
  return c;
}

ExperimentConfig ode_preset(double c0, double u0) {
  ExperimentConfig c;
  c.model = ModelSpec::ode_fhn(c0, 0.1);
  c.sim.dt = 1e-3;
  c.sim.t_end = 200.0;
  c.sim.record_every = 1;
  c.ode_u0 = u0;
  c.ode_v0 = 0.0;
  return c;
}

void write_artifacts(const std::string& out_dir, const std::string& name, const ExperimentConfig& c,
                     const Trajectory* traj, const OdeTrajectory* ode, Verdict& v) {
  if (out_dir.empty()) return;
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const auto base = fs::path(out_dir) / name;
  {
    std::ofstream os(base.string() + ".ini");
    os << serialize_config(c);
    v.artifacts.push_back(base.string() + ".ini");
  }
  if (traj) {
    std::ofstream s(base.string() + "_snapshots.csv");
    write_snapshots_csv(s, *traj);
    std::ofstream d(base.string() + "_diagnostics.csv");
    write_diagnostics_csv(d, *traj);
    v.artifacts.push_back(base.string() + "_snapshots.csv");
    v.artifacts.push_back(base.string() + "_diagnostics.csv");
  }
  if (ode) {
    std::ofstream os(base.string() + "_ode.csv");
    os << "# fhnlab ode trajectory v1\nt,u,v\n";
    os.precision(12);
    for (std::size_t i = 0; i < ode->t.size(); ++i) os << ode->t[i] << ',' << ode->u[i] << ',' << ode->v[i] << '\n';
    v.artifacts.push_back(base.string() + "_ode.csv");
  }
}

struct Series {
  std::vector<double> t, mean_u, std_u, probe0;
};

Series series_of(const Trajectory& traj) {
  Series s;
  for (const auto& d : traj.diagnostics) {
    s.t.push_back(d.t);
    s.mean_u.push_back(d.mean_u);
    s.std_u.push_back(d.std_u);
    s.probe0.push_back(d.probe_u.empty() ? 0.0 : d.probe_u[0]);
  }
  return s;
}

double mean_in_window(const Series& s, const std::vector<double>& x, double lo, double hi) {
  double acc = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < s.t.size(); ++i)
    if (s.t[i] >= lo && s.t[i] <= hi) {
      acc += x[i];
      ++n;
    }
  return n ? acc / n : 0.0;
}

// Periodicity measures, with a failed detection reported as regularity +inf and amplitude 0.
Periodicity safe_periodicity(const std::vector<double>& t, const std::vector<double>& x, double lo,
                             double hi) {
  try {
    return detect_periodicity(t, x, lo, hi);
  } catch (const DetectionError&) {
    Periodicity p;
    p.regularity = std::numeric_limits<double>::infinity();
    return p;
  }
}

// Relaxation cycles at alpha = 15 last 12-28 time units, so the window starts early.
constexpr double kLateLo = 30.0, kLateHi = 100.0;

double half_range(const Series& s, const std::vector<double>& x, double lo, double hi) {
  double a = std::numeric_limits<double>::infinity(), b = -a;
  for (std::size_t i = 0; i < s.t.size(); ++i)
    if (s.t[i] >= lo && s.t[i] <= hi) {
      a = std::min(a, x[i]);
      b = std::max(b, x[i]);
    }
  return b >= a ? 0.5 * (b - a) : 0.0;
}

}  // namespace

ExperimentConfig preset_config(const std::string& name, const PresetOptions& opt) {
  if (name == "fig1") return toy_preset(1.0, 1.0, -1.0);
  if (name == "fig2") return toy_preset(1.0, 1.0, -0.5);
  if (name == "fig3") return toy_preset(15.0, 1.0, -1.0);
  if (name == "fig4") return toy_preset(15.0, 1.0, -0.5);
  if (name == "nhfhn_p1.1") return nhfhn_preset(1.1, opt);
  if (name == "nhfhn_p2") return nhfhn_preset(2.0, opt);
  if (name == "ode_c-1.5") return ode_preset(-1.5, 0.0);
  if (name == "ode_c0") return ode_preset(0.0, 0.1);
  throw ConfigError("unknown preset '" + name + "'");
}

double planar_cycle_amplitude(double alpha) {
  const double dt = 1e-3;
  std::vector<double> y{0.1, 0.0};
  auto rhs = [alpha](double, std::span<const double> s, std::span<double> ds) {
    ds[0] = (alpha * s[0] - s[0] * s[0] * s[0]) - s[1];
    ds[1] = s[0];
  };
  Rk4 rk(2);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t j = 0; j < 400000; ++j) {
    rk.step(rhs, j * dt, dt, std::span<double>(y));
    if (j >= 200000) {
      lo = std::min(lo, y[0]);
      hi = std::max(hi, y[0]);
    }
  }
  return 0.5 * (hi - lo);
}

Verdict reproduce(const std::string& name, const PresetOptions& opt, const std::string& out_dir) {
  const ExperimentConfig cfg = preset_config(name, opt);
  Verdict v;
  v.preset = name;

  if (cfg.model.kind == ModelKind::OdeFhn) {
    const auto traj = simulate_ode(cfg.model, cfg.ode_u0, cfg.ode_v0, cfg.sim.dt, cfg.sim.t_end);
    const double c = cfg.model.c(0.0);
    const auto hopf_lo = ode_hopf_analysis(-1.0, cfg.model.epsilon);
    const auto hopf_hi = ode_hopf_analysis(1.0, cfg.model.epsilon);
    v.checks.push_back(make_check("trace_at_c=-1", std::abs(hopf_lo.trace), "<=", 0.0));
    v.checks.push_back(make_check("trace_at_c=+1", std::abs(hopf_hi.trace), "<=", 0.0));
    if (std::abs(c) >= 1.0) {
      const double du = traj.u.back() - c, dv = traj.v.back() - cubic_f(c);
      v.checks.push_back(make_check("distance_to_rest_state", std::hypot(du, dv), "<=", 1e-6));
    } else {
      // Regularity over the last 20 periods.
      const auto coarse = detect_periodicity(traj.t, traj.u, 0.5 * cfg.sim.t_end, cfg.sim.t_end);
      const double lo = cfg.sim.t_end - 20.5 * coarse.period;
      const auto fine = safe_periodicity(traj.t, traj.u, lo, cfg.sim.t_end);
      v.checks.push_back(make_check("cycle_regularity", fine.regularity, "<=", 0.005));
      v.checks.push_back(make_check("cycle_amplitude", fine.amplitude, ">", 0.5));
    }
    write_artifacts(out_dir, name, cfg, nullptr, &traj, v);
  } else if (cfg.model.is_toy()) {
    const auto grid = cfg.grid();
    const auto ic = build_ic(cfg, grid);
    const bool odd = cfg.ic.left == -cfg.ic.right;
    Trajectory traj;
    SymmetryReport sym;
    if (odd) {
      sym = symmetry_invariance_check(cfg.model, ic, cfg.sim, Parity::Odd);
      traj = std::move(sym.trajectory);
    } else {
      traj = simulate(cfg.model, ic, cfg.sim);
    }
    const auto s = series_of(traj);
    const double alpha = cfg.model.alpha;
    if (name == "fig1") {
      const auto stats = spatial_profile_stats(traj.snapshots.back().u);
      v.checks.push_back(make_check("sup_abs_u_final", stats.max_abs, "<", 0.05));
      v.checks.push_back(make_check("max_even_mode_coeff", sym.max_forbidden_coeff, "<=", kSymmetryTolerance));
    } else if (name == "fig2") {
      v.checks.push_back(make_check("final_std_u", s.std_u.back(), "<=", 1e-3));
      const auto per = safe_periodicity(s.t, s.mean_u, kLateLo, kLateHi);
      v.checks.push_back(make_check("mean_u_regularity", per.regularity, "<=", 0.01));
      const double ref = planar_cycle_amplitude(alpha);
      v.checks.push_back(make_check("mean_u_amplitude_rel_error", std::abs(per.amplitude - ref) / ref, "<=", 0.02));
    } else if (name == "fig3") {
      v.checks.push_back(make_check("late_mean_std_u", mean_in_window(s, s.std_u, kLateLo, kLateHi), ">", 0.1));
      const auto per = safe_periodicity(s.t, s.probe0, kLateLo, kLateHi);
      v.checks.push_back(make_check("probe_regularity", per.regularity, "<=", 0.02));
      v.checks.push_back(make_check("max_mean_mode_coeff", sym.max_mean_coeff, "<=", kSymmetryTolerance));
    } else {
      v.checks.push_back(make_check("final_std_u", s.std_u.back(), "<=", 1e-2));
      // Fewer than four cycles fit in the horizon, so the amplitude is the half range.
      const double amp = half_range(s, s.mean_u, kLateLo, kLateHi);
      const double ref = planar_cycle_amplitude(alpha);
      v.checks.push_back(make_check("mean_u_amplitude_rel_error", std::abs(amp - ref) / ref, "<=", 0.02));
    }
    write_artifacts(out_dir, name, cfg, &traj, nullptr, v);
  } else {
    const auto grid = cfg.grid();
    const auto traj = simulate(cfg.model, build_ic(cfg, grid), cfg.sim);
    const auto w = nhfhn_window(opt);
    const auto edge = propagation_metric(traj, -46.0, w.t_lo, w.t_hi);
    if (name == "nhfhn_p1.1") {
      v.checks.push_back(make_check("edge_probe_amplitude", edge.amplitude, ">=", 1.0));
      v.checks.push_back(make_check("edge_probe_oscillates", edge.detection_failed ? 0.0 : 1.0, "flag", 0.0));
    } else {
      const auto centre = propagation_metric(traj, 0.0, w.t_lo, w.t_hi);
      const double edge_amp = edge.detection_failed ? 0.0 : edge.amplitude;
      v.checks.push_back(make_check("edge_probe_amplitude", edge_amp, "<=", 0.2));
      v.checks.push_back(make_check("centre_probe_amplitude", centre.detection_failed ? 0.0 : centre.amplitude, ">=", 1.0));
    }
    write_artifacts(out_dir, name, cfg, &traj, nullptr, v);
  }
  v.pass = std::all_of(v.checks.begin(), v.checks.end(), [](const Check& c) { return c.pass; });
  return v;
}

}  // namespace fhn
