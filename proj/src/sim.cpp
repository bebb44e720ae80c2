#include "fhn/sim.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <cmath>
#include <ostream>
#include <string>

namespace fhn {

std::size_t SimConfig::steps() const { return static_cast<std::size_t>(std::llround(t_end / dt)); }

void SimConfig::validate() const {
  if (!(dt > 0) || !std::isfinite(dt)) throw ConfigError("sim.dt must be positive");
  if (!(t_end > 0) || !std::isfinite(t_end)) throw ConfigError("sim.t_end must be positive");
  if (record_every == 0) throw ConfigError("sim.record_every must be at least 1");
  if (!(safety > 0 && safety <= 1)) throw ConfigError("sim.safety must lie in (0, 1]");
  if (backend == Backend::Galerkin && galerkin_order < 1)
    throw ConfigError("sim.galerkin_order must be at least 1");
  if (steps() == 0) throw ConfigError("sim.t_end is shorter than one step");
}

namespace {

double reaction_epsilon(const ModelSpec& spec) { return spec.is_toy() ? 1.0 : spec.epsilon; }
double diffusion(const ModelSpec& spec) { return spec.is_toy() ? 1.0 : spec.d; }

}  // namespace

double max_stable_dt(const ModelSpec& spec, const SimConfig& cfg, const UniformGrid& grid) {
  const double eps = reaction_epsilon(spec);
  const double d = diffusion(spec);
  double lambda_max;
  if (cfg.backend == Backend::Galerkin) {
    lambda_max = cosine_eigenvalue(cfg.galerkin_order, spec.domain, d);
  } else {
    const double h = grid.spacing();
    lambda_max = 4.0 * d / (h * h);
  }
  return 2.0 * cfg.safety * eps / lambda_max;
}

void check_guard(const ModelSpec& spec, const SimConfig& cfg, const UniformGrid& grid) {
  const double limit = max_stable_dt(spec, cfg, grid);
  if (cfg.dt > limit)
    throw GuardError("dt = " + std::to_string(cfg.dt) + " exceeds the stability limit " +
                     std::to_string(limit));
}

std::vector<double> rk4_step(std::vector<double> y, double t, double dt, const RhsFunction& rhs) {
  Rk4 rk(y.size());
  rk.step(rhs, t, dt, std::span<double>(y));
  return y;
}

FdRhs::FdRhs(const ModelSpec& spec, const UniformGrid& grid)
    : spec_(spec), n_(grid.size()), h_(grid.spacing()), c_(grid.size(), 0.0), lap_(grid.size()) {
  if (!(spec.is_toy() || spec.is_fhn_pde())) throw DomainError("FD right-hand side needs a PDE model");
  if (spec.is_fhn_pde())
    for (std::size_t i = 0; i < n_; ++i) c_[i] = spec.c(grid.x(i));
}

void FdRhs::operator()(double, std::span<const double> y, std::span<double> dy) const {
  const auto u = y.subspan(0, n_);
  const auto v = y.subspan(n_, n_);
  auto du = dy.subspan(0, n_);
  auto dv = dy.subspan(n_, n_);
  neumann_laplacian(u, h_, lap_);
  switch (spec_.kind) {
    case ModelKind::ToyLinear:
      for (std::size_t i = 0; i < n_; ++i) {
        du[i] = (spec_.alpha * u[i] - v[i]) + lap_[i];
        dv[i] = u[i];
      }
      break;
    case ModelKind::ToyNonlinear:
      for (std::size_t i = 0; i < n_; ++i) {
        du[i] = ((spec_.alpha * u[i] - u[i] * u[i] * u[i]) - v[i]) + lap_[i];
        dv[i] = u[i];
      }
      break;
    default: {
      const double inv_eps = 1.0 / spec_.epsilon;
      for (std::size_t i = 0; i < n_; ++i) {
        du[i] = ((cubic_f(u[i]) - v[i]) + spec_.d * lap_[i]) * inv_eps;
        dv[i] = u[i] - c_[i];
      }
    }
  }
}

namespace {

// Diagnostics in the variables U = u - u_bar, V = v - v_bar. The model is written as
// eps U_t = N(U) - V + d Lap U, V_t = U, with N(U) = alpha U - U^3 for the toy model and
// f(u_bar + U) - f(u_bar) for FHN. On the grid, dE/dt = quad(U N) - d D(U) and
// d/dt 0.5 (eps D(U) + D(V)) = -quad(Lap U * N) - d quad((Lap U)^2) hold exactly.
class FdDiagnostics {
 public:
  FdDiagnostics(const ModelSpec& spec, const UniformGrid& grid, std::vector<std::size_t> probes)
      : spec_(spec), grid_(grid), probes_(std::move(probes)), ubar_(grid.size(), 0.0),
        vbar_(grid.size(), 0.0), U_(grid), V_(grid), N_(grid), lap_(grid.size()), w_(grid) {
    if (spec.is_fhn_pde()) {
      const auto st = stationary_solution(spec, grid).state;
      ubar_ = st.u.values;
      vbar_ = st.v.values;
    }
  }

  /// {E, dE/dt, E1, dE1/dt} at the state (u, v).
  std::array<double, 4> terms(std::span<const double> u, std::span<const double> v) {
    const std::size_t n = grid_.size();
    const double h = grid_.spacing();
    const double eps = reaction_epsilon(spec_);
    const double d = diffusion(spec_);
    for (std::size_t i = 0; i < n; ++i) {
      U_[i] = u[i] - ubar_[i];
      V_[i] = v[i] - vbar_[i];
      switch (spec_.kind) {
        case ModelKind::ToyLinear: N_[i] = spec_.alpha * u[i]; break;
        case ModelKind::ToyNonlinear: N_[i] = spec_.alpha * u[i] - u[i] * u[i] * u[i]; break;
        default: N_[i] = cubic_f(u[i]) - cubic_f(ubar_[i]);
      }
    }
    neumann_laplacian(U_.values, h, lap_);
    const double DU = dirichlet_form(U_.values, h);
    const double DV = dirichlet_form(V_.values, h);
    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double wi = (i == 0 || i + 1 == n) ? 0.5 * h : h;
      a += wi * lap_[i] * N_[i];
      b += wi * lap_[i] * lap_[i];
    }
    return {0.5 * (eps * quad_product(U_, U_) + quad_product(V_, V_)), quad_product(U_, N_) - d * DU,
            0.5 * (eps * DU + DV), -a - d * b};
  }

  DiagnosticSample operator()(double t, std::span<const double> u, std::span<const double> v) {
    const std::size_t n = grid_.size();
    const double eps = reaction_epsilon(spec_);
    DiagnosticSample s;
    s.t = t;
    const auto e = terms(u, v);
    s.energy = e[0];
    s.energy_rhs = e[1];
    s.h1_energy = e[2];
    s.h1_rhs = e[3];
    for (std::size_t i = 0; i < n; ++i) w_[i] = u[i] * u[i];
    const double uu = quad(w_);
    for (std::size_t i = 0; i < n; ++i) w_[i] = v[i] * v[i];
    s.norm = std::sqrt(eps * uu + quad(w_));

    GridFunction uf(grid_, std::vector<double>(u.begin(), u.end()));
    const double L = grid_.domain().length();
    s.mean_u = quad(uf) / L;
    for (std::size_t i = 0; i < n; ++i) w_[i] = (u[i] - s.mean_u) * (u[i] - s.mean_u);
    s.std_u = std::sqrt(std::max(0.0, quad(w_) / L));
    s.defect_odd = symmetry_defect(uf, Parity::Odd);
    s.defect_even = symmetry_defect(uf, Parity::Even);
    for (auto p : probes_) {
      s.probe_u.push_back(u[p]);
      s.probe_v.push_back(v[p]);
    }
    return s;
  }

 private:
  ModelSpec spec_;
  UniformGrid grid_;
  std::vector<std::size_t> probes_;
  std::vector<double> ubar_, vbar_;
  GridFunction U_, V_, N_;
  std::vector<double> lap_;
  GridFunction w_;
};

// Galerkin diagnostics from the coefficients (Parseval), with field statistics from the
// synthesized profile.
class GalerkinDiagnostics {
 public:
  GalerkinDiagnostics(const ToyGalerkin& sys, const ModelSpec& spec, const UniformGrid& grid,
                      std::vector<std::size_t> probes)
      : sys_(sys), spec_(spec), grid_(grid), probes_(std::move(probes)) {}

  std::array<double, 4> terms(std::span<const double> uk, std::span<const double> vk) const {
    const std::size_t m = uk.size();
    const auto P = spec_.kind == ModelKind::ToyNonlinear ? sys_.cubic_projection(uk)
                                                         : std::vector<double>(m, 0.0);
    double uu = 0, vv = 0, Du = 0, Dv = 0, rhs = 0, rhs1 = 0;
    for (std::size_t k = 0; k < m; ++k) {
      const double lam = sys_.basis().eigenvalue(k);
      uu += uk[k] * uk[k];
      vv += vk[k] * vk[k];
      Du += lam * uk[k] * uk[k];
      Dv += lam * vk[k] * vk[k];
      const double nk = spec_.alpha * uk[k] - P[k];
      rhs += uk[k] * nk - lam * uk[k] * uk[k];
      rhs1 += lam * uk[k] * nk - lam * lam * uk[k] * uk[k];
    }
    return {0.5 * (uu + vv), rhs, 0.5 * (Du + Dv), rhs1};
  }

  DiagnosticSample operator()(double t, std::span<const double> uk, std::span<const double> vk,
                              std::span<const double> u, std::span<const double> v) {
    DiagnosticSample s;
    s.t = t;
    const auto e = terms(uk, vk);
    s.energy = e[0];
    s.energy_rhs = e[1];
    s.h1_energy = e[2];
    s.h1_rhs = e[3];
    s.norm = std::sqrt(2.0 * e[0]);
    GridFunction uf(grid_, std::vector<double>(u.begin(), u.end()));
    const double L = grid_.domain().length();
    s.mean_u = quad(uf) / L;
    GridFunction w(grid_);
    for (std::size_t i = 0; i < u.size(); ++i) w[i] = (u[i] - s.mean_u) * (u[i] - s.mean_u);
    s.std_u = std::sqrt(std::max(0.0, quad(w) / L));
    s.defect_odd = symmetry_defect(uf, Parity::Odd);
    s.defect_even = symmetry_defect(uf, Parity::Even);
    for (auto p : probes_) {
      s.probe_u.push_back(u[p]);
      s.probe_v.push_back(v[p]);
    }
    return s;
  }

 private:
  const ToyGalerkin& sys_;
  ModelSpec spec_;
  UniformGrid grid_;
  std::vector<std::size_t> probes_;
};

StateField field_from(const UniformGrid& g, std::span<const double> u, std::span<const double> v) {
  return StateField(GridFunction(g, {u.begin(), u.end()}), GridFunction(g, {v.begin(), v.end()}));
}

// Attaches the one-step identity residuals to each diagnostic sample. Energy terms are
// evaluated one step before and one step after every sampled step.
class ResidualTracker {
 public:
  using Terms = std::array<double, 4>;
  ResidualTracker(std::size_t stride, std::size_t steps, double dt) : stride_(stride), steps_(steps), dt_(dt) {}

  bool wants_terms(std::size_t j) const { return wants_after(j) || wants_before(j); }

  /// Call once per step, before the sample for step j (if any) is pushed.
  void before_sample(std::size_t j, const Terms& terms, std::vector<DiagnosticSample>& diags) {
    if (wants_after(j) && has_sample_before_ && !diags.empty()) {
      auto& s = diags.back();
      const Terms& b = sample_before_;
      s.energy_residual = std::abs((terms[0] - b[0]) / (2.0 * dt_) - (b[1] + 4.0 * s.energy_rhs + terms[1]) / 6.0);
      s.h1_residual = std::abs((terms[2] - b[2]) / (2.0 * dt_) - (b[3] + 4.0 * s.h1_rhs + terms[3]) / 6.0);
      s.has_residual = true;
    }
  }
  /// Call once per step, after the sample for step j (if any) is pushed.
  void after_sample(std::size_t j, const Terms* terms) {
    if (j % stride_ == 0) {
      sample_before_ = pending_;
      has_sample_before_ = has_pending_;
      has_pending_ = false;
    }
    if (wants_before(j) && terms) {
      pending_ = *terms;
      has_pending_ = true;
    }
  }

 private:
  bool wants_after(std::size_t j) const { return j >= 1 && (j - 1) % stride_ == 0; }
  bool wants_before(std::size_t j) const { return (j + 1) % stride_ == 0 && j + 1 <= steps_; }

  std::size_t stride_, steps_;
  double dt_;
  Terms pending_{}, sample_before_{};
  bool has_pending_ = false, has_sample_before_ = false;
};

}  // namespace

Trajectory simulate(const ModelSpec& spec, const StateField& ic, const SimConfig& cfg,
                    const Observer& observer) {
  spec.validate();
  cfg.validate();
  if (spec.kind == ModelKind::OdeFhn) throw DomainError("use simulate_ode for the OdeFhn model");
  const UniformGrid& grid = ic.grid();
  if (!(grid.domain() == spec.domain)) throw DomainError("initial condition grid does not cover the model domain");
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (!std::isfinite(ic.u[i]) || !std::isfinite(ic.v[i])) throw DomainError("initial condition is not finite");
  if (cfg.backend == Backend::Galerkin && !spec.is_toy())
    throw ConfigError("the Galerkin backend supports the toy models only");
  check_guard(spec, cfg, grid);

  Trajectory traj{grid, cfg.backend, {}, {}, {}, {}, {}};
  std::vector<std::size_t> probe_idx;
  for (double x : cfg.probes) {
    if (!grid.domain().contains(x)) throw DomainError("probe position outside the domain");
    probe_idx.push_back(grid.nearest(x));
    traj.probes.push_back(grid.x(probe_idx.back()));
  }

  const std::size_t n = grid.size();
  const std::size_t steps = cfg.steps();
  const std::size_t stride = cfg.diagnostic_stride();

  if (cfg.backend == Backend::FiniteDifference) {
    std::vector<double> y(2 * n);
    std::copy(ic.u.values.begin(), ic.u.values.end(), y.begin());
    std::copy(ic.v.values.begin(), ic.v.values.end(), y.begin() + n);
    FdRhs rhs(spec, grid);
    FdDiagnostics diag(spec, grid, probe_idx);
    Rk4 rk(2 * n);
    ResidualTracker res(stride, steps, cfg.dt);
    for (std::size_t j = 0;; ++j) {
      const double t = j * cfg.dt;
      const std::span<const double> u(y.data(), n), v(y.data() + n, n);
      std::optional<ResidualTracker::Terms> terms;
      if (res.wants_terms(j)) {
        terms = diag.terms(u, v);
        res.before_sample(j, *terms, traj.diagnostics);
      }
      if (j % stride == 0) {
        traj.diagnostics.push_back(diag(t, u, v));
        if (observer) observer(t, u, v);
      }
      if (j % cfg.record_every == 0 || j == steps) {
        traj.times.push_back(t);
        traj.snapshots.push_back(field_from(grid, u, v));
      }
      res.after_sample(j, terms ? &*terms : nullptr);
      if (j == steps) break;
      rk.step(rhs, t, cfg.dt, std::span<double>(y));
    }
    return traj;
  }

  const std::size_t N = cfg.galerkin_order;
  ToyGalerkin sys(N, spec.alpha, spec.kind == ModelKind::ToyLinear, spec.domain, spec.d);
  const ModalTransform out(grid, N);
  const std::size_t m = N + 1;
  std::vector<double> y(2 * m);
  out.analyze(ic.u.values, std::span<double>(y.data(), m));
  out.analyze(ic.v.values, std::span<double>(y.data() + m, m));
  auto rhs = [&sys](double, std::span<const double> yy, std::span<double> dy) { sys(yy, dy); };
  GalerkinDiagnostics diag(sys, spec, grid, probe_idx);
  std::vector<double> u(n), v(n);
  Rk4 rk(2 * m);
  ResidualTracker res(stride, steps, cfg.dt);
  for (std::size_t j = 0;; ++j) {
    const double t = j * cfg.dt;
    const std::span<const double> uk(y.data(), m), vk(y.data() + m, m);
    std::optional<ResidualTracker::Terms> terms;
    if (res.wants_terms(j)) {
      terms = diag.terms(uk, vk);
      res.before_sample(j, *terms, traj.diagnostics);
    }
    const bool want_diag = j % stride == 0;
    const bool want_snap = j % cfg.record_every == 0 || j == steps;
    if (want_diag || want_snap) {
      out.synthesize(uk, u);
      out.synthesize(vk, v);
    }
    if (want_diag) {
      traj.diagnostics.push_back(diag(t, uk, vk, u, v));
      if (observer) observer(t, u, v);
    }
    if (want_snap) {
      traj.times.push_back(t);
      traj.snapshots.push_back(field_from(grid, u, v));
      traj.spectral.emplace_back(std::vector<double>(uk.begin(), uk.end()),
                                 std::vector<double>(vk.begin(), vk.end()));
    }
    res.after_sample(j, terms ? &*terms : nullptr);
    if (j == steps) break;
    rk.step(rhs, t, cfg.dt, std::span<double>(y));
  }
  return traj;
}

OdeTrajectory simulate_ode(const ModelSpec& spec, double u0, double v0, double dt, double t_end,
                           std::size_t record_every) {
  if (spec.kind != ModelKind::OdeFhn) throw DomainError("simulate_ode requires an OdeFhn model");
  SimConfig cfg;
  cfg.dt = dt;
  cfg.t_end = t_end;
  cfg.record_every = record_every;
  cfg.validate();
  auto rhs = [&spec](double, std::span<const double> y, std::span<double> dy) {
    const auto r = ode_rhs(spec, {y[0], y[1]});
    dy[0] = r[0];
    dy[1] = r[1];
  };
  OdeTrajectory out;
  std::vector<double> y{u0, v0};
  Rk4 rk(2);
  const std::size_t steps = cfg.steps();
  for (std::size_t j = 0;; ++j) {
    if (j % record_every == 0 || j == steps) {
      out.t.push_back(j * dt);
      out.u.push_back(y[0]);
      out.v.push_back(y[1]);
    }
    if (j == steps) break;
    rk.step(rhs, j * dt, dt, std::span<double>(y));
  }
  return out;
}

namespace {

EnergyTrace trace_from(const Trajectory& traj, double DiagnosticSample::*e, double DiagnosticSample::*r,
                       double DiagnosticSample::*res) {
  EnergyTrace tr;
  for (const auto& s : traj.diagnostics) {
    tr.t.push_back(s.t);
    tr.energy.push_back(s.*e);
    tr.rhs.push_back(s.*r);
    tr.residual.push_back(s.has_residual ? s.*res : 0.0);
    if (!s.has_residual) continue;
    tr.max_residual = std::max(tr.max_residual, s.*res);
    tr.max_scaled_residual = std::max(tr.max_scaled_residual, s.*res / std::max(1.0, std::abs(s.*r)));
  }
  for (std::size_t j = 1; j < tr.energy.size(); ++j)
    if (tr.energy[j] > tr.energy[j - 1] + 1e-12) tr.nonincreasing = false;
  return tr;
}

}  // namespace

EnergyTrace energy_trace(const Trajectory& traj) {
  return trace_from(traj, &DiagnosticSample::energy, &DiagnosticSample::energy_rhs,
                    &DiagnosticSample::energy_residual);
}

EnergyTrace h1_energy_trace(const Trajectory& traj) {
  return trace_from(traj, &DiagnosticSample::h1_energy, &DiagnosticSample::h1_rhs,
                    &DiagnosticSample::h1_residual);
}

double measured_growth_rate(const Trajectory& traj, double t_from) {
  double st = 0, sy = 0, stt = 0, sty = 0;
  std::size_t cnt = 0;
  for (const auto& s : traj.diagnostics) {
    if (s.t < t_from || !(s.norm > 0)) continue;
    const double y = std::log(s.norm);
    st += s.t;
    sy += y;
    stt += s.t * s.t;
    sty += s.t * y;
    ++cnt;
  }
  if (cnt < 2) throw SizeError("growth rate needs at least two positive samples");
  const double den = cnt * stt - st * st;
  if (den == 0) throw SizeError("growth rate needs distinct sample times");
  return (cnt * sty - st * sy) / den;
}

SymmetryReport symmetry_invariance_check(const ModelSpec& spec, const StateField& ic,
                                         const SimConfig& cfg, Parity parity) {
  SymmetryReport rep;
  rep.parity = parity;
  rep.ic_defect = std::max(symmetry_defect(ic.u, parity), symmetry_defect(ic.v, parity));
  if (rep.ic_defect > 1e-12) throw DomainError("initial condition does not have the requested symmetry");

  const UniformGrid& g = ic.grid();
  const ModalTransform tr(g, std::min<std::size_t>(g.size() - 2, 64));
  std::vector<double> cu(tr.order() + 1), cv(tr.order() + 1);
  // Odd data forbids even modes and vice versa.
  const std::size_t first = parity == Parity::Odd ? 0 : 1;
  SimConfig c = cfg;
  c.backend = Backend::FiniteDifference;
  auto obs = [&](double, std::span<const double> u, std::span<const double> v) {
    tr.analyze(u, cu);
    tr.analyze(v, cv);
    for (std::size_t k = first; k < cu.size(); k += 2)
      rep.max_forbidden_coeff = std::max({rep.max_forbidden_coeff, std::abs(cu[k]), std::abs(cv[k])});
    rep.max_mean_coeff = std::max({rep.max_mean_coeff, std::abs(cu[0]), std::abs(cv[0])});
  };
  rep.trajectory = simulate(spec, ic, c, obs);
  for (const auto& s : rep.trajectory.diagnostics) {
    // The defect of u only; v inherits the symmetry through v_t = u - c.
    rep.max_defect = std::max(rep.max_defect, parity == Parity::Odd ? s.defect_odd : s.defect_even);
  }
  rep.holds = rep.max_forbidden_coeff <= kSymmetryTolerance;
  return rep;
}

void write_snapshots_csv(std::ostream& os, const Trajectory& traj) {
  os << "# fhnlab snapshots v1\n";
  os << "t,x,u,v\n";
  os.precision(12);
  for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
    const auto& f = traj.snapshots[s];
    for (std::size_t i = 0; i < f.u.size(); ++i)
      os << traj.times[s] << ',' << f.grid().x(i) << ',' << f.u[i] << ',' << f.v[i] << '\n';
  }
}

void write_diagnostics_csv(std::ostream& os, const Trajectory& traj) {
  const auto tr = energy_trace(traj);
  os << "# fhnlab diagnostics v1\n";
  os << "t,norm,E,residual,std_u,defect_odd,defect_even";
  for (double x : traj.probes) os << ",u@" << x << ",v@" << x;
  os << '\n';
  os.precision(12);
  for (std::size_t j = 0; j < traj.diagnostics.size(); ++j) {
    const auto& s = traj.diagnostics[j];
    os << s.t << ',' << s.norm << ',' << s.energy << ',' << tr.residual[j] << ',' << s.std_u << ','
       << s.defect_odd << ',' << s.defect_even;
    for (std::size_t p = 0; p < s.probe_u.size(); ++p) os << ',' << s.probe_u[p] << ',' << s.probe_v[p];
    os << '\n';
  }
}

}  // namespace fhn
