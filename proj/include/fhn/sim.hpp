#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "fhn/error.hpp"
#include "fhn/grid.hpp"
#include "fhn/model.hpp"
#include "fhn/spectral.hpp"

namespace fhn {

enum class Backend { FiniteDifference, Galerkin };

struct SimConfig {
  double dt = 1e-5;
  double t_end = 1.0;
  std::size_t record_every = 1000;     ///< steps between stored snapshots
  std::size_t diagnostic_every = 0;    ///< steps between scalar diagnostics; 0 means record_every
  Backend backend = Backend::FiniteDifference;
  std::size_t galerkin_order = 32;
  double safety = 0.9;
  std::vector<double> probes;          ///< positions whose u, v are logged with the diagnostics

  std::size_t steps() const;
  std::size_t diagnostic_stride() const { return diagnostic_every ? diagnostic_every : record_every; }
  /// Throws ConfigError on non-positive dt/t_end or zero strides.
  void validate() const;
};

/// Largest stable dt for the explicit scheme: dt * (max diffusion eigenvalue) / eps <= 2 * safety.
/// On the FD grid this reads dt <= safety * eps * h^2 / (2 d).
double max_stable_dt(const ModelSpec& spec, const SimConfig& cfg, const UniformGrid& grid);
/// Throws GuardError when cfg.dt exceeds max_stable_dt.
void check_guard(const ModelSpec& spec, const SimConfig& cfg, const UniformGrid& grid);

/// Classical four-stage Runge-Kutta with preallocated stage buffers.
class Rk4 {
 public:
  explicit Rk4(std::size_t dim) : k1_(dim), k2_(dim), k3_(dim), k4_(dim), tmp_(dim) {}

  std::size_t dim() const { return k1_.size(); }

  /// rhs(t, y, dy). Throws BlowUpError(t + dt) if the update is not finite.
  template <class Rhs>
  void step(Rhs& rhs, double t, double dt, std::span<double> y) {
    const std::size_t n = y.size();
    rhs(t, std::span<const double>(y), std::span<double>(k1_));
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * dt * k1_[i];
    rhs(t + 0.5 * dt, std::span<const double>(tmp_), std::span<double>(k2_));
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * dt * k2_[i];
    rhs(t + 0.5 * dt, std::span<const double>(tmp_), std::span<double>(k3_));
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + dt * k3_[i];
    rhs(t + dt, std::span<const double>(tmp_), std::span<double>(k4_));
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] += dt / 6.0 * ((k1_[i] + k4_[i]) + 2.0 * (k2_[i] + k3_[i]));
      finite = finite && std::isfinite(y[i]);
    }
    if (!finite) throw BlowUpError(t + dt, "non-finite state");
  }

 private:
  std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

using RhsFunction = std::function<void(double, std::span<const double>, std::span<double>)>;

/// One RK4 step of y' = rhs(t, y).
std::vector<double> rk4_step(std::vector<double> y, double t, double dt, const RhsFunction& rhs);

/// Method-of-lines right-hand side for the PDE models on an FD grid, y = [u | v].
class FdRhs {
 public:
  FdRhs(const ModelSpec& spec, const UniformGrid& grid);
  void operator()(double t, std::span<const double> y, std::span<double> dy) const;

 private:
  ModelSpec spec_;
  std::size_t n_;
  double h_;
  std::vector<double> c_;
  mutable std::vector<double> lap_;
};

/// One scalar-diagnostics row.
struct DiagnosticSample {
  double t = 0.0;
  double norm = 0.0;       ///< sqrt(eps |u|^2 + |v|^2) of the unshifted state
  double energy = 0.0;     ///< 0.5 (eps |U|^2 + |V|^2), shifted for FHN models
  double energy_rhs = 0.0; ///< analytic dE/dt
  double h1_energy = 0.0;  ///< 0.5 (eps D(U) + D(V))
  double h1_rhs = 0.0;
  double mean_u = 0.0;
  double std_u = 0.0;
  double defect_odd = 0.0;
  double defect_even = 0.0;
  std::vector<double> probe_u, probe_v;
  /// Identity residuals from the states one step before and after t:
  /// |(E(t+dt) - E(t-dt)) / (2 dt) - (R(t-dt) + 4 R(t) + R(t+dt)) / 6|. Unset at both ends.
  bool has_residual = false;
  double energy_residual = 0.0;
  double h1_residual = 0.0;
};

struct Trajectory {
  UniformGrid grid{0.0, 1.0, 3};
  Backend backend = Backend::FiniteDifference;
  std::vector<double> times;
  std::vector<StateField> snapshots;
  /// Modal coefficients at each snapshot (Galerkin backend only).
  std::vector<SpectralState> spectral;
  std::vector<DiagnosticSample> diagnostics;
  std::vector<double> probes;  ///< probe positions snapped to nodes
};

/// Called at each diagnostic step with the node values of u and v.
using Observer = std::function<void(double t, std::span<const double> u, std::span<const double> v)>;

/// Integrates the model from `ic` (OdeFhn is not handled here; see simulate_ode).
/// Galerkin runs project the IC onto cfg.galerkin_order modes and report fields synthesized on
/// the IC grid. The final state is always recorded.
Trajectory simulate(const ModelSpec& spec, const StateField& ic, const SimConfig& cfg,
                    const Observer& observer = {});

struct OdeTrajectory {
  std::vector<double> t, u, v;
};

OdeTrajectory simulate_ode(const ModelSpec& spec, double u0, double v0, double dt, double t_end,
                           std::size_t record_every = 1);

struct EnergyTrace {
  std::vector<double> t;
  std::vector<double> energy;
  std::vector<double> rhs;
  /// One-step identity residual per sample (see DiagnosticSample); zero at both ends.
  std::vector<double> residual;
  double max_residual = 0.0;
  /// max over interior samples of residual / max(1, |rhs|)
  double max_scaled_residual = 0.0;
  bool nonincreasing = true;  ///< E_{j+1} <= E_j + 1e-12 for all j
};

/// L2 energy series and its identity residuals.
EnergyTrace energy_trace(const Trajectory& traj);
EnergyTrace h1_energy_trace(const Trajectory& traj);

/// Least-squares slope of log(norm) over the diagnostics with t >= t_from.
double measured_growth_rate(const Trajectory& traj, double t_from = 0.0);

struct SymmetryReport {
  Parity parity = Parity::Odd;
  double ic_defect = 0.0;
  double max_defect = 0.0;
  /// Largest modal coefficient of the wrong parity (even modes for odd data), u and v.
  double max_forbidden_coeff = 0.0;
  double max_mean_coeff = 0.0;  ///< max |u_0|, |v_0|
  bool holds = false;           ///< max_forbidden_coeff <= 1e-8
  Trajectory trajectory;
};

inline constexpr double kSymmetryTolerance = 1e-8;

/// Runs the FD simulation and tracks the coefficients forbidden by the IC symmetry.
SymmetryReport symmetry_invariance_check(const ModelSpec& spec, const StateField& ic,
                                         const SimConfig& cfg, Parity parity);

// Snapshot CSV: t,x,u,v. Diagnostic CSV: t,norm,E,residual,std_u,defect_odd,defect_even.
void write_snapshots_csv(std::ostream& os, const Trajectory& traj);
void write_diagnostics_csv(std::ostream& os, const Trajectory& traj);

}  // namespace fhn
