#include "fhn/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <numbers>
#include <sstream>
#include <thread>

#include "fhn/sim.hpp"
#include "fhn/spectral.hpp"
#include "fhn/sturm.hpp"

namespace fhn {

std::vector<std::string> suite_names() { return {"lemmas", "sturm", "energy", "backends", "symmetry"}; }

namespace {

std::string label(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

std::size_t rules_holding(std::size_t k, std::size_t m, std::size_t n) {
  return (k + m == n) + (k + n == m) + (m + n == k);
}

SuiteReport lemmas() {
  SuiteReport r{"lemmas", false, {}};
  double triple_err = 0.0, lemma1_err = 0.0;
  for (std::size_t k = 1; k <= 8; ++k)
    for (std::size_t m = 1; m <= 8; ++m)
      for (std::size_t n = 1; n <= 8; ++n) {
        const std::size_t idx[] = {k, m, n};
        const double q = mode_product_quadrature(idx, 4001);
        const double v = triple_product(k, m, n);
        triple_err = std::max(triple_err, std::abs(v - q));
        if (rules_holding(k, m, n) == 1) lemma1_err = std::max(lemma1_err, std::abs(v - std::sqrt(2.0) / 2.0));
      }
  std::size_t mismatches = 0;
  for (std::size_t k = 1; k <= 6; ++k)
    for (std::size_t l = 1; l <= 6; ++l)
      for (std::size_t m = 1; m <= 6; ++m)
        for (std::size_t n = 1; n <= 6; ++n) {
          const std::size_t idx[] = {k, l, m, n};
          const bool nz = std::abs(mode_product_quadrature(idx, 4001)) > 1e-8;
          if (nz != quad_product_nonzero(k, l, m, n)) ++mismatches;
        }
  r.checks.push_back(make_check("triple_product_vs_quadrature", triple_err, "<=", 1e-8));
  r.checks.push_back(make_check("triple_product_nonzero_value", lemma1_err, "<=", 1e-8));
  r.checks.push_back(make_check("quadruple_predicate_mismatches", static_cast<double>(mismatches), "<=", 0.0));
  return r;
}

SuiteReport sturm() {
  SuiteReport r{"sturm", false, {}};
  const UniformGrid grid(0.0, 1.0, 1001);
  for (double c : {0.0, -1.5, -2.0}) {
    const auto problem = SlProblem::constant(cubic_f_prime(c), grid, 1.0);
    double rel = 0.0;
    for (std::size_t k = 0; k < 10; ++k) {
      const double exact = k * k * std::numbers::pi * std::numbers::pi - cubic_f_prime(c);
      const double got = sl_eigenvalue(problem, k);
      rel = std::max(rel, std::abs(got - exact) / std::max(1.0, std::abs(exact)));
    }
    r.checks.push_back(make_check("constant_potential_c=" + label(c), rel, "<=", 1e-6));
  }
  return r;
}

SuiteReport energy() {
  SuiteReport r{"energy", false, {}};
  const UniformGrid grid(0.0, 1.0, 51);
  SimConfig cfg;
  cfg.dt = 1e-5;
  cfg.t_end = 5.0;
  cfg.record_every = 100000;
  cfg.diagnostic_every = 1000;
  {
    const auto traj = simulate(ModelSpec::toy(-0.5), random_ic(grid, 1, 8), cfg);
    const auto e = energy_trace(traj);
    r.checks.push_back(make_check("decay_residual", e.max_scaled_residual, "<=", 1e-4));
    r.checks.push_back(make_check("decay_energy_nonincreasing", e.nonincreasing ? 1.0 : 0.0, "flag", 0.0));
    r.checks.push_back(make_check("decay_h1_residual", h1_energy_trace(traj).max_scaled_residual, "<=", 1e-4));
  }
  {
    const auto traj = simulate(ModelSpec::toy(1.0), step_ic(grid, 1.0, -0.5), cfg);
    r.checks.push_back(make_check("fig2_residual", energy_trace(traj).max_scaled_residual, "<=", 1e-4));
  }
  {
    const auto spec = ModelSpec::const_c_fhn(-1.5, 0.1, 1.0, {0.0, 1.0});
    auto ic = stationary_solution(spec, grid).state;
    for (std::size_t i = 0; i < grid.size(); ++i) ic.u[i] += 0.1 * std::cos(std::numbers::pi * grid.x(i));
    SimConfig c2 = cfg;
    c2.dt = 1e-6;
    c2.t_end = 0.5;
    c2.diagnostic_every = 500;
    const auto traj = simulate(spec, ic, c2);
    r.checks.push_back(make_check("const_c_residual", energy_trace(traj).max_scaled_residual, "<=", 1e-4));
  }
  return r;
}

SuiteReport backends() {
  SuiteReport r{"backends", false, {}};
  const UniformGrid grid(0.0, 1.0, 101);
  const auto ic = modes_ic(grid, {{0, 0.5, 0.1}, {1, 0.3, -0.2}, {2, 0.1, 0.05}});
  SimConfig fd;
  fd.dt = 2e-5;
  fd.t_end = 1.0;
  fd.record_every = 50000;
  SimConfig gal = fd;
  gal.backend = Backend::Galerkin;
  gal.galerkin_order = 32;
  const auto spec = ModelSpec::toy(1.0);
  const auto a = simulate(spec, ic, fd).snapshots.back();
  const auto b = simulate(spec, ic, gal).snapshots.back();
  GridFunction du(grid), dv(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    du[i] = a.u[i] - b.u[i];
    dv[i] = a.v[i] - b.v[i];
  }
  r.checks.push_back(make_check("fd_vs_galerkin_l2", std::hypot(l2_norm(du), l2_norm(dv)), "<=", 1e-3));
  return r;
}

SuiteReport symmetry() {
  SuiteReport r{"symmetry", false, {}};
  const UniformGrid grid(0.0, 1.0, 51);
  SimConfig cfg;
  cfg.dt = 1e-5;
  cfg.t_end = 5.0;
  cfg.record_every = 100000;
  cfg.diagnostic_every = 1000;
  const auto odd = symmetry_invariance_check(ModelSpec::toy(1.0), step_ic(grid, 1.0, -1.0), cfg, Parity::Odd);
  r.checks.push_back(make_check("odd_ic_even_coefficients", odd.max_forbidden_coeff, "<=", kSymmetryTolerance));
  const auto even = symmetry_invariance_check(ModelSpec::toy(15.0), modes_ic(grid, {{2, 0.5, 0.0}}), cfg, Parity::Even);
  r.checks.push_back(make_check("even_ic_odd_coefficients", even.max_forbidden_coeff, "<=", kSymmetryTolerance));
  return r;
}

}  // namespace

SuiteReport run_suite(const std::string& name) {
  SuiteReport r;
  if (name == "lemmas") r = lemmas();
  else if (name == "sturm") r = sturm();
  else if (name == "energy") r = energy();
  else if (name == "backends") r = backends();
  else if (name == "symmetry") r = symmetry();
  else throw ConfigError("unknown verification suite '" + name + "'");
  r.pass = std::all_of(r.checks.begin(), r.checks.end(), [](const Check& c) { return c.pass; });
  return r;
}

std::vector<SuiteReport> run_suites(const std::string& name, unsigned threads) {
  if (name != "all") return {run_suite(name)};
  const auto names = suite_names();
  std::vector<SuiteReport> out(names.size());
  threads = std::max(1u, threads);
  for (std::size_t first = 0; first < names.size(); first += threads) {
    std::vector<std::future<SuiteReport>> batch;
    for (std::size_t i = first; i < std::min(names.size(), first + threads); ++i)
      batch.push_back(std::async(threads > 1 ? std::launch::async : std::launch::deferred, run_suite, names[i]));
    for (std::size_t i = 0; i < batch.size(); ++i) out[first + i] = batch[i].get();
  }
  return out;
}

unsigned thread_budget() {
  if (const char* env = std::getenv("FHN_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace fhn
