#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "fhn/grid.hpp"
#include "fhn/model.hpp"

namespace fhn {

/// Neumann eigenproblem  L phi = -d phi'' - q(x) phi = lambda phi  on (a, b),
/// with q = f'(u_bar) sampled on a grid. Eigenvalues increase to +infinity and
/// lambda_0 >= -max q >= -3.
///
/// The Pruefer phase obeys theta' = cos^2 theta + ((lambda + q)/d) sin^2 theta, so the
/// shooting parameter is the same lambda as the operator's eigenvalue.
class SlProblem {
 public:
  SlProblem(GridFunction potential, double d);

  static SlProblem constant(double fprime, const UniformGrid& grid, double d);
  static SlProblem from_profile(const CProfile& profile, const UniformGrid& grid, double d);
  /// q = f'(u_bar) for a given stationary u_bar.
  static SlProblem from_stationary(const GridFunction& u_bar, double d);

  double d() const { return d_; }
  const GridFunction& potential() const { return q_; }
  const UniformGrid& grid() const { return q_.grid; }
  Interval domain() const { return q_.grid.domain(); }
  double max_potential() const { return q_max_; }
  double mean_potential() const;

  /// Catmull-Rom interpolant of q inside interval i at local coordinate t in [0, 1].
  double potential_in(std::size_t i, double t) const;

 private:
  GridFunction q_;
  double d_;
  double q_max_;
};

struct PruferState {
  double theta = 0.0;
  double log_r = 0.0;
};

struct EigenPair {
  std::size_t index = 0;
  double lambda = 0.0;
  GridFunction phi;
};

/// theta(b) from theta(a) = pi/2 by adaptive RK4. Continuous and increasing in lambda.
double prufer_theta_end(const SlProblem& problem, double lambda);
/// (theta, log r) at every grid node, with theta(a) = pi/2, r(a) = 1.
std::vector<PruferState> prufer_trajectory(const SlProblem& problem, double lambda);

/// The unique lambda with theta(b; lambda) = pi/2 + k pi, by bracketing and bisection to 1e-9.
double sl_eigenvalue(const SlProblem& problem, std::size_t k);
/// Normalized eigenfunction for a converged eigenvalue; sign fixed by phi(a) > 0.
EigenPair sl_eigenfunction(const SlProblem& problem, std::size_t k, double lambda_k);
/// First n_modes eigenpairs. Throws SolverError if monotonicity or lambda_0 >= -3 fails.
std::vector<EigenPair> sl_spectrum(const SlProblem& problem, std::size_t n_modes);

/// lambda_k / (d k^2 pi^2 / (b-a)^2), k >= 1.
double weyl_ratio(const SlProblem& problem, const EigenPair& pair);
/// (d |u|_{H1}^2 - quad(q u^2)) / |u|^2.
double rayleigh_quotient(const SlProblem& problem, const GridFunction& u);
/// Discrete residual |-d Lap phi - q phi - lambda phi|_{L2}.
double eigen_residual(const SlProblem& problem, const EigenPair& pair);
/// Sign changes between consecutive nodes, ignoring exact zeros.
std::size_t sign_changes(const GridFunction& f);

struct LinfStats {
  std::vector<double> max_abs;  ///< max |phi_k| per mode
  double ratio = 0.0;           ///< max over all modes / max over k <= 5
  double trend_slope = 0.0;     ///< least-squares slope of max |phi_k| against k
  bool growth_flag = false;     ///< ratio above 2
};

LinfStats linf_uniformity_stats(std::span<const EigenPair> spectrum);

void write_spectrum_csv(std::ostream& os, std::span<const EigenPair> spectrum);
void write_eigenfunction_csv(std::ostream& os, const EigenPair& pair);

}  // namespace fhn
