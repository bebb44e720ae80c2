#pragma once

#include <algorithm>
#include <array>
#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fhn/grid.hpp"
#include "fhn/sturm.hpp"

namespace fhn {

/// Roots of eps s^2 - mu s + 1 = 0, the eigenvalues of the mode matrix
/// [[mu/eps, -1/eps], [1, 0]]. For real roots sigma1 <= sigma2.
struct ModeEigenvalues {
  double mu = 0.0;
  double epsilon = 1.0;
  std::complex<double> sigma1;
  std::complex<double> sigma2;

  double max_real() const { return std::max(sigma1.real(), sigma2.real()); }
  bool complex_pair() const { return sigma1.imag() != 0.0; }
};

ModeEigenvalues mode_eigenvalues(double mu, double epsilon = 1.0);

enum class ModeClass { Source, Sink, Center };
std::string to_string(ModeClass c);

inline constexpr double kCenterTolerance = 1e-12;
ModeClass classify_mode(const ModeEigenvalues& me);

struct CascadeReport {
  double parameter = 0.0;
  std::vector<ModeEigenvalues> modes;
  std::vector<ModeClass> classes;
  std::size_t unstable_count = 0;
  std::vector<double> crossings;
  /// Spectrum truncated before the unstable count saturated.
  bool truncated = false;
};

/// Mode report for the toy model at gain alpha, modes k = 0..k_max.
CascadeReport toy_cascade_report(double alpha, std::size_t k_max, Interval domain = {0.0, 1.0},
                                 double d = 1.0);
/// Hopf crossings alpha = lambda_k inside [alpha_lo, alpha_hi], k <= k_max.
std::vector<double> hopf_cascade_toy(double alpha_lo, double alpha_hi, std::size_t k_max,
                                     Interval domain = {0.0, 1.0}, double d = 1.0);
std::size_t toy_unstable_count(double alpha, std::size_t k_max, Interval domain = {0.0, 1.0},
                               double d = 1.0);

/// Mode report for the nonhomogeneous system from Sturm-Liouville eigenvalues (mu = -lambda_k).
/// Throws SolverError if some Re sigma exceeds 3/eps.
CascadeReport unstable_mode_count_nhfhn(std::span<const double> sl_eigenvalues, double epsilon,
                                        double parameter = 0.0);
CascadeReport unstable_mode_count_nhfhn(const SlProblem& problem, std::size_t n_modes,
                                        double epsilon, double parameter = 0.0);

struct IntegralCriterion {
  double integral = 0.0;         ///< quad(f'(u_bar))
  bool predicts_instability = false;
  double lambda0_upper = 0.0;    ///< Rayleigh quotient of the constant function
};

IntegralCriterion integral_instability_criterion(const SlProblem& problem);

/// The Well family on a fixed grid: p -> potential f'(p (xh^4 - 2 xh^2)).
struct WellFamily {
  UniformGrid grid;
  double d = 1.0;

  SlProblem at(double p) const;
  double lambda0(double p) const;
};

struct PStarResult {
  double p_star = 0.0;
  double lambda0_at_p_star = 0.0;
  double lambda0_lo = 0.0;
  double lambda0_hi = 0.0;
  /// lambda_0 nondecreasing in p over the sampled points of the bracket.
  bool monotone_samples = true;
};

/// Bisection in p for the zero of lambda_0(p). Requires lambda_0(p_lo) < 0 < lambda_0(p_hi);
/// throws BracketError with the measured values otherwise.
PStarResult find_p_star(const WellFamily& family, double p_lo, double p_hi);

struct OdeHopfReport {
  double c = 0.0;
  double epsilon = 1.0;
  std::array<double, 4> jacobian{};  ///< row-major
  double trace = 0.0;
  double determinant = 0.0;
  ModeEigenvalues eigenvalues;
  bool stable = false;
  bool hopf = false;                 ///< trace == 0, i.e. |c| == 1
};

OdeHopfReport ode_hopf_analysis(double c, double epsilon = 1.0);

void write_cascade_csv_header(std::ostream& os);
void write_cascade_csv_rows(std::ostream& os, const CascadeReport& r);

}  // namespace fhn
