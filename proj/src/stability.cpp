#include "fhn/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "fhn/error.hpp"
#include "fhn/model.hpp"
#include "fhn/spectral.hpp"

namespace fhn {

ModeEigenvalues mode_eigenvalues(double mu, double epsilon) {
  if (!(epsilon > 0)) throw DomainError("epsilon must be positive");
  ModeEigenvalues me;
  me.mu = mu;
  me.epsilon = epsilon;
  const double disc = mu * mu - 4.0 * epsilon;
  if (disc < 0) {
    const double re = mu / (2.0 * epsilon);
    const double im = std::sqrt(-disc) / (2.0 * epsilon);
    me.sigma1 = {re, -im};
    me.sigma2 = {re, im};
    return me;
  }
  // Larger-magnitude root first, the other from the product 1/eps.
  const double root = std::sqrt(disc);
  const double big = (mu >= 0 ? mu + root : mu - root) / (2.0 * epsilon);
  const double small = big != 0.0 ? (1.0 / epsilon) / big : 0.0;
  me.sigma1 = std::min(big, small);
  me.sigma2 = std::max(big, small);
  return me;
}

std::string to_string(ModeClass c) {
  switch (c) {
    case ModeClass::Source: return "source";
    case ModeClass::Sink: return "sink";
    case ModeClass::Center: return "center";
  }
  return "unknown";
}

ModeClass classify_mode(const ModeEigenvalues& me) {
  const double re = me.max_real();
  if (std::abs(re) <= kCenterTolerance) return ModeClass::Center;
  return re > 0 ? ModeClass::Source : ModeClass::Sink;
}

CascadeReport toy_cascade_report(double alpha, std::size_t k_max, Interval domain, double d) {
  CascadeReport r;
  r.parameter = alpha;
  for (std::size_t k = 0; k <= k_max; ++k) {
    const auto me = mode_eigenvalues(alpha - cosine_eigenvalue(k, domain, d), 1.0);
    r.modes.push_back(me);
    r.classes.push_back(classify_mode(me));
    if (r.classes.back() == ModeClass::Source) ++r.unstable_count;
    if (r.classes.back() == ModeClass::Center) r.crossings.push_back(alpha);
  }
  r.truncated = r.classes.back() == ModeClass::Source;
  return r;
}

std::vector<double> hopf_cascade_toy(double alpha_lo, double alpha_hi, std::size_t k_max,
                                     Interval domain, double d) {
  std::vector<double> out;
  for (std::size_t k = 0; k <= k_max; ++k) {
    const double lambda = cosine_eigenvalue(k, domain, d);
    if (lambda >= alpha_lo && lambda <= alpha_hi) out.push_back(lambda);
  }
  return out;
}

std::size_t toy_unstable_count(double alpha, std::size_t k_max, Interval domain, double d) {
  return toy_cascade_report(alpha, k_max, domain, d).unstable_count;
}

CascadeReport unstable_mode_count_nhfhn(std::span<const double> sl_eigenvalues, double epsilon,
                                        double parameter) {
  CascadeReport r;
  r.parameter = parameter;
  const double cap = 3.0 / epsilon + 1e-9;
  for (double lambda : sl_eigenvalues) {
    const auto me = mode_eigenvalues(-lambda, epsilon);
    if (me.max_real() > cap) throw SolverError("growth rate exceeds the 3/eps bound");
    r.modes.push_back(me);
    r.classes.push_back(classify_mode(me));
    if (lambda < 0) ++r.unstable_count;
  }
  r.truncated = !sl_eigenvalues.empty() && sl_eigenvalues.back() < 0;
  return r;
}

CascadeReport unstable_mode_count_nhfhn(const SlProblem& problem, std::size_t n_modes,
                                        double epsilon, double parameter) {
  std::vector<double> lambdas;
  for (std::size_t k = 0; k < n_modes; ++k) lambdas.push_back(sl_eigenvalue(problem, k));
  return unstable_mode_count_nhfhn(lambdas, epsilon, parameter);
}

IntegralCriterion integral_instability_criterion(const SlProblem& problem) {
  IntegralCriterion ic;
  ic.integral = quad(problem.potential());
  ic.predicts_instability = ic.integral > 0;
  ic.lambda0_upper = rayleigh_quotient(problem, GridFunction(problem.grid(), std::vector<double>(problem.grid().size(), 1.0)));
  return ic;
}

SlProblem WellFamily::at(double p) const { return SlProblem::from_profile(CProfile::well(p), grid, d); }

double WellFamily::lambda0(double p) const { return sl_eigenvalue(at(p), 0); }

PStarResult find_p_star(const WellFamily& family, double p_lo, double p_hi) {
  if (!(p_lo > 0 && p_hi > p_lo)) throw DomainError("p bracket must satisfy 0 < p_lo < p_hi");
  PStarResult r;
  r.lambda0_lo = family.lambda0(p_lo);
  r.lambda0_hi = family.lambda0(p_hi);
  if (!(r.lambda0_lo < 0 && r.lambda0_hi > 0))
    throw BracketError(p_lo, p_hi, r.lambda0_lo, r.lambda0_hi,
                       "p* bracket must satisfy lambda_0(p_lo) < 0 < lambda_0(p_hi)");

  // lambda_0(p) < 0 exactly when the phase at lambda = 0 overshoots pi/2.
  const auto unstable = [&](double p) {
    return prufer_theta_end(family.at(p), 0.0) > std::numbers::pi / 2;
  };
  double lo = p_lo, hi = p_hi;
  constexpr int kSamples = 5;
  std::vector<double> sampled{r.lambda0_lo};
  for (int s = 1; s < kSamples; ++s) sampled.push_back(family.lambda0(p_lo + (p_hi - p_lo) * s / kSamples));
  sampled.push_back(r.lambda0_hi);
  r.monotone_samples = std::is_sorted(sampled.begin(), sampled.end());

  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (unstable(mid) ? lo : hi) = mid;
  }
  r.p_star = 0.5 * (lo + hi);
  r.lambda0_at_p_star = family.lambda0(r.p_star);
  return r;
}

OdeHopfReport ode_hopf_analysis(double c, double epsilon) {
  if (!(epsilon > 0)) throw DomainError("epsilon must be positive");
  OdeHopfReport r;
  r.c = c;
  r.epsilon = epsilon;
  const double fp = cubic_f_prime(c);
  r.jacobian = {fp / epsilon, -1.0 / epsilon, 1.0, 0.0};
  r.trace = fp / epsilon;
  r.determinant = 1.0 / epsilon;
  r.eigenvalues = mode_eigenvalues(fp, epsilon);
  r.stable = r.trace < 0;
  r.hopf = r.trace == 0.0;
  return r;
}

void write_cascade_csv_header(std::ostream& os) {
  os << "# fhnlab cascade v1\n";
  os << "param,k,re_sigma1,im_sigma1,re_sigma2,im_sigma2,class\n";
}

void write_cascade_csv_rows(std::ostream& os, const CascadeReport& r) {
  os.precision(17);
  for (std::size_t k = 0; k < r.modes.size(); ++k) {
    const auto& m = r.modes[k];
    os << r.parameter << ',' << k << ',' << m.sigma1.real() << ',' << m.sigma1.imag() << ','
       << m.sigma2.real() << ',' << m.sigma2.imag() << ',' << to_string(r.classes[k]) << '\n';
  }
}

}  // namespace fhn
