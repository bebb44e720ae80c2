#include "fhn/sturm.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "fhn/error.hpp"
#include "fhn/spectral.hpp"

namespace fhn {

using std::numbers::pi;

namespace {

constexpr double kStepTolerance = 1e-10;   // local error per unit length
constexpr double kBisectionTolerance = 1e-9;
constexpr std::size_t kMaxSteps = 50'000'000;
constexpr double kMonotoneSlack = 1e-8;
constexpr double kEps = std::numeric_limits<double>::epsilon();

template <std::size_t Dim>
using Vec = std::array<double, Dim>;

/// Adaptive step-doubling RK4 for the Pruefer system, integrated node to node.
template <std::size_t Dim>
class PruferIntegrator {
 public:
  PruferIntegrator(const SlProblem& p, double lambda) : p_(p), lambda_(lambda) {}

  template <class Visit>
  Vec<Dim> run(Vec<Dim> y, Visit&& visit) {
    const auto& grid = p_.grid();
    const double h = grid.spacing();
    visit(std::size_t{0}, y);
    double step = initial_step(h);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      double s = 0.0;
      while (h - s > 1e-12 * h) {
        const double remaining = h - s;
        const bool last = step >= remaining;
        const double H = last ? remaining : step;
        Vec<Dim> coarse = rk4(i, s, y, H);
        Vec<Dim> half = rk4(i, s, y, 0.5 * H);
        Vec<Dim> fine = rk4(i, s + 0.5 * H, half, 0.5 * H);
        double err = 0.0;
        for (std::size_t j = 0; j < Dim; ++j) err = std::max(err, std::abs(fine[j] - coarse[j]) / 15.0);
        double scale = 1.0;
        for (std::size_t j = 0; j < Dim; ++j) scale = std::max(scale, std::abs(y[j]));
        // Below the rounding floor the estimate is noise; without it the step collapses.
        const double allowed = std::max(kStepTolerance * H, 64.0 * kEps * scale);
        if (err <= allowed || H < 1e-14 * h) {
          for (std::size_t j = 0; j < Dim; ++j) y[j] = fine[j] + (fine[j] - coarse[j]) / 15.0;
          s = last ? h : s + H;
          if (++steps_ > kMaxSteps)
            throw ResolutionError("Pruefer integration exceeded its step budget; lambda too large for the grid");
        }
        const double factor = err > 0 ? 0.9 * std::pow(allowed / err, 0.25) : 4.0;
        const double next = H * std::clamp(factor, 0.1, 4.0);
        if (!last || err > allowed) step = next;
      }
      visit(i + 1, y);
    }
    return y;
  }

 private:
  double initial_step(double h) const {
    double rate = 1.0;
    for (double q : p_.potential().values) rate = std::max(rate, std::abs((lambda_ + q) / p_.d()));
    return std::min(h, 0.05 / rate);
  }

  Vec<Dim> rhs(std::size_t i, double s, const Vec<Dim>& y) const {
    const double q = p_.potential_in(i, s / p_.grid().spacing());
    const double coef = (lambda_ + q) / p_.d();
    const double sn = std::sin(y[0]);
    const double cs = std::cos(y[0]);
    Vec<Dim> dy{};
    dy[0] = cs * cs + coef * sn * sn;
    if constexpr (Dim == 2) dy[1] = sn * cs * (1.0 - coef);
    return dy;
  }

  Vec<Dim> rk4(std::size_t i, double s, const Vec<Dim>& y, double H) const {
    const auto k1 = rhs(i, s, y);
    Vec<Dim> t{};
    for (std::size_t j = 0; j < Dim; ++j) t[j] = y[j] + 0.5 * H * k1[j];
    const auto k2 = rhs(i, s + 0.5 * H, t);
    for (std::size_t j = 0; j < Dim; ++j) t[j] = y[j] + 0.5 * H * k2[j];
    const auto k3 = rhs(i, s + 0.5 * H, t);
    for (std::size_t j = 0; j < Dim; ++j) t[j] = y[j] + H * k3[j];
    const auto k4 = rhs(i, s + H, t);
    Vec<Dim> out{};
    for (std::size_t j = 0; j < Dim; ++j) out[j] = y[j] + H / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    return out;
  }

  const SlProblem& p_;
  double lambda_;
  std::size_t steps_ = 0;
};

std::string bracket_report(std::size_t k, double lo, double hi, double th_lo, double th_hi) {
  std::ostringstream os;
  os.precision(12);
  os << "eigenvalue " << k << ": bracket (" << lo << ", " << hi << ") gives theta(b) = (" << th_lo
     << ", " << th_hi << "), target " << (pi / 2 + static_cast<double>(k) * pi);
  return os.str();
}

}  // namespace

SlProblem::SlProblem(GridFunction potential, double d) : q_(std::move(potential)), d_(d) {
  if (!(d > 0)) throw DomainError("Sturm-Liouville problem requires d > 0");
  q_max_ = *std::max_element(q_.values.begin(), q_.values.end());
  for (double q : q_.values)
    if (!std::isfinite(q)) throw DomainError("potential must be finite");
  if (q_max_ > 3.0 + 1e-12) throw DomainError("potential f'(u_bar) cannot exceed 3");
}

SlProblem SlProblem::constant(double fprime, const UniformGrid& grid, double d) {
  return SlProblem(GridFunction(grid, std::vector<double>(grid.size(), fprime)), d);
}

SlProblem SlProblem::from_profile(const CProfile& profile, const UniformGrid& grid, double d) {
  const Interval dom = grid.domain();
  return SlProblem(GridFunction::sample(grid, [&](double x) { return cubic_f_prime(profile(x, dom)); }), d);
}

SlProblem SlProblem::from_stationary(const GridFunction& u_bar, double d) {
  GridFunction q(u_bar.grid);
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = cubic_f_prime(u_bar[i]);
  return SlProblem(std::move(q), d);
}

double SlProblem::mean_potential() const { return quad(q_) / domain().length(); }

double SlProblem::potential_in(std::size_t i, double t) const {
  const auto& v = q_.values;
  const std::size_t n = v.size();
  // Even reflection at both ends, matching the Neumann ghost nodes.
  const double p0 = i == 0 ? v[1] : v[i - 1];
  const double p1 = v[i];
  const double p2 = v[i + 1];
  const double p3 = i + 2 < n ? v[i + 2] : v[n - 2];
  const double t2 = t * t;
  const double t3 = t2 * t;
  return 0.5 * ((2.0 * p1) + (-p0 + p2) * t + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t2 +
                (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * t3);
}

double prufer_theta_end(const SlProblem& problem, double lambda) {
  PruferIntegrator<1> integ(problem, lambda);
  return integ.run({pi / 2}, [](std::size_t, const Vec<1>&) {})[0];
}

std::vector<PruferState> prufer_trajectory(const SlProblem& problem, double lambda) {
  std::vector<PruferState> out(problem.grid().size());
  PruferIntegrator<2> integ(problem, lambda);
  integ.run({pi / 2, 0.0}, [&](std::size_t i, const Vec<2>& y) { out[i] = {y[0], y[1]}; });
  return out;
}

double sl_eigenvalue(const SlProblem& problem, std::size_t k) {
  const double target = pi / 2 + static_cast<double>(k) * pi;
  const double kk = static_cast<double>(k);
  const double len = problem.domain().length();
  const auto& q = problem.potential().values;
  const double q_min = *std::min_element(q.begin(), q.end());
  // -max q <= lambda_k <= d k^2 pi^2 / L^2 - min q by comparison with constant potentials.
  // The bracket grows upward from the lower bound, so a deep potential elsewhere does not
  // force shots at very large lambda.
  double lo = -problem.max_potential() - 1e-6;
  const double ceiling = problem.d() * kk * kk * pi * pi / (len * len) - q_min + 1e-6;
  double th_lo = prufer_theta_end(problem, lo);
  if (th_lo >= target) throw SolverError("phase exceeds the target below -max q; " + bracket_report(k, lo, lo, th_lo, th_lo));
  double step = 1.0;
  double hi = std::min(lo + step, ceiling);
  double th_hi = prufer_theta_end(problem, hi);
  for (int it = 0; th_hi <= target; ++it) {
    if (it > 80 || hi >= ceiling) throw SolverError("upper bracket expansion failed; " + bracket_report(k, lo, hi, th_lo, th_hi));
    lo = hi;
    th_lo = th_hi;
    step *= 2.0;
    hi = std::min(lo + step, ceiling);
    th_hi = prufer_theta_end(problem, hi);
  }
  if (th_lo > th_hi) throw SolverError("theta(b) not increasing over bracket; " + bracket_report(k, lo, hi, th_lo, th_hi));

  while (hi - lo > kBisectionTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double th = prufer_theta_end(problem, mid);
    if (th < th_lo - kMonotoneSlack || th > th_hi + kMonotoneSlack)
      throw SolverError("theta(b) not monotone in lambda; " + bracket_report(k, lo, hi, th_lo, th_hi));
    if (th < target) {
      lo = mid;
      th_lo = th;
    } else {
      hi = mid;
      th_hi = th;
    }
  }
  return 0.5 * (lo + hi);
}

EigenPair sl_eigenfunction(const SlProblem& problem, std::size_t k, double lambda_k) {
  const auto& grid = problem.grid();
  const double h = grid.spacing();
  double coef_max = 0.0;
  for (double q : problem.potential().values) coef_max = std::max(coef_max, (lambda_k + q) / problem.d());
  if (std::sqrt(coef_max) * h > pi / 8)
    throw ResolutionError("grid has fewer than 8 nodes per half-wave for this eigenfunction");

  // Shoot from both ends and splice where the potential is largest. A single shot picks up
  // the growing solution in classically forbidden regions far from the well.
  const std::size_t n = grid.size();
  const auto left = prufer_trajectory(problem, lambda_k);
  std::vector<double> reversed(problem.potential().values.rbegin(), problem.potential().values.rend());
  const SlProblem mirrored(GridFunction(grid, std::move(reversed)), problem.d());
  const auto right = prufer_trajectory(mirrored, lambda_k);

  const auto& q = problem.potential().values;
  const double q_top = problem.max_potential();
  std::vector<std::size_t> tops;
  for (std::size_t i = 0; i < n; ++i)
    if (q[i] >= q_top - 1e-12 * std::max(1.0, std::abs(q_top))) tops.push_back(i);
  const std::size_t m = tops[tops.size() / 2];

  const std::size_t w = std::max<std::size_t>(2, n / 100);
  const std::size_t lo = m > w ? m - w : 0;
  const std::size_t hi = std::min(n - 1, m + w);
  // Least-squares scale of the right branch onto the left over a window around m, computed
  // with both branches rescaled by their amplitude at m to stay in range.
  double num = 0.0, den = 0.0;
  for (std::size_t i = lo; i <= hi; ++i) {
    const std::size_t j = n - 1 - i;
    const double l = std::exp(left[i].log_r - left[m].log_r) * std::sin(left[i].theta);
    const double r = std::exp(right[j].log_r - right[n - 1 - m].log_r) * std::sin(right[j].theta);
    num += l * r;
    den += r * r;
  }
  if (!(den > 0)) throw SolverError("eigenfunction branches vanish at the matching point");
  const double sign = num < 0 ? -1.0 : 1.0;

  std::vector<double> log_mag(n), sgn(n);
  for (std::size_t i = 0; i < n; ++i) {
    double lr, sn;
    if (i <= m) {
      lr = left[i].log_r - left[m].log_r;
      sn = std::sin(left[i].theta);
    } else {
      const std::size_t j = n - 1 - i;
      lr = right[j].log_r - right[n - 1 - m].log_r + std::log(std::abs(num) / den);
      sn = sign * std::sin(right[j].theta);
    }
    log_mag[i] = lr;
    sgn[i] = sn;
  }
  const double log_max = *std::max_element(log_mag.begin(), log_mag.end());
  GridFunction phi(grid);
  for (std::size_t i = 0; i < n; ++i) phi[i] = std::exp(log_mag[i] - log_max) * sgn[i];
  const double norm = l2_norm(phi);
  if (!(norm > 0)) throw SolverError("eigenfunction vanished on the grid");
  const double orient = phi[0] < 0 ? -1.0 : 1.0;
  for (double& v : phi.values) v *= orient / norm;
  return {k, lambda_k, std::move(phi)};
}

std::vector<EigenPair> sl_spectrum(const SlProblem& problem, std::size_t n_modes) {
  if (n_modes == 0) throw DomainError("n_modes must be at least 1");
  std::vector<EigenPair> out;
  out.reserve(n_modes);
  for (std::size_t k = 0; k < n_modes; ++k) {
    const double lambda = sl_eigenvalue(problem, k);
    if (k > 0 && !(lambda > out.back().lambda))
      throw SolverError("eigenvalues not strictly increasing at k = " + std::to_string(k));
    out.push_back(sl_eigenfunction(problem, k, lambda));
  }
  if (out.front().lambda < -3.0 - 1e-9) throw SolverError("lambda_0 below -3");
  return out;
}

double weyl_ratio(const SlProblem& problem, const EigenPair& pair) {
  if (pair.index == 0) throw DomainError("Weyl ratio is defined for k >= 1");
  return pair.lambda / cosine_eigenvalue(pair.index, problem.domain(), problem.d());
}

double rayleigh_quotient(const SlProblem& problem, const GridFunction& u) {
  const double uu = quad_product(u, u);
  if (!(uu > 0)) throw DomainError("Rayleigh quotient of the zero function");
  const double grad = h1_seminorm(u);
  GridFunction qu2(u.grid);
  for (std::size_t i = 0; i < u.size(); ++i) qu2[i] = problem.potential()[i] * u[i] * u[i];
  return (problem.d() * grad * grad - quad(qu2)) / uu;
}

double eigen_residual(const SlProblem& problem, const EigenPair& pair) {
  GridFunction r = neumann_laplacian(pair.phi);
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = -problem.d() * r[i] - problem.potential()[i] * pair.phi[i] - pair.lambda * pair.phi[i];
  return l2_norm(r);
}

std::size_t sign_changes(const GridFunction& f) {
  std::size_t count = 0;
  double last = 0.0;
  for (double v : f.values) {
    if (v == 0.0) continue;
    if (last != 0.0 && (v > 0) != (last > 0)) ++count;
    last = v;
  }
  return count;
}

LinfStats linf_uniformity_stats(std::span<const EigenPair> spectrum) {
  if (spectrum.size() < 5) throw DomainError("L-infinity statistics need at least 5 eigenpairs");
  LinfStats s;
  for (const auto& p : spectrum) {
    double m = 0.0;
    for (double v : p.phi.values) m = std::max(m, std::abs(v));
    s.max_abs.push_back(m);
  }
  const std::size_t head = std::min<std::size_t>(6, s.max_abs.size());
  const double ref = *std::max_element(s.max_abs.begin(), s.max_abs.begin() + static_cast<std::ptrdiff_t>(head));
  const double all = *std::max_element(s.max_abs.begin(), s.max_abs.end());
  s.ratio = all / ref;

  const double n = static_cast<double>(s.max_abs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < s.max_abs.size(); ++k) {
    const double x = static_cast<double>(k);
    sx += x;
    sy += s.max_abs[k];
    sxx += x * x;
    sxy += x * s.max_abs[k];
  }
  s.trend_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  s.growth_flag = s.ratio > 2.0;
  return s;
}

void write_spectrum_csv(std::ostream& os, std::span<const EigenPair> spectrum) {
  os << "# fhnlab spectrum v1\n";
  os << "k,lambda,max_abs_phi\n";
  os.precision(17);
  for (const auto& p : spectrum) {
    double m = 0.0;
    for (double v : p.phi.values) m = std::max(m, std::abs(v));
    os << p.index << ',' << p.lambda << ',' << m << '\n';
  }
}

void write_eigenfunction_csv(std::ostream& os, const EigenPair& pair) {
  os << "# fhnlab eigenfunction v1 k=" << pair.index << '\n';
  os << "x,phi\n";
  os.precision(17);
  for (std::size_t i = 0; i < pair.phi.size(); ++i) os << pair.phi.grid.x(i) << ',' << pair.phi[i] << '\n';
}

}  // namespace fhn
