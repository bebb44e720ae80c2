#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "fhn/error.hpp"
#include "fhn/model.hpp"
#include "fhn/stability.hpp"
#include "fhn/sturm.hpp"
#include "gen.hpp"

using namespace fhn;
using std::numbers::pi;

namespace {

double closed_form(std::size_t k, double c, Interval dom, double d) {
  const double kk = static_cast<double>(k);
  return d * kk * kk * pi * pi / (dom.length() * dom.length()) - cubic_f_prime(c);
}

}  // namespace

TEST_CASE("constant potential spectrum matches shifted cosine eigenvalues") {
  const UniformGrid g(0.0, 1.0, 1001);
  for (double c : {0.0, -1.5, -2.0}) {
    const auto problem = SlProblem::constant(cubic_f_prime(c), g, 1.0);
    const auto spec = sl_spectrum(problem, 10);
    for (const auto& p : spec) {
      const double exact = closed_form(p.index, c, g.domain(), 1.0);
      CHECK(std::abs(p.lambda - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
      double err = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double cosine = p.index == 0 ? 1.0 : std::numbers::sqrt2 * std::cos(double(p.index) * pi * g.x(i));
        err = std::max(err, std::abs(p.phi[i] - cosine));
      }
      CHECK(err <= 1e-5);
    }
    CHECK(spec.front().lambda >= -3.0 - 1e-8);
  }
}

TEST_CASE("property: constant potentials on random intervals") {
  gen::Source src(41);
  for (int t = 0; t < 12; ++t) {
    const double a = src.uniform(-5.0, 5.0);
    const double len = src.uniform(0.5, 4.0);
    const double d = src.uniform(0.2, 3.0);
    const double c = src.uniform(-2.5, 2.5);
    const UniformGrid g(a, a + len, 801);
    const auto problem = SlProblem::constant(cubic_f_prime(c), g, d);
    for (std::size_t k : {0u, 1u, 4u}) {
      const double exact = closed_form(k, c, g.domain(), d);
      CHECK(std::abs(sl_eigenvalue(problem, k) - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
    }
  }
}

TEST_CASE("Well spectrum: ordering, nodes, orthogonality, residual") {
  const UniformGrid g(-50.0, 50.0, 2001);
  const auto problem = SlProblem::from_profile(CProfile::well(2.0), g, 1.0);
  const auto spec = sl_spectrum(problem, 10);
  for (std::size_t k = 0; k < spec.size(); ++k) {
    CHECK(sign_changes(spec[k].phi) == k);
    CHECK(quad_product(spec[k].phi, spec[k].phi) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eigen_residual(problem, spec[k]) <= 1e-3);
    if (k > 0) CHECK(spec[k].lambda > spec[k - 1].lambda);
    for (std::size_t j = 0; j < k; ++j) CHECK(std::abs(quad_product(spec[j].phi, spec[k].phi)) <= 1e-6);
  }
  CHECK(spec.front().lambda >= -3.0);
  // Variational upper bound from the constant trial function.
  CHECK(spec.front().lambda <= integral_instability_criterion(problem).lambda0_upper + 1e-9);
}

TEST_CASE("theta(b) is increasing in lambda") {
  const UniformGrid g(-50.0, 50.0, 1001);
  const auto problem = SlProblem::from_profile(CProfile::well(1.1), g, 1.0);
  double prev = prufer_theta_end(problem, -3.5);
  for (double lam = -3.4; lam < 1.0; lam += 0.1) {
    const double th = prufer_theta_end(problem, lam);
    CHECK(th > prev);
    prev = th;
  }
}

TEST_CASE("Weyl ratio tends to one") {
  const UniformGrid g(0.0, 1.0, 2001);
  const auto problem = SlProblem::from_profile(CProfile::well(1.0), g, 1.0);
  const double lam = sl_eigenvalue(problem, 20);
  const auto pair = sl_eigenfunction(problem, 20, lam);
  CHECK(std::abs(weyl_ratio(problem, pair) - 1.0) <= 0.05);
  CHECK_THROWS_AS(weyl_ratio(problem, sl_eigenfunction(problem, 0, sl_eigenvalue(problem, 0))), DomainError);
}

TEST_CASE("mode matrix from SL eigenvalues satisfies Vieta") {
  const UniformGrid g(-50.0, 50.0, 1001);
  const auto problem = SlProblem::from_profile(CProfile::well(2.0), g, 1.0);
  const double eps = 0.1;
  for (std::size_t k = 0; k < 6; ++k) {
    const double lam = sl_eigenvalue(problem, k);
    const auto me = mode_eigenvalues(-lam, eps);
    CHECK(std::abs(me.sigma1 * me.sigma2 - 1.0 / eps) <= 1e-12 * (1.0 / eps));
    CHECK(std::abs(me.sigma1 + me.sigma2 - (-lam) / eps) <= 1e-12 * (1.0 + std::abs(lam) / eps));
    CHECK(me.max_real() <= 3.0 / eps + 1e-9);
  }
}

TEST_CASE("resolution and input errors") {
  const UniformGrid coarse(0.0, 1.0, 11);
  const auto problem = SlProblem::constant(3.0, coarse, 1.0);
  CHECK_THROWS_AS(sl_eigenfunction(problem, 30, sl_eigenvalue(problem, 30)), ResolutionError);
  CHECK_THROWS_AS(sl_spectrum(problem, 0), DomainError);
}

TEST_CASE("spectrum CSV header") {
  const auto problem = SlProblem::constant(3.0, UniformGrid(0.0, 1.0, 201), 1.0);
  const auto spec = sl_spectrum(problem, 5);
  std::ostringstream os;
  write_spectrum_csv(os, spec);
  CHECK(os.str().rfind("# fhnlab spectrum v1\nk,lambda,max_abs_phi\n0,", 0) == 0);
  const auto s = linf_uniformity_stats(spec);
  CHECK(s.max_abs.size() == 5);
  CHECK_FALSE(s.growth_flag);
}
