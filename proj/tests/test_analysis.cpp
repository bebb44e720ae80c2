#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "fhn/analysis.hpp"
#include "fhn/error.hpp"
#include "gen.hpp"

using namespace fhn;
using std::numbers::pi;

namespace {

struct Series {
  std::vector<double> t, v;
};

template <class F>
Series sample(double t_end, double dt, F f) {
  Series s;
  for (std::size_t i = 0; i * dt <= t_end; ++i) {
    s.t.push_back(i * dt);
    s.v.push_back(f(i * dt));
  }
  return s;
}

}  // namespace

TEST_CASE("sinusoid period and amplitude") {
  const auto s = sample(20.0, 0.01, [](double t) { return 0.4 + 1.5 * std::sin(pi * t + 0.3); });
  const auto p = detect_periodicity(s.t, s.v, 0.0, 20.0);
  CHECK(p.period == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(p.amplitude == doctest::Approx(1.5).epsilon(1e-4));
  CHECK(p.regularity <= 1e-6);
  CHECK(p.peak_times.size() == 10);
}

TEST_CASE("property: random periodic signals") {
  gen::Source src(71);
  for (int trial = 0; trial < 200; ++trial) {
    const double period = src.uniform(0.5, 5.0);
    const double amp = src.uniform(0.01, 10.0);
    const double offset = src.uniform(-5.0, 5.0);
    const double phase = src.uniform(0.0, 2 * pi);
    const double sharp = src.uniform(0.1, 6.0);
    // tanh-shaped waves approach the square relaxation profile as `sharp` grows.
    auto f = [&](double t) { return offset + amp * std::tanh(sharp * std::sin(2 * pi * t / period + phase)) / std::tanh(sharp); };
    const auto s = sample(12 * period, period / 400, f);
    const auto p = detect_periodicity(s.t, s.v, 0.0, 12 * period);
    CHECK(p.period == doctest::Approx(period).epsilon(1e-4));
    CHECK(p.amplitude == doctest::Approx(amp).epsilon(1e-3));
    CHECK(p.regularity <= 1e-3);
  }
}

TEST_CASE("noisy plateaus do not split excursions") {
  gen::Source src(72);
  auto f = [&](double t) { return std::tanh(8 * std::sin(t)) + src.uniform(-1e-3, 1e-3); };
  const auto s = sample(40 * pi, 0.01, f);
  const auto p = detect_periodicity(s.t, s.v, 0.0, 40 * pi);
  CHECK(p.peak_times.size() == 20);
  CHECK(p.period == doctest::Approx(2 * pi).epsilon(2e-2));
}

TEST_CASE("detection failures") {
  const auto flat = sample(10.0, 0.1, [](double) { return 0.25; });
  CHECK_THROWS_AS(detect_periodicity(flat.t, flat.v, 0.0, 10.0), DetectionError);
  const auto decay = sample(10.0, 0.01, [](double t) { return std::exp(-t); });
  CHECK_THROWS_AS(detect_periodicity(decay.t, decay.v, 0.0, 10.0), DetectionError);
  const auto few = sample(10.0, 0.01, [](double t) { return std::sin(t); });
  CHECK_THROWS_AS(detect_periodicity(few.t, few.v, 0.0, 10.0), DetectionError);
  const std::vector<double> a{0.0, 1.0}, b{1.0};
  CHECK_THROWS_AS(detect_periodicity(a, b, 0.0, 1.0), SizeError);
}

TEST_CASE("spatial statistics") {
  const UniformGrid g(0.0, 1.0, 2001);
  const auto c = spatial_profile_stats(GridFunction::sample(g, [](double) { return -0.7; }));
  CHECK(c.mean == doctest::Approx(-0.7));
  CHECK(c.std <= 1e-12);
  const auto w = spatial_profile_stats(GridFunction::sample(g, [](double x) { return 2.0 * std::cos(pi * x); }));
  CHECK(std::abs(w.mean) <= 1e-12);
  CHECK(w.std == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  CHECK(w.max_abs == doctest::Approx(2.0));
}

TEST_CASE("propagation metric from snapshots") {
  const UniformGrid g(-1.0, 1.0, 3);
  Trajectory traj;
  traj.grid = g;
  for (int i = 0; i <= 2000; ++i) {
    const double t = 0.01 * i;
    GridFunction u(g);
    u[0] = 1.2 * std::sin(2 * pi * t / 2.5);
    u[1] = 0.0;
    u[2] = 0.05 * t / 20.0;
    traj.times.push_back(t);
    traj.snapshots.emplace_back(u, GridFunction(g));
  }
  const auto left = propagation_metric(traj, -1.0, 5.0, 20.0);
  CHECK_FALSE(left.detection_failed);
  CHECK(left.amplitude == doctest::Approx(1.2).epsilon(1e-3));
  CHECK(left.period == doctest::Approx(2.5).epsilon(1e-4));
  const auto mid = propagation_metric(traj, 0.0, 5.0, 20.0);
  CHECK(mid.detection_failed);
  CHECK(mid.amplitude == 0.0);
  const auto right = propagation_metric(traj, 1.0, 10.0, 20.0);
  CHECK(right.detection_failed);
  CHECK(right.amplitude == doctest::Approx(0.0125).epsilon(1e-9));
  CHECK_THROWS_AS(propagation_metric(traj, 2.0, 0.0, 1.0), DomainError);
}
