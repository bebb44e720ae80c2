#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fhn/grid.hpp"
#include "fhn/sim.hpp"

namespace fhn {

struct Periodicity {
  double period = 0.0;
  double amplitude = 0.0;   ///< mean peak-to-trough half range
  double regularity = 0.0;  ///< std / mean of peak spacings
  std::vector<double> peak_times;
};

/// Peaks of `values` inside [t_lo, t_hi], refined by a parabola through the three samples.
/// Throws DetectionError with fewer than four peaks.
Periodicity detect_periodicity(std::span<const double> times, std::span<const double> values,
                               double t_lo, double t_hi);

struct ProfileStats {
  double mean = 0.0;
  double std = 0.0;
  double max_abs = 0.0;
};

/// Quadrature-weighted mean and standard deviation over the domain.
ProfileStats spatial_profile_stats(const GridFunction& f);

struct PropagationMetric {
  double x_probe = 0.0;
  double amplitude = 0.0;
  double period = 0.0;
  /// No oscillation was found; amplitude is then half the range over the window.
  bool detection_failed = false;
};

/// Oscillation amplitude of u at the probe over [t_lo, t_hi], from the probe log when the
/// position was probed and from the snapshots otherwise.
PropagationMetric propagation_metric(const Trajectory& traj, double x_probe, double t_lo,
                                     double t_hi);

}  // namespace fhn
