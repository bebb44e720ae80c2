#include "fhn/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace fhn {

Periodicity detect_periodicity(std::span<const double> times, std::span<const double> values,
                               double t_lo, double t_hi) {
  if (times.size() != values.size()) throw SizeError("times and values differ in length");
  std::size_t lo = 0, hi = times.size();
  while (lo < hi && times[lo] < t_lo) ++lo;
  while (hi > lo && times[hi - 1] > t_hi) --hi;
  if (hi - lo < 3) throw DetectionError("window holds fewer than three samples");

  double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
  for (std::size_t i = lo; i < hi; ++i) {
    vmin = std::min(vmin, values[i]);
    vmax = std::max(vmax, values[i]);
  }
  // Extrema must clear a small fraction of the window range so flat noise is not counted.
  const double range = vmax - vmin;
  const double floor_range = 1e-9 * std::max(1.0, std::max(std::abs(vmax), std::abs(vmin)));
  if (!(range > floor_range)) throw DetectionError("signal is flat over the window");
  const double mid = 0.5 * (vmax + vmin);

  Periodicity out;
  std::vector<double> peak_vals, trough_vals;
  for (std::size_t i = lo + 1; i + 1 < hi; ++i) {
    const double a = values[i - 1], b = values[i], c = values[i + 1];
    const bool peak = b > a && b >= c && b > mid;
    const bool trough = b < a && b <= c && b < mid;
    if (!peak && !trough) continue;
    const double denom = a - 2.0 * b + c;
    double shift = 0.0, ext = b;
    if (denom != 0.0) {
      shift = 0.5 * (a - c) / denom;
      ext = b - 0.25 * (a - c) * shift;
    }
    const double dt = times[i + 1] - times[i];
    if (peak) {
      // A later sample in the same excursion above the midline replaces the earlier one.
      if (!out.peak_times.empty() && peak_vals.size() > trough_vals.size()) {
        if (ext > peak_vals.back()) {
          out.peak_times.back() = times[i] + shift * dt;
          peak_vals.back() = ext;
        }
        continue;
      }
      out.peak_times.push_back(times[i] + shift * dt);
      peak_vals.push_back(ext);
    } else {
      if (peak_vals.empty()) continue;
      if (trough_vals.size() == peak_vals.size()) {
        trough_vals.back() = std::min(trough_vals.back(), ext);
        continue;
      }
      trough_vals.push_back(ext);
    }
  }
  if (out.peak_times.size() < 4) throw DetectionError("fewer than four peaks in the window");

  std::vector<double> gaps;
  for (std::size_t i = 1; i < out.peak_times.size(); ++i)
    gaps.push_back(out.peak_times[i] - out.peak_times[i - 1]);
  const double mean = std::accumulate(gaps.begin(), gaps.end(), 0.0) / gaps.size();
  double var = 0.0;
  for (double g : gaps) var += (g - mean) * (g - mean);
  out.period = mean;
  out.regularity = std::sqrt(var / gaps.size()) / mean;

  double amp = 0.0;
  const std::size_t pairs = std::min(peak_vals.size(), trough_vals.size());
  for (std::size_t i = 0; i < pairs; ++i) amp += 0.5 * (peak_vals[i] - trough_vals[i]);
  out.amplitude = pairs ? amp / pairs : 0.5 * range;
  return out;
}

ProfileStats spatial_profile_stats(const GridFunction& f) {
  ProfileStats s;
  const double L = f.grid.domain().length();
  s.mean = quad(f) / L;
  GridFunction d(f.grid);
  for (std::size_t i = 0; i < f.size(); ++i) {
    d[i] = (f[i] - s.mean) * (f[i] - s.mean);
    s.max_abs = std::max(s.max_abs, std::abs(f[i]));
  }
  s.std = std::sqrt(std::max(0.0, quad(d) / L));
  return s;
}

PropagationMetric propagation_metric(const Trajectory& traj, double x_probe, double t_lo,
                                     double t_hi) {
  if (!traj.grid.domain().contains(x_probe)) throw DomainError("probe outside the domain");
  PropagationMetric m;
  const std::size_t node = traj.grid.nearest(x_probe);
  m.x_probe = traj.grid.x(node);

  std::vector<double> t, u;
  const auto it = std::find(traj.probes.begin(), traj.probes.end(), m.x_probe);
  if (it != traj.probes.end()) {
    const std::size_t p = it - traj.probes.begin();
    for (const auto& s : traj.diagnostics) {
      t.push_back(s.t);
      u.push_back(s.probe_u[p]);
    }
  } else {
    for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
      t.push_back(traj.times[s]);
      u.push_back(traj.snapshots[s].u[node]);
    }
  }
  try {
    const auto per = detect_periodicity(t, u, t_lo, t_hi);
    m.amplitude = per.amplitude;
    m.period = per.period;
  } catch (const DetectionError&) {
    m.detection_failed = true;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i] < t_lo || t[i] > t_hi) continue;
      lo = std::min(lo, u[i]);
      hi = std::max(hi, u[i]);
    }
    m.amplitude = hi >= lo ? 0.5 * (hi - lo) : 0.0;
  }
  return m;
}

}  // namespace fhn
