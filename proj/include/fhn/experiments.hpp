#pragma once

#include <string>
#include <vector>

#include "fhn/config.hpp"

namespace fhn {

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  std::string relation;  ///< "<", "<=", ">", ">=" or "flag"
  bool pass = false;
};

Check make_check(std::string name, double value, std::string relation, double threshold);

struct Verdict {
  std::string preset;
  bool pass = false;
  std::vector<Check> checks;
  std::vector<std::string> artifacts;
};

std::vector<std::string> preset_names();
bool is_preset(const std::string& name);

struct PresetOptions {
  bool fast = false;          ///< nhFHN: halve the resolution and the horizon
  bool long_window = false;  ///< nhFHN: run to t = 600 and probe over (500, 600)
};

/// Configuration of a named experiment. Throws ConfigError for unknown names.
ExperimentConfig preset_config(const std::string& name, const PresetOptions& opt = {});

/// Runs a preset, writes CSV artifacts to out_dir (skipped when empty) and evaluates its checks.
Verdict reproduce(const std::string& name, const PresetOptions& opt = {}, const std::string& out_dir = "");

/// Half range of u on the limit cycle of u' = alpha u - u^3 - v, v' = u, from (0.1, 0) after
/// a long transient.
double planar_cycle_amplitude(double alpha);

/// Probe window for the nhFHN presets.
struct ProbeWindow {
  double t_lo, t_hi;
};
ProbeWindow nhfhn_window(const PresetOptions& opt);

}  // namespace fhn
