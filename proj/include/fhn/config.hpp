#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fhn/grid.hpp"
#include "fhn/model.hpp"
#include "fhn/sim.hpp"

namespace fhn {

struct ModeAmplitude {
  std::size_t k = 0;
  double u = 0.0;
  double v = 0.0;
  bool operator==(const ModeAmplitude&) const = default;
};

/// Initial condition recipe.
struct IcSpec {
  enum class Kind { Step, Modes, Stationary, File, Random };
  Kind kind = Kind::Step;
  /// Step: u = v = left on the left half, right on the right half; the midpoint node gets the mean.
  double left = 1.0;
  double right = -1.0;
  std::vector<ModeAmplitude> modes;
  /// Stationary: Gaussian bump added to u.
  double bump_amplitude = 0.0;
  double bump_center = 0.0;
  double bump_width = 1.0;
  std::string path;  ///< File: CSV with columns x,u,v on the configured grid
  /// Random: u_k, v_k ~ U(-1,1)/(1+k) for k <= max_mode.
  std::uint64_t seed = 1;
  std::size_t max_mode = 8;

  bool operator==(const IcSpec&) const = default;
};

std::string to_string(IcSpec::Kind k);

struct OutputSpec {
  std::string dir = ".";
  bool snapshots = true;
  bool diagnostics = true;
  bool operator==(const OutputSpec&) const = default;
};

struct SpectrumSpec {
  std::size_t n_modes = 10;
  bool operator==(const SpectrumSpec&) const = default;
};

struct BifurcateSpec {
  std::string parameter = "alpha";  ///< "alpha" (toy) or "p" (Well family)
  double lo = -1.0;
  double hi = 50.0;
  std::size_t samples = 101;
  std::size_t k_max = 10;      ///< toy: highest mode; p sweeps: number of SL modes
  bool find_p_star = false;
  double p_lo = 0.5;
  double p_hi = 5.0;
  bool operator==(const BifurcateSpec&) const = default;
};

struct ExperimentConfig {
  ModelSpec model;
  double h = 0.02;  ///< grid spacing for the PDE models
  SimConfig sim;
  IcSpec ic;
  OutputSpec output;
  SpectrumSpec spectrum;
  BifurcateSpec bifurcate;
  /// OdeFhn initial point.
  double ode_u0 = 0.0;
  double ode_v0 = 0.0;

  UniformGrid grid() const;
};

/// INI text with sections [model] [sim] [ic] [output] [spectrum] [bifurcate].
/// Unknown sections or keys and malformed values raise ConfigError.
ExperimentConfig parse_config(std::istream& is);
ExperimentConfig load_config(const std::string& path);
/// Canonical text; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const ExperimentConfig& c);

/// Builds the initial state on `grid`.
StateField build_ic(const ExperimentConfig& c, const UniformGrid& grid);
StateField step_ic(const UniformGrid& grid, double left, double right);
StateField modes_ic(const UniformGrid& grid, const std::vector<ModeAmplitude>& modes);
StateField random_ic(const UniformGrid& grid, std::uint64_t seed, std::size_t max_mode);

}  // namespace fhn
