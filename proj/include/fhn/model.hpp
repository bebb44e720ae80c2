#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fhn/grid.hpp"

namespace fhn {

/// Cubic nonlinearity f(u) = -u^3 + 3u and its derivatives.
constexpr double cubic_f(double u) { return -u * u * u + 3.0 * u; }
constexpr double cubic_f_prime(double u) { return -3.0 * u * u + 3.0; }
constexpr double cubic_f_second(double u) { return -6.0 * u; }

/// Excitability profile c(x).
class CProfile {
 public:
  struct Constant {
    double c;
  };
  /// c(x) = p (xh^4 - 2 xh^2) with xh the coordinate rescaled to [-1, 1].
  struct Well {
    double p;
  };
  /// Samples on a uniform grid, linearly interpolated.
  struct Tabulated {
    GridFunction samples;
  };
  using Variant = std::variant<Constant, Well, Tabulated>;

  static CProfile constant(double c) { return CProfile(Constant{c}); }
  static CProfile well(double p);
  static CProfile tabulated(GridFunction samples) { return CProfile(Tabulated{std::move(samples)}); }

  const Variant& variant() const { return v_; }
  bool is_constant() const { return std::holds_alternative<Constant>(v_); }
  bool is_well() const { return std::holds_alternative<Well>(v_); }

  /// Value at x on `domain`; throws DomainError when x lies outside.
  double operator()(double x, Interval domain) const;
  /// Same profile family with a different p (Well only).
  CProfile with_p(double p) const;

 private:
  explicit CProfile(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

double c_eval(const CProfile& profile, double x, Interval domain);

/// The seven structural conditions on an excitability profile.
enum class CCondition {
  NonPositive,         ///< c <= 0 on (a,b)
  ZeroAtMidpoint,      ///< c((a+b)/2) = 0
  Monotone,            ///< c' > 0 left of the midpoint, c' < 0 right of it
  FlatEnds,            ///< c'(a) = c'(b) = 0
  DecreasingInP,       ///< pointwise decreasing in p away from the midpoint
  VanishesAsPToZero,   ///< c -> 0 as p -> 0
  DivergesAsPToInfinity,
};

std::string to_string(CCondition c);

/// Conditions violated on a sampling grid of `nodes` points (empty when all hold).
/// Conditions involving p are only checked for the Well family.
std::vector<CCondition> validate_c_profile(const CProfile& profile, Interval domain,
                                           std::size_t nodes = 2001);

enum class ModelKind { OdeFhn, ToyLinear, ToyNonlinear, ConstCFhn, NhFhn };

std::string to_string(ModelKind k);
ModelKind model_kind_from_string(const std::string& s);

/// Which system is simulated and with which parameters.
struct ModelSpec {
  ModelKind kind = ModelKind::ToyNonlinear;
  double epsilon = 1.0;
  double d = 1.0;
  double alpha = 0.0;
  Interval domain{0.0, 1.0};
  std::optional<CProfile> c_profile;

  static ModelSpec toy(double alpha, bool linear = false);
  static ModelSpec ode_fhn(double c, double epsilon);
  static ModelSpec const_c_fhn(double c, double epsilon, double d, Interval domain);
  static ModelSpec nh_fhn(CProfile profile, double epsilon, double d, Interval domain);

  bool is_toy() const { return kind == ModelKind::ToyLinear || kind == ModelKind::ToyNonlinear; }
  bool is_fhn_pde() const { return kind == ModelKind::ConstCFhn || kind == ModelKind::NhFhn; }
  /// Throws DomainError when an invariant fails.
  void validate() const;
  /// c(x); requires a profile.
  double c(double x) const;
};

struct StationaryResult {
  StateField state;
  /// Profile conditions that failed (advisory, NhFhn only).
  std::vector<CCondition> warnings;
};

/// u = c(x), v = f(u) + d * Lap(u) with the simulator's discrete Laplacian.
StationaryResult stationary_solution(const ModelSpec& spec, const UniformGrid& grid);

/// Right-hand side of the diffusion-free system: ((f(u)-v)/eps, u - c).
std::array<double, 2> ode_rhs(const ModelSpec& spec, std::array<double, 2> state);

}  // namespace fhn
