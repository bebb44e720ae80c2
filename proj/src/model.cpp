#include "fhn/model.hpp"

#include <algorithm>
#include <cmath>

#include "fhn/error.hpp"

namespace fhn {

namespace {

double well_shape(double x, Interval domain) {
  const double xh = (x - domain.mid()) / (0.5 * domain.length());
  const double xh2 = xh * xh;
  return xh2 * xh2 - 2.0 * xh2;
}

double interpolate(const GridFunction& f, double x) {
  const auto& g = f.grid;
  const double s = (x - g.a()) / g.spacing();
  if (s <= 0) return f[0];
  const auto i = static_cast<std::size_t>(s);
  if (i + 1 >= g.size()) return f[g.size() - 1];
  const double w = s - static_cast<double>(i);
  return (1.0 - w) * f[i] + w * f[i + 1];
}

}  // namespace

CProfile CProfile::well(double p) {
  if (!(p > 0)) throw DomainError("Well profile requires p > 0");
  return CProfile(Well{p});
}

double CProfile::operator()(double x, Interval domain) const {
  const double slack = 1e-12 * domain.length();
  if (x < domain.a - slack || x > domain.b + slack)
    throw DomainError("c(x) evaluated outside the domain");
  x = std::clamp(x, domain.a, domain.b);
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return v.c;
        } else if constexpr (std::is_same_v<T, Well>) {
          return v.p * well_shape(x, domain);
        } else {
          return interpolate(v.samples, x);
        }
      },
      v_);
}

CProfile CProfile::with_p(double p) const {
  if (!is_well()) throw DomainError("with_p applies to the Well family only");
  return well(p);
}

double c_eval(const CProfile& profile, double x, Interval domain) { return profile(x, domain); }

std::string to_string(CCondition c) {
  switch (c) {
    case CCondition::NonPositive: return "non_positive";
    case CCondition::ZeroAtMidpoint: return "zero_at_midpoint";
    case CCondition::Monotone: return "monotone";
    case CCondition::FlatEnds: return "flat_ends";
    case CCondition::DecreasingInP: return "decreasing_in_p";
    case CCondition::VanishesAsPToZero: return "vanishes_as_p_to_zero";
    case CCondition::DivergesAsPToInfinity: return "diverges_as_p_to_infinity";
  }
  return "unknown";
}

std::vector<CCondition> validate_c_profile(const CProfile& profile, Interval domain,
                                           std::size_t nodes) {
  const UniformGrid grid(domain, nodes);
  const auto c = GridFunction::sample(grid, [&](double x) { return profile(x, domain); });
  const double h = grid.spacing();
  const double mid = domain.mid();
  const std::size_t n = grid.size();

  double scale = 1.0;
  for (double v : c.values) scale = std::max(scale, std::abs(v));
  const double value_tol = 1e-12 * scale;

  std::vector<CCondition> violated;

  if (std::any_of(c.values.begin(), c.values.end(), [&](double v) { return v > value_tol; }))
    violated.push_back(CCondition::NonPositive);

  if (std::abs(profile(mid, domain)) > value_tol) violated.push_back(CCondition::ZeroAtMidpoint);

  const GridFunction dc = derivative(c);
  bool monotone = true;
  double max_slope = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    max_slope = std::max(max_slope, std::abs(dc[i]));
    const double x = grid.x(i);
    if (std::abs(x - mid) < 0.5 * h) continue;
    if (x < mid && !(dc[i] > 0)) monotone = false;
    if (x > mid && !(dc[i] < 0)) monotone = false;
  }
  if (!monotone) violated.push_back(CCondition::Monotone);

  const double slope_tol = max_slope > 0 ? 1e-3 * max_slope : 1e-9;
  if (std::abs(dc[0]) > slope_tol || std::abs(dc[n - 1]) > slope_tol)
    violated.push_back(CCondition::FlatEnds);

  if (const auto* w = std::get_if<CProfile::Well>(&profile.variant())) {
    const auto away_from_mid = [&](std::size_t i) { return std::abs(grid.x(i) - mid) >= 0.5 * h; };
    const CProfile steeper = CProfile::well(w->p * 1.01);
    const CProfile tiny = CProfile::well(1e-12);
    const CProfile huge = CProfile::well(1e12);
    bool decreasing = true, vanishes = true, diverges = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (!away_from_mid(i)) continue;
      const double x = grid.x(i);
      if (!(steeper(x, domain) < c[i])) decreasing = false;
      if (std::abs(tiny(x, domain)) > 1e-9) vanishes = false;
      if (!(huge(x, domain) < -1.0)) diverges = false;
    }
    if (!decreasing) violated.push_back(CCondition::DecreasingInP);
    if (!vanishes) violated.push_back(CCondition::VanishesAsPToZero);
    if (!diverges) violated.push_back(CCondition::DivergesAsPToInfinity);
  }
  return violated;
}

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::OdeFhn: return "ode_fhn";
    case ModelKind::ToyLinear: return "toy_linear";
    case ModelKind::ToyNonlinear: return "toy";
    case ModelKind::ConstCFhn: return "const_c_fhn";
    case ModelKind::NhFhn: return "nh_fhn";
  }
  return "unknown";
}

ModelKind model_kind_from_string(const std::string& s) {
  for (auto k : {ModelKind::OdeFhn, ModelKind::ToyLinear, ModelKind::ToyNonlinear,
                 ModelKind::ConstCFhn, ModelKind::NhFhn}) {
    if (to_string(k) == s) return k;
  }
  throw ConfigError("unknown model kind '" + s + "'");
}

ModelSpec ModelSpec::toy(double alpha, bool linear) {
  ModelSpec s;
  s.kind = linear ? ModelKind::ToyLinear : ModelKind::ToyNonlinear;
  s.alpha = alpha;
  return s;
}

ModelSpec ModelSpec::ode_fhn(double c, double epsilon) {
  ModelSpec s;
  s.kind = ModelKind::OdeFhn;
  s.epsilon = epsilon;
  s.c_profile = CProfile::constant(c);
  s.validate();
  return s;
}

ModelSpec ModelSpec::const_c_fhn(double c, double epsilon, double d, Interval domain) {
  ModelSpec s;
  s.kind = ModelKind::ConstCFhn;
  s.epsilon = epsilon;
  s.d = d;
  s.domain = domain;
  s.c_profile = CProfile::constant(c);
  s.validate();
  return s;
}

ModelSpec ModelSpec::nh_fhn(CProfile profile, double epsilon, double d, Interval domain) {
  ModelSpec s;
  s.kind = ModelKind::NhFhn;
  s.epsilon = epsilon;
  s.d = d;
  s.domain = domain;
  s.c_profile = std::move(profile);
  s.validate();
  return s;
}

void ModelSpec::validate() const {
  if (!(epsilon > 0)) throw DomainError("epsilon must be positive");
  if (!(d > 0)) throw DomainError("diffusion coefficient d must be positive");
  if (!(domain.a < domain.b)) throw DomainError("domain requires a < b");
  if (kind == ModelKind::OdeFhn || is_fhn_pde()) {
    if (!c_profile) throw DomainError(to_string(kind) + " requires a c profile");
    if ((kind == ModelKind::OdeFhn || kind == ModelKind::ConstCFhn) && !c_profile->is_constant())
      throw DomainError(to_string(kind) + " requires a constant c");
  }
}

double ModelSpec::c(double x) const {
  if (!c_profile) throw DomainError("model has no c profile");
  return (*c_profile)(x, domain);
}

StationaryResult stationary_solution(const ModelSpec& spec, const UniformGrid& grid) {
  if (!spec.is_fhn_pde()) throw DomainError("stationary_solution requires an FHN reaction-diffusion model");
  spec.validate();
  if (!(grid.domain() == spec.domain)) throw DomainError("grid does not cover the model domain");

  GridFunction u = GridFunction::sample(grid, [&](double x) { return spec.c(x); });
  GridFunction v = neumann_laplacian(u);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = cubic_f(u[i]) + spec.d * v[i];

  std::vector<CCondition> warnings;
  if (spec.kind == ModelKind::NhFhn) warnings = validate_c_profile(*spec.c_profile, spec.domain);
  return {StateField(std::move(u), std::move(v)), std::move(warnings)};
}

std::array<double, 2> ode_rhs(const ModelSpec& spec, std::array<double, 2> state) {
  if (spec.kind != ModelKind::OdeFhn) throw DomainError("ode_rhs requires an OdeFhn model");
  const double c = spec.c(spec.domain.a);
  const auto [u, v] = state;
  return {(cubic_f(u) - v) / spec.epsilon, u - c};
}

}  // namespace fhn
