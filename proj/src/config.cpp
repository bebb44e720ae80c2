#include "fhn/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "fhn/spectral.hpp"

namespace fhn {

namespace pt = boost::property_tree;

std::string to_string(IcSpec::Kind k) {
  switch (k) {
    case IcSpec::Kind::Step: return "step";
    case IcSpec::Kind::Modes: return "modes";
    case IcSpec::Kind::Stationary: return "stationary";
    case IcSpec::Kind::File: return "file";
    case IcSpec::Kind::Random: return "random";
  }
  return "unknown";
}

UniformGrid ExperimentConfig::grid() const {
  return UniformGrid::with_spacing(model.domain.a, model.domain.b, h);
}

namespace {

const std::map<std::string, std::set<std::string>> kSchema = {
    {"model", {"kind", "epsilon", "d", "alpha", "a", "b", "c_profile", "c", "p"}},
    {"sim",
     {"h", "dt", "t_end", "record_every", "diagnostic_every", "backend", "galerkin_order", "safety",
      "probes"}},
    {"ic",
     {"kind", "left", "right", "modes", "bump_amplitude", "bump_center", "bump_width", "path", "seed",
      "max_mode", "u0", "v0"}},
    {"output", {"dir", "snapshots", "diagnostics"}},
    {"spectrum", {"n_modes"}},
    {"bifurcate", {"parameter", "lo", "hi", "samples", "k_max", "find_p_star", "p_lo", "p_hi"}},
};

std::string fmt(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

double to_double(const std::string& key, const std::string& s) {
  double x = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size() || !std::isfinite(x))
    throw ConfigError("key '" + key + "': expected a number, got '" + s + "'");
  return x;
}

std::uint64_t to_uint(const std::string& key, const std::string& s) {
  std::uint64_t x = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw ConfigError("key '" + key + "': expected a non-negative integer, got '" + s + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ConfigError("key '" + key + "': expected true or false, got '" + s + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) {
    const auto b = cur.find_first_not_of(" \t");
    const auto e = cur.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
  }
  return out;
}

class Section {
 public:
  Section(const pt::ptree* tree, std::string name) : tree_(tree), name_(std::move(name)) {}

  std::optional<std::string> raw(const std::string& key) const {
    if (!tree_) return std::nullopt;
    if (auto v = tree_->get_optional<std::string>(key)) return *v;
    return std::nullopt;
  }
  std::string full(const std::string& key) const { return name_ + "." + key; }

  void num(const std::string& key, double& out) const {
    if (auto v = raw(key)) out = to_double(full(key), *v);
  }
  template <class T>
  void count(const std::string& key, T& out) const {
    if (auto v = raw(key)) out = static_cast<T>(to_uint(full(key), *v));
  }
  void flag(const std::string& key, bool& out) const {
    if (auto v = raw(key)) out = to_bool(full(key), *v);
  }
  void text(const std::string& key, std::string& out) const {
    if (auto v = raw(key)) out = *v;
  }

 private:
  const pt::ptree* tree_;
  std::string name_;
};

}  // namespace

ExperimentConfig parse_config(std::istream& is) {
  pt::ptree tree;
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.message());
  }
  for (const auto& [name, sec] : tree) {
    const auto it = kSchema.find(name);
    if (it == kSchema.end()) {
      if (sec.empty()) throw ConfigError("key '" + name + "' outside any section");
      throw ConfigError("unknown section [" + name + "]");
    }
    for (const auto& [key, val] : sec)
      if (!it->second.count(key)) throw ConfigError("unknown key '" + name + "." + key + "'");
  }
  auto section = [&](const std::string& name) {
    const auto child = tree.get_child_optional(name);
    return Section(child ? &*child : nullptr, name);
  };

  ExperimentConfig c;
  {
    const auto s = section("model");
    std::string kind = "toy";
    s.text("kind", kind);
    try {
      c.model.kind = model_kind_from_string(kind);
    } catch (const Error& e) {
      throw ConfigError(std::string("model.kind: ") + e.what());
    }
    s.num("epsilon", c.model.epsilon);
    s.num("d", c.model.d);
    s.num("alpha", c.model.alpha);
    s.num("a", c.model.domain.a);
    s.num("b", c.model.domain.b);
    std::string profile = "none";
    s.text("c_profile", profile);
    double cval = 0.0, p = 1.0;
    s.num("c", cval);
    s.num("p", p);
    if (profile == "constant") {
      c.model.c_profile = CProfile::constant(cval);
    } else if (profile == "well") {
      try {
        c.model.c_profile = CProfile::well(p);
      } catch (const Error& e) {
        throw ConfigError(std::string("model.p: ") + e.what());
      }
    } else if (profile != "none") {
      throw ConfigError("model.c_profile must be none, constant or well");
    }
    try {
      c.model.validate();
    } catch (const DomainError& e) {
      throw ConfigError(std::string("model: ") + e.what());
    }
  }
  {
    const auto s = section("sim");
    s.num("h", c.h);
    s.num("dt", c.sim.dt);
    s.num("t_end", c.sim.t_end);
    s.count("record_every", c.sim.record_every);
    s.count("diagnostic_every", c.sim.diagnostic_every);
    std::string backend = "fd";
    s.text("backend", backend);
    if (backend == "fd") c.sim.backend = Backend::FiniteDifference;
    else if (backend == "galerkin") c.sim.backend = Backend::Galerkin;
    else throw ConfigError("sim.backend must be fd or galerkin");
    s.count("galerkin_order", c.sim.galerkin_order);
    s.num("safety", c.sim.safety);
    if (auto v = s.raw("probes"))
      for (const auto& item : split(*v, ',')) c.sim.probes.push_back(to_double("sim.probes", item));
    if (!(c.h > 0)) throw ConfigError("sim.h must be positive");
    c.sim.validate();
  }
  {
    const auto s = section("ic");
    std::string kind = "step";
    s.text("kind", kind);
    if (kind == "step") c.ic.kind = IcSpec::Kind::Step;
    else if (kind == "modes") c.ic.kind = IcSpec::Kind::Modes;
    else if (kind == "stationary") c.ic.kind = IcSpec::Kind::Stationary;
    else if (kind == "file") c.ic.kind = IcSpec::Kind::File;
    else if (kind == "random") c.ic.kind = IcSpec::Kind::Random;
    else throw ConfigError("ic.kind must be step, modes, stationary, file or random");
    s.num("left", c.ic.left);
    s.num("right", c.ic.right);
    if (auto v = s.raw("modes")) {
      for (const auto& item : split(*v, ';')) {
        const auto parts = split(item, ':');
        if (parts.size() != 3) throw ConfigError("ic.modes entries must read k:u:v");
        c.ic.modes.push_back({static_cast<std::size_t>(to_uint("ic.modes", parts[0])),
                              to_double("ic.modes", parts[1]), to_double("ic.modes", parts[2])});
      }
    }
    s.num("bump_amplitude", c.ic.bump_amplitude);
    s.num("bump_center", c.ic.bump_center);
    s.num("bump_width", c.ic.bump_width);
    s.text("path", c.ic.path);
    s.count("seed", c.ic.seed);
    s.count("max_mode", c.ic.max_mode);
    s.num("u0", c.ode_u0);
    s.num("v0", c.ode_v0);
    if (c.ic.kind == IcSpec::Kind::File && c.ic.path.empty()) throw ConfigError("ic.path is required for kind = file");
    if (!(c.ic.bump_width > 0)) throw ConfigError("ic.bump_width must be positive");
  }
  {
    const auto s = section("output");
    s.text("dir", c.output.dir);
    s.flag("snapshots", c.output.snapshots);
    s.flag("diagnostics", c.output.diagnostics);
  }
  section("spectrum").count("n_modes", c.spectrum.n_modes);
  {
    const auto s = section("bifurcate");
    s.text("parameter", c.bifurcate.parameter);
    if (c.bifurcate.parameter != "alpha" && c.bifurcate.parameter != "p")
      throw ConfigError("bifurcate.parameter must be alpha or p");
    s.num("lo", c.bifurcate.lo);
    s.num("hi", c.bifurcate.hi);
    s.count("samples", c.bifurcate.samples);
    s.count("k_max", c.bifurcate.k_max);
    s.flag("find_p_star", c.bifurcate.find_p_star);
    s.num("p_lo", c.bifurcate.p_lo);
    s.num("p_hi", c.bifurcate.p_hi);
    if (c.bifurcate.samples == 0) throw ConfigError("bifurcate.samples must be at least 1");
    if (c.bifurcate.hi < c.bifurcate.lo) throw ConfigError("bifurcate.hi must not be below lo");
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(is);
}

std::string serialize_config(const ExperimentConfig& c) {
  pt::ptree tree;
  auto& m = tree.put_child("model", {});
  m.put("kind", to_string(c.model.kind));
  m.put("epsilon", fmt(c.model.epsilon));
  m.put("d", fmt(c.model.d));
  m.put("alpha", fmt(c.model.alpha));
  m.put("a", fmt(c.model.domain.a));
  m.put("b", fmt(c.model.domain.b));
  if (!c.model.c_profile) {
    m.put("c_profile", "none");
  } else if (const auto* k = std::get_if<CProfile::Constant>(&c.model.c_profile->variant())) {
    m.put("c_profile", "constant");
    m.put("c", fmt(k->c));
  } else if (const auto* w = std::get_if<CProfile::Well>(&c.model.c_profile->variant())) {
    m.put("c_profile", "well");
    m.put("p", fmt(w->p));
  } else {
    throw ConfigError("tabulated profiles cannot be written to a config file");
  }

  auto& s = tree.put_child("sim", {});
  s.put("h", fmt(c.h));
  s.put("dt", fmt(c.sim.dt));
  s.put("t_end", fmt(c.sim.t_end));
  s.put("record_every", c.sim.record_every);
  s.put("diagnostic_every", c.sim.diagnostic_every);
  s.put("backend", c.sim.backend == Backend::Galerkin ? "galerkin" : "fd");
  s.put("galerkin_order", c.sim.galerkin_order);
  s.put("safety", fmt(c.sim.safety));
  if (!c.sim.probes.empty()) {
    std::string list;
    for (std::size_t i = 0; i < c.sim.probes.size(); ++i) list += (i ? "," : "") + fmt(c.sim.probes[i]);
    s.put("probes", list);
  }

  auto& ic = tree.put_child("ic", {});
  ic.put("kind", to_string(c.ic.kind));
  ic.put("left", fmt(c.ic.left));
  ic.put("right", fmt(c.ic.right));
  if (!c.ic.modes.empty()) {
    std::string list;
    for (std::size_t i = 0; i < c.ic.modes.size(); ++i)
      list += (i ? ";" : "") + std::to_string(c.ic.modes[i].k) + ":" + fmt(c.ic.modes[i].u) + ":" +
              fmt(c.ic.modes[i].v);
    ic.put("modes", list);
  }
  ic.put("bump_amplitude", fmt(c.ic.bump_amplitude));
  ic.put("bump_center", fmt(c.ic.bump_center));
  ic.put("bump_width", fmt(c.ic.bump_width));
  if (!c.ic.path.empty()) ic.put("path", c.ic.path);
  ic.put("seed", c.ic.seed);
  ic.put("max_mode", c.ic.max_mode);
  ic.put("u0", fmt(c.ode_u0));
  ic.put("v0", fmt(c.ode_v0));

  auto& o = tree.put_child("output", {});
  o.put("dir", c.output.dir);
  o.put("snapshots", c.output.snapshots ? "true" : "false");
  o.put("diagnostics", c.output.diagnostics ? "true" : "false");

  tree.put_child("spectrum", {}).put("n_modes", c.spectrum.n_modes);

  auto& b = tree.put_child("bifurcate", {});
  b.put("parameter", c.bifurcate.parameter);
  b.put("lo", fmt(c.bifurcate.lo));
  b.put("hi", fmt(c.bifurcate.hi));
  b.put("samples", c.bifurcate.samples);
  b.put("k_max", c.bifurcate.k_max);
  b.put("find_p_star", c.bifurcate.find_p_star ? "true" : "false");
  b.put("p_lo", fmt(c.bifurcate.p_lo));
  b.put("p_hi", fmt(c.bifurcate.p_hi));

  std::ostringstream os;
  pt::write_ini(os, tree);
  return os.str();
}

StateField step_ic(const UniformGrid& grid, double left, double right) {
  const std::size_t n = grid.size();
  GridFunction u(grid);
  // Built by index so that left = -right gives an exactly odd profile.
  for (std::size_t i = 0; i < n; ++i) {
    if (2 * i + 1 < n) u[i] = left;
    else if (2 * i + 1 > n) u[i] = right;
    else u[i] = 0.5 * (left + right);
  }
  return StateField(u, u);
}

StateField modes_ic(const UniformGrid& grid, const std::vector<ModeAmplitude>& modes) {
  GridFunction u(grid), v(grid);
  for (const auto& m : modes)
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double phi = basis_eval(m.k, grid.x(i), grid.domain());
      u[i] += m.u * phi;
      v[i] += m.v * phi;
    }
  return StateField(std::move(u), std::move(v));
}

StateField random_ic(const UniformGrid& grid, std::uint64_t seed, std::size_t max_mode) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<ModeAmplitude> modes;
  for (std::size_t k = 0; k <= max_mode; ++k) {
    const double u = dist(rng) / (1.0 + k);
    const double v = dist(rng) / (1.0 + k);
    modes.push_back({k, u, v});
  }
  return modes_ic(grid, modes);
}

namespace {

StateField file_ic(const UniformGrid& grid, const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open initial-condition file '" + path + "'");
  std::vector<double> xs, us, vs;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("x,", 0) == 0) continue;
    const auto parts = split(line, ',');
    if (parts.size() != 3) throw ConfigError("initial-condition rows must read x,u,v");
    xs.push_back(to_double("ic.path", parts[0]));
    us.push_back(to_double("ic.path", parts[1]));
    vs.push_back(to_double("ic.path", parts[2]));
  }
  if (xs.size() != grid.size()) throw ConfigError("initial-condition file does not match the grid size");
  const double tol = 1e-9 * grid.domain().length();
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (std::abs(xs[i] - grid.x(i)) > tol) throw ConfigError("initial-condition nodes do not match the grid");
  return StateField(GridFunction(grid, us), GridFunction(grid, vs));
}

}  // namespace

StateField build_ic(const ExperimentConfig& c, const UniformGrid& grid) {
  switch (c.ic.kind) {
    case IcSpec::Kind::Step: return step_ic(grid, c.ic.left, c.ic.right);
    case IcSpec::Kind::Modes: return modes_ic(grid, c.ic.modes);
    case IcSpec::Kind::Random: return random_ic(grid, c.ic.seed, c.ic.max_mode);
    case IcSpec::Kind::File: return file_ic(grid, c.ic.path);
    case IcSpec::Kind::Stationary: {
      if (!c.model.is_fhn_pde()) throw ConfigError("ic.kind = stationary needs an FHN reaction-diffusion model");
      auto st = stationary_solution(c.model, grid).state;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double z = (grid.x(i) - c.ic.bump_center) / c.ic.bump_width;
        st.u[i] += c.ic.bump_amplitude * std::exp(-z * z);
      }
      return st;
    }
  }
  throw ConfigError("unsupported initial condition");
}

}  // namespace fhn
