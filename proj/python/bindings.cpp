#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fhn/config.hpp"
#include "fhn/experiments.hpp"
#include "fhn/sim.hpp"
#include "fhn/spectral.hpp"
#include "fhn/stability.hpp"
#include "fhn/sturm.hpp"
#include "fhn/verify.hpp"

namespace py = pybind11;
using namespace fhn;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vec(const Array& a) {
  if (a.ndim() != 1) throw py::value_error("expected a 1-d array");
  return {a.data(), a.data() + a.size()};
}

py::array_t<double> to_array(const std::vector<double>& v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::dict checks_dict(const std::string& key, const std::string& name, bool pass,
                     const std::vector<Check>& checks) {
  py::list l;
  for (const auto& c : checks) {
    py::dict d;
    d["name"] = c.name;
    d["value"] = c.value;
    d["relation"] = c.relation;
    d["threshold"] = c.threshold;
    d["pass"] = c.pass;
    l.append(d);
  }
  py::dict out;
  out[key.c_str()] = name;
  out["pass"] = pass;
  out["checks"] = l;
  return out;
}

ModelSpec toy_spec(double alpha, bool linear) { return ModelSpec::toy(alpha, linear); }

py::dict simulate_py(const ModelSpec& spec, const Array& u0, const Array& v0, double dt, double t_end,
                     std::size_t record_every, std::size_t diagnostic_every, const std::string& backend,
                     std::size_t galerkin_order) {
  const auto u = to_vec(u0), v = to_vec(v0);
  if (u.size() != v.size()) throw py::value_error("u0 and v0 differ in length");
  const UniformGrid grid(spec.domain, u.size());
  SimConfig cfg;
  cfg.dt = dt;
  cfg.t_end = t_end;
  cfg.record_every = record_every;
  cfg.diagnostic_every = diagnostic_every;
  if (backend == "galerkin") cfg.backend = Backend::Galerkin;
  else if (backend != "fd") throw py::value_error("backend must be 'fd' or 'galerkin'");
  cfg.galerkin_order = galerkin_order;
  Trajectory traj;
  {
    py::gil_scoped_release release;
    traj = simulate(spec, StateField(GridFunction(grid, u), GridFunction(grid, v)), cfg);
  }
  const auto m = static_cast<py::ssize_t>(traj.snapshots.size());
  const auto n = static_cast<py::ssize_t>(grid.size());
  py::array_t<double> us({m, n}), vs({m, n});
  auto U = us.mutable_unchecked<2>();
  auto V = vs.mutable_unchecked<2>();
  for (py::ssize_t s = 0; s < m; ++s)
    for (py::ssize_t i = 0; i < n; ++i) {
      U(s, i) = traj.snapshots[s].u[i];
      V(s, i) = traj.snapshots[s].v[i];
    }
  std::vector<double> dt_, norm, energy, std_u, mean_u;
  for (const auto& d : traj.diagnostics) {
    dt_.push_back(d.t);
    norm.push_back(d.norm);
    energy.push_back(d.energy);
    std_u.push_back(d.std_u);
    mean_u.push_back(d.mean_u);
  }
  const auto e = energy_trace(traj);
  py::dict out;
  out["x"] = to_array(grid.nodes());
  out["t"] = to_array(traj.times);
  out["u"] = us;
  out["v"] = vs;
  out["diag_t"] = to_array(dt_);
  out["norm"] = to_array(norm);
  out["energy"] = to_array(energy);
  out["energy_residual"] = to_array(e.residual);
  out["std_u"] = to_array(std_u);
  out["mean_u"] = to_array(mean_u);
  return out;
}

}  // namespace

PYBIND11_MODULE(_fhnlab, m) {
  m.doc() = "FitzHugh-Nagumo reaction-diffusion toolkit";

  py::register_exception<Error>(m, "FhnError", PyExc_RuntimeError);

  py::class_<Interval>(m, "Interval")
      .def(py::init<double, double>(), py::arg("a"), py::arg("b"))
      .def_readwrite("a", &Interval::a)
      .def_readwrite("b", &Interval::b);
  py::implicitly_convertible<py::tuple, Interval>();

  m.def("cubic_f", &cubic_f, py::arg("u"));
  m.def("cubic_f_prime", &cubic_f_prime, py::arg("u"));
  m.def("basis_eval", &basis_eval, py::arg("k"), py::arg("x"), py::arg("domain") = Interval{0.0, 1.0});
  m.def("cosine_eigenvalue", &cosine_eigenvalue, py::arg("k"), py::arg("domain") = Interval{0.0, 1.0},
        py::arg("d") = 1.0);
  m.def("triple_product", &triple_product, py::arg("k"), py::arg("m"), py::arg("n"));
  m.def("quad_product_nonzero", &quad_product_nonzero);
  m.def("mode_product_quadrature", [](std::vector<std::size_t> modes, std::size_t nodes) {
    return mode_product_quadrature(modes, nodes);
  }, py::arg("modes"), py::arg("nodes") = 4001);


  py::class_<ModelSpec>(m, "ModelSpec")
      .def_static("toy", &toy_spec, py::arg("alpha"), py::arg("linear") = false)
      .def_static("nh_fhn_well", [](double p, double eps, double d, double a, double b) {
        return ModelSpec::nh_fhn(CProfile::well(p), eps, d, {a, b});
      }, py::arg("p"), py::arg("epsilon") = 0.1, py::arg("d") = 1.0, py::arg("a") = -50.0, py::arg("b") = 50.0)
      .def_static("const_c_fhn", [](double c, double eps, double d, double a, double b) {
        return ModelSpec::const_c_fhn(c, eps, d, {a, b});
      }, py::arg("c"), py::arg("epsilon"), py::arg("d") = 1.0, py::arg("a") = 0.0, py::arg("b") = 1.0)
      .def_readonly("epsilon", &ModelSpec::epsilon)
      .def_readonly("d", &ModelSpec::d)
      .def_readonly("alpha", &ModelSpec::alpha)
      .def_property_readonly("kind", [](const ModelSpec& s) { return to_string(s.kind); });

  m.def("mode_eigenvalues", [](double mu, double eps) {
    const auto me = mode_eigenvalues(mu, eps);
    return py::make_tuple(me.sigma1, me.sigma2);
  }, py::arg("mu"), py::arg("epsilon") = 1.0);
  m.def("classify_mode", [](double mu, double eps) { return to_string(classify_mode(mode_eigenvalues(mu, eps))); },
        py::arg("mu"), py::arg("epsilon") = 1.0);
  m.def("hopf_cascade_toy", [](double lo, double hi, std::size_t k_max) { return hopf_cascade_toy(lo, hi, k_max); },
        py::arg("lo"), py::arg("hi"), py::arg("k_max") = 10);
  m.def("toy_unstable_count", [](double alpha, std::size_t k_max) { return toy_unstable_count(alpha, k_max); },
        py::arg("alpha"), py::arg("k_max") = 10);

  m.def("sl_eigenvalues", [](const Array& potential, double a, double b, double d, std::size_t n_modes) {
    const auto q = to_vec(potential);
    const SlProblem problem(GridFunction(UniformGrid(a, b, q.size()), q), d);
    std::vector<double> out;
    py::gil_scoped_release release;
    for (std::size_t k = 0; k < n_modes; ++k) out.push_back(sl_eigenvalue(problem, k));
    return out;
  }, py::arg("potential"), py::arg("a"), py::arg("b"), py::arg("d") = 1.0, py::arg("n_modes") = 10,
     "Neumann eigenvalues of -d phi'' - q phi on (a, b) for q sampled on a uniform grid.");
  m.def("well_lambda0", [](double p, double a, double b, std::size_t nodes, double d) {
    return WellFamily{UniformGrid(a, b, nodes), d}.lambda0(p);
  }, py::arg("p"), py::arg("a") = -50.0, py::arg("b") = 50.0, py::arg("nodes") = 2001, py::arg("d") = 1.0);

  m.def("simulate", &simulate_py, py::arg("spec"), py::arg("u0"), py::arg("v0"), py::arg("dt"),
        py::arg("t_end"), py::arg("record_every") = 1000, py::arg("diagnostic_every") = 0,
        py::arg("backend") = "fd", py::arg("galerkin_order") = 32);
  m.def("step_ic", [](std::size_t n, double left, double right) {
    const auto s = step_ic(UniformGrid(0.0, 1.0, n), left, right);
    return py::make_tuple(to_array(s.u.values), to_array(s.v.values));
  }, py::arg("n"), py::arg("left"), py::arg("right"));

  m.def("parse_config", [](const std::string& text) {
    std::istringstream is(text);
    return serialize_config(parse_config(is));
  }, "Parses config text and returns its canonical form.");
  m.def("preset_names", &preset_names);
  m.def("reproduce", [](const std::string& name, bool fast) {
    Verdict v;
    {
      py::gil_scoped_release release;
      v = reproduce(name, PresetOptions{fast, false});
    }
    return checks_dict("preset", v.preset, v.pass, v.checks);
  }, py::arg("preset"), py::arg("fast") = false);
  m.def("verify", [](const std::string& suite) {
    SuiteReport r;
    {
      py::gil_scoped_release release;
      r = run_suite(suite);
    }
    return checks_dict("suite", r.suite, r.pass, r.checks);
  }, py::arg("suite"));
}
