#include "fhn/grid.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "fhn/error.hpp"

namespace fhn {

UniformGrid::UniformGrid(double a, double b, std::size_t n) : a_(a), b_(b), n_(n) {
  if (!(a < b)) throw DomainError("grid requires a < b");
  if (n < 3) throw SizeError("grid requires at least 3 nodes");
  h_ = (b - a) / static_cast<double>(n - 1);
}

UniformGrid UniformGrid::with_spacing(double a, double b, double h) {
  if (!(h > 0)) throw DomainError("grid spacing must be positive");
  const auto intervals = static_cast<std::size_t>(std::llround((b - a) / h));
  return UniformGrid(a, b, std::max<std::size_t>(intervals, 2) + 1);
}

double UniformGrid::x(std::size_t i) const {
  if (i + 1 == n_) return b_;
  return a_ + static_cast<double>(i) * h_;
}

std::vector<double> UniformGrid::nodes() const {
  std::vector<double> xs(n_);
  for (std::size_t i = 0; i < n_; ++i) xs[i] = x(i);
  return xs;
}

std::size_t UniformGrid::nearest(double x) const {
  const double s = std::round((x - a_) / h_);
  if (s <= 0) return 0;
  return std::min(static_cast<std::size_t>(s), n_ - 1);
}

GridFunction::GridFunction(UniformGrid g) : grid(g), values(g.size(), 0.0) {}

GridFunction::GridFunction(UniformGrid g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size()) throw SizeError("grid function length does not match grid");
}

GridFunction GridFunction::sample(const UniformGrid& g, const std::function<double(double)>& fn) {
  GridFunction f(g);
  for (std::size_t i = 0; i < g.size(); ++i) f.values[i] = fn(g.x(i));
  return f;
}

StateField::StateField(GridFunction u_, GridFunction v_) : u(std::move(u_)), v(std::move(v_)) {
  if (!(u.grid == v.grid)) throw SizeError("u and v must share a grid");
}

void neumann_laplacian(std::span<const double> f, double h, std::span<double> out) {
  const std::size_t n = f.size();
  if (n < 3) throw SizeError("Neumann Laplacian requires at least 3 nodes");
  const double inv_h2 = 1.0 / (h * h);
  out[0] = 2.0 * (f[1] - f[0]) * inv_h2;
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = ((f[i - 1] + f[i + 1]) - 2.0 * f[i]) * inv_h2;
  out[n - 1] = 2.0 * (f[n - 2] - f[n - 1]) * inv_h2;
}

double trapezoid(std::span<const double> f, double h) {
  if (f.empty()) return 0.0;
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * h;
}

GridFunction neumann_laplacian(const GridFunction& f) {
  GridFunction out(f.grid);
  neumann_laplacian(f.values, f.grid.spacing(), out.values);
  return out;
}

double quad(const GridFunction& f) { return trapezoid(f.values, f.grid.spacing()); }

double quad_product(const GridFunction& f, const GridFunction& g) {
  if (f.size() != g.size()) throw SizeError("quad_product: size mismatch");
  const std::size_t n = f.size();
  double s = 0.5 * (f[0] * g[0] + f[n - 1] * g[n - 1]);
  for (std::size_t i = 1; i + 1 < n; ++i) s += f[i] * g[i];
  return s * f.grid.spacing();
}

double l2_norm(const GridFunction& f) { return std::sqrt(quad_product(f, f)); }

GridFunction derivative(const GridFunction& f) {
  const std::size_t n = f.size();
  const double h = f.grid.spacing();
  GridFunction d(f.grid);
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  return d;
}

double h1_seminorm(const GridFunction& f) { return l2_norm(derivative(f)); }

double dirichlet_form(std::span<const double> f, double h) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    const double df = f[i + 1] - f[i];
    s += df * df;
  }
  return s / h;
}

double dirichlet_form(const GridFunction& f) { return dirichlet_form(f.values, f.grid.spacing()); }

double state_norm(const StateField& s, double epsilon) {
  const double uu = quad_product(s.u, s.u);
  const double vv = quad_product(s.v, s.v);
  return std::sqrt(epsilon * uu + vv);
}

GridFunction reflect(const GridFunction& f) {
  GridFunction r(f.grid);
  std::reverse_copy(f.values.begin(), f.values.end(), r.values.begin());
  return r;
}

double symmetry_defect(const GridFunction& f, Parity parity) {
  GridFunction d(f.grid);
  const std::size_t n = f.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double m = f[n - 1 - i];
    d[i] = parity == Parity::Odd ? f[i] + m : f[i] - m;
  }
  return l2_norm(d);
}

void write_csv(std::ostream& os, const GridFunction& f) {
  os << "# fhnlab grid-function v1\n";
  os << "x,value\n";
  os.precision(17);
  for (std::size_t i = 0; i < f.size(); ++i) os << f.grid.x(i) << ',' << f[i] << '\n';
}

GridFunction read_grid_csv(std::istream& is) {
  std::vector<double> xs, vs;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (std::isalpha(static_cast<unsigned char>(line[0]))) continue;  // header row
    std::istringstream ls(line);
    double x = 0, v = 0;
    char comma = 0;
    if (!(ls >> x >> comma >> v) || comma != ',')
      throw ConfigError("malformed grid CSV row: " + line);
    xs.push_back(x);
    vs.push_back(v);
  }
  if (xs.size() < 3) throw SizeError("grid CSV needs at least 3 rows");
  UniformGrid g(xs.front(), xs.back(), xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (std::abs(xs[i] - g.x(i)) > 1e-9 * std::max(1.0, std::abs(g.x(i))))
      throw ConfigError("grid CSV nodes are not uniformly spaced");
  }
  return GridFunction(g, std::move(vs));
}

}  // namespace fhn
