#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace fhn {

/// Open interval (a, b) with a < b.
struct Interval {
  double a = 0.0;
  double b = 1.0;

  double length() const { return b - a; }
  double mid() const { return 0.5 * (a + b); }
  bool contains(double x) const { return x >= a && x <= b; }
  bool operator==(const Interval&) const = default;
};

/// Uniform node set x_i = a + i*h, i = 0..n-1, with h = (b-a)/(n-1).
class UniformGrid {
 public:
  UniformGrid(double a, double b, std::size_t n);
  UniformGrid(Interval domain, std::size_t n) : UniformGrid(domain.a, domain.b, n) {}

  /// Grid on [a,b] whose spacing is the closest achievable to `h`.
  static UniformGrid with_spacing(double a, double b, double h);

  double a() const { return a_; }
  double b() const { return b_; }
  std::size_t size() const { return n_; }
  double spacing() const { return h_; }
  Interval domain() const { return {a_, b_}; }
  double x(std::size_t i) const;
  std::vector<double> nodes() const;
  /// Index of the node closest to x (clamped to the grid).
  std::size_t nearest(double x) const;

  bool operator==(const UniformGrid& o) const { return a_ == o.a_ && b_ == o.b_ && n_ == o.n_; }

 private:
  double a_, b_;
  std::size_t n_;
  double h_;
};

/// Real samples of a function on a uniform grid.
struct GridFunction {
  UniformGrid grid;
  std::vector<double> values;

  explicit GridFunction(UniformGrid g);
  GridFunction(UniformGrid g, std::vector<double> v);

  /// Samples fn at every node.
  static GridFunction sample(const UniformGrid& g, const std::function<double(double)>& fn);

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  std::span<const double> view() const { return values; }
};

/// The pair (u, v) on a shared grid.
struct StateField {
  GridFunction u;
  GridFunction v;

  StateField(GridFunction u_, GridFunction v_);
  const UniformGrid& grid() const { return u.grid; }
};

enum class Parity { Odd, Even };

// Raw kernels used by the time steppers. `out` must not alias `f`.
// Differences are formed as (f[i-1] + f[i+1]) - 2 f[i] so that mirrored
// inputs give bitwise mirrored outputs.
void neumann_laplacian(std::span<const double> f, double h, std::span<double> out);
double trapezoid(std::span<const double> f, double h);

/// Second difference with ghost-node reflection at both ends.
GridFunction neumann_laplacian(const GridFunction& f);
/// Composite trapezoid rule over [a, b].
double quad(const GridFunction& f);
double quad_product(const GridFunction& f, const GridFunction& g);
double l2_norm(const GridFunction& f);
/// Centered differences inside, one-sided second-order stencils at the ends.
GridFunction derivative(const GridFunction& f);
double h1_seminorm(const GridFunction& f);
/// (1/h) * sum (f[i+1]-f[i])^2, which equals -quad(f * Lap f) exactly.
double dirichlet_form(std::span<const double> f, double h);
double dirichlet_form(const GridFunction& f);
/// sqrt(eps*||u||^2 + ||v||^2).
double state_norm(const StateField& s, double epsilon = 1.0);

/// x -> f(a+b-x) by index mirroring.
GridFunction reflect(const GridFunction& f);
double symmetry_defect(const GridFunction& f, Parity parity);

void write_csv(std::ostream& os, const GridFunction& f);
GridFunction read_grid_csv(std::istream& is);

}  // namespace fhn
