#include "fhn/spectral.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <ostream>

#include "fhn/error.hpp"

namespace fhn {

using std::numbers::pi;

CosineBasis::CosineBasis(Interval domain, double d) : domain_(domain), d_(d) {
  if (!(domain.a < domain.b)) throw DomainError("basis domain requires a < b");
  if (!(d > 0)) throw DomainError("diffusion must be positive");
}

double CosineBasis::operator()(std::size_t k, double x) const { return basis_eval(k, x, domain_); }

double CosineBasis::eigenvalue(std::size_t k) const { return cosine_eigenvalue(k, domain_, d_); }

double basis_eval(std::size_t k, double x, Interval domain) {
  const double len = domain.length();
  if (k == 0) return 1.0 / std::sqrt(len);
  return std::sqrt(2.0 / len) * std::cos(static_cast<double>(k) * pi * (x - domain.a) / len);
}

double cosine_eigenvalue(std::size_t k, Interval domain, double d) {
  const double kk = static_cast<double>(k);
  const double len = domain.length();
  return d * kk * kk * pi * pi / (len * len);
}

SpectralState::SpectralState(std::vector<double> u_, std::vector<double> v_)
    : u(std::move(u_)), v(std::move(v_)) {
  if (u.empty() || u.size() != v.size()) throw SizeError("spectral state needs equal, non-empty u and v");
}

ModalTransform::ModalTransform(const UniformGrid& grid, std::size_t order)
    : grid_(grid), order_(order) {
  const std::size_t n = grid.size();
  if (order + 1 >= n) throw ResolutionError("mode order must be below n-1 for this grid");
  const double h = grid.spacing();
  table_.resize((order + 1) * n);
  weighted_.resize((order + 1) * n);
  for (std::size_t k = 0; k <= order; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const double phi = basis_eval(k, grid.x(i), grid.domain());
      const double w = (i == 0 || i + 1 == n) ? 0.5 * h : h;
      table_[k * n + i] = phi;
      weighted_[k * n + i] = phi * w;
    }
  }
}

void ModalTransform::analyze(std::span<const double> f, std::span<double> coeffs) const {
  const std::size_t n = grid_.size();
  for (std::size_t k = 0; k <= order_; ++k) {
    const double* row = &weighted_[k * n];
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += row[i] * f[i];
    coeffs[k] = s;
  }
}

void ModalTransform::synthesize(std::span<const double> coeffs, std::span<double> f) const {
  const std::size_t n = grid_.size();
  std::fill(f.begin(), f.end(), 0.0);
  const std::size_t modes = std::min(coeffs.size(), order_ + 1);
  for (std::size_t k = 0; k < modes; ++k) {
    const double c = coeffs[k];
    if (c == 0.0) continue;
    const double* row = &table_[k * n];
    for (std::size_t i = 0; i < n; ++i) f[i] += c * row[i];
  }
}

std::vector<double> ModalTransform::analyze(const GridFunction& f) const {
  if (!(f.grid == grid_)) throw SizeError("grid function does not match the transform grid");
  std::vector<double> c(order_ + 1);
  analyze(f.values, c);
  return c;
}

GridFunction ModalTransform::synthesize(std::span<const double> coeffs) const {
  GridFunction f(grid_);
  synthesize(coeffs, f.values);
  return f;
}

std::vector<double> analyze(const GridFunction& f, std::size_t order) {
  return ModalTransform(f.grid, order).analyze(f);
}

GridFunction synthesize(std::span<const double> coeffs, const UniformGrid& grid) {
  if (coeffs.empty()) return GridFunction(grid);
  return ModalTransform(grid, coeffs.size() - 1).synthesize(coeffs);
}

double mode_product_quadrature(std::span<const std::size_t> modes, std::size_t nodes) {
  const UniformGrid grid(0.0, 1.0, nodes);
  GridFunction f(grid);
  for (std::size_t i = 0; i < nodes; ++i) {
    double p = 1.0;
    for (auto k : modes) p *= basis_eval(k, grid.x(i));
    f[i] = p;
  }
  return quad(f);
}

double triple_product(std::size_t k, std::size_t m, std::size_t n) {
  const std::array<std::size_t, 3> idx{k, m, n};
  if (k == 0 || m == 0 || n == 0) return mode_product_quadrature(idx);
  const int rules = int(k + m == n) + int(k + n == m) + int(m + n == k);
  if (rules == 0) return 0.0;
  if (rules == 1) return std::numbers::sqrt2 / 2.0;
  return mode_product_quadrature(idx);
}

bool quad_product_nonzero(std::size_t k, std::size_t l, std::size_t m, std::size_t n) {
  return k + l + m == n || k + l + n == m || k + m + n == l || l + m + n == k ||
         k + l == m + n || k + n == l + m || k + m == n + l;
}

double quad_product_value(std::size_t k, std::size_t l, std::size_t m, std::size_t n) {
  const std::array<std::size_t, 4> idx{k, l, m, n};
  return mode_product_quadrature(idx);
}

ToyGalerkin::ToyGalerkin(std::size_t order, double alpha, bool linear, Interval domain, double d,
                         std::size_t dealias_nodes)
    : order_(order),
      alpha_(alpha),
      linear_(linear),
      basis_(domain, d),
      transform_(
          [&] {
            if (order < 1) throw DomainError("Galerkin truncation needs N >= 1");
            const std::size_t n = dealias_nodes == 0 ? 4 * order + 1 : dealias_nodes;
            if (n < 4 * order)
              throw ResolutionError("dealiasing grid needs at least 4N points");
            return UniformGrid(domain, n);
          }(),
          order),
      lambda_(order + 1),
      field_(transform_.grid().size()),
      coeff_(order + 1) {
  for (std::size_t k = 0; k <= order; ++k) lambda_[k] = basis_.eigenvalue(k);
}

std::vector<double> ToyGalerkin::cubic_projection(std::span<const double> u_coeffs) const {
  std::vector<double> field(transform_.grid().size());
  transform_.synthesize(u_coeffs, field);
  for (double& f : field) f = f * f * f;
  std::vector<double> out(order_ + 1);
  transform_.analyze(field, out);
  return out;
}

void ToyGalerkin::operator()(std::span<const double> y, std::span<double> dy) const {
  const std::size_t m = order_ + 1;
  const auto u = y.subspan(0, m);
  const auto v = y.subspan(m, m);
  if (!linear_) {
    transform_.synthesize(u, field_);
    for (double& f : field_) f = f * f * f;
    transform_.analyze(field_, coeff_);
  }
  for (std::size_t k = 0; k < m; ++k) {
    const double cubic = linear_ ? 0.0 : coeff_[k];
    dy[k] = (alpha_ - lambda_[k]) * u[k] - v[k] - cubic;
    dy[m + k] = u[k];
  }
}

SpectralState galerkin_rhs(const SpectralState& state, double alpha, const CosineBasis& basis) {
  const ToyGalerkin system(state.order(), alpha, false, basis.domain(), basis.diffusion());
  const std::size_t m = state.order() + 1;
  std::vector<double> y(2 * m), dy(2 * m);
  std::copy(state.u.begin(), state.u.end(), y.begin());
  std::copy(state.v.begin(), state.v.end(), y.begin() + static_cast<std::ptrdiff_t>(m));
  system(y, dy);
  return SpectralState(std::vector<double>(dy.begin(), dy.begin() + static_cast<std::ptrdiff_t>(m)),
                       std::vector<double>(dy.begin() + static_cast<std::ptrdiff_t>(m), dy.end()));
}

TailBoundReport tail_bound_check(const SpectralState& state) {
  const std::size_t N = state.order();
  const auto& u = state.u;
  TailBoundReport r;
  for (std::size_t i = 1; i <= N; ++i) {
    r.sum_abs += std::abs(u[i]);
    r.sum_sq += u[i] * u[i];
  }
  r.bound = 3.5 * r.sum_abs * r.sum_sq;
  r.bound_g0 = 1.5 * std::numbers::sqrt2 * r.sum_abs * r.sum_sq;

  const std::size_t order = std::max<std::size_t>(N, 1);
  const ModalTransform tf(UniformGrid(0.0, 1.0, 4 * order + 1), order);
  std::vector<double> coeffs(order + 1, 0.0), tail(order + 1, 0.0);
  std::copy(u.begin(), u.end(), coeffs.begin());
  std::copy(u.begin() + 1, u.end(), tail.begin() + 1);

  std::vector<double> full(tf.grid().size()), w(tf.grid().size());
  tf.synthesize(coeffs, full);
  tf.synthesize(tail, w);
  for (double& f : full) f = f * f * f;
  for (double& f : w) f = f * f;
  std::vector<double> cubic(order + 1), w2(order + 1);
  tf.analyze(full, cubic);
  tf.analyze(w, w2);

  const double u0 = u[0];
  r.g.assign(N + 1, 0.0);
  r.g_displayed_coupling.assign(N + 1, 0.0);
  r.g[0] = cubic[0] - u0 * u0 * u0 - 3.0 * u0 * r.sum_sq;
  r.g_displayed_coupling[0] = r.g[0];
  for (std::size_t k = 1; k <= N; ++k) {
    r.g[k] = cubic[k] - 3.0 * u0 * u0 * u[k] - 3.0 * u0 * w2[k];
    double shifted = 0.0;
    for (std::size_t i = 1; i + k <= N; ++i) shifted += u[i] * u[i + k];
    r.g_displayed_coupling[k] =
        cubic[k] - 3.0 * u0 * u0 * u[k] - 4.5 * std::numbers::sqrt2 * u0 * shifted;
  }
  const double slack = 1e-12 * (1.0 + r.bound);
  r.within_bound = std::abs(r.g[0]) <= r.bound_g0 + slack;
  for (std::size_t k = 1; k <= N; ++k) r.within_bound = r.within_bound && std::abs(r.g[k]) <= r.bound + slack;
  return r;
}

void write_csv(std::ostream& os, const SpectralState& s) {
  os << "# fhnlab spectral-state v1\n";
  os << "k,u_k,v_k\n";
  os.precision(17);
  for (std::size_t k = 0; k < s.u.size(); ++k) os << k << ',' << s.u[k] << ',' << s.v[k] << '\n';
}

}  // namespace fhn
