#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "fhn/grid.hpp"

namespace fhn {

/// Orthonormal cosine eigenbasis of -d * d^2/dx^2 with Neumann conditions on (a, b).
///
/// phi_0 = 1/sqrt(b-a), phi_k = sqrt(2/(b-a)) cos(k pi (x-a)/(b-a)); on (0,1) this is
/// 1 and sqrt(2) cos(k pi x). Eigenvalues are d k^2 pi^2 / (b-a)^2.
class CosineBasis {
 public:
  explicit CosineBasis(Interval domain = {0.0, 1.0}, double d = 1.0);

  double operator()(std::size_t k, double x) const;
  double eigenvalue(std::size_t k) const;
  Interval domain() const { return domain_; }
  double diffusion() const { return d_; }

 private:
  Interval domain_;
  double d_;
};

double basis_eval(std::size_t k, double x, Interval domain = {0.0, 1.0});
double cosine_eigenvalue(std::size_t k, Interval domain = {0.0, 1.0}, double d = 1.0);

/// Truncated coefficient vectors (u_k, v_k), k = 0..N.
struct SpectralState {
  std::vector<double> u;
  std::vector<double> v;

  explicit SpectralState(std::size_t order) : u(order + 1, 0.0), v(order + 1, 0.0) {}
  SpectralState(std::vector<double> u_, std::vector<double> v_);
  std::size_t order() const { return u.size() - 1; }
};

/// Quadrature-based analysis/synthesis between a grid and the first N+1 cosine modes.
/// Holds the sampled basis so repeated transforms cost O(N n).
class ModalTransform {
 public:
  ModalTransform(const UniformGrid& grid, std::size_t order);

  const UniformGrid& grid() const { return grid_; }
  std::size_t order() const { return order_; }

  void analyze(std::span<const double> f, std::span<double> coeffs) const;
  void synthesize(std::span<const double> coeffs, std::span<double> f) const;
  std::vector<double> analyze(const GridFunction& f) const;
  GridFunction synthesize(std::span<const double> coeffs) const;

 private:
  UniformGrid grid_;
  std::size_t order_;
  std::vector<double> table_;    // (order+1) x n, row k holds phi_k at the nodes
  std::vector<double> weighted_; // same rows multiplied by trapezoid weights
};

/// c_k = quad(f * phi_k) for k = 0..N. Throws ResolutionError when N >= n-1.
std::vector<double> analyze(const GridFunction& f, std::size_t order);
GridFunction synthesize(std::span<const double> coeffs, const UniformGrid& grid);

/// Trapezoid value of the integral over (0,1) of a product of cosine modes.
double mode_product_quadrature(std::span<const std::size_t> modes, std::size_t nodes = 4001);

/// Integral of phi_k phi_m phi_n over (0,1) from the index rule: sqrt(2)/2 when exactly one
/// of k+m=n, k+n=m, m+n=k holds and 0 when none does. Index 0, or more than one rule holding,
/// falls back to quadrature.
double triple_product(std::size_t k, std::size_t m, std::size_t n);

/// True iff one of the index identities making the quadruple product non-zero holds.
bool quad_product_nonzero(std::size_t k, std::size_t l, std::size_t m, std::size_t n);
/// Quadruple product value over (0,1), always by quadrature.
double quad_product_value(std::size_t k, std::size_t l, std::size_t m, std::size_t n);

/// Truncated Galerkin system of the toy model u_t = alpha u - u^3 - v + u_xx, v_t = u.
///
/// The cubic is evaluated pseudo-spectrally: the truncated field is synthesized on a
/// dealiasing grid with at least 4N intervals, cubed pointwise and re-analyzed. On that grid
/// the trapezoid rule integrates every product that occurs exactly.
class ToyGalerkin {
 public:
  ToyGalerkin(std::size_t order, double alpha, bool linear = false, Interval domain = {0.0, 1.0},
              double d = 1.0, std::size_t dealias_nodes = 0);

  std::size_t order() const { return order_; }
  double alpha() const { return alpha_; }
  const CosineBasis& basis() const { return basis_; }
  const ModalTransform& transform() const { return transform_; }

  /// Flat layout: y = [u_0..u_N, v_0..v_N].
  void operator()(std::span<const double> y, std::span<double> dy) const;
  /// Projection of u^3 onto phi_0..phi_N.
  std::vector<double> cubic_projection(std::span<const double> u_coeffs) const;

 private:
  std::size_t order_;
  double alpha_;
  bool linear_;
  CosineBasis basis_;
  ModalTransform transform_;
  std::vector<double> lambda_;
  mutable std::vector<double> field_, coeff_;
};

SpectralState galerkin_rhs(const SpectralState& state, double alpha, const CosineBasis& basis);

/// Remainder diagnostics for the projected cubic on (0,1).
///
/// g_0 = P_0 - u_0^3 - 3 u_0 sum u_i^2 and, for k >= 1,
/// g_k = P_k - 3 u_0^2 u_k - 3 u_0 <w^2, phi_k>, where P_k is the projection of u^3 and
/// w = sum_{i>=1} u_i phi_i. Both are pure-tail cubic terms bounded by (7/2) S1 S2.
struct TailBoundReport {
  double sum_abs = 0.0;   ///< S1 = sum_{i>=1} |u_i|
  double sum_sq = 0.0;    ///< S2 = sum_{i>=1} u_i^2
  double bound = 0.0;     ///< (7/2) S1 S2
  double bound_g0 = 0.0;  ///< (3 sqrt(2)/2) S1 S2
  std::vector<double> g;  ///< measured remainders, k = 0..N
  /// Remainders left when the u_0 coupling is taken with coefficient 9 sqrt(2)/2 on
  /// sum_i u_i u_{k+i} alone; differs from `g` whenever u_0 != 0.
  std::vector<double> g_displayed_coupling;
  bool within_bound = true;
};

TailBoundReport tail_bound_check(const SpectralState& state);

void write_csv(std::ostream& os, const SpectralState& s);

}  // namespace fhn
