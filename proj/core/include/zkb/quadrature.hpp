#pragma once

// Quadratic forms in the Fourier x sine basis. Every integral over the strip
// of a product of two derivative fields reduces to X*L * sum w(xi^2, lambda) ...
// because exp(i xi x) and sin/cos(pi l y / L) are orthogonal on [-X, X) x (0, L).

#include <cmath>

#include "zkb/domain.hpp"

namespace zkb {

/// X*L * sum_{j,l} w(xi_j^2, lambda_l) |c(j,l)|^2
template <class Weight>
double quadratic_form(const SpectralField& s, const DomainConfig& d, Weight&& w) {
  double acc = 0.0;
  for (int jx = 0; jx < d.nx(); ++jx) {
    const double xi2 = d.xi(jx) * d.xi(jx);
    for (int l = 1; l <= d.ny(); ++l) acc += w(xi2, d.lambda(l)) * std::norm(s(jx, l));
  }
  return d.parseval_weight() * acc;
}

/// X*L * sum_{j,l} w(xi_j^2, lambda_l) Re(conj(a) b)
template <class Weight>
double bilinear_form(const SpectralField& a, const SpectralField& b, const DomainConfig& d, Weight&& w) {
  double acc = 0.0;
  for (int jx = 0; jx < d.nx(); ++jx) {
    const double xi2 = d.xi(jx) * d.xi(jx);
    for (int l = 1; l <= d.ny(); ++l) {
      const Complex& p = a(jx, l);
      const Complex& q = b(jx, l);
      acc += w(xi2, d.lambda(l)) * (p.real() * q.real() + p.imag() * q.imag());
    }
  }
  return d.parseval_weight() * acc;
}

/// Weights of the classical integrands.
namespace weights {
/// u^2
inline double mass(double, double) { return 1.0; }
/// |Du|^2 = u_x^2 + u_y^2
inline double grad(double xi2, double lam) { return xi2 + lam; }
/// |D^2 u|^2 = u_xx^2 + u_xy^2 + u_yy^2
inline double hess(double xi2, double lam) { return xi2 * xi2 + xi2 * lam + lam * lam; }
/// u_xx^2 + 2 u_xy^2 + u_yy^2
inline double grad_dissipation(double xi2, double lam) { return (xi2 + lam) * (xi2 + lam); }
/// u_xxx^2 + 2 u_xxy^2 + 2 u_xyy^2 + u_yyy^2
inline double hess_dissipation(double xi2, double lam) { return (xi2 + lam) * hess(xi2, lam); }
}  // namespace weights

/// Collocation quadrature cell_area * sum f.
inline double grid_integral(const GridField& f, const DomainConfig& d) {
  double acc = 0.0;
  for (double v : f.values()) acc += v;
  return d.cell_area() * acc;
}

}  // namespace zkb
