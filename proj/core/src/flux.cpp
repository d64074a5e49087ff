#include "zkb/flux.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <sstream>

#include "zkb/error.hpp"

namespace zkb {

namespace {
double bump_tail(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

// G'(s) = s eta(2 - s) + 2 eta(s - 1); g_h'(u) = sgn(u) G'(h|u|) / h.
double scaled_integrand(double s) { return s * eta(2.0 - s) + 2.0 * eta(s - 1.0); }

// Transition band 1 < s < 2, where the integrand is neither polynomial nor constant.
double transition_integral(double s) {
  using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;
  double err = 0.0;
  const double v = Quad::integrate(scaled_integrand, 1.0, s, 10, 1e-13, &err);
  if (err > 1e-12) {
    std::ostringstream os;
    os << "g_h quadrature error estimate " << err << " exceeds 1e-12";
    throw Error(os.str());
  }
  return v;
}
}  // namespace

double eta(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = bump_tail(x);
  const double b = bump_tail(1.0 - x);
  return a / (a + b);
}

namespace detail {
double scaled_regularized_flux(double s) {
  if (s <= 1.0) return 0.5 * s * s;
  static const double at_two = 0.5 + transition_integral(2.0);
  if (s >= 2.0) return at_two + 2.0 * (s - 2.0);
  return 0.5 + transition_integral(s);
}
}  // namespace detail

RegularizedFlux RegularizedFlux::with_scale(double h) {
  if (!(h > 0.0 && h <= 1.0)) {
    std::ostringstream os;
    os << "flux regularization scale h must lie in (0, 1], got " << h;
    throw ConfigError(os.str());
  }
  return RegularizedFlux(Kind::regularized, h);
}

double RegularizedFlux::operator()(double u) const {
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::quadratic:
      return 0.5 * u * u;
    case Kind::regularized:
      if (std::abs(u) * h_ <= 1.0) return 0.5 * u * u;
      return detail::scaled_regularized_flux(h_ * std::abs(u)) / (h_ * h_);
  }
  return 0.0;
}

double RegularizedFlux::derivative(double u) const {
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::quadratic:
      return u;
    case Kind::regularized: {
      const double s = h_ * std::abs(u);
      const double sgn = u > 0.0 ? 1.0 : (u < 0.0 ? -1.0 : 0.0);
      return sgn * scaled_integrand(s) / h_;
    }
  }
  return 0.0;
}

double g_h(double u, const RegularizedFlux& flux) { return flux(u); }

}  // namespace zkb
