#pragma once

namespace zkb {

/// Smooth monotone cutoff: 0 for x <= 0, 1 for x >= 1, eta(x) + eta(1-x) = 1.
/// Fixed as s(x) / (s(x) + s(1-x)) with s(x) = exp(-1/x) for x > 0, else 0.
double eta(double x);

/// Quadratic flux g(u) = u^2/2, its bounded-derivative regularization
///
///   g_h(u) = ∫_0^u [θ η(2 - h|θ|) + (2 sgn θ / h) η(h|θ| - 1)] dθ,   h in (0, 1],
///
/// or the zero flux used for purely linear runs.
class RegularizedFlux {
 public:
  enum class Kind { quadratic, regularized, zero };

  static RegularizedFlux unregularized() { return RegularizedFlux(Kind::quadratic, 0.0); }
  /// Throws ConfigError unless 0 < h <= 1.
  static RegularizedFlux with_scale(double h);
  static RegularizedFlux zero() { return RegularizedFlux(Kind::zero, 0.0); }

  Kind kind() const noexcept { return kind_; }
  bool is_regularized() const noexcept { return kind_ == Kind::regularized; }
  double h() const noexcept { return h_; }

  double operator()(double u) const;
  /// g'(u), the integrand above.
  double derivative(double u) const;

 private:
  RegularizedFlux(Kind k, double h) : kind_(k), h_(h) {}
  Kind kind_;
  double h_;
};

double g_h(double u, const RegularizedFlux& flux);

namespace detail {
/// Scaled profile G(s) with g_h(u) = G(h|u|) / h^2.
double scaled_regularized_flux(double s);
}  // namespace detail

}  // namespace zkb
