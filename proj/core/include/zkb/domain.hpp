#pragma once

// Periodized strip [-X, X) x (0, L) and its Fourier x sine spectral basis.
//
// A real field is represented as
//
//   u(x, y) = sum_j sum_{l=1..ny} c(j, l) exp(i xi_j x) sin(pi l y / L),
//
// with xi_j = pi j / X, j = -nx/2 .. nx/2-1.  The collocation grid is
// x_i = -X + 2 X i / nx (i = 0..nx-1) and the DST-I interior grid
// y_k = (k+1) L / (ny+1) (k = 0..ny-1), so the walls y = 0, L are never
// stored and the Dirichlet condition holds by construction.
//
// Normalization: for every field,
//
//   integral over the strip of |u|^2  =  X * L * sum_{j,l} |c(j, l)|^2,
//
// and the same constant X*L (DomainConfig::parseval_weight) multiplies every
// spectral quadratic form in this library.  The grid quadrature
// (2X/nx) * (L/(ny+1)) * sum u^2 equals the same number exactly.

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace zkb {

using Complex = std::complex<double>;

enum class Axis { x, y };

namespace detail {
struct TransformPlans;
}

/// Validated computational domain with precomputed frequency tables and
/// transform plans. Immutable and cheap to copy; plans are shared.
class DomainConfig {
 public:
  DomainConfig(double L, double X, int nx, int ny, double delta);

  double L() const noexcept { return L_; }
  double X() const noexcept { return X_; }
  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  double delta() const noexcept { return delta_; }
  std::size_t size() const noexcept {
    return static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_);
  }

  /// Signed frequency index j of storage slot jx (FFT order).
  int frequency_index(int jx) const noexcept { return jx < nx_ / 2 ? jx : jx - nx_; }
  /// Storage slot of signed frequency index j.
  int storage_index(int j) const noexcept { return j >= 0 ? j : j + nx_; }
  bool is_nyquist(int jx) const noexcept { return jx == nx_ / 2; }

  /// xi for storage slot jx.
  double xi(int jx) const noexcept { return xi_[static_cast<std::size_t>(jx)]; }
  /// lambda_l = (pi l / L)^2 for l = 1..ny.
  double lambda(int l) const noexcept { return lambda_[static_cast<std::size_t>(l - 1)]; }
  double lambda1() const noexcept { return lambda_.front(); }
  std::span<const double> xi_table() const noexcept { return xi_; }
  std::span<const double> lambda_table() const noexcept { return lambda_; }

  double x(int i) const noexcept { return -X_ + 2.0 * X_ * i / nx_; }
  double y(int k) const noexcept { return (k + 1) * L_ / (ny_ + 1); }

  /// X * L: the constant linking coefficient sums to integrals.
  double parseval_weight() const noexcept { return X_ * L_; }
  /// Area weight of one collocation point.
  double cell_area() const noexcept { return (2.0 * X_ / nx_) * (L_ / (ny_ + 1)); }

  /// 2/3-rule mask: 3|j| < nx and 3l < 2(ny+1).
  bool retained(int jx, int l) const noexcept;

  const detail::TransformPlans& plans() const noexcept { return *plans_; }

 private:
  double L_;
  double X_;
  int nx_;
  int ny_;
  double delta_;
  std::vector<double> xi_;
  std::vector<double> lambda_;
  std::shared_ptr<const detail::TransformPlans> plans_;
};

/// Validates the arguments and builds the transform plans.
/// Throws ConfigError on L, X, delta <= 0, odd nx, nx < 8 or ny < 4.
DomainConfig plan_domain(double L, double X, int nx, int ny, double delta);

/// Real samples on the nx x ny collocation grid, row-major (x outer).
class GridField {
 public:
  GridField() = default;
  GridField(int nx, int ny) : nx_(nx), ny_(ny), values_(static_cast<std::size_t>(nx) * ny, 0.0) {}
  explicit GridField(const DomainConfig& d) : GridField(d.nx(), d.ny()) {}

  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  std::size_t size() const noexcept { return values_.size(); }

  double& operator()(int i, int k) noexcept { return values_[static_cast<std::size_t>(i) * ny_ + k]; }
  double operator()(int i, int k) const noexcept { return values_[static_cast<std::size_t>(i) * ny_ + k]; }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  bool all_finite() const noexcept;
  double max_abs() const noexcept;

 private:
  int nx_ = 0;
  int ny_ = 0;
  std::vector<double> values_;
};

/// Coefficients c(j, l) in the exp(i xi_j x) sin(pi l y / L) basis.
/// Stored as [jx][l-1] with jx in FFT order.
class SpectralField {
 public:
  SpectralField() = default;
  SpectralField(int nx, int ny) : nx_(nx), ny_(ny), coeffs_(static_cast<std::size_t>(nx) * ny) {}
  explicit SpectralField(const DomainConfig& d) : SpectralField(d.nx(), d.ny()) {}

  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  /// Access by storage slot jx and mode l in 1..ny.
  Complex& operator()(int jx, int l) noexcept { return coeffs_[static_cast<std::size_t>(jx) * ny_ + (l - 1)]; }
  const Complex& operator()(int jx, int l) const noexcept {
    return coeffs_[static_cast<std::size_t>(jx) * ny_ + (l - 1)];
  }
  /// Access by signed frequency index j.
  Complex& at(int j, int l) noexcept { return (*this)(j >= 0 ? j : j + nx_, l); }
  const Complex& at(int j, int l) const noexcept { return (*this)(j >= 0 ? j : j + nx_, l); }

  std::span<Complex> coeffs() noexcept { return coeffs_; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }

  bool all_finite() const noexcept;
  /// max |c(-j,l) - conj c(j,l)| including the self-paired j = 0 and Nyquist columns.
  double hermitian_defect() const noexcept;

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double a) noexcept;
  /// this += a * o
  SpectralField& axpy(double a, const SpectralField& o);

 private:
  int nx_ = 0;
  int ny_ = 0;
  std::vector<Complex> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

/// Forward transform; exact to rounding for band-limited fields.
SpectralField to_spectral(const GridField& f, const DomainConfig& d);

/// Inverse transform of a Hermitian spectrum. Throws InvalidInput if the
/// Hermitian defect exceeds 1e-12 of the largest coefficient.
GridField to_grid(const SpectralField& s, const DomainConfig& d);

/// Grid samples of d^order u / d axis^order for order in {1, 2, 3}.
/// Odd y-derivatives are cosine series, evaluated on the same interior grid.
GridField derivative(const SpectralField& s, Axis axis, int order, const DomainConfig& d);

/// Grid samples of the mixed partial d^kx/dx^kx d^ky/dy^ky u.
GridField partial_derivative(const SpectralField& s, int kx, int ky, const DomainConfig& d);

/// Same as partial_derivative but on nx x (ny+2) rows including the walls
/// y = 0 and y = L (index 0 and ny+1).
GridField partial_derivative_with_walls(const SpectralField& s, int kx, int ky, const DomainConfig& d);

/// Evaluates the series directly (no transform) at an arbitrary point.
double evaluate_at(const SpectralField& s, double x, double y, const DomainConfig& d);

/// Zeroes every coefficient outside the 2/3-rule mask.
void apply_dealias(SpectralField& s, const DomainConfig& d);

void require_shape(const GridField& f, const DomainConfig& d);
void require_shape(const SpectralField& s, const DomainConfig& d);

namespace detail {
/// Inverse transform without the Hermitian check; only j >= 0 is read.
void inverse_real(const SpectralField& s, const DomainConfig& d, GridField& out);
/// Forward transform into a preallocated field.
void forward_real(const GridField& f, const DomainConfig& d, SpectralField& out);
}  // namespace detail

}  // namespace zkb
