#include "zkb/domain.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include "zkb/error.hpp"

namespace zkb {

namespace detail {

namespace {
// The FFTW planner is not re-entrant; execution with the new-array API is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

// SIMD-aligned scratch owned by one transform call.
template <class T>
class Aligned {
 public:
  explicit Aligned(std::size_t n) : n_(n), p_(static_cast<T*>(fftw_malloc(sizeof(T) * (n ? n : 1)))) {
    if (!p_) throw std::bad_alloc();
  }
  ~Aligned() { fftw_free(p_); }
  Aligned(const Aligned&) = delete;
  Aligned& operator=(const Aligned&) = delete;
  T* data() noexcept { return p_; }
  const T* data() const noexcept { return p_; }
  T& operator[](std::size_t i) noexcept { return p_[i]; }
  const T& operator[](std::size_t i) const noexcept { return p_[i]; }
  std::size_t size() const noexcept { return n_; }
  void zero() noexcept { std::fill(p_, p_ + n_, T{}); }

 private:
  std::size_t n_;
  T* p_;
};
}  // namespace

struct TransformPlans {
  int nx;
  int ny;
  fftw_plan ext_rows = nullptr;  // r2c of length 2(ny+1) per x sample, for DST-I/DCT-I by extension
  fftw_plan r2c_cols = nullptr;  // along x, one column per sine mode
  fftw_plan c2r_cols = nullptr;

  TransformPlans(int nx_, int ny_) : nx(nx_), ny(ny_) {
    // FFTW_ESTIMATE keeps the plans, and therefore the rounding, identical between runs.
    const unsigned flags = FFTW_ESTIMATE;
    const int nh = nx / 2 + 1;
    Aligned<double> r1(static_cast<std::size_t>(nx) * (ny + 2));
    Aligned<Complex> c1(static_cast<std::size_t>(nh) * ny);

    std::lock_guard<std::mutex> lock(planner_mutex());
    int ne = 2 * (ny + 1);
    const int neh = ny + 2;
    Aligned<double> e(static_cast<std::size_t>(nx) * ne);
    Aligned<Complex> ec(static_cast<std::size_t>(nx) * neh);
    ext_rows = fftw_plan_many_dft_r2c(1, &ne, nx, e.data(), nullptr, 1, ne, as_fftw(ec.data()), nullptr, 1, neh, flags);
    int m = nx;
    r2c_cols = fftw_plan_many_dft_r2c(1, &m, ny, r1.data(), nullptr, ny, 1, as_fftw(c1.data()), nullptr, ny, 1, flags);
    c2r_cols = fftw_plan_many_dft_c2r(1, &m, ny, as_fftw(c1.data()), nullptr, ny, 1, r1.data(), nullptr, ny, 1, flags);
    if (!ext_rows || !r2c_cols || !c2r_cols) {
      throw Error("FFTW failed to create transform plans");
    }
  }

  ~TransformPlans() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    for (fftw_plan p : {ext_rows, r2c_cols, c2r_cols}) {
      if (p) fftw_destroy_plan(p);
    }
  }

  TransformPlans(const TransformPlans&) = delete;
  TransformPlans& operator=(const TransformPlans&) = delete;
};

namespace {

// Multiplier applied to coefficient (jx, l) before synthesis of d^kx_x d^ky_y.
// Odd x-orders drop the Nyquist column, which has no conjugate partner.
void load_half_spectrum(const SpectralField& s, const DomainConfig& d, int kx, int ky, Aligned<Complex>& h) {
  const int ny = d.ny();
  const int nh = d.nx() / 2 + 1;
  h.zero();
  std::vector<double> yfac(static_cast<std::size_t>(ny), 1.0);
  if (ky > 0) {
    for (int l = 1; l <= ny; ++l) {
      double f = std::pow(std::numbers::pi * l / d.L(), ky);
      // sin -> k cos -> -k^2 sin -> -k^3 cos
      if ((ky / 2) % 2 == 1) f = -f;
      yfac[static_cast<std::size_t>(l - 1)] = f;
    }
  }
  const Complex ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (int jx = 0; jx < nh; ++jx) {
    if (kx % 2 == 1 && d.is_nyquist(jx)) continue;
    Complex xfac = ipow[kx % 4] * std::pow(d.xi(jx), kx);
    if (jx % 2 == 1) xfac = -xfac;  // exp(i xi x_0) = (-1)^j with x_0 = -X
    Complex* row = h.data() + static_cast<std::size_t>(jx) * ny;
    for (int l = 1; l <= ny; ++l) row[l - 1] = xfac * yfac[static_cast<std::size_t>(l - 1)] * s(jx, l);
  }
}

// Synthesis along x for every mode l: b(x_i, l), real. Destroys h.
void synthesize_x(const DomainConfig& d, Aligned<Complex>& h, Aligned<double>& b) {
  fftw_execute_dft_c2r(d.plans().c2r_cols, as_fftw(h.data()), b.data());
}

std::size_t half_size(const DomainConfig& d) { return static_cast<std::size_t>(d.nx() / 2 + 1) * d.ny(); }

// out[i][k] = scale * sum_j in[i][j] sin(pi (j+1)(k+1) / (ny+1)) * 2, via the odd extension.
void dst_rows(const DomainConfig& d, const double* in, double* out, double scale) {
  const std::size_t nx = static_cast<std::size_t>(d.nx());
  const std::size_t ny = static_cast<std::size_t>(d.ny());
  const std::size_t ne = 2 * (ny + 1);
  const std::size_t neh = ny + 2;
  Aligned<double> e(nx * ne);
  Aligned<Complex> c(nx * neh);
  for (std::size_t i = 0; i < nx; ++i) {
    double* r = e.data() + i * ne;
    const double* src = in + i * ny;
    r[0] = 0.0;
    r[ny + 1] = 0.0;
    for (std::size_t j = 0; j < ny; ++j) {
      r[j + 1] = src[j];
      r[ne - 1 - j] = -src[j];
    }
  }
  fftw_execute_dft_r2c(d.plans().ext_rows, e.data(), as_fftw(c.data()));
  for (std::size_t i = 0; i < nx; ++i) {
    const Complex* row = c.data() + i * neh;
    for (std::size_t k = 0; k < ny; ++k) out[i * ny + k] = -scale * row[k + 1].imag();
  }
}

// Cosine synthesis including both walls: out has ny+2 entries per row, with
// out[i][k] = scale * sum_j in[i][j] cos(pi (j+1) k / (ny+1)) * 2, via the even extension.
void dct_rows(const DomainConfig& d, const double* in, double* out, double scale) {
  const std::size_t nx = static_cast<std::size_t>(d.nx());
  const std::size_t ny = static_cast<std::size_t>(d.ny());
  const std::size_t ne = 2 * (ny + 1);
  const std::size_t neh = ny + 2;
  Aligned<double> e(nx * ne);
  Aligned<Complex> c(nx * neh);
  for (std::size_t i = 0; i < nx; ++i) {
    double* r = e.data() + i * ne;
    const double* src = in + i * ny;
    r[0] = 0.0;
    r[ny + 1] = 0.0;
    for (std::size_t j = 0; j < ny; ++j) {
      r[j + 1] = src[j];
      r[ne - 1 - j] = src[j];
    }
  }
  fftw_execute_dft_r2c(d.plans().ext_rows, e.data(), as_fftw(c.data()));
  for (std::size_t i = 0; i < nx; ++i) {
    const Complex* row = c.data() + i * neh;
    for (std::size_t k = 0; k < neh; ++k) out[i * neh + k] = scale * row[k].real();
  }
}

}  // namespace

void inverse_real(const SpectralField& s, const DomainConfig& d, GridField& out) {
  Aligned<Complex> h(half_size(d));
  Aligned<double> b(d.size());
  load_half_spectrum(s, d, 0, 0, h);
  synthesize_x(d, h, b);
  if (out.nx() != d.nx() || out.ny() != d.ny()) out = GridField(d);
  dst_rows(d, b.data(), out.values().data(), 0.5);
}

void forward_real(const GridField& f, const DomainConfig& d, SpectralField& out) {
  const int nx = d.nx();
  const int ny = d.ny();
  const int nh = nx / 2 + 1;
  Aligned<double> a(d.size());
  dst_rows(d, f.values().data(), a.data(), 1.0);
  Aligned<Complex> h(half_size(d));
  fftw_execute_dft_r2c(d.plans().r2c_cols, a.data(), as_fftw(h.data()));

  if (out.nx() != nx || out.ny() != ny) out = SpectralField(d);
  const double scale = 1.0 / (static_cast<double>(nx) * (ny + 1));
  for (int jx = 0; jx < nh; ++jx) {
    const double sgn = (jx % 2 == 1) ? -scale : scale;
    for (int l = 1; l <= ny; ++l) out(jx, l) = sgn * h[static_cast<std::size_t>(jx) * ny + (l - 1)];
  }
  for (int jx = nh; jx < nx; ++jx) {
    for (int l = 1; l <= ny; ++l) out(jx, l) = std::conj(out(nx - jx, l));
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------

DomainConfig::DomainConfig(double L, double X, int nx, int ny, double delta)
    : L_(L), X_(X), nx_(nx), ny_(ny), delta_(delta) {
  std::ostringstream err;
  if (!(L > 0.0) || !std::isfinite(L)) err << "L must be positive (got " << L << "); ";
  if (!(X > 0.0) || !std::isfinite(X)) err << "X must be positive (got " << X << "); ";
  if (!(delta > 0.0) || !std::isfinite(delta)) err << "delta must be positive (got " << delta << "); ";
  if (nx < 8 || nx % 2 != 0) err << "nx must be even and >= 8 (got " << nx << "); ";
  if (ny < 4) err << "ny must be >= 4 (got " << ny << "); ";
  if (!err.str().empty()) throw ConfigError("invalid domain: " + err.str());

  xi_.resize(static_cast<std::size_t>(nx));
  for (int jx = 0; jx < nx; ++jx) xi_[static_cast<std::size_t>(jx)] = std::numbers::pi * frequency_index(jx) / X;
  lambda_.resize(static_cast<std::size_t>(ny));
  for (int l = 1; l <= ny; ++l) {
    const double k = std::numbers::pi * l / L;
    lambda_[static_cast<std::size_t>(l - 1)] = k * k;
  }
  plans_ = std::make_shared<const detail::TransformPlans>(nx, ny);
}

bool DomainConfig::retained(int jx, int l) const noexcept {
  const int j = std::abs(frequency_index(jx));
  return 3 * j < nx_ && 3 * l < 2 * (ny_ + 1);
}

DomainConfig plan_domain(double L, double X, int nx, int ny, double delta) {
  return DomainConfig(L, X, nx, ny, delta);
}

// ---------------------------------------------------------------------------

bool GridField::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double GridField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool SpectralField::all_finite() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](const Complex& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

double SpectralField::hermitian_defect() const noexcept {
  double worst = 0.0;
  for (int jx = 0; jx < nx_; ++jx) {
    const int partner = (nx_ - jx) % nx_;
    for (int l = 1; l <= ny_; ++l) {
      worst = std::max(worst, std::abs((*this)(partner, l) - std::conj((*this)(jx, l))));
    }
  }
  return worst;
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  if (o.nx_ != nx_ || o.ny_ != ny_) throw ShapeMismatch("spectral field shapes differ");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  if (o.nx_ != nx_ || o.ny_ != ny_) throw ShapeMismatch("spectral field shapes differ");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double a) noexcept {
  for (auto& c : coeffs_) c *= a;
  return *this;
}

SpectralField& SpectralField::axpy(double a, const SpectralField& o) {
  if (o.nx_ != nx_ || o.ny_ != ny_) throw ShapeMismatch("spectral field shapes differ");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += a * o.coeffs_[i];
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

// ---------------------------------------------------------------------------

void require_shape(const GridField& f, const DomainConfig& d) {
  if (f.nx() != d.nx() || f.ny() != d.ny()) {
    std::ostringstream os;
    os << "grid field is " << f.nx() << "x" << f.ny() << ", domain expects " << d.nx() << "x" << d.ny();
    throw ShapeMismatch(os.str());
  }
}

void require_shape(const SpectralField& s, const DomainConfig& d) {
  if (s.nx() != d.nx() || s.ny() != d.ny()) {
    std::ostringstream os;
    os << "spectral field is " << s.nx() << "x" << s.ny() << ", domain expects " << d.nx() << "x" << d.ny();
    throw ShapeMismatch(os.str());
  }
}

SpectralField to_spectral(const GridField& f, const DomainConfig& d) {
  require_shape(f, d);
  SpectralField out(d);
  detail::forward_real(f, d, out);
  return out;
}

GridField to_grid(const SpectralField& s, const DomainConfig& d) {
  require_shape(s, d);
  double scale = 0.0;
  for (const auto& c : s.coeffs()) scale = std::max(scale, std::abs(c));
  const double defect = s.hermitian_defect();
  if (defect > 1e-12 * scale) {
    std::ostringstream os;
    os << "spectrum is not Hermitian (defect " << defect << " vs scale " << scale << "); no real field exists";
    throw InvalidInput(os.str());
  }
  GridField out(d);
  detail::inverse_real(s, d, out);
  return out;
}

GridField partial_derivative_with_walls(const SpectralField& s, int kx, int ky, const DomainConfig& d) {
  require_shape(s, d);
  if (kx < 0 || ky < 0) throw ConfigError("derivative orders must be non-negative");
  const int nx = d.nx();
  const int ny = d.ny();
  detail::Aligned<Complex> h(detail::half_size(d));
  detail::Aligned<double> b(d.size());
  detail::load_half_spectrum(s, d, kx, ky, h);
  detail::synthesize_x(d, h, b);

  GridField out(nx, ny + 2);
  if (ky % 2 == 0) {
    detail::Aligned<double> v(d.size());
    detail::dst_rows(d, b.data(), v.data(), 0.5);
    for (int i = 0; i < nx; ++i) {
      for (int k = 0; k < ny; ++k) out(i, k + 1) = v[static_cast<std::size_t>(i) * ny + k];
    }
  } else {
    detail::dct_rows(d, b.data(), out.values().data(), 0.5);
  }
  return out;
}

GridField partial_derivative(const SpectralField& s, int kx, int ky, const DomainConfig& d) {
  require_shape(s, d);
  if (kx < 0 || ky < 0) throw ConfigError("derivative orders must be non-negative");
  if (ky % 2 == 0) {
    detail::Aligned<Complex> h(detail::half_size(d));
    detail::Aligned<double> b(d.size());
    detail::load_half_spectrum(s, d, kx, ky, h);
    detail::synthesize_x(d, h, b);
    GridField out(d);
    detail::dst_rows(d, b.data(), out.values().data(), 0.5);
    return out;
  }
  GridField walls = partial_derivative_with_walls(s, kx, ky, d);
  GridField out(d);
  for (int i = 0; i < d.nx(); ++i) {
    for (int k = 0; k < d.ny(); ++k) out(i, k) = walls(i, k + 1);
  }
  return out;
}

GridField derivative(const SpectralField& s, Axis axis, int order, const DomainConfig& d) {
  if (order < 1 || order > 3) {
    throw ConfigError("derivative order must be 1, 2 or 3 (got " + std::to_string(order) + ")");
  }
  return axis == Axis::x ? partial_derivative(s, order, 0, d) : partial_derivative(s, 0, order, d);
}

double evaluate_at(const SpectralField& s, double x, double y, const DomainConfig& d) {
  require_shape(s, d);
  double acc = 0.0;
  for (int jx = 0; jx < d.nx(); ++jx) {
    const Complex e = std::polar(1.0, d.xi(jx) * x);
    for (int l = 1; l <= d.ny(); ++l) {
      acc += (s(jx, l) * e).real() * std::sin(std::numbers::pi * l * y / d.L());
    }
  }
  return acc;
}

void apply_dealias(SpectralField& s, const DomainConfig& d) {
  require_shape(s, d);
  for (int jx = 0; jx < d.nx(); ++jx) {
    for (int l = 1; l <= d.ny(); ++l) {
      if (!d.retained(jx, l)) s(jx, l) = Complex{};
    }
  }
}

}  // namespace zkb
