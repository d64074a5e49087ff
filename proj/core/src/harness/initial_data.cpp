#include "zkb/harness/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "zkb/error.hpp"

namespace zkb::harness {

namespace {

double uniform_pm1(std::mt19937_64& rng) {
  // 53 random bits mapped to [-1, 1).
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

SpectralField random_band(const InitialDataSpec& spec, const DomainConfig& d) {
  if (spec.jmax < 0 || spec.jmax >= d.nx() / 2) throw ConfigError("random_band: jmax must lie in 0..nx/2-1");
  if (spec.lmax < 1 || spec.lmax > d.ny()) throw ConfigError("random_band: lmax must lie in 1..ny");
  std::mt19937_64 rng(spec.seed);
  SpectralField s(d);
  for (int j = 0; j <= spec.jmax; ++j) {
    for (int l = 1; l <= spec.lmax; ++l) {
      const double re = uniform_pm1(rng);
      const double im = uniform_pm1(rng);
      if (j == 0) {
        s.at(0, l) = Complex(re, 0.0);
      } else {
        s.at(j, l) = Complex(re, im);
        s.at(-j, l) = Complex(re, -im);
      }
    }
  }
  const GridField g = to_grid(s, d);
  const double peak = g.max_abs();
  if (peak > 0.0) s *= spec.amplitude / peak;
  return s;
}

}  // namespace

GridField make_initial_data(const InitialDataSpec& spec, const DomainConfig& d) {
  if (spec.kind == InitKind::random_band) return to_grid(random_band(spec, d), d);
  if (spec.l < 1 || spec.l > d.ny()) throw ConfigError("initial data: l must lie in 1..ny");
  GridField g(d);
  const double ky = M_PI * spec.l / d.L();
  switch (spec.kind) {
    case InitKind::zero:
      break;
    case InitKind::eigenmode:
      for (int i = 0; i < d.nx(); ++i) {
        for (int k = 0; k < d.ny(); ++k) g(i, k) = spec.amplitude * std::sin(ky * d.y(k));
      }
      break;
    case InitKind::traveling_mode: {
      if (std::abs(spec.j) >= d.nx() / 2) throw ConfigError("traveling_mode: |j| must be below nx/2");
      const double xi = M_PI * spec.j / d.X();
      for (int i = 0; i < d.nx(); ++i) {
        for (int k = 0; k < d.ny(); ++k) g(i, k) = spec.amplitude * std::cos(xi * d.x(i)) * std::sin(ky * d.y(k));
      }
      break;
    }
    case InitKind::gaussian_bump: {
      if (!(spec.sigma_x > 0.0)) throw ConfigError("gaussian_bump: sigma_x must be positive");
      // Distance to the seam x = +-X through the periodic wrap.
      const double period = 2.0 * d.X();
      double gap = std::fmod(std::abs(spec.x0 + d.X()), period);
      gap = std::min(gap, period - gap);
      const double seam = std::abs(spec.amplitude) * std::exp(-gap * gap / (2.0 * spec.sigma_x * spec.sigma_x));
      if (seam >= 1e-12) {
        std::ostringstream os;
        os << "gaussian_bump: amplitude " << seam << " at the periodic seam is not below 1e-12; increase X or reduce sigma_x";
        throw ConfigError(os.str());
      }
      for (int i = 0; i < d.nx(); ++i) {
        const double dx = d.x(i) - spec.x0;
        const double px = spec.amplitude * std::exp(-dx * dx / (2.0 * spec.sigma_x * spec.sigma_x));
        for (int k = 0; k < d.ny(); ++k) g(i, k) = px * std::sin(ky * d.y(k));
      }
      break;
    }
    case InitKind::random_band:
      break;
  }
  return g;
}

SpectralField make_initial_spectrum(const InitialDataSpec& spec, const DomainConfig& d) {
  if (spec.kind == InitKind::random_band) return random_band(spec, d);
  return to_spectral(make_initial_data(spec, d), d);
}

}  // namespace zkb::harness
