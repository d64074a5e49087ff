#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "zkb/domain.hpp"

namespace zkb::test {

inline constexpr double kPi = std::numbers::pi;

/// Hermitian random coefficients on |j| <= jmax, l <= lmax, uniform in [-1, 1].
inline SpectralField random_band(const DomainConfig& d, int jmax, int lmax, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SpectralField s(d);
  for (int j = 0; j <= jmax; ++j) {
    for (int l = 1; l <= lmax; ++l) {
      const Complex c = j == 0 ? Complex(u(rng), 0.0) : Complex(u(rng), u(rng));
      s.at(j, l) = c;
      if (j > 0) s.at(-j, l) = std::conj(c);
    }
  }
  return s;
}

/// Independent random grid samples in [-1, 1].
inline GridField random_grid(const DomainConfig& d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  GridField g(d);
  for (auto& v : g.values()) v = u(rng);
  return g;
}

/// Grid samples of a closed-form field.
template <class F>
GridField sample(const DomainConfig& d, F&& f) {
  GridField g(d);
  for (int i = 0; i < d.nx(); ++i) {
    for (int k = 0; k < d.ny(); ++k) g(i, k) = f(d.x(i), d.y(k));
  }
  return g;
}

inline double max_abs_diff(const GridField& a, const GridField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

inline double max_abs_diff(const SpectralField& a, const SpectralField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.coeffs()[i] - b.coeffs()[i]));
  return m;
}

inline double max_abs(const SpectralField& a) {
  double m = 0.0;
  for (const auto& c : a.coeffs()) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace zkb::test
