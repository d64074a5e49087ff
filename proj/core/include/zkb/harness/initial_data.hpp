#pragma once

#include "zkb/domain.hpp"
#include "zkb/harness/run_config.hpp"

namespace zkb::harness {

/// Grid samples of the selected generator. Every generator is a finite sum
/// of sin(pi l y / L) profiles, so the wall condition holds exactly.
///   eigenmode       A sin(pi l y / L)
///   traveling_mode  A cos(xi_j x) sin(pi l y / L)
///   gaussian_bump   A exp(-(x - x0)^2 / (2 sigma_x^2)) sin(pi l y / L)
///   random_band     Hermitian random coefficients for |j| <= jmax, l <= lmax
///                   (uniform in [-1, 1], std::mt19937_64), scaled to max |u| = A
///   zero            0
/// Throws ConfigError if a gaussian bump is not below 1e-12 at the periodic seam.
GridField make_initial_data(const InitialDataSpec& spec, const DomainConfig& d);

/// Spectral coefficients of the same field.
SpectralField make_initial_spectrum(const InitialDataSpec& spec, const DomainConfig& d);

}  // namespace zkb::harness
