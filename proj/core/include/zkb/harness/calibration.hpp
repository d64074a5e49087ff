#pragma once

// Constants of the interpolation-type inequalities that have no numeric
// value in closed form. They are measured once on a fixed corpus, frozen in
// a key=value file and regression-checked afterwards.

#include <string>
#include <vector>

#include "zkb/domain.hpp"
#include "zkb/harness/run_config.hpp"

namespace zkb::harness {

struct CalibrationConstants {
  double c_square = 0.0;            // ||u^2||^2 <= c_square ∫∫(|Du|^2+u^2) ∫∫u^2
  double c1 = 0.0;                  // |∫∫ u u_x Δu| <= c1 ∫∫(|D^2u|^2+u^2) ∫∫u^2
  double c2 = 0.0;                  // d/dt ∫∫|D^2u|^2 <= c2 ∫∫(|Du|^2+u^2) ∫∫|D^2u|^2
  double h2_smoothing_bound = 0.0;  // H^2 norm at t = 0.1 from the rough probe field
};

/// Compiled-in location of the frozen constants.
std::string default_constants_path();
/// Throws ConfigError on I/O, syntax or non-positive values.
CalibrationConstants load_constants(const std::string& path);
std::string constants_text(const CalibrationConstants& c);

/// Domain the constants are measured on (the default desk-scale domain).
DomainConfig calibration_domain();
/// Fixed validation corpus: gaussian bumps and random band-limited fields.
std::vector<InitialDataSpec> calibration_corpus();
/// Rough probe with |D^2| norm much larger than its |D^1| norm.
InitialDataSpec smoothing_probe();
/// Time at which the smoothing diagnostic is read.
inline constexpr double kSmoothingTime = 0.1;

/// Suprema of the ratios over the corpus and the probe's H^2 norm at kSmoothingTime.
CalibrationConstants measure_constants(const DomainConfig& d);
/// H^2 norm at kSmoothingTime of the flow started from the probe.
double smoothing_h2(const DomainConfig& d);

}  // namespace zkb::harness
