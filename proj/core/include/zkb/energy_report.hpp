#pragma once

#include <optional>
#include <string>
#include <vector>

namespace zkb {

/// Observed convergence order of a residual between two step sizes.
struct RefinementOrder {
  double dt_coarse = 0.0;
  double dt_fine = 0.0;
  double residual_coarse = 0.0;
  double residual_fine = 0.0;
  double ratio = 0.0;  // residual_coarse / residual_fine
  double order = 0.0;  // log(ratio) / log(dt_coarse / dt_fine)
};

/// Residual history of one energy identity along a trajectory.
struct EnergyReport {
  std::string identity;
  double dt = 0.0;
  std::vector<double> times;
  std::vector<double> residuals;  // |LHS(t) - RHS(t)|
  double max_residual = 0.0;
  /// Largest magnitude among the terms entering the identity, for relative reading.
  double scale = 0.0;
  std::optional<RefinementOrder> refinement;
};

/// Attaches the refinement order of `coarse` relative to `fine`.
/// Throws InvalidInput when the identities differ or dt_fine >= dt_coarse.
EnergyReport with_refinement(EnergyReport coarse, const EnergyReport& fine);

}  // namespace zkb
