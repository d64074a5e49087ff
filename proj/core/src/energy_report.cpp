#include "zkb/energy_report.hpp"

#include <cmath>
#include <limits>

#include "zkb/error.hpp"

namespace zkb {

EnergyReport with_refinement(EnergyReport coarse, const EnergyReport& fine) {
  if (coarse.identity != fine.identity) {
    throw InvalidInput("refinement pairs reports of different identities: " + coarse.identity + " vs " + fine.identity);
  }
  if (!(fine.dt > 0.0) || !(fine.dt < coarse.dt)) {
    throw InvalidInput("refinement needs dt_fine < dt_coarse");
  }
  RefinementOrder r;
  r.dt_coarse = coarse.dt;
  r.dt_fine = fine.dt;
  r.residual_coarse = coarse.max_residual;
  r.residual_fine = fine.max_residual;
  if (fine.max_residual > 0.0) {
    r.ratio = coarse.max_residual / fine.max_residual;
    r.order = std::log(r.ratio) / std::log(coarse.dt / fine.dt);
  } else {
    r.ratio = std::numeric_limits<double>::infinity();
    r.order = std::numeric_limits<double>::infinity();
  }
  coarse.refinement = r;
  return coarse;
}

}  // namespace zkb
