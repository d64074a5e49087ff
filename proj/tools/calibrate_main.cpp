// zkb_calibrate: measures the inequality constants on the fixed corpus and
// prints them in the constants-file format (redirect into data/).

#include <iostream>

#include "zkb/error.hpp"
#include "zkb/harness/calibration.hpp"

int main() {
  try {
    const auto d = zkb::harness::calibration_domain();
    std::cout << zkb::harness::constants_text(zkb::harness::measure_constants(d));
    return 0;
  } catch (const zkb::Error& e) {
    std::cerr << "zkb_calibrate: " << e.what() << "\n";
    return 1;
  }
}
