#pragma once

#include <stdexcept>

namespace bellman {

/// Parameters of the weight domain D_c = {(w, v) : w, v > 0, 1 <= w*v <= c}.
///
/// `c` bounds the A2 characteristic and must be strictly larger than 1
/// (c = 1 collapses the domain to the hyperbola w*v = 1, the unweighted case).
/// The remaining constants are fixed by the construction of the Burkholder
/// function: the exponent beta of the mixed-power blocks, the majorant
/// prefactor kappa and the squared majorant constant C^2.
struct DomainParams {
  double c;

  static constexpr double kBeta = 0.75;
  static constexpr double kKappa = 0.5;
  static constexpr double kMajorantCSquared = 1228800.0;

  explicit DomainParams(double characteristic_bound) : c(characteristic_bound) {
    if (!(c > 1.0)) {
      throw std::invalid_argument("DomainParams: characteristic bound c must be > 1");
    }
  }
};

}  // namespace bellman
