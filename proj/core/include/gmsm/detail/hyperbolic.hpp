#pragma once

#include <cmath>

namespace gmsm::detail {

// sech^2 without the 1 - tanh^2 cancellation in the tails.
inline double sech2(double z) {
  const double e = std::exp(-2.0 * std::fabs(z));
  const double d = 1.0 + e;
  return 4.0 * e / (d * d);
}

}  // namespace gmsm::detail
