/**
 * Gaussian tail integrals used by the weight-design bounds.
 *
 *   gaussianQ(l) = int_l^inf exp(-u^2/2) du
 *   momentJ1(l)  = int_l^inf (u - l)   exp(-u^2/2) du
 *   momentJ2(l)  = int_l^inf (u - l)^2 exp(-u^2/2) du
 *
 * Closed forms in terms of erfc; the test suite validates them against
 * adaptive quadrature to 1e-10.
 */
#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wl1 {

inline double gaussianQ(double lambda) {
  return std::sqrt(std::numbers::pi / 2.0) * std::erfc(lambda / std::numbers::sqrt2);
}

inline double momentJ1(double lambda) {
  const double v = std::exp(-0.5 * lambda * lambda) - lambda * gaussianQ(lambda);
  return v < 0.0 ? 0.0 : v;
}

inline double momentJ2(double lambda) {
  const double v = (1.0 + lambda * lambda) * gaussianQ(lambda) -
                   lambda * std::exp(-0.5 * lambda * lambda);
  return v < 0.0 ? 0.0 : v;
}

}  // namespace wl1
