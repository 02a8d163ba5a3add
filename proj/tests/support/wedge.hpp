/// Exact plane geometry for the d = 2, |I| = 1 descent cone: a wedge of
/// angle theta = 2 atan(w_on / w_off), with intrinsic volumes
/// (nu0, nu1, nu2) = ((pi - theta)/2pi, 1/2, theta/2pi) and
/// delta = 1/2 + theta/pi.
#pragma once

#include <cmath>
#include <numbers>

namespace oracle {

struct WedgeVolumes {
  double nu0, nu1, nu2, delta, theta;
};

inline WedgeVolumes wedgeExact(double wOn, double wOff) {
  const double theta = 2.0 * std::atan2(wOn, wOff);
  const double pi = std::numbers::pi;
  return {(pi - theta) / (2.0 * pi), 0.5, theta / (2.0 * pi), 0.5 + theta / pi, theta};
}

}  // namespace oracle
