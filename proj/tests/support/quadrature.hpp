/// Adaptive Simpson quadrature, the independent oracle for the Gaussian tail
/// integrals.
#pragma once

#include <cmath>

namespace oracle {

namespace detail {

template <class F>
double simpsonStep(F&& f, double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adaptive(F&& f, double a, double b, double fa, double fm, double fb, double whole,
                double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpsonStep(f, a, m, fa, flm, fm);
  const double right = simpsonStep(f, m, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-13) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  return detail::adaptive(f, a, b, fa, fm, fb, detail::simpsonStep(f, a, b, fa, fm, fb), tol, 48);
}

/// Truncated tail integral in half-unit slices; slicing keeps the boundary
/// peak visible to the adaptive rule when lam is large.
template <class F>
double tailIntegral(F&& f, double lam) {
  double total = 0.0;
  for (double offset = 0.0; offset < 14.0; offset += 0.5)
    total += integrate(f, lam + offset, lam + offset + 0.5, 1e-14);
  return total;  // tail beyond lam+14 is < 1e-43
}

inline double gaussianQ(double lam) {
  return tailIntegral([](double u) { return std::exp(-0.5 * u * u); }, lam);
}

inline double momentJ1(double lam) {
  return tailIntegral([lam](double u) { return (u - lam) * std::exp(-0.5 * u * u); }, lam);
}

inline double momentJ2(double lam) {
  return tailIntegral([lam](double u) { return (u - lam) * (u - lam) * std::exp(-0.5 * u * u); },
                      lam);
}

}  // namespace oracle
