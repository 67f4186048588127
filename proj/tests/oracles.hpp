#pragma once

// Test-only reference implementations, independent of the library paths
// they are used to check.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>

#include "tensoray/geometry.hpp"

namespace oracles {

using tensoray::Complex;
using tensoray::Vec2;

// recursive adaptive Simpson quadrature
inline double adaptive_simpson_impl(const std::function<double(double)>& f, double a, double b,
                                    double fa, double fm, double fb, double whole, double tol,
                                    int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson_impl(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_impl(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-12, int depth = 40) {
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson_impl(f, a, b, fa, fm, fb, whole, tol, depth);
}

// Chord integral of the centered isotropic Gaussian amplitude*exp(-|x|^2/sigma^2)
// along the line at signed distance s from the center, chord half-length
// sqrt(R^2 - s^2). (The infinite-line value amplitude*sigma*sqrt(pi)*e^{-s^2/sigma^2}
// differs from this by the erfc truncation term.)
inline double gaussian_chord(double s, double sigma, double radius, double amplitude = 1.0) {
  if (std::abs(s) >= radius) return 0.0;
  double half = std::sqrt(radius * radius - s * s);
  return amplitude * sigma * std::sqrt(std::numbers::pi) * std::exp(-s * s / (sigma * sigma)) *
         std::erf(half / sigma);
}

// PV integral over the circle of f(s) * cot((s - s0)/2) by the
// node-skipping trapezoid rule on a refined grid (reference for the
// Hilbert transform quadrature).
inline Complex pv_cot_reference(const std::function<Complex(double)>& f, double s0,
                                std::size_t m_fine) {
  const double two_pi = 2.0 * std::numbers::pi;
  Complex acc = 0.0;
  for (std::size_t i = 0; i < m_fine; ++i) {
    double s = s0 + two_pi * (double(i) + 0.5) / double(m_fine);  // offset grid, no node at s0
    acc += f(s) / std::tan(0.5 * (s - s0));
  }
  return acc * (two_pi / double(m_fine));
}

// random interior points, reproducible
inline std::vector<Vec2> random_interior_points(std::size_t count, double rmax,
                                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-rmax, rmax);
  std::vector<Vec2> pts;
  while (pts.size() < count) {
    Vec2 p{u(rng), u(rng)};
    if (tensoray::norm2(p) < rmax * rmax) pts.push_back(p);
  }
  return pts;
}

}  // namespace oracles
