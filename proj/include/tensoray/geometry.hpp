#pragma once

// Disk geometry: boundary parametrization, chord lengths, inflow/outflow
// classification of boundary directions, and the tangential (spectral)
// derivative on the uniform boundary grid.

#include <complex>
#include <cstddef>
#include <vector>

namespace tensoray {

using Complex = std::complex<double>;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double c) const { return {c * x, c * y}; }
  Vec2 operator-() const { return {-x, -y}; }
};

inline Vec2 operator*(double c, Vec2 v) { return v * c; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm2(Vec2 a) { return dot(a, a); }
double norm(Vec2 a);
Vec2 unit_vec(double phi);
// perpendicular of a unit direction, so that x = s*perp(theta) + t*theta
inline Vec2 perp(Vec2 v) { return {-v.y, v.x}; }
inline Complex to_complex(Vec2 p) { return {p.x, p.y}; }
inline Vec2 from_complex(Complex z) { return {z.real(), z.imag()}; }

// Gamma-, Gamma+, Gamma0 pieces of the boundary unit bundle.
enum class RayClass { inflow, outflow, tangent };

// The domain is the disk of given radius, boundary traversed
// counterclockwise, zeta(s) = radius*(cos s, sin s), outward normal angle
// eta(s) = s. M boundary nodes at s_i = 2*pi*i/M.
class Domain {
 public:
  Domain(double radius, std::size_t boundary_nodes, double tangency_band = 1e-9);

  double radius() const { return radius_; }
  std::size_t nodes() const { return m_; }
  double tangency_band() const { return tangency_band_; }

  double node_angle(std::size_t i) const;
  Vec2 boundary_point(std::size_t i) const;
  Vec2 outward_normal(std::size_t i) const;

  // sup{t >= 0 : x + t*theta in the closed disk}; throws std::domain_error
  // if x lies outside the closed disk.
  double exit_distance(Vec2 x, Vec2 theta) const;

  // Sign of theta.n(x) with the band |theta.n| <= tangency_band mapped to
  // tangent. x must lie on the boundary (tolerance 1e-12 * radius).
  RayClass classify(Vec2 x, Vec2 theta) const;

 private:
  double radius_;
  std::size_t m_;
  double tangency_band_;
};

// Spectral d/ds of values on the uniform 2*pi grid (even node count,
// Nyquist mode dropped). Exact for trigonometric polynomials of degree
// below half the node count.
std::vector<Complex> spectral_dds(const std::vector<Complex>& values);

// Tangential derivative d/d(arclength) = (1/radius) d/ds of boundary values
// sampled on the uniform grid, by trigonometric interpolation. Exact for
// trigonometric polynomials of degree < M/2.
std::vector<Complex> boundary_derivative(const Domain& dom,
                                         const std::vector<Complex>& values);

}  // namespace tensoray
