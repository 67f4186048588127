#include "tensoray/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tensoray {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double norm(Vec2 a) { return std::sqrt(norm2(a)); }

Vec2 unit_vec(double phi) { return {std::cos(phi), std::sin(phi)}; }

Domain::Domain(double radius, std::size_t boundary_nodes, double tangency_band)
    : radius_(radius), m_(boundary_nodes), tangency_band_(tangency_band) {
  if (radius <= 0.0) throw std::invalid_argument("Domain: radius must be positive");
  if (m_ < 8 || m_ % 2 != 0)
    throw std::invalid_argument("Domain: boundary node count must be even and >= 8");
  if (tangency_band < 0.0)
    throw std::invalid_argument("Domain: tangency band must be nonnegative");
}

double Domain::node_angle(std::size_t i) const { return kTwoPi * double(i) / double(m_); }

Vec2 Domain::boundary_point(std::size_t i) const {
  double s = node_angle(i);
  return {radius_ * std::cos(s), radius_ * std::sin(s)};
}

Vec2 Domain::outward_normal(std::size_t i) const { return unit_vec(node_angle(i)); }

double Domain::exit_distance(Vec2 x, Vec2 theta) const {
  double r2 = norm2(x);
  double R2 = radius_ * radius_;
  if (r2 > R2 * (1.0 + 1e-12))
    throw std::domain_error("exit_distance: point outside the closed disk");
  double b = dot(x, theta);
  double disc = b * b + R2 - r2;
  if (disc < 0.0) disc = 0.0;  // rounding, point numerically on the boundary
  return -b + std::sqrt(disc);
}

RayClass Domain::classify(Vec2 x, Vec2 theta) const {
  double r = norm(x);
  if (std::abs(r - radius_) > 1e-12 * radius_)
    throw std::domain_error("classify: point is not on the boundary");
  double d = dot(theta, x) / r;  // theta . n(x)
  if (std::abs(d) <= tangency_band_) return RayClass::tangent;
  return d > 0.0 ? RayClass::outflow : RayClass::inflow;
}

std::vector<Complex> spectral_dds(const std::vector<Complex>& values) {
  const std::size_t m = values.size();
  if (m < 4 || m % 2 != 0)
    throw std::invalid_argument("spectral_dds: node count must be even and >= 4");

  // DFT, multiply by ik (Nyquist mode dropped), inverse DFT.
  std::vector<Complex> coef(m);
  for (std::size_t k = 0; k < m; ++k) {
    Complex acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double ang = -kTwoPi * double(k) * double(i) / double(m);
      acc += values[i] * Complex{std::cos(ang), std::sin(ang)};
    }
    coef[k] = acc / double(m);
  }
  std::vector<Complex> out(m, Complex{0.0, 0.0});
  const std::size_t half = m / 2;
  for (std::size_t i = 0; i < m; ++i) {
    Complex acc = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      if (k == half) continue;  // derivative of the Nyquist mode is dropped
      long freq = (k < half) ? long(k) : long(k) - long(m);
      double ang = kTwoPi * double(k) * double(i) / double(m);
      acc += coef[k] * Complex{0.0, double(freq)} * Complex{std::cos(ang), std::sin(ang)};
    }
    out[i] = acc;
  }
  return out;
}

std::vector<Complex> boundary_derivative(const Domain& dom,
                                         const std::vector<Complex>& values) {
  if (values.size() != dom.nodes())
    throw std::invalid_argument("boundary_derivative: values size != boundary node count");
  std::vector<Complex> out = spectral_dds(values);
  for (Complex& v : out) v /= dom.radius();
  return out;
}

}  // namespace tensoray
