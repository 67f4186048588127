#pragma once

// Forward (attenuated) ray transform by composite Simpson quadrature along
// chords, the interior transport solution, and fan data assembly on the
// boundary x direction grid.

#include <string>
#include <vector>

#include "tensoray/fields.hpp"
#include "tensoray/geometry.hpp"

namespace tensoray {

// Real samples g(zeta_i, theta_j) on the M x K boundary/angle grid; zero on
// the inflow and tangent parts.
struct FanData {
  std::size_t M = 0;
  std::size_t K = 0;
  double radius = 1.0;
  std::string attenuation_tag = "none";
  std::vector<double> values;  // row-major [i*K + j]

  FanData() = default;
  FanData(std::size_t m, std::size_t k, double r, std::string tag = "none");
  double& at(std::size_t i, std::size_t j) { return values[i * K + j]; }
  double at(std::size_t i, std::size_t j) const { return values[i * K + j]; }
  double angle(std::size_t j) const;
};

// Ray transform of <F theta, theta> over the chord ending at the boundary
// point x with direction theta in the outflow set; Simpson rule with step
// <= h_ray, endpoints snapped to the exact chord exit. Throws
// std::invalid_argument unless classify(x, theta) is outflow.
double xray(const TensorField& F, const Domain& dom, Vec2 x, Vec2 theta, double h_ray);

// Attenuated variant: the cumulative attenuation integral along the ray is
// accumulated by the trapezoid rule on the same nodes as the outer Simpson
// sum.
double att_xray(const TensorField& F, const Attenuation& a, const Domain& dom, Vec2 x,
                Vec2 theta, double h_ray);

// Transport solution u(x, theta) with vanishing inflow trace, for x in the
// closed disk. On the outflow boundary this coincides with (att_)xray.
// Pass a = nullptr for the non-attenuated problem.
double transport_solution(const TensorField& F, const Attenuation* a, const Domain& dom,
                          Vec2 x, Vec2 theta, double h_ray);

// Fills the outflow entries with (att_)xray values, zero elsewhere.
// K must be even.
FanData make_fan(const TensorField& F, const Attenuation* a, const Domain& dom, std::size_t K,
                 double h_ray);

// Check the structural fan invariants (zero off the outflow set, all values
// finite); throws std::invalid_argument on violation.
void validate_fan(const FanData& fan, const Domain& dom);

}  // namespace tensoray
