#include "tensoray/transport.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tensoray/errors.hpp"
#include "tensoray/parallel.hpp"

namespace tensoray {

FanData::FanData(std::size_t m, std::size_t k, double r, std::string tag)
    : M(m), K(k), radius(r), attenuation_tag(std::move(tag)), values(m * k, 0.0) {
  if (k % 2 != 0) throw ConfigError("FanData: angle count K must be even");
}

double FanData::angle(std::size_t j) const { return 2.0 * std::numbers::pi * double(j) / double(K); }

namespace {

// Simpson sum of source * exp(-cumulative attenuation) over the chord
// [x - tau*theta, x]. The attenuation exponent uses the trapezoid rule on
// the same nodes.
double integrate_ray(const TensorField& F, const Attenuation* a, Vec2 x, Vec2 theta, double tau,
                     double h_ray) {
  if (tau <= 0.0) return 0.0;
  std::size_t n = std::size_t(std::ceil(tau / h_ray));
  if (n < 2) n = 2;
  if (n % 2 != 0) ++n;
  double h = tau / double(n);

  std::vector<double> weight;
  if (a) {
    std::vector<double> av(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      double t = -tau + h * double(k);
      av[k] = a->value(x + t * theta);
    }
    weight.assign(n + 1, 0.0);  // exp(-int_{t_k}^0 a)
    double cum = 0.0;
    weight[n] = 1.0;
    for (std::size_t k = n; k-- > 0;) {
      cum += 0.5 * h * (av[k] + av[k + 1]);
      weight[k] = std::exp(-cum);
    }
  }

  const double ct = theta.x, st = theta.y;  // theta is a unit vector
  double sum = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    double t = -tau + h * double(k);
    Vec2 p = x + t * theta;
    double f = F.f11(p) * ct * ct + 2.0 * F.f12(p) * ct * st + F.f22(p) * st * st;
    double w = (k == 0 || k == n) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    sum += w * f * (a ? weight[k] : 1.0);
  }
  return h / 3.0 * sum;
}

}  // namespace

double xray(const TensorField& F, const Domain& dom, Vec2 x, Vec2 theta, double h_ray) {
  if (dom.classify(x, theta) != RayClass::outflow)
    throw std::invalid_argument("xray: (x, theta) must be in the outflow set");
  double tau = dom.exit_distance(x, -theta);
  return integrate_ray(F, nullptr, x, theta, tau, h_ray);
}

double att_xray(const TensorField& F, const Attenuation& a, const Domain& dom, Vec2 x,
                Vec2 theta, double h_ray) {
  if (dom.classify(x, theta) != RayClass::outflow)
    throw std::invalid_argument("att_xray: (x, theta) must be in the outflow set");
  double tau = dom.exit_distance(x, -theta);
  return integrate_ray(F, &a, x, theta, tau, h_ray);
}

double transport_solution(const TensorField& F, const Attenuation* a, const Domain& dom,
                          Vec2 x, Vec2 theta, double h_ray) {
  double tau = dom.exit_distance(x, -theta);
  return integrate_ray(F, a, x, theta, tau, h_ray);
}

FanData make_fan(const TensorField& F, const Attenuation* a, const Domain& dom, std::size_t K,
                 double h_ray) {
  if (K % 2 != 0) throw ConfigError("make_fan: K must be even");
  FanData fan(dom.nodes(), K, dom.radius(), a ? a->tag() : "none");
  parallel_for(dom.nodes(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      Vec2 zeta = dom.boundary_point(i);
      for (std::size_t j = 0; j < K; ++j) {
        Vec2 theta = unit_vec(fan.angle(j));
        if (dom.classify(zeta, theta) != RayClass::outflow) continue;  // stays 0
        double tau = dom.exit_distance(zeta, -theta);
        fan.at(i, j) = integrate_ray(F, a, zeta, theta, tau, h_ray);
      }
    }
  });
  return fan;
}

void validate_fan(const FanData& fan, const Domain& dom) {
  if (fan.M != dom.nodes()) throw std::invalid_argument("validate_fan: M mismatch");
  for (std::size_t i = 0; i < fan.M; ++i) {
    Vec2 zeta = dom.boundary_point(i);
    for (std::size_t j = 0; j < fan.K; ++j) {
      double v = fan.at(i, j);
      if (!std::isfinite(v)) throw std::invalid_argument("validate_fan: non-finite value");
      if (dom.classify(zeta, unit_vec(fan.angle(j))) != RayClass::outflow && v != 0.0)
        throw std::invalid_argument("validate_fan: nonzero value off the outflow set");
    }
  }
}

}  // namespace tensoray
