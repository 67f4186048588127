#include "tensoray/config.hpp"

#include <fstream>
#include <set>

#include "tensoray/errors.hpp"

namespace tensoray {

using nlohmann::json;

PackConfig RunConfig::pack_config() const {
  PackConfig pc;
  pc.h_att = h_att;
  pc.radon_step = radon_step;
  pc.padding = padding;
  pc.mass_tol = tol.mode_mass;
  return pc;
}

json RunConfig::echo() const {
  return json{{"radius", radius},
              {"M", M},
              {"K", K},
              {"N", N},
              {"grid_step", grid_step},
              {"margin", margin},
              {"h_ray", h_ray},
              {"h_att", h_att},
              {"radon_step", radon_step},
              {"padding", padding},
              {"tangency_band", tangency_band},
              {"tolerances",
               {{"range", tol.range},
                {"conv", tol.conv},
                {"neg_modes", tol.neg_modes},
                {"min_a", tol.min_a},
                {"mode_mass", tol.mode_mass}}},
              {"phantom", phantom},
              {"attenuation", attenuation},
              {"psi", psi_rule},
              {"out", out_dir},
              {"seed", seed}};
}

namespace {

template <class T>
void read_key(const json& j, const char* key, T& dst) {
  if (j.contains(key)) {
    try {
      dst = j.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(std::string("config: bad value for '") + key + "'");
    }
  }
}

}  // namespace

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  static const std::set<std::string> known = {
      "radius", "M", "K", "N", "grid_step", "margin", "h_ray", "h_att", "radon_step",
      "padding", "tangency_band", "tolerances", "phantom", "attenuation", "psi", "out", "seed"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw ConfigError("config: unknown key '" + it.key() + "'");

  RunConfig c;
  read_key(j, "radius", c.radius);
  read_key(j, "M", c.M);
  read_key(j, "K", c.K);
  read_key(j, "N", c.N);
  read_key(j, "grid_step", c.grid_step);
  read_key(j, "margin", c.margin);
  read_key(j, "h_ray", c.h_ray);
  read_key(j, "h_att", c.h_att);
  read_key(j, "radon_step", c.radon_step);
  read_key(j, "padding", c.padding);
  read_key(j, "tangency_band", c.tangency_band);
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    static const std::set<std::string> tknown = {"range", "conv", "neg_modes", "min_a",
                                                 "mode_mass"};
    for (auto it = t.begin(); it != t.end(); ++it)
      if (!tknown.count(it.key()))
        throw ConfigError("config: unknown tolerance '" + it.key() + "'");
    read_key(t, "range", c.tol.range);
    read_key(t, "conv", c.tol.conv);
    read_key(t, "neg_modes", c.tol.neg_modes);
    read_key(t, "min_a", c.tol.min_a);
    read_key(t, "mode_mass", c.tol.mode_mass);
  }
  if (j.contains("phantom")) c.phantom = j.at("phantom");
  if (j.contains("attenuation")) c.attenuation = j.at("attenuation");
  read_key(j, "psi", c.psi_rule);
  read_key(j, "out", c.out_dir);
  read_key(j, "seed", c.seed);

  if (c.radius <= 0.0) throw ConfigError("config: radius must be positive");
  if (c.M % 2 != 0 || c.M < 8) throw ConfigError("config: M must be even and >= 8");
  if (c.K % 2 != 0) throw ConfigError("config: K must be even");
  if (c.N < 4) throw ConfigError("config: N must be >= 4");
  if (c.K < std::size_t(2 * c.N + 2)) throw ConfigError("config: K must be >= 2N+2");
  if (c.grid_step <= 0.0 || c.margin <= 0.0 || c.margin >= c.radius)
    throw ConfigError("config: grid_step and margin must be positive, margin < radius");
  if (c.h_ray <= 0.0 || c.h_att <= 0.0 || c.radon_step <= 0.0)
    throw ConfigError("config: quadrature steps must be positive");
  for (double t : {c.tol.range, c.tol.conv, c.tol.neg_modes, c.tol.min_a, c.tol.mode_mass})
    if (t <= 0.0) throw ConfigError("config: tolerances must be positive");
  if (c.psi_rule != "poisson" && c.psi_rule != "radial_blend")
    throw ConfigError("config: psi must be 'poisson' or 'radial_blend'");
  return c;
}

RunConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return parse_config(j);
}

namespace {

Vec2 read_center(const json& j) {
  if (!j.contains("center")) return {0.0, 0.0};
  const json& c = j.at("center");
  if (!c.is_array() || c.size() != 2) throw ConfigError("descriptor: center must be [x, y]");
  return {c.at(0).get<double>(), c.at(1).get<double>()};
}

BumpComponent read_bump(const json& j) {
  BumpComponent b;
  if (j.is_null()) return b;
  read_key(j, "amplitude", b.amplitude);
  read_key(j, "rho", b.rho);
  b.center = read_center(j);
  return b;
}

}  // namespace

std::shared_ptr<const TensorField> make_phantom(const json& j, double radius) {
  if (j.is_null()) throw ConfigError("phantom: descriptor required");
  std::string type = j.value("type", "");
  try {
    if (type == "zero") {
      BumpComponent z;  // amplitude 0
      return std::make_shared<BumpTensor>(z, z, z, radius);
    }
    if (type == "gaussian_isotropic") {
      double sigma = j.value("sigma", 0.3);
      double amp = j.value("amplitude", 1.0);
      return std::make_shared<IsotropicGaussian>(sigma, read_center(j), amp);
    }
    if (type == "bump_tensor") {
      BumpComponent c11 = read_bump(j.value("f11", json())),
                    c12 = read_bump(j.value("f12", json())),
                    c22 = read_bump(j.value("f22", json()));
      return std::make_shared<BumpTensor>(c11, c12, c22, radius);
    }
    if (type == "potential") {
      // v = (A (1 - |x|^2/R^2)^p, 0), the reference null-space generator
      double amp = j.value("amplitude", 1.0);
      int p = j.value("power", 2);
      if (p < 2) throw ConfigError("phantom: potential power must be >= 2");
      VectorFieldDesc v;
      double R2 = radius * radius;
      v.value = [amp, p, R2](Vec2 x) -> Vec2 {
        double w = 1.0 - norm2(x) / R2;
        if (w <= 0.0) return {0.0, 0.0};
        return {amp * std::pow(w, p), 0.0};
      };
      v.jacobian = [amp, p, R2](Vec2 x) -> std::array<double, 4> {
        double w = 1.0 - norm2(x) / R2;
        if (w <= 0.0) return {0.0, 0.0, 0.0, 0.0};
        double dwp = amp * double(p) * std::pow(w, p - 1) * (-2.0 / R2);
        return {dwp * x.x, dwp * x.y, 0.0, 0.0};
      };
      return std::make_shared<PotentialTensor>(v, radius);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("phantom: ") + e.what());
  }
  throw ConfigError("phantom: unknown type '" + type + "'");
}

std::shared_ptr<const Attenuation> make_attenuation(const json& j, double radius) {
  if (j.is_null()) return nullptr;
  std::string type = j.value("type", "");
  try {
    if (type == "none") return nullptr;
    if (type == "constant") {
      double a0 = j.value("a0", 0.5);
      return std::make_shared<ConstantAttenuation>(a0, radius);
    }
    if (type == "gaussian") {
      double amp = j.value("amplitude", 0.5);
      double sigma = j.value("sigma", 1.0);
      return std::make_shared<GaussianAttenuation>(amp, sigma, read_center(j), radius);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("attenuation: ") + e.what());
  }
  throw ConfigError("attenuation: unknown type '" + type + "'");
}

}  // namespace tensoray
