#pragma once

// Run configuration: one JSON file plus flag overrides drives every CLI
// command; the effective config is echoed into all output metadata.

#include <filesystem>
#include <memory>
#include <string>

#include "tensoray/attenuation.hpp"
#include "tensoray/fields.hpp"

#include "json.hpp"

namespace tensoray {

struct Tolerances {
  double range = 5e-3;      // (I+iH) residual threshold
  double conv = 1e-8;       // alpha*beta = delta
  double neg_modes = 1e-6;  // negative modes of e^{-h}
  double min_a = 1e-6;      // guard for the division by a
  double mode_mass = 1e-4;  // discarded angular mass failing the pack build
};

struct RunConfig {
  double radius = 1.0;
  std::size_t M = 256;
  std::size_t K = 256;
  int N = 24;
  double grid_step = 0.02;   // interior grid spacing
  double margin = 0.1;       // evaluation margin (absolute length)
  double h_ray = 1e-3;       // ray quadrature step
  double h_att = 2e-3;       // attenuation quadrature step
  double radon_step = 1.0 / 256.0;
  double padding = 8.0;      // Hilbert grid half-length / support radius
  double tangency_band = 1e-9;
  Tolerances tol;
  nlohmann::json phantom;      // descriptor; may be null
  nlohmann::json attenuation;  // descriptor; may be null
  std::string psi_rule = "poisson";  // "poisson" | "radial_blend" (free case)
  std::string out_dir = "out";
  std::uint64_t seed = 1;

  Domain domain() const { return Domain(radius, M, tangency_band); }
  std::shared_ptr<const DiskGrid> make_grid() const {
    return std::make_shared<DiskGrid>(grid_step, radius - margin);
  }
  PackConfig pack_config() const;
  nlohmann::json echo() const;  // the effective config as JSON
};

// Parse and validate; unknown keys are rejected so typos do not silently
// fall back to defaults. Throws ConfigError.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config_file(const std::filesystem::path& path);

// Phantom descriptor -> tensor field. Supported types: gaussian_isotropic,
// bump_tensor, potential, zero. Throws ConfigError on malformed input.
std::shared_ptr<const TensorField> make_phantom(const nlohmann::json& j, double radius);

// Attenuation descriptor -> coefficient. Supported types: constant,
// gaussian. Returns nullptr for null input (non-attenuated run).
std::shared_ptr<const Attenuation> make_attenuation(const nlohmann::json& j, double radius);

}  // namespace tensoray
