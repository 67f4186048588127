#pragma once

// File formats: fan data as CSV and as a versioned little-endian binary,
// mode sequences as CSV, residual reports as JSON, tensor grids as CSV with
// a gnuplot script, and the attenuation pack as a binary artifact. All
// writers go through a temp-file + rename so outputs appear atomically.

#include <filesystem>
#include <string>

#include "tensoray/attenuation.hpp"
#include "tensoray/modes.hpp"
#include "tensoray/transport.hpp"

#include "json.hpp"

namespace tensoray {

// write `content` to path atomically (temp file + rename)
void atomic_write(const std::filesystem::path& path, const std::string& content);

void write_fan_csv(const std::filesystem::path& path, const FanData& fan);
FanData read_fan_csv(const std::filesystem::path& path);

void write_fan_binary(const std::filesystem::path& path, const FanData& fan);
FanData read_fan_binary(const std::filesystem::path& path);

// sniff by magic bytes: binary if they match, CSV otherwise
FanData read_fan_auto(const std::filesystem::path& path);

void write_modes_csv(const std::filesystem::path& path, const ModeSequences& ms);

void write_tensor_csv(const std::filesystem::path& path, const GriddedTensor& t);
// gnuplot script drawing component heat maps from the CSV
void write_tensor_plot_script(const std::filesystem::path& path, const std::string& csv_name);

void write_pack_binary(const std::filesystem::path& path, const AttenuationPack& pack);
// reads arrays and grids; the attenuation coefficient itself is not
// serialized (packs are keyed to their generating config)
struct PackArtifact {
  std::size_t M = 0, K = 0;
  int N = 0;
  double radius = 0.0, grid_step = 0.0, grid_rmax = 0.0;
  std::vector<Complex> h_boundary;
  std::vector<Complex> boundary_eh;
};
PackArtifact read_pack_binary(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace tensoray
