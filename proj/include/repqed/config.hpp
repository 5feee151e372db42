// Copyright 2026 The repqed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "repqed/noise.hpp"

namespace repqed {

inline constexpr int kSchemaVersion = 1;

/// Malformed or invalid configuration. The message names the source location
/// or the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PostselectionMode { OptimalThreshold, Strong };
std::string_view to_string(PostselectionMode m);

/// Noise parameters as written in the config file.
struct NoiseSettings {
  bool decoherence_enabled = false;
  std::array<QubitCoherence, 5> coherence{};  // D_t, D_m, D_b, A_t, A_b
  bool readout_enabled = false;
  double eps_t = 0.0;
  double eps_b = 0.0;
  double veto_t = 0.0;
  double veto_b = 0.0;
  double initial_excitation = 0.0;
};

struct ExperimentConfig {
  std::string name = "default";
  std::optional<std::uint64_t> seed;
  std::size_t shots = 0;
  PostselectionMode postselection = PostselectionMode::OptimalThreshold;
  ErrorMode error_mode = ErrorMode::Incoherent;
  std::vector<double> phi_grid;
  std::vector<double> p_grid;
  NoiseSettings noise;
  std::string out_dir = "out";

  /// Throws ConfigError on a violated invariant.
  void validate() const;
  /// Resolved noise model. Vetoes apply only under strong postselection.
  NoiseConfig noise_config() const;
  /// Zeroes every noise source.
  void make_ideal();
};

/// 13 φ points over [0, 2π], 21 p points over [0, 1], ideal noise.
ExperimentConfig default_config();

/// Parses JSON config text. `source` is used in diagnostics.
ExperimentConfig parse_config(std::string_view text, std::string_view source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Fully resolved config (explicit grids, all fields) as compact JSON.
std::string canonical_json(const ExperimentConfig& cfg);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

/// sha256_hex(canonical_json(cfg)).
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace repqed
