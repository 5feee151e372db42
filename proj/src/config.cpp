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

#include "repqed/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>

#include <fmt/core.h>
#include <json.hpp>
#include <openssl/evp.h>

namespace repqed {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr std::array<std::string_view, 5> kQubitNames{"D_t", "D_m", "D_b", "A_t", "A_b"};

std::vector<double> linspace(double start, double stop, std::size_t n) {
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(i + 1 == n && n > 1 ? stop
                             : start + (stop - start) * static_cast<double>(i) /
                                           static_cast<double>(n - 1));
  }
  return out;
}

class Reader {
 public:
  explicit Reader(std::string_view source) : source_(source) {}

  [[noreturn]] void fail(const std::string& path, const std::string& msg) const {
    throw ConfigError(fmt::format("{}: field '{}': {}", source_, path, msg));
  }

  static std::string join(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : fmt::format("{}.{}", path, key);
  }

  void expect_object(const json& j, const std::string& path,
                     std::initializer_list<std::string_view> allowed) const {
    if (!j.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
    for (const auto& [key, value] : j.items()) {
      bool known = false;
      for (auto a : allowed) known = known || a == key;
      if (!known) fail(join(path, key), "unknown field");
    }
  }

  double number(const json& j, const std::string& path) const {
    if (!j.is_number()) fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "expected a finite number");
    return v;
  }

  double probability(const json& j, const std::string& path) const {
    const double v = number(j, path);
    if (v < 0.0 || v > 1.0) fail(path, fmt::format("{} is outside [0, 1]", v));
    return v;
  }

  bool boolean(const json& j, const std::string& path) const {
    if (!j.is_boolean()) fail(path, "expected true or false");
    return j.get<bool>();
  }

  std::string string(const json& j, const std::string& path) const {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
  }

  std::uint64_t count(const json& j, const std::string& path) const {
    if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() &&
                                   j.get<std::int64_t>() < 0)) {
      fail(path, "expected a non-negative integer");
    }
    return j.get<std::uint64_t>();
  }

  // null or absent means no decay
  double coherence_time(const json& obj, std::string_view key, const std::string& path) const {
    const std::string p = join(path, key);
    if (!obj.contains(key) || obj.at(std::string(key)).is_null()) {
      return std::numeric_limits<double>::infinity();
    }
    const double v = number(obj.at(std::string(key)), p);
    if (!(v > 0.0)) fail(p, "coherence time must be positive");
    return v;
  }

  std::vector<double> grid(const json& j, const std::string& path) const {
    std::vector<double> out;
    if (j.is_array()) {
      for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(number(j[i], fmt::format("{}[{}]", path, i)));
      }
    } else if (j.is_object()) {
      expect_object(j, path, {"start", "stop", "count"});
      for (auto key : {"start", "stop", "count"}) {
        if (!j.contains(key)) fail(join(path, key), "missing");
      }
      const double start = number(j.at("start"), join(path, "start"));
      const double stop = number(j.at("stop"), join(path, "stop"));
      const auto n = count(j.at("count"), join(path, "count"));
      out = linspace(start, stop, n);
    } else {
      fail(path, "expected a list of numbers or {start, stop, count}");
    }
    if (out.empty()) fail(path, "grid is empty");
    return out;
  }

 private:
  std::string_view source_;
};

void parse_noise(const Reader& r, const json& j, NoiseSettings& n) {
  r.expect_object(j, "noise", {"decoherence", "readout", "initial_excitation"});
  if (j.contains("decoherence")) {
    const auto& d = j.at("decoherence");
    r.expect_object(d, "noise.decoherence", {"enabled", "qubits"});
    if (d.contains("enabled")) {
      n.decoherence_enabled = r.boolean(d.at("enabled"), "noise.decoherence.enabled");
    }
    if (d.contains("qubits")) {
      const auto& qs = d.at("qubits");
      r.expect_object(qs, "noise.decoherence.qubits",
                      {kQubitNames[0], kQubitNames[1], kQubitNames[2], kQubitNames[3],
                       kQubitNames[4]});
      for (std::size_t i = 0; i < kQubitNames.size(); ++i) {
        const std::string key(kQubitNames[i]);
        if (!qs.contains(key)) continue;
        const std::string path = "noise.decoherence.qubits." + key;
        const auto& q = qs.at(key);
        r.expect_object(q, path, {"t1_ns", "t2_ns"});
        n.coherence[i].t1_ns = r.coherence_time(q, "t1_ns", path);
        n.coherence[i].t2_ns = r.coherence_time(q, "t2_ns", path);
        if (n.coherence[i].t2_ns > 2.0 * n.coherence[i].t1_ns) {
          r.fail(path + ".t2_ns", "T2 exceeds 2*T1");
        }
      }
    }
  }
  if (j.contains("readout")) {
    const auto& ro = j.at("readout");
    r.expect_object(ro, "noise.readout", {"enabled", "eps_t", "eps_b", "veto_t", "veto_b"});
    if (ro.contains("enabled")) n.readout_enabled = r.boolean(ro.at("enabled"), "noise.readout.enabled");
    const auto prob = [&](const char* key, double& dst) {
      if (ro.contains(key)) dst = r.probability(ro.at(key), fmt::format("noise.readout.{}", key));
    };
    prob("eps_t", n.eps_t);
    prob("eps_b", n.eps_b);
    prob("veto_t", n.veto_t);
    prob("veto_b", n.veto_b);
    if (n.eps_t + n.veto_t > 1.0) r.fail("noise.readout.veto_t", "eps_t + veto_t exceeds 1");
    if (n.eps_b + n.veto_b > 1.0) r.fail("noise.readout.veto_b", "eps_b + veto_b exceeds 1");
  }
  if (j.contains("initial_excitation")) {
    n.initial_excitation = r.probability(j.at("initial_excitation"), "noise.initial_excitation");
  }
}

ordered_json time_json(double t) {
  return std::isfinite(t) ? ordered_json(t) : ordered_json(nullptr);
}

}  // namespace

std::string_view to_string(PostselectionMode m) {
  return m == PostselectionMode::Strong ? "strong" : "optimal-threshold";
}

void ExperimentConfig::validate() const {
  const Reader r("config");
  if (phi_grid.empty()) r.fail("grids.phi", "grid is empty");
  if (p_grid.empty()) r.fail("grids.p_err", "grid is empty");
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    if (!(p_grid[i] >= 0.0 && p_grid[i] <= 1.0)) {
      r.fail(fmt::format("grids.p_err[{}]", i), fmt::format("{} is outside [0, 1]", p_grid[i]));
    }
  }
  for (std::size_t i = 0; i < phi_grid.size(); ++i) {
    if (!std::isfinite(phi_grid[i])) r.fail(fmt::format("grids.phi[{}]", i), "not finite");
  }
  if (shots > 0 && !seed) r.fail("seed", "a seed is required when shots > 0");
  try {
    noise_config().validate();
  } catch (const std::exception& e) {
    r.fail("noise", e.what());
  }
}

NoiseConfig ExperimentConfig::noise_config() const {
  NoiseConfig out;
  out.decoherence.enabled = noise.decoherence_enabled;
  out.decoherence.qubits.assign(noise.coherence.begin(), noise.coherence.end());
  if (noise.readout_enabled) {
    const bool strong = postselection == PostselectionMode::Strong;
    out.readout = ReadoutModel::ancillas(noise.eps_t, noise.eps_b, strong ? noise.veto_t : 0.0,
                                         strong ? noise.veto_b : 0.0);
  }
  out.initial_excitation = noise.initial_excitation;
  return out;
}

void ExperimentConfig::make_ideal() {
  noise = NoiseSettings{};
}

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  cfg.phi_grid = linspace(0.0, 2.0 * std::numbers::pi, 13);
  cfg.p_grid = linspace(0.0, 1.0, 21);
  return cfg;
}

ExperimentConfig parse_config(std::string_view text, std::string_view source) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    if (auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    throw ConfigError(fmt::format("{}:{}:{}: {}", source, line, col, what));
  }

  const Reader r(source);
  r.expect_object(j, "", {"schema_version", "name", "seed", "shots", "postselection",
                          "error_mode", "grids", "noise", "output"});
  if (!j.contains("schema_version")) r.fail("schema_version", "missing");
  if (const auto v = r.count(j.at("schema_version"), "schema_version"); v != kSchemaVersion) {
    r.fail("schema_version", fmt::format("unsupported version {} (expected {})", v, kSchemaVersion));
  }

  ExperimentConfig cfg = default_config();
  if (j.contains("name")) cfg.name = r.string(j.at("name"), "name");
  if (j.contains("seed") && !j.at("seed").is_null()) cfg.seed = r.count(j.at("seed"), "seed");
  if (j.contains("shots")) cfg.shots = r.count(j.at("shots"), "shots");
  if (j.contains("postselection")) {
    const auto s = r.string(j.at("postselection"), "postselection");
    if (s == "optimal-threshold") {
      cfg.postselection = PostselectionMode::OptimalThreshold;
    } else if (s == "strong") {
      cfg.postselection = PostselectionMode::Strong;
    } else {
      r.fail("postselection", fmt::format("'{}' is not optimal-threshold or strong", s));
    }
  }
  if (j.contains("error_mode")) {
    const auto s = r.string(j.at("error_mode"), "error_mode");
    if (s == "coherent") {
      cfg.error_mode = ErrorMode::Coherent;
    } else if (s == "incoherent") {
      cfg.error_mode = ErrorMode::Incoherent;
    } else {
      r.fail("error_mode", fmt::format("'{}' is not coherent or incoherent", s));
    }
  }
  if (j.contains("grids")) {
    const auto& g = j.at("grids");
    r.expect_object(g, "grids", {"phi", "p_err"});
    if (g.contains("phi")) cfg.phi_grid = r.grid(g.at("phi"), "grids.phi");
    if (g.contains("p_err")) cfg.p_grid = r.grid(g.at("p_err"), "grids.p_err");
  }
  if (j.contains("noise")) parse_noise(r, j.at("noise"), cfg.noise);
  if (j.contains("output")) {
    const auto& o = j.at("output");
    r.expect_object(o, "output", {"dir"});
    if (o.contains("dir")) cfg.out_dir = r.string(o.at("dir"), "output.dir");
  }

  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    std::string msg = e.what();
    if (msg.rfind("config: ", 0) == 0) msg = fmt::format("{}: {}", source, msg.substr(8));
    throw ConfigError(msg);
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("{}: cannot open config file", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

std::string canonical_json(const ExperimentConfig& cfg) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["name"] = cfg.name;
  j["seed"] = cfg.seed ? ordered_json(*cfg.seed) : ordered_json(nullptr);
  j["shots"] = cfg.shots;
  j["postselection"] = std::string(to_string(cfg.postselection));
  j["error_mode"] = cfg.error_mode == ErrorMode::Coherent ? "coherent" : "incoherent";
  j["grids"]["phi"] = cfg.phi_grid;
  j["grids"]["p_err"] = cfg.p_grid;

  auto& dec = j["noise"]["decoherence"];
  dec["enabled"] = cfg.noise.decoherence_enabled;
  for (std::size_t i = 0; i < kQubitNames.size(); ++i) {
    auto& q = dec["qubits"][std::string(kQubitNames[i])];
    q["t1_ns"] = time_json(cfg.noise.coherence[i].t1_ns);
    q["t2_ns"] = time_json(cfg.noise.coherence[i].t2_ns);
  }
  auto& ro = j["noise"]["readout"];
  ro["enabled"] = cfg.noise.readout_enabled;
  ro["eps_t"] = cfg.noise.eps_t;
  ro["eps_b"] = cfg.noise.eps_b;
  ro["veto_t"] = cfg.noise.veto_t;
  ro["veto_b"] = cfg.noise.veto_b;
  j["noise"]["initial_excitation"] = cfg.noise.initial_excitation;
  return j.dump();
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", digest[i]);
  return out;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot read {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

std::string config_hash(const ExperimentConfig& cfg) { return sha256_hex(canonical_json(cfg)); }

}  // namespace repqed
