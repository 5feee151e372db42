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

// repqed: run repetition-code experiments and write CSV/JSON results.
//
//   repqed parity-check --config cfg.json --out results/
//   repqed qed-sweep --ideal
//   repqed verify results/
//
// Exit codes: 0 success, 1 verification mismatch or I/O failure,
// 2 configuration or usage error, 3 physicality-check failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "repqed/config.hpp"
#include "repqed/experiments.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitConfig = 2;
constexpr int kExitPhysicality = 3;

struct Flags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> shots;
  bool ideal = false;
  bool timing = false;
};

repqed::ExperimentConfig resolve(const Flags& f) {
  repqed::ExperimentConfig cfg =
      f.config.empty() ? repqed::default_config() : repqed::load_config(f.config);
  if (f.seed) cfg.seed = *f.seed;
  if (f.shots) cfg.shots = *f.shots;
  if (!f.out.empty()) cfg.out_dir = f.out;
  if (f.ideal) cfg.make_ideal();
  cfg.validate();
  return cfg;
}

void report(const std::string& command, const repqed::RunSummary& s) {
  fmt::print("{}: wrote {} data files and {}\n", command, s.files.size(), s.manifest.string());
  for (const auto& [k, v] : s.scalars) fmt::print("  {} = {}\n", k, v);
  fmt::print("  wall_clock_s = {:.3f}\n", s.wall_clock_s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Density-matrix simulator for stabilizer-based error detection on the "
               "three-qubit repetition code"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(repqed::kToolVersion));

  Flags flags;
  std::string verify_dir;
  using Runner = repqed::RunSummary (*)(const repqed::ExperimentConfig&, const repqed::RunOptions&);
  const std::pair<const char*, Runner> commands[] = {
      {"parity-check", repqed::cmd_parity_check},
      {"entangle", repqed::cmd_entangle},
      {"qed-sweep", repqed::cmd_qed_sweep},
      {"error-table", repqed::cmd_error_table},
  };
  const std::map<std::string, std::string> descriptions{
      {"parity-check", "double-parity outcome distributions for the eight computational inputs"},
      {"entangle", "Bell witnesses and Mermin values of measurement-generated entanglement"},
      {"qed-sweep", "three-qubit and logical fidelity versus error probability"},
      {"error-table", "logical fidelity for every deterministic two-round error combination"},
  };

  for (const auto& [name, runner] : commands) {
    auto* sub = app.add_subcommand(name, descriptions.at(name));
    sub->add_option("--config", flags.config, "experiment config (JSON)")->check(CLI::ExistingFile);
    sub->add_option("--out", flags.out, "output directory (overrides output.dir)");
    sub->add_option("--seed", flags.seed, "random seed (overrides config)");
    sub->add_option("--shots", flags.shots, "shots per input for sampled histograms");
    sub->add_flag("--ideal", flags.ideal, "zero out every noise source");
    sub->add_flag("--timing", flags.timing, "record wall-clock time in the manifest");
  }
  auto* verify = app.add_subcommand("verify", "check manifests against their data files");
  verify->add_option("dir", verify_dir, "results directory");
  verify->add_option("--out", flags.out, "results directory");
  verify->add_option("--config", flags.config, "config whose output.dir to check")
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (verify->parsed()) {
      std::string dir = !verify_dir.empty() ? verify_dir : flags.out;
      if (dir.empty()) dir = resolve(flags).out_dir;
      const auto r = repqed::verify(dir);
      for (const auto& p : r.problems) fmt::print(stderr, "verify: {}\n", p);
      if (!r.ok()) return kExitMismatch;
      fmt::print("verify: {} manifests, {} files consistent\n", r.manifests, r.files);
      return kExitOk;
    }
    for (const auto& [name, runner] : commands) {
      if (!app.got_subcommand(name)) continue;
      const repqed::ExperimentConfig cfg = resolve(flags);
      report(name, runner(cfg, {cfg.out_dir, flags.timing}));
    }
    return kExitOk;
  } catch (const repqed::ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kExitConfig;
  } catch (const repqed::PhysicalityError& e) {
    fmt::print(stderr, "physicality check failed: {}\n", e.what());
    return kExitPhysicality;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitMismatch;
  }
}
