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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "repqed/config.hpp"
#include "repqed/executor.hpp"
#include "repqed/metrics.hpp"

namespace repqed {

inline constexpr std::string_view kToolVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Parity characterization

struct ParityCheckResult {
  /// Exact declared-syndrome distribution per data basis input 0..7.
  std::array<SyndromeDistribution, 8> exact;
  /// Sampled counts per input; empty when shots = 0.
  std::array<Histogram, 8> histograms;
  double assignment_fidelity = 0.0;
  std::optional<double> sampled_assignment_fidelity;
  double retained_fraction = 1.0;
};

ParityCheckResult parity_check(const ExperimentConfig& cfg);

/// Pearson χ² of counts against probabilities over the bins with nonzero
/// expected mass. Counts in zero-probability bins make the statistic infinite.
struct ChiSquare {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
};
ChiSquare chi_square(const Histogram& counts, const SyndromeDistribution& probabilities);

// ---------------------------------------------------------------------------
// Entanglement by measurement

struct WitnessRow {
  double phi = 0.0;
  std::string stabilizer;  // "top" or "bottom"
  char postselect = 'e';
  double probability = 0.0;
  WitnessSet w;
};

struct MerminRow {
  double phi = 0.0;
  Syndrome syndrome;
  double probability = 0.0;
  double mermin = 0.0;            // raw branch state
  double mermin_corrected = 0.0;  // after encoding_correction_for
  double ghz_fidelity = 0.0;
  double ghz_fidelity_corrected = 0.0;
};

struct EntangleResult {
  std::vector<WitnessRow> witnesses;
  std::vector<MerminRow> mermin;
  double best_phi = 0.0;  // maximizes |M| on the oo branch
  std::map<std::string, double> paulis;
  double retained_single = 1.0;
  double retained_double = 1.0;
};

/// D_m starts in (|0⟩ + e^{iφ}|1⟩)/√2.
PureState phase_superposition(double phi);
EntangleResult entangle(const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// Fidelity sweeps

struct Crossover {
  std::string metric;  // "f3q" or "fl"
  int scenario = 3;
  std::optional<double> p_err;  // smallest grid p with QED ≥ idle
  double gap_at_first = 0.0;    // QED − idle at the first grid point
};

struct SweepResult {
  std::vector<FidelityReport> f3q;
  std::vector<FidelityReport> fl;
  std::vector<Crossover> crossovers;
  std::map<std::string, double> retained;
};

/// F_3Q for scenarios (1) and (3) and F_L for scenario (3), both pipelines,
/// over the p grid.
SweepResult qed_sweep(const ExperimentConfig& cfg);

/// Smallest p where qed ≥ idle − tol; reports are matched by grid position.
std::optional<double> crossover(const std::vector<FidelityReport>& qed,
                                const std::vector<FidelityReport>& idle,
                                double tol = kPhysicalTol);

// ---------------------------------------------------------------------------
// Runner

struct RunOptions {
  std::filesystem::path out_dir;
  bool record_timing = false;
};

struct RunSummary {
  std::vector<std::filesystem::path> files;
  std::filesystem::path manifest;
  std::map<std::string, double> scalars;
  double wall_clock_s = 0.0;
};

RunSummary cmd_parity_check(const ExperimentConfig& cfg, const RunOptions& opts);
RunSummary cmd_entangle(const ExperimentConfig& cfg, const RunOptions& opts);
RunSummary cmd_qed_sweep(const ExperimentConfig& cfg, const RunOptions& opts);
RunSummary cmd_error_table(const ExperimentConfig& cfg, const RunOptions& opts);

struct VerifyReport {
  std::size_t manifests = 0;
  std::size_t files = 0;
  std::vector<std::string> problems;
  bool ok() const { return problems.empty() && manifests > 0; }
};

/// Checks every *.manifest.json in `dir`: the config echo hashes to the
/// recorded config hash, and every listed file exists, matches its SHA-256,
/// and carries the same config hash in its header comment.
VerifyReport verify(const std::filesystem::path& dir);

}  // namespace repqed
