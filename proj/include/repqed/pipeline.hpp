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

#include <optional>
#include <string_view>
#include <vector>

#include "repqed/noise.hpp"
#include "repqed/repcode.hpp"

namespace repqed {

enum class Pipeline { Qed, Idle };
std::string_view to_string(Pipeline p);

/// Error scenarios: (1) errors on D_m only, (3) errors on all data qubits.
enum class Scenario { One = 1, Three = 3 };
QubitList scenario_targets(Scenario s);

/// Length of the error slot between encoding and the stabilizer round (ns).
inline constexpr double kErrorSlotNs = 20.0;

/// Data-register state after the first round, weighted by error-pattern and
/// syndrome probability. The syndrome is empty for the idle pipeline.
struct WeightedState {
  std::optional<Syndrome> syndrome;
  double weight = 0.0;
  DensityMatrix data;
};

struct RoundOutcome {
  Cardinal cardinal;
  Pipeline pipeline;
  std::vector<WeightedState> states;  // weights sum to 1
  double retained_fraction = 1.0;
};

/// Encode by gates, inject first-round errors, then run the stabilizer round
/// (Qed) or the equal-duration idle round (Idle). Incoherent errors are
/// enumerated exactly over flip patterns; degenerate syndrome branches are
/// dropped.
RoundOutcome run_round(Cardinal c, const ErrorSpec& first_round, Pipeline pipeline,
                       const NoiseConfig& noise = NoiseConfig::ideal(),
                       Convention conv = {});

/// run_round for the six cardinals, in kCardinals order.
std::vector<RoundOutcome> run_rounds(const ErrorSpec& first_round, Pipeline pipeline,
                                     const NoiseConfig& noise = NoiseConfig::ideal(),
                                     Convention conv = {});

}  // namespace repqed
