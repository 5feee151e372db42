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

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "repqed/circuit.hpp"
#include "repqed/noise.hpp"

namespace repqed {

/// Branches below this probability are kept but flagged degenerate.
inline constexpr double kDegenerateProbability = 1e-12;

struct RunResult {
  /// Every measurement record, in lexicographic order of declared bits taken
  /// in measurement order. Probabilities sum to 1.
  std::vector<Branch> branches;
  /// Fraction of runs surviving readout vetoes.
  double retained_fraction = 1.0;
};

/// Exact density-matrix execution with exhaustive measurement branching.
/// Decoherence channels follow each moment; declared outcomes pass through
/// the readout model. Branch states are checked for physicality.
RunResult run_exact(const Circuit& c, const DensityMatrix& initial,
                    const NoiseConfig& noise = NoiseConfig::ideal());

/// Random stream for task `stream` under a run seed: mt19937_64 seeded from
/// seed_seq{seed low word, seed high word, stream low word, stream high word}.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream);

/// Uniform double in [0, 1) built from the top 53 bits of one engine draw.
double uniform01(std::mt19937_64& rng);

/// Single Monte Carlo trajectory: measurement outcomes are sampled instead of
/// enumerated. Cross-check path only; readout confusion is sampled as well
/// (a vetoed trajectory returns probability 0).
Branch sample_trajectory(const Circuit& c, const DensityMatrix& initial,
                         const NoiseConfig& noise, std::mt19937_64& rng);

using Histogram = std::map<std::string, std::size_t>;

/// Multinomial sample of n_shots outcomes keyed by Branch::key(). Every branch
/// key appears in the result, possibly with count 0; n_shots = 0 yields an
/// empty histogram.
Histogram sample_shots(const std::vector<Branch>& branches, std::size_t n_shots,
                       std::uint64_t seed, std::uint64_t stream = 0);

}  // namespace repqed
