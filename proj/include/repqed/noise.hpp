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

#include <limits>
#include <map>
#include <string>
#include <vector>

#include "repqed/circuit.hpp"

namespace repqed {

/// Measurement labels of the two stabilizer ancillas.
inline const std::string kTopParityLabel = "P_t";
inline const std::string kBottomParityLabel = "P_b";

// ---------------------------------------------------------------------------
// Injected bit-flip errors

enum class ErrorMode { Coherent, Incoherent };

/// Bit-flip errors with single-qubit flip probability p_err on each target.
/// Coherent errors are X rotations by θ with p_err = sin²(θ/2).
struct ErrorSpec {
  ErrorMode mode = ErrorMode::Incoherent;
  double p_err = 0.0;
  QubitList targets;

  static ErrorSpec coherent(double p_err, QubitList targets);
  static ErrorSpec incoherent(double p_err, QubitList targets);
  /// Deterministic X on every target.
  static ErrorSpec flips(QubitList targets) { return incoherent(1.0, std::move(targets)); }

  double theta() const;
  void validate() const;
};

double theta_for_flip_probability(double p_err);
double flip_probability_for_theta(double theta);

/// A set of flipped qubits with its probability.
struct ErrorPattern {
  QubitList flips;
  double weight = 1.0;
};

/// RX(θ) on every target, in parallel.
Moment coherent_error_moment(const ErrorSpec& spec);

/// All 2^k flip subsets of `targets` with binomial weights. Order is
/// lexicographic over the subset's inclusion bits, first target most
/// significant: {}, {t3}, {t2}, {t2,t3}, ...
std::vector<ErrorPattern> incoherent_patterns(double p, const QubitList& targets);

/// Moment applying X to each flipped qubit.
Moment flip_moment(const QubitList& flips);

// ---------------------------------------------------------------------------
// Readout

/// Symmetric declaration flip (eps) and discard (veto) probabilities for one
/// measured label.
struct ReadoutError {
  double eps = 0.0;
  double veto = 0.0;
};

class ReadoutModel {
 public:
  ReadoutModel() = default;

  /// Model for the two stabilizer ancillas (labels P_t and P_b).
  static ReadoutModel ancillas(double eps_t, double eps_b, double veto_t = 0.0,
                               double veto_b = 0.0);

  ReadoutModel& set(const std::string& label, ReadoutError err);
  /// Perfect readout for labels without an entry.
  ReadoutError for_label(const std::string& label) const;
  bool ideal() const;

 private:
  std::map<std::string, ReadoutError> per_label_;
};

struct PostselectResult {
  std::vector<Branch> branches;
  /// Probability that no declaration was vetoed.
  double retained_fraction = 1.0;
  bool empty() const { return branches.empty(); }
};

/// Passes each branch's outcomes through the readout model: each declared bit
/// flips with probability eps and is discarded with probability veto.
/// Branches with equal declared outcomes are merged; probabilities are
/// renormalized over the retained mass.
PostselectResult confuse_and_postselect(const std::vector<Branch>& branches,
                                        const ReadoutModel& model);

// ---------------------------------------------------------------------------
// Decoherence

struct QubitCoherence {
  double t1_ns = std::numeric_limits<double>::infinity();
  double t2_ns = std::numeric_limits<double>::infinity();
};

struct DecoherenceConfig {
  bool enabled = false;
  std::vector<QubitCoherence> qubits;  // indexed by register position

  void validate() const;
};

/// Amplitude damping with γ = 1 - exp(-t/T1) followed by pure dephasing at
/// rate 1/T2 - 1/(2·T1).
KrausChannel idle_channel(const QubitCoherence& coherence, double duration_ns);

/// One idle channel per qubit of the register, matched to the moment duration.
/// Empty when disabled.
std::vector<ChannelSite> decoherence_channels(const DecoherenceConfig& cfg,
                                              const Moment& moment,
                                              std::size_t n_qubits);

// ---------------------------------------------------------------------------

struct NoiseConfig {
  DecoherenceConfig decoherence;
  ReadoutModel readout;
  /// Thermal population of qubits initialized in |0⟩.
  double initial_excitation = 0.0;

  static NoiseConfig ideal() { return {}; }
  bool is_ideal() const;
  void validate() const;
};

/// Mixes each listed qubit with |1⟩ at the configured excitation probability.
DensityMatrix apply_initial_excitation(const DensityMatrix& rho, const QubitList& qubits,
                                       double excitation);

}  // namespace repqed
