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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "repqed/pipeline.hpp"

namespace repqed {

// ---------------------------------------------------------------------------
// Parity assignment

/// Declared-syndrome distribution ("ee".."oo" → probability or count).
using SyndromeDistribution = std::map<std::string, double>;

/// Probability of declaring the correct double parity, averaged over the eight
/// computational inputs (keyed by data basis index 0..7). Each distribution
/// is normalized by its own total, so raw counts are accepted.
double assignment_fidelity(const std::map<std::size_t, SyndromeDistribution>& per_input);

// ---------------------------------------------------------------------------
// Entanglement witnesses

struct WitnessSet {
  double w_phi_plus = 0.0;
  double w_phi_minus = 0.0;
  double w_psi_plus = 0.0;
  double w_psi_minus = 0.0;
};

/// W(Φ±) = (II ∓ XX ± YY − ZZ)/4 and W(Ψ±) = (II ∓ XX ∓ YY + ZZ)/4.
Operator witness_operator(bool phi, bool plus);
WitnessSet witnesses(const DensityMatrix& pair);

/// XXX − YYX − YXY − XYY.
Operator mermin_operator();
double mermin(const DensityMatrix& rho3);

/// (|000⟩ + e^{-iφ}|111⟩)/√2.
PureState ghz_state(double phi);

// ---------------------------------------------------------------------------
// Tomography export

/// All 4^n Pauli-string expectations, keyed by strings over "IXYZ".
std::map<std::string, double> pauli_expectations(const DensityMatrix& rho);
/// Linear inversion Σ ⟨P⟩ P / 2^n.
DensityMatrix reconstruct_from_paulis(const std::map<std::string, double>& expectations);

// ---------------------------------------------------------------------------
// Code fidelities

struct FidelityReport {
  int scenario = 0;  // 1, 3, or 0 for deterministic error combinations
  Pipeline pipeline = Pipeline::Qed;
  double p_err = 0.0;
  std::array<double, 6> per_cardinal{};  // kCardinals order
  double average = 0.0;
};

/// Σ_pq p_pq ⟨ψ_L| Ĉ_pq ρ(j,pq) Ĉ_pq† |ψ_L⟩ per cardinal, averaged over the six.
FidelityReport f3q_qed(std::span<const RoundOutcome> outcomes, Convention conv = {});
/// ⟨ψ_L| X_m ρ(j) X_m |ψ_L⟩ per cardinal.
FidelityReport f3q_idle(std::span<const RoundOutcome> outcomes, Convention conv = {});
/// Dispatches on the pipeline of the outcomes.
FidelityReport f3q(std::span<const RoundOutcome> outcomes, Convention conv = {});

/// Logical fidelity after a second error round: the first-round frame (Ĉ_pq or
/// X_m) is applied, then each second-round pattern Ê, then the ideal decoder,
/// and D_m is compared to the unencoded cardinal.
FidelityReport f_logical(std::span<const RoundOutcome> outcomes,
                         std::span<const ErrorPattern> second_round, Convention conv = {});

// ---------------------------------------------------------------------------
// Error-combination table

enum class Verdict { QedWins, IdleWins, Tie };
std::string_view to_string(Verdict v);
Verdict classify(double f_qed, double f_idle, double tol = kPhysicalTol);

/// m/n label with a/b sub-case where the overlap of the two flip sets is
/// ambiguous: 1/1a (same qubit), 1/1b; 1/2a, 2/1a (one qubit flipped in both
/// rounds), 1/2b, 2/1b; 2/2a (same pair), 2/2b.
std::string combination_label(const QubitList& first, const QubitList& second);

struct CombinationEntry {
  QubitList first;
  QubitList second;
  std::string label;
  double f_qed = 0.0;
  double f_idle = 0.0;
  Verdict verdict = Verdict::Tie;
};

struct CombinationRow {
  std::string label;
  int first_errors = 0;
  int second_errors = 0;
  std::size_t members = 0;
  double f_qed = 0.0;  // mean over members
  double f_idle = 0.0;
  Verdict verdict = Verdict::Tie;
};

struct CombinationTable {
  std::vector<CombinationEntry> grid;  // all 64 deterministic flip-set pairs
  std::vector<CombinationRow> rows;    // grouped by label
};

/// F_L for every deterministic combination of first- and second-round flips
/// on the data qubits, for both pipelines.
CombinationTable error_combination_table(const NoiseConfig& noise = NoiseConfig::ideal(),
                                         Convention conv = {});

/// "t", "mb", "tmb", or "-" for no flips.
std::string flip_set_name(const QubitList& flips);

}  // namespace repqed
