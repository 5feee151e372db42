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

// Three-qubit bit-flip repetition code on the register
// |D_t D_m D_b A_t A_b⟩ (D_t is the most significant bit).

#pragma once

#include <array>
#include <compare>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "repqed/circuit.hpp"
#include "repqed/executor.hpp"
#include "repqed/noise.hpp"
#include "repqed/qstate.hpp"

namespace repqed {

namespace reg {
inline constexpr std::size_t kDt = 0;
inline constexpr std::size_t kDm = 1;
inline constexpr std::size_t kDb = 2;
inline constexpr std::size_t kAt = 3;
inline constexpr std::size_t kAb = 4;
inline constexpr std::size_t kSize = 5;
inline const QubitList kData{kDt, kDm, kDb};
inline const QubitList kAncillas{kAt, kAb};
}  // namespace reg

enum class Cardinal { Zero, One, Plus, Minus, PlusI, MinusI };

inline constexpr std::array<Cardinal, 6> kCardinals{
    Cardinal::Zero, Cardinal::One,  Cardinal::Plus,
    Cardinal::Minus, Cardinal::PlusI, Cardinal::MinusI};

std::string_view to_string(Cardinal c);
/// (α, β) with the single-qubit state α|0⟩ + β|1⟩.
std::pair<cplx, cplx> amplitudes(Cardinal c);
PureState cardinal_state(Cardinal c);

enum class Parity { Even = 0, Odd = 1 };

/// Declared double parity P_t P_b. Measured ancilla bit 0 means even.
struct Syndrome {
  Parity top = Parity::Even;
  Parity bottom = Parity::Even;

  static Syndrome from_bits(int top_bit, int bottom_bit);
  static Syndrome parse(std::string_view text);  // "ee", "eo", "oe", "oo"
  static std::array<Syndrome, 4> all();          // ee, eo, oe, oo

  std::string str() const;
  /// 0..3 in the order ee, eo, oe, oo.
  std::size_t index() const;
  auto operator<=>(const Syndrome&) const = default;
};

/// Parity pattern expected for computational data input |i j k⟩
/// (basis index 4i + 2j + k): P_t = i ⊕ j, P_b = j ⊕ k.
Syndrome expected_syndrome(std::size_t data_basis_index);

/// The default maps α|0⟩+β|1⟩ to α|111⟩ + β|000⟩, matching the code space
/// reached after the refocusing pulse. logical_inverted = false gives the
/// textbook α|000⟩ + β|111⟩.
struct Convention {
  bool logical_inverted = true;
};

PureState logical_state(cplx alpha, cplx beta, Convention conv = {});
PureState logical_state(Cardinal c, Convention conv = {});

/// 5-qubit |0⟩_t |ψ⟩_m |0⟩_b |00⟩_A, the encoder's input.
DensityMatrix encoding_input(const PureState& psi_m);
/// 5-qubit |+⟩_t |ψ⟩_m |+⟩_b |00⟩_A, the input of encoding by measurement.
DensityMatrix measurement_encoding_input(const PureState& psi_m);

/// Unitary encoder on the 5-qubit register: CNOT(m→t), CNOT(m→b), then X on
/// all data qubits under the inverted convention.
Circuit encode_by_gates(Convention conv = {});

struct StabilizerOptions {
  bool top = true;     // activate A_t (measures Z_t Z_m)
  bool bottom = true;  // activate A_b (measures Z_m Z_b)
};

/// Parallelized Z_tZ_m / Z_mZ_b measurement through the ancillas with a
/// refocusing X on D_m after its last interaction. Bus transfers are kept as
/// timing-only slots. Ideal outcome for |i j k⟩: P_t = i⊕j, P_b = j⊕k, data
/// left in X_m|i j k⟩. Inactive ancillas are neither prepared nor measured.
Circuit stabilizer_round(StabilizerOptions opts = {});

/// Same schedule and durations as stabilizer_round() with every ancilla
/// operation removed; the refocusing X on D_m stays.
Circuit idle_round();

/// Syndrome from a branch carrying both parity labels.
Syndrome syndrome_of(const Branch& b);

/// Ĉ_pq on (D_t, D_m, D_b): ee → X_m, eo → X_mX_b, oe → X_tX_m, oo → I.
Operator correction_for(Syndrome s);
/// Encoding-by-measurement frame: ee → X_tX_b, eo → X_t, oe → X_b, oo → I.
Operator encoding_correction_for(Syndrome s);
/// Pauli label of the two tables, e.g. "X_mX_b".
std::string correction_label(Syndrome s);
std::string encoding_correction_label(Syndrome s);

/// A syndrome-labelled 3-qubit data state.
struct DataBranch {
  Syndrome syndrome;
  double probability = 0.0;
  DensityMatrix data;
  bool degenerate = false;
};

/// Reduces run branches to the data register. Branches must carry both
/// parity labels.
std::vector<DataBranch> to_data_branches(const RunResult& run);

/// Stabilizer round on |+⟩_t|ψ⟩_m|+⟩_b, four syndrome branches in order
/// ee, eo, oe, oo. Applying encoding_correction_for(s) to branch s yields
/// logical_state(c) in the ideal limit.
std::vector<DataBranch> encode_by_measurement(const PureState& psi_m,
                                              const NoiseConfig& noise = NoiseConfig::ideal());
std::vector<DataBranch> encode_by_measurement(Cardinal c,
                                              const NoiseConfig& noise = NoiseConfig::ideal());

struct Decoder {
  Circuit circuit;  // on 3 data qubits
  QubitList keep;   // {D_m}
};

/// Majority decoder: CNOT(m→t), CNOT(m→b), TOFFOLI(t,b→m), X_m under the
/// inverted convention, then trace out (t, b).
Decoder decoder_circuit(Convention conv = {});

/// Runs the ideal decoder on a 3-qubit data state and returns D_m's state.
DensityMatrix decode(const DensityMatrix& data, Convention conv = {});

/// Syndrome table as CSV: syndrome, signalled error, correction, encoding
/// correction.
std::string syndrome_table_csv();

}  // namespace repqed
