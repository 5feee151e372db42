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
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "repqed/qstate.hpp"

namespace repqed {

enum class GateKind { RX, RY, RZ, X, Y, Z, CZ, ISWAP, CNOT, TOFFOLI };

std::string_view to_string(GateKind kind);
GateKind gate_kind_from_string(std::string_view name);
std::size_t gate_arity(GateKind kind);
bool gate_is_parametric(GateKind kind);

/// Default pulse durations in ns. Single-qubit rotations are 20 ns Gaussian
/// pulses and CPHASE (CZ) 40 ns; iSWAP 12 ns. CNOT is costed as RY·CZ·RY.
/// TOFFOLI only appears in the ideal decoder and carries no duration.
double default_duration_ns(GateKind kind);

struct Gate {
  GateKind kind;
  double theta = 0.0;
  QubitList targets;
  double duration_ns = 0.0;

  /// Validates target count and parameters; duration defaults per kind.
  static Gate make(GateKind kind, QubitList targets, double theta = 0.0,
                   std::optional<double> duration_ns = std::nullopt);
};

Operator gate_matrix(const Gate& g);

enum class MeasureBasis { Z, X };

/// Projective measurement. X basis is realized as RY(-π/2) followed by a Z
/// projection, so outcome 0 ↔ |+⟩ and 1 ↔ |−⟩.
struct MeasureMarker {
  std::size_t qubit;
  MeasureBasis basis = MeasureBasis::Z;
  std::string label;
};

struct ChannelSite {
  KrausChannel channel;
  QubitList targets;
  std::string label;
};

using MomentOp = std::variant<Gate, ChannelSite, MeasureMarker>;

QubitList op_targets(const MomentOp& op);

/// Ops acting in parallel on disjoint qubits. The duration is the longest gate
/// unless set explicitly (used for timing-only slots).
class Moment {
 public:
  Moment() = default;
  explicit Moment(std::vector<MomentOp> ops, std::optional<double> duration_ns = std::nullopt);

  Moment& add(MomentOp op);
  Moment& set_duration(double duration_ns);

  const std::vector<MomentOp>& ops() const { return ops_; }
  double duration_ns() const;
  bool has_explicit_duration() const { return explicit_duration_.has_value(); }
  bool touches(std::size_t qubit) const;
  bool empty() const { return ops_.empty(); }

 private:
  std::vector<MomentOp> ops_;
  std::optional<double> explicit_duration_;
};

class Circuit {
 public:
  explicit Circuit(std::size_t n_qubits) : n_qubits_(n_qubits) {}

  Circuit& append(Moment moment);
  Circuit& append(const Circuit& other);

  std::size_t n_qubits() const { return n_qubits_; }
  const std::vector<Moment>& moments() const { return moments_; }
  /// Measurement labels in execution order.
  std::vector<std::string> measurement_labels() const;
  double total_duration_ns() const;

 private:
  std::size_t n_qubits_;
  std::vector<Moment> moments_;
};

/// Moment-by-moment copy with every op in its own moment; explicit durations
/// of timing-only moments are kept.
Circuit serialize_moments(const Circuit& c);

/// One JSON record per line: a header with the register size, then one record
/// per moment. Channel sites are recorded by label only and cannot be read back.
std::string to_text(const Circuit& c);
Circuit circuit_from_text(std::string_view text);

/// Measurement branch: declared outcomes (label, bit) in measurement order, the
/// branch probability, and the conditioned state (normalized unless degenerate).
struct Branch {
  std::vector<std::pair<std::string, int>> outcomes;
  double probability = 0.0;
  DensityMatrix state;
  bool degenerate = false;

  /// Declared bit for label; throws std::out_of_range if absent.
  int outcome(std::string_view label) const;
  /// Outcome bits concatenated in measurement order, e.g. "01".
  std::string key() const;
};

}  // namespace repqed
