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

#include "repqed/repcode.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <fmt/core.h>

namespace repqed {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

// Stabilizer-round slot durations (ns): ancilla prep, bus transfer, the sudden
// CPHASE of D_m with the top bus, two adiabatic CPHASE slots, bus transfer,
// and the ancilla pre-rotation before readout.
constexpr double kPrepNs = 20.0;
constexpr double kTransferNs = 12.0;
constexpr double kSuddenCzNs = 19.0;
constexpr double kAdiabaticCzNs = 40.0;
constexpr double kReadoutRotationNs = 20.0;

PureState plus_state() {
  Vector v(2);
  v << 1.0, 1.0;
  return PureState(1, v / std::sqrt(2.0));
}

PureState zero_qubit() { return PureState::basis(1, 0); }

}  // namespace

// ---------------------------------------------------------------------------
// Cardinals and syndromes

std::string_view to_string(Cardinal c) {
  switch (c) {
    case Cardinal::Zero: return "0";
    case Cardinal::One: return "1";
    case Cardinal::Plus: return "+";
    case Cardinal::Minus: return "-";
    case Cardinal::PlusI: return "+i";
    case Cardinal::MinusI: return "-i";
  }
  throw std::logic_error("unknown cardinal");
}

std::pair<cplx, cplx> amplitudes(Cardinal c) {
  const double r = 1.0 / std::sqrt(2.0);
  const cplx i1(0.0, 1.0);
  switch (c) {
    case Cardinal::Zero: return {1.0, 0.0};
    case Cardinal::One: return {0.0, 1.0};
    case Cardinal::Plus: return {r, r};
    case Cardinal::Minus: return {r, -r};
    case Cardinal::PlusI: return {r, i1 * r};
    case Cardinal::MinusI: return {r, -i1 * r};
  }
  throw std::logic_error("unknown cardinal");
}

PureState cardinal_state(Cardinal c) {
  const auto [a, b] = amplitudes(c);
  Vector v(2);
  v << a, b;
  return PureState(1, v);
}

Syndrome Syndrome::from_bits(int top_bit, int bottom_bit) {
  return {top_bit ? Parity::Odd : Parity::Even, bottom_bit ? Parity::Odd : Parity::Even};
}

Syndrome Syndrome::parse(std::string_view text) {
  auto one = [&](char ch) {
    if (ch == 'e') return Parity::Even;
    if (ch == 'o') return Parity::Odd;
    throw std::invalid_argument(fmt::format("bad syndrome '{}'", text));
  };
  if (text.size() != 2) throw std::invalid_argument(fmt::format("bad syndrome '{}'", text));
  return {one(text[0]), one(text[1])};
}

std::array<Syndrome, 4> Syndrome::all() {
  return {from_bits(0, 0), from_bits(0, 1), from_bits(1, 0), from_bits(1, 1)};
}

std::string Syndrome::str() const {
  std::string s;
  s.push_back(top == Parity::Even ? 'e' : 'o');
  s.push_back(bottom == Parity::Even ? 'e' : 'o');
  return s;
}

std::size_t Syndrome::index() const {
  return 2 * static_cast<std::size_t>(top) + static_cast<std::size_t>(bottom);
}

Syndrome expected_syndrome(std::size_t data_basis_index) {
  if (data_basis_index > 7) {
    throw std::invalid_argument(fmt::format("data basis index {} out of range", data_basis_index));
  }
  const int i = (data_basis_index >> 2) & 1;
  const int j = (data_basis_index >> 1) & 1;
  const int k = data_basis_index & 1;
  return Syndrome::from_bits(i ^ j, j ^ k);
}

// ---------------------------------------------------------------------------
// States and encoders

PureState logical_state(cplx alpha, cplx beta, Convention conv) {
  Vector v = Vector::Zero(8);
  v(conv.logical_inverted ? 7 : 0) = alpha;
  v(conv.logical_inverted ? 0 : 7) = beta;
  return PureState(3, v);
}

PureState logical_state(Cardinal c, Convention conv) {
  const auto [a, b] = amplitudes(c);
  return logical_state(a, b, conv);
}

DensityMatrix encoding_input(const PureState& psi_m) {
  if (psi_m.n_qubits() != 1) throw std::invalid_argument("encoding_input: ψ_m must be one qubit");
  auto data = PureState::tensor(PureState::tensor(zero_qubit(), psi_m), zero_qubit());
  return DensityMatrix::from_pure(PureState::tensor(data, PureState::basis(2, 0)));
}

DensityMatrix measurement_encoding_input(const PureState& psi_m) {
  if (psi_m.n_qubits() != 1) {
    throw std::invalid_argument("measurement_encoding_input: ψ_m must be one qubit");
  }
  auto data = PureState::tensor(PureState::tensor(plus_state(), psi_m), plus_state());
  return DensityMatrix::from_pure(PureState::tensor(data, PureState::basis(2, 0)));
}

Circuit encode_by_gates(Convention conv) {
  using namespace reg;
  Circuit c(kSize);
  c.append(Moment({Gate::make(GateKind::CNOT, {kDm, kDt})}));
  c.append(Moment({Gate::make(GateKind::CNOT, {kDm, kDb})}));
  if (conv.logical_inverted) {
    c.append(Moment({Gate::make(GateKind::X, {kDt}), Gate::make(GateKind::X, {kDm}),
                     Gate::make(GateKind::X, {kDb})}));
  }
  return c;
}

Circuit stabilizer_round(StabilizerOptions opts) {
  using namespace reg;
  Circuit c(kSize);

  Moment prep;
  if (opts.top) prep.add(Gate::make(GateKind::RY, {kAt}, kHalfPi));
  if (opts.bottom) prep.add(Gate::make(GateKind::RY, {kAb}, kHalfPi));
  c.append(prep.set_duration(kPrepNs));

  c.append(Moment({}, kTransferNs));
  c.append(Moment({Gate::make(GateKind::CZ, {kAt, kDm}, 0.0, kSuddenCzNs)}));
  c.append(Moment({Gate::make(GateKind::CZ, {kAt, kDt}, 0.0, kAdiabaticCzNs),
                   Gate::make(GateKind::CZ, {kAb, kDm}, 0.0, kAdiabaticCzNs)}));
  // Refocusing pulse on D_m once both of its interactions are done.
  c.append(Moment({Gate::make(GateKind::X, {kDm}),
                   Gate::make(GateKind::CZ, {kAb, kDb}, 0.0, kAdiabaticCzNs)}));
  c.append(Moment({}, kTransferNs));

  Moment readout;
  if (opts.top) readout.add(MeasureMarker{kAt, MeasureBasis::X, kTopParityLabel});
  if (opts.bottom) readout.add(MeasureMarker{kAb, MeasureBasis::X, kBottomParityLabel});
  c.append(readout.set_duration(kReadoutRotationNs));
  return c;
}

Circuit idle_round() {
  const Circuit full = stabilizer_round();
  Circuit c(reg::kSize);
  for (const auto& m : full.moments()) {
    Moment idle;
    for (const auto& op : m.ops()) {
      const auto* g = std::get_if<Gate>(&op);
      if (g && g->kind == GateKind::X && g->targets == QubitList{reg::kDm}) idle.add(*g);
    }
    c.append(idle.set_duration(m.duration_ns()));
  }
  return c;
}

Syndrome syndrome_of(const Branch& b) {
  return Syndrome::from_bits(b.outcome(kTopParityLabel), b.outcome(kBottomParityLabel));
}

// ---------------------------------------------------------------------------
// Correction tables

Operator correction_for(Syndrome s) {
  static const std::array<std::string_view, 4> table{"IXI", "IXX", "XXI", "III"};
  return gates::pauli_string(table[s.index()]);
}

Operator encoding_correction_for(Syndrome s) {
  static const std::array<std::string_view, 4> table{"XIX", "XII", "IIX", "III"};
  return gates::pauli_string(table[s.index()]);
}

std::string correction_label(Syndrome s) {
  static const std::array<std::string_view, 4> table{"X_m", "X_mX_b", "X_tX_m", "I"};
  return std::string(table[s.index()]);
}

std::string encoding_correction_label(Syndrome s) {
  static const std::array<std::string_view, 4> table{"X_tX_b", "X_t", "X_b", "I"};
  return std::string(table[s.index()]);
}

std::vector<DataBranch> to_data_branches(const RunResult& run) {
  std::vector<DataBranch> out;
  out.reserve(run.branches.size());
  for (const auto& b : run.branches) {
    out.push_back({syndrome_of(b), b.probability, partial_trace(b.state, reg::kData),
                   b.degenerate});
  }
  return out;
}

std::vector<DataBranch> encode_by_measurement(const PureState& psi_m, const NoiseConfig& noise) {
  DensityMatrix input = measurement_encoding_input(psi_m);
  input = apply_initial_excitation(input, {reg::kAt, reg::kAb}, noise.initial_excitation);
  return to_data_branches(run_exact(stabilizer_round(), input, noise));
}

std::vector<DataBranch> encode_by_measurement(Cardinal c, const NoiseConfig& noise) {
  return encode_by_measurement(cardinal_state(c), noise);
}

// ---------------------------------------------------------------------------
// Decoder

Decoder decoder_circuit(Convention conv) {
  using namespace reg;
  Circuit c(3);
  c.append(Moment({Gate::make(GateKind::CNOT, {kDm, kDt})}));
  c.append(Moment({Gate::make(GateKind::CNOT, {kDm, kDb})}));
  c.append(Moment({Gate::make(GateKind::TOFFOLI, {kDt, kDb, kDm})}));
  if (conv.logical_inverted) c.append(Moment({Gate::make(GateKind::X, {kDm})}));
  return {std::move(c), {kDm}};
}

DensityMatrix decode(const DensityMatrix& data, Convention conv) {
  if (data.n_qubits() != 3) throw std::invalid_argument("decode expects a 3-qubit data state");
  const Decoder dec = decoder_circuit(conv);
  DensityMatrix rho = data;
  for (const auto& m : dec.circuit.moments()) {
    for (const auto& op : m.ops()) {
      const auto& g = std::get<Gate>(op);
      rho = apply_unitary(rho, gate_matrix(g), g.targets);
    }
  }
  return partial_trace(rho, dec.keep);
}

std::string syndrome_table_csv() {
  static const std::array<std::string_view, 4> signalled{"none", "D_b", "D_t", "D_m"};
  std::ostringstream os;
  os << "syndrome,signalled_error,correction,encoding_correction\n";
  for (const auto s : Syndrome::all()) {
    os << s.str() << ',' << signalled[s.index()] << ',' << correction_label(s) << ','
       << encoding_correction_label(s) << '\n';
  }
  return os.str();
}

}  // namespace repqed
