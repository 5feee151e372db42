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

#include "repqed/circuit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <sstream>

#include <fmt/core.h>

#include "json.hpp"

namespace repqed {

namespace {

struct KindInfo {
  GateKind kind;
  std::string_view name;
  std::size_t arity;
  bool parametric;
  double duration_ns;
};

constexpr std::array<KindInfo, 10> kKinds{{
    {GateKind::RX, "RX", 1, true, 20.0},
    {GateKind::RY, "RY", 1, true, 20.0},
    {GateKind::RZ, "RZ", 1, true, 0.0},  // virtual (frame) rotation
    {GateKind::X, "X", 1, false, 20.0},
    {GateKind::Y, "Y", 1, false, 20.0},
    {GateKind::Z, "Z", 1, false, 0.0},
    {GateKind::CZ, "CZ", 2, false, 40.0},
    {GateKind::ISWAP, "ISWAP", 2, false, 12.0},
    {GateKind::CNOT, "CNOT", 2, false, 80.0},
    {GateKind::TOFFOLI, "TOFFOLI", 3, false, 0.0},
}};

const KindInfo& info(GateKind kind) {
  for (const auto& k : kKinds) {
    if (k.kind == kind) return k;
  }
  throw std::logic_error("unknown gate kind");
}

}  // namespace

std::string_view to_string(GateKind kind) { return info(kind).name; }

GateKind gate_kind_from_string(std::string_view name) {
  for (const auto& k : kKinds) {
    if (k.name == name) return k.kind;
  }
  throw std::invalid_argument(fmt::format("unknown gate kind '{}'", name));
}

std::size_t gate_arity(GateKind kind) { return info(kind).arity; }
bool gate_is_parametric(GateKind kind) { return info(kind).parametric; }
double default_duration_ns(GateKind kind) { return info(kind).duration_ns; }

Gate Gate::make(GateKind kind, QubitList targets, double theta,
                std::optional<double> duration_ns) {
  if (targets.size() != gate_arity(kind)) {
    throw std::invalid_argument(fmt::format("{} acts on {} qubits, got {} targets",
                                            to_string(kind), gate_arity(kind),
                                            targets.size()));
  }
  if (!std::isfinite(theta)) {
    throw std::invalid_argument(fmt::format("{}: rotation angle must be finite", to_string(kind)));
  }
  const double d = duration_ns.value_or(default_duration_ns(kind));
  if (!(d >= 0.0) || !std::isfinite(d)) {
    throw std::invalid_argument(fmt::format("{}: duration must be >= 0", to_string(kind)));
  }
  std::set<std::size_t> unique(targets.begin(), targets.end());
  if (unique.size() != targets.size()) {
    throw std::invalid_argument(fmt::format("{}: duplicate target", to_string(kind)));
  }
  return Gate{kind, gate_is_parametric(kind) ? theta : 0.0, std::move(targets), d};
}

Operator gate_matrix(const Gate& g) {
  const cplx i1(0.0, 1.0);
  const double c = std::cos(g.theta / 2.0);
  const double s = std::sin(g.theta / 2.0);
  switch (g.kind) {
    case GateKind::RX: {
      Matrix m(2, 2);
      m << c, -i1 * s, -i1 * s, c;
      return Operator(1, m, true);
    }
    case GateKind::RY: {
      Matrix m(2, 2);
      m << c, -s, s, c;
      return Operator(1, m, true);
    }
    case GateKind::RZ: {
      Matrix m(2, 2);
      m << std::exp(-i1 * g.theta / 2.0), 0, 0, std::exp(i1 * g.theta / 2.0);
      return Operator(1, m, true);
    }
    case GateKind::X: return gates::X();
    case GateKind::Y: return gates::Y();
    case GateKind::Z: return gates::Z();
    case GateKind::CZ: {
      Matrix m = Matrix::Identity(4, 4);
      m(3, 3) = -1.0;
      return Operator(2, m, true);
    }
    case GateKind::ISWAP: {
      Matrix m = Matrix::Zero(4, 4);
      m(0, 0) = 1.0;
      m(1, 2) = i1;
      m(2, 1) = i1;
      m(3, 3) = 1.0;
      return Operator(2, m, true);
    }
    case GateKind::CNOT: {
      Matrix m = Matrix::Zero(4, 4);
      m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
      return Operator(2, m, true);
    }
    case GateKind::TOFFOLI: {
      Matrix m = Matrix::Identity(8, 8);
      m(6, 6) = m(7, 7) = 0.0;
      m(6, 7) = m(7, 6) = 1.0;
      return Operator(3, m, true);
    }
  }
  throw std::logic_error("unhandled gate kind");
}

QubitList op_targets(const MomentOp& op) {
  return std::visit(
      [](const auto& o) -> QubitList {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, MeasureMarker>) {
          return {o.qubit};
        } else {
          return o.targets;
        }
      },
      op);
}

// ---------------------------------------------------------------------------
// Moment / Circuit

Moment::Moment(std::vector<MomentOp> ops, std::optional<double> duration_ns) {
  for (auto& op : ops) add(std::move(op));
  if (duration_ns) set_duration(*duration_ns);
}

Moment& Moment::add(MomentOp op) {
  for (auto q : op_targets(op)) {
    if (touches(q)) {
      throw std::invalid_argument(
          fmt::format("qubit {} appears twice within one moment", q));
    }
  }
  ops_.push_back(std::move(op));
  return *this;
}

Moment& Moment::set_duration(double duration_ns) {
  if (!(duration_ns >= 0.0) || !std::isfinite(duration_ns)) {
    throw std::invalid_argument("moment duration must be >= 0");
  }
  explicit_duration_ = duration_ns;
  return *this;
}

double Moment::duration_ns() const {
  if (explicit_duration_) return *explicit_duration_;
  double d = 0.0;
  for (const auto& op : ops_) {
    if (const auto* g = std::get_if<Gate>(&op)) d = std::max(d, g->duration_ns);
  }
  return d;
}

bool Moment::touches(std::size_t qubit) const {
  for (const auto& op : ops_) {
    const auto ts = op_targets(op);
    if (std::find(ts.begin(), ts.end(), qubit) != ts.end()) return true;
  }
  return false;
}

Circuit& Circuit::append(Moment moment) {
  auto existing = measurement_labels();
  for (const auto& op : moment.ops()) {
    for (auto q : op_targets(op)) {
      if (q >= n_qubits_) {
        throw std::invalid_argument(fmt::format(
            "target qubit {} out of range for a {}-qubit circuit", q, n_qubits_));
      }
    }
    if (const auto* m = std::get_if<MeasureMarker>(&op)) {
      if (std::find(existing.begin(), existing.end(), m->label) != existing.end()) {
        throw std::invalid_argument(
            fmt::format("measurement label '{}' used twice", m->label));
      }
      existing.push_back(m->label);
    }
  }
  moments_.push_back(std::move(moment));
  return *this;
}

Circuit& Circuit::append(const Circuit& other) {
  if (other.n_qubits_ != n_qubits_) {
    throw std::invalid_argument("cannot append circuits of different register size");
  }
  for (const auto& m : other.moments_) append(m);
  return *this;
}

std::vector<std::string> Circuit::measurement_labels() const {
  std::vector<std::string> labels;
  for (const auto& m : moments_) {
    for (const auto& op : m.ops()) {
      if (const auto* mm = std::get_if<MeasureMarker>(&op)) labels.push_back(mm->label);
    }
  }
  return labels;
}

double Circuit::total_duration_ns() const {
  double t = 0.0;
  for (const auto& m : moments_) t += m.duration_ns();
  return t;
}

Circuit serialize_moments(const Circuit& c) {
  Circuit out(c.n_qubits());
  for (const auto& m : c.moments()) {
    if (m.empty()) {
      out.append(m);
      continue;
    }
    for (const auto& op : m.ops()) out.append(Moment({op}));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text form

std::string to_text(const Circuit& c) {
  using nlohmann::ordered_json;
  std::ostringstream os;
  os << ordered_json{{"n_qubits", c.n_qubits()}}.dump() << '\n';
  for (const auto& m : c.moments()) {
    ordered_json rec;
    rec["duration_ns"] = m.duration_ns();
    if (m.has_explicit_duration()) rec["fixed_duration"] = true;
    ordered_json ops = ordered_json::array();
    for (const auto& op : m.ops()) {
      std::visit(
          [&](const auto& o) {
            using T = std::decay_t<decltype(o)>;
            ordered_json j;
            if constexpr (std::is_same_v<T, Gate>) {
              j["gate"] = std::string(to_string(o.kind));
              if (gate_is_parametric(o.kind)) j["theta"] = o.theta;
              j["targets"] = o.targets;
              j["duration_ns"] = o.duration_ns;
            } else if constexpr (std::is_same_v<T, MeasureMarker>) {
              j["measure"] = o.basis == MeasureBasis::Z ? "Z" : "X";
              j["qubit"] = o.qubit;
              j["label"] = o.label;
            } else {
              j["channel"] = o.label;
              j["targets"] = o.targets;
            }
            ops.push_back(std::move(j));
          },
          op);
    }
    rec["ops"] = std::move(ops);
    os << rec.dump() << '\n';
  }
  return os.str();
}

Circuit circuit_from_text(std::string_view text) {
  using nlohmann::json;
  std::istringstream is{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::optional<Circuit> circuit;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json rec = json::parse(line);
      if (!circuit) {
        circuit.emplace(rec.at("n_qubits").get<std::size_t>());
        continue;
      }
      Moment m;
      for (const auto& j : rec.at("ops")) {
        if (j.contains("gate")) {
          const auto kind = gate_kind_from_string(j.at("gate").get<std::string>());
          m.add(Gate::make(kind, j.at("targets").get<QubitList>(),
                           j.value("theta", 0.0), j.at("duration_ns").get<double>()));
        } else if (j.contains("measure")) {
          const auto b = j.at("measure").get<std::string>();
          if (b != "Z" && b != "X") throw std::invalid_argument("unknown basis " + b);
          m.add(MeasureMarker{j.at("qubit").get<std::size_t>(),
                              b == "Z" ? MeasureBasis::Z : MeasureBasis::X,
                              j.at("label").get<std::string>()});
        } else {
          throw std::invalid_argument("channel sites cannot be parsed from text");
        }
      }
      if (rec.value("fixed_duration", false)) m.set_duration(rec.at("duration_ns").get<double>());
      circuit->append(std::move(m));
    } catch (const std::exception& e) {
      throw std::invalid_argument(fmt::format("circuit text line {}: {}", line_no, e.what()));
    }
  }
  if (!circuit) throw std::invalid_argument("circuit text: missing header record");
  return *std::move(circuit);
}

// ---------------------------------------------------------------------------
// Branch

int Branch::outcome(std::string_view label) const {
  for (const auto& [l, bit] : outcomes) {
    if (l == label) return bit;
  }
  throw std::out_of_range(fmt::format("branch has no outcome labelled '{}'", label));
}

std::string Branch::key() const {
  std::string k;
  k.reserve(outcomes.size());
  for (const auto& o : outcomes) k.push_back(o.second ? '1' : '0');
  return k;
}

}  // namespace repqed
