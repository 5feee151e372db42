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

#include "repqed/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include <fmt/core.h>

namespace repqed {

double assignment_fidelity(const std::map<std::size_t, SyndromeDistribution>& per_input) {
  double sum = 0.0;
  for (std::size_t input = 0; input < 8; ++input) {
    auto it = per_input.find(input);
    if (it == per_input.end()) {
      throw std::invalid_argument(
          fmt::format("assignment_fidelity: no distribution for input state {}", input));
    }
    double total = 0.0;
    for (const auto& [key, value] : it->second) total += value;
    if (!(total > 0.0)) {
      throw std::invalid_argument(
          fmt::format("assignment_fidelity: empty distribution for input state {}", input));
    }
    const auto correct = it->second.find(expected_syndrome(input).str());
    sum += correct == it->second.end() ? 0.0 : correct->second / total;
  }
  return sum / 8.0;
}

// ---------------------------------------------------------------------------
// Witnesses and Mermin

Operator witness_operator(bool phi, bool plus) {
  using gates::pauli_string;
  const Matrix ii = pauli_string("II").matrix();
  const Matrix xx = pauli_string("XX").matrix();
  const Matrix yy = pauli_string("YY").matrix();
  const Matrix zz = pauli_string("ZZ").matrix();
  const double sx = plus ? -1.0 : 1.0;
  // Φ±: ± on YY and −ZZ; Ψ±: ∓ on YY and +ZZ.
  const double sy = phi ? -sx : sx;
  const double sz = phi ? -1.0 : 1.0;
  return Operator(2, (ii + sx * xx + sy * yy + sz * zz) / 4.0);
}

WitnessSet witnesses(const DensityMatrix& pair) {
  if (pair.n_qubits() != 2) {
    throw std::invalid_argument(
        fmt::format("witnesses need a 2-qubit state, got {} qubits", pair.n_qubits()));
  }
  return {expectation(pair, witness_operator(true, true)),
          expectation(pair, witness_operator(true, false)),
          expectation(pair, witness_operator(false, true)),
          expectation(pair, witness_operator(false, false))};
}

Operator mermin_operator() {
  using gates::pauli_string;
  return Operator(3, pauli_string("XXX").matrix() - pauli_string("YYX").matrix() -
                         pauli_string("YXY").matrix() - pauli_string("XYY").matrix());
}

double mermin(const DensityMatrix& rho3) {
  if (rho3.n_qubits() != 3) {
    throw std::invalid_argument(
        fmt::format("Mermin operator needs a 3-qubit state, got {} qubits", rho3.n_qubits()));
  }
  return expectation(rho3, mermin_operator());
}

PureState ghz_state(double phi) {
  Vector v = Vector::Zero(8);
  v(0) = 1.0 / std::sqrt(2.0);
  v(7) = std::polar(1.0 / std::sqrt(2.0), -phi);
  return PureState(3, v);
}

// ---------------------------------------------------------------------------
// Pauli export

std::map<std::string, double> pauli_expectations(const DensityMatrix& rho) {
  static constexpr std::string_view kLetters = "IXYZ";
  const std::size_t n = rho.n_qubits();
  std::map<std::string, double> out;
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= 4;
  for (std::size_t code = 0; code < total; ++code) {
    std::string s(n, 'I');
    std::size_t rest = code;
    for (std::size_t i = n; i-- > 0;) {
      s[i] = kLetters[rest % 4];
      rest /= 4;
    }
    out.emplace(s, expectation(rho, gates::pauli_string(s)));
  }
  return out;
}

DensityMatrix reconstruct_from_paulis(const std::map<std::string, double>& expectations) {
  if (expectations.empty()) throw std::invalid_argument("no Pauli expectations given");
  const std::size_t n = expectations.begin()->first.size();
  const auto d = static_cast<Eigen::Index>(std::size_t{1} << n);
  Matrix m = Matrix::Zero(d, d);
  for (const auto& [s, v] : expectations) m += v * gates::pauli_string(s).matrix();
  return DensityMatrix(n, m / static_cast<double>(d));
}

// ---------------------------------------------------------------------------
// Code fidelities

namespace {

FidelityReport make_report(std::span<const RoundOutcome> outcomes, Pipeline pipeline) {
  if (outcomes.size() != kCardinals.size()) {
    throw std::invalid_argument(
        fmt::format("fidelity report needs 6 cardinal outcomes, got {}", outcomes.size()));
  }
  for (const auto& o : outcomes) {
    if (o.pipeline != pipeline) {
      throw std::invalid_argument(fmt::format("expected {} outcomes, got {}",
                                              to_string(pipeline), to_string(o.pipeline)));
    }
  }
  FidelityReport r;
  r.pipeline = pipeline;
  return r;
}

void finish(FidelityReport& r) {
  double s = 0.0;
  for (double v : r.per_cardinal) s += v;
  r.average = s / static_cast<double>(r.per_cardinal.size());
}

std::size_t cardinal_slot(Cardinal c) {
  return static_cast<std::size_t>(std::find(kCardinals.begin(), kCardinals.end(), c) -
                                  kCardinals.begin());
}

// Ĉ_pq for QED states, X_m for idle states.
Operator frame_for(const WeightedState& s) {
  if (s.syndrome) return correction_for(*s.syndrome);
  return gates::pauli_string("IXI");
}

Operator flips_operator(const QubitList& flips) {
  std::string letters = "III";
  for (auto q : flips) letters.at(q) = 'X';
  return gates::pauli_string(letters);
}

}  // namespace

FidelityReport f3q_qed(std::span<const RoundOutcome> outcomes, Convention conv) {
  FidelityReport r = make_report(outcomes, Pipeline::Qed);
  for (const auto& o : outcomes) {
    const PureState target = logical_state(o.cardinal, conv);
    double f = 0.0;
    for (const auto& s : o.states) {
      if (!s.syndrome) throw std::invalid_argument("QED state without syndrome");
      f += s.weight *
           fidelity_to_pure(apply_operator(s.data, correction_for(*s.syndrome), reg::kData),
                            target);
    }
    r.per_cardinal[cardinal_slot(o.cardinal)] = f;
  }
  finish(r);
  return r;
}

FidelityReport f3q_idle(std::span<const RoundOutcome> outcomes, Convention conv) {
  FidelityReport r = make_report(outcomes, Pipeline::Idle);
  const Operator xm = gates::pauli_string("IXI");
  for (const auto& o : outcomes) {
    const PureState target = logical_state(o.cardinal, conv);
    double f = 0.0;
    for (const auto& s : o.states) {
      f += s.weight * fidelity_to_pure(apply_operator(s.data, xm, reg::kData), target);
    }
    r.per_cardinal[cardinal_slot(o.cardinal)] = f;
  }
  finish(r);
  return r;
}

FidelityReport f3q(std::span<const RoundOutcome> outcomes, Convention conv) {
  if (outcomes.empty()) throw std::invalid_argument("no outcomes");
  return outcomes.front().pipeline == Pipeline::Qed ? f3q_qed(outcomes, conv)
                                                    : f3q_idle(outcomes, conv);
}

FidelityReport f_logical(std::span<const RoundOutcome> outcomes,
                         std::span<const ErrorPattern> second_round, Convention conv) {
  if (outcomes.empty()) throw std::invalid_argument("no outcomes");
  FidelityReport r = make_report(outcomes, outcomes.front().pipeline);
  std::vector<Operator> second_ops;
  for (const auto& pat : second_round) second_ops.push_back(flips_operator(pat.flips));

  for (const auto& o : outcomes) {
    const PureState target = cardinal_state(o.cardinal);
    double f = 0.0;
    for (const auto& s : o.states) {
      const DensityMatrix framed = apply_operator(s.data, frame_for(s), reg::kData);
      for (std::size_t i = 0; i < second_round.size(); ++i) {
        const DensityMatrix hit = apply_operator(framed, second_ops[i], reg::kData);
        f += s.weight * second_round[i].weight * fidelity_to_pure(decode(hit, conv), target);
      }
    }
    r.per_cardinal[cardinal_slot(o.cardinal)] = f;
  }
  finish(r);
  return r;
}

// ---------------------------------------------------------------------------
// Error-combination table

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::QedWins: return "QED wins";
    case Verdict::IdleWins: return "idle wins";
    case Verdict::Tie: return "tie";
  }
  throw std::logic_error("unknown verdict");
}

Verdict classify(double f_qed, double f_idle, double tol) {
  if (f_qed > f_idle + tol) return Verdict::QedWins;
  if (f_idle > f_qed + tol) return Verdict::IdleWins;
  return Verdict::Tie;
}

std::string combination_label(const QubitList& first, const QubitList& second) {
  const std::size_t m = first.size();
  const std::size_t n = second.size();
  std::size_t overlap = 0;
  for (auto q : first) overlap += std::count(second.begin(), second.end(), q);

  std::string label = fmt::format("{}/{}", m, n);
  if (m == 1 && n == 1) {
    label += overlap == 1 ? "a" : "b";
  } else if ((m == 1 && n == 2) || (m == 2 && n == 1)) {
    label += overlap == 1 ? "a" : "b";
  } else if (m == 2 && n == 2) {
    label += overlap == 2 ? "a" : "b";
  }
  return label;
}

std::string flip_set_name(const QubitList& flips) {
  if (flips.empty()) return "-";
  static constexpr std::string_view kNames = "tmb";
  std::string s;
  for (auto q : flips) s.push_back(kNames.at(q));
  return s;
}

CombinationTable error_combination_table(const NoiseConfig& noise, Convention conv) {
  // Every flip subset of the data register, in inclusion-bit order.
  std::vector<QubitList> subsets;
  for (const auto& p : incoherent_patterns(0.5, reg::kData)) subsets.push_back(p.flips);

  CombinationTable table;
  for (const auto& first : subsets) {
    const auto spec = ErrorSpec::flips(first);
    const auto qed = run_rounds(spec, Pipeline::Qed, noise, conv);
    const auto idle = run_rounds(spec, Pipeline::Idle, noise, conv);
    for (const auto& second : subsets) {
      const std::vector<ErrorPattern> pattern{{second, 1.0}};
      CombinationEntry e{first, second, combination_label(first, second),
                         f_logical(qed, pattern, conv).average,
                         f_logical(idle, pattern, conv).average, Verdict::Tie};
      e.verdict = classify(e.f_qed, e.f_idle);
      table.grid.push_back(std::move(e));
    }
  }

  std::map<std::tuple<std::size_t, std::size_t, std::string>, CombinationRow> grouped;
  for (const auto& e : table.grid) {
    auto& row = grouped[{e.first.size(), e.second.size(), e.label}];
    row.label = e.label;
    row.first_errors = static_cast<int>(e.first.size());
    row.second_errors = static_cast<int>(e.second.size());
    row.members += 1;
    row.f_qed += e.f_qed;
    row.f_idle += e.f_idle;
  }
  for (auto& [key, row] : grouped) {
    row.f_qed /= static_cast<double>(row.members);
    row.f_idle /= static_cast<double>(row.members);
    row.verdict = classify(row.f_qed, row.f_idle);
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace repqed
