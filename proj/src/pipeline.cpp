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

#include "repqed/pipeline.hpp"

#include "repqed/executor.hpp"

namespace repqed {

std::string_view to_string(Pipeline p) { return p == Pipeline::Qed ? "qed" : "idle"; }

QubitList scenario_targets(Scenario s) {
  if (s == Scenario::One) return {reg::kDm};
  return reg::kData;
}

namespace {

Circuit first_round_circuit(const Moment& errors, Pipeline pipeline, Convention conv) {
  Circuit c = encode_by_gates(conv);
  Moment slot = errors;
  c.append(slot.set_duration(kErrorSlotNs));
  c.append(pipeline == Pipeline::Qed ? stabilizer_round() : idle_round());
  return c;
}

void collect(RoundOutcome& out, const RunResult& run, double pattern_weight) {
  out.retained_fraction += pattern_weight * run.retained_fraction;
  if (out.pipeline == Pipeline::Idle) {
    const auto& b = run.branches.front();
    out.states.push_back({std::nullopt, pattern_weight, partial_trace(b.state, reg::kData)});
    return;
  }
  for (auto& db : to_data_branches(run)) {
    if (db.degenerate) continue;
    out.states.push_back({db.syndrome, pattern_weight * db.probability, std::move(db.data)});
  }
}

}  // namespace

RoundOutcome run_round(Cardinal c, const ErrorSpec& first_round, Pipeline pipeline,
                       const NoiseConfig& noise, Convention conv) {
  first_round.validate();
  DensityMatrix input = encoding_input(cardinal_state(c));
  input = apply_initial_excitation(input, {reg::kDt, reg::kDb, reg::kAt, reg::kAb},
                                   noise.initial_excitation);

  RoundOutcome out{c, pipeline, {}, 0.0};
  if (first_round.mode == ErrorMode::Coherent) {
    const Circuit circ = first_round_circuit(coherent_error_moment(first_round), pipeline, conv);
    collect(out, run_exact(circ, input, noise), 1.0);
  } else {
    for (const auto& pattern : incoherent_patterns(first_round.p_err, first_round.targets)) {
      const Circuit circ = first_round_circuit(flip_moment(pattern.flips), pipeline, conv);
      collect(out, run_exact(circ, input, noise), pattern.weight);
    }
  }
  return out;
}

std::vector<RoundOutcome> run_rounds(const ErrorSpec& first_round, Pipeline pipeline,
                                     const NoiseConfig& noise, Convention conv) {
  std::vector<RoundOutcome> out;
  out.reserve(kCardinals.size());
  for (auto c : kCardinals) out.push_back(run_round(c, first_round, pipeline, noise, conv));
  return out;
}

}  // namespace repqed
