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

#include "repqed/executor.hpp"

#include <cmath>
#include <numbers>

#include <fmt/core.h>

namespace repqed {

namespace {

struct Partial {
  std::vector<std::pair<std::string, int>> outcomes;
  Matrix rho;  // unnormalized; trace is the branch weight
};

Operator projector(int bit) {
  Matrix p = Matrix::Zero(2, 2);
  p(bit, bit) = 1.0;
  return Operator(1, p);
}

Operator basis_change() {
  return gate_matrix(Gate::make(GateKind::RY, {0}, -std::numbers::pi / 2.0));
}

void apply_kraus(std::vector<Partial>& branches, const KrausChannel& ch,
                 const QubitList& targets) {
  for (auto& b : branches) b.rho = channel_map(b.rho, ch, targets);
}

void apply_gate(std::vector<Partial>& branches, const Gate& g) {
  const Operator u = gate_matrix(g);
  for (auto& b : branches) b.rho = conjugate(b.rho, u, g.targets);
}

void check_inputs(const Circuit& c, const DensityMatrix& initial, const NoiseConfig& noise) {
  if (initial.n_qubits() != c.n_qubits()) {
    throw std::invalid_argument(fmt::format("circuit has {} qubits but initial state has {}",
                                            c.n_qubits(), initial.n_qubits()));
  }
  noise.validate();
}

// Shared moment walk; `on_measure` decides how branches split.
template <typename MeasureFn>
std::vector<Partial> execute(const Circuit& c, const DensityMatrix& initial,
                             const NoiseConfig& noise, MeasureFn&& on_measure) {
  const std::size_t n = c.n_qubits();
  const Operator rotate = basis_change();
  std::vector<Partial> branches{{{}, initial.matrix()}};
  for (const auto& moment : c.moments()) {
    for (const auto& op : moment.ops()) {
      if (const auto* g = std::get_if<Gate>(&op)) {
        apply_gate(branches, *g);
      } else if (const auto* site = std::get_if<ChannelSite>(&op)) {
        apply_kraus(branches, site->channel, site->targets);
      } else {
        const auto& m = std::get<MeasureMarker>(op);
        if (m.basis == MeasureBasis::X) {
          for (auto& b : branches) b.rho = conjugate(b.rho, rotate, {m.qubit});
        }
        branches = on_measure(std::move(branches), m);
      }
    }
    for (const auto& site : decoherence_channels(noise.decoherence, moment, n)) {
      apply_kraus(branches, site.channel, site.targets);
    }
  }
  return branches;
}

}  // namespace

RunResult run_exact(const Circuit& c, const DensityMatrix& initial, const NoiseConfig& noise) {
  check_inputs(c, initial, noise);
  const double initial_trace = initial.trace();

  const Operator p0 = projector(0);
  const Operator p1 = projector(1);
  auto split = [&](std::vector<Partial> in, const MeasureMarker& m) {
    std::vector<Partial> out;
    out.reserve(in.size() * 2);
    for (auto& b : in) {
      auto o0 = b.outcomes;
      o0.emplace_back(m.label, 0);
      auto o1 = std::move(b.outcomes);
      o1.emplace_back(m.label, 1);
      out.push_back({std::move(o0), conjugate(b.rho, p0, {m.qubit})});
      out.push_back({std::move(o1), conjugate(b.rho, p1, {m.qubit})});
    }
    return out;
  };
  auto partials = execute(c, initial, noise, split);

  RunResult result;
  double total = 0.0;
  for (auto& p : partials) {
    const double w = p.rho.trace().real() / initial_trace;
    total += w;
    Branch b{std::move(p.outcomes), w, DensityMatrix(c.n_qubits(), std::move(p.rho)), false};
    if (w < kDegenerateProbability) {
      b.degenerate = true;
      b.state = b.state.scaled(1.0 / initial_trace);
    } else {
      b.state = b.state.normalized_copy();
      check_physical(b.state);
    }
    result.branches.push_back(std::move(b));
  }
  if (std::abs(total - 1.0) > kPhysicalTol) {
    throw PhysicalityError(fmt::format("branch probabilities sum to {:.12f}", total));
  }

  if (!noise.readout.ideal()) {
    auto post = confuse_and_postselect(result.branches, noise.readout);
    result.branches = std::move(post.branches);
    result.retained_fraction = post.retained_fraction;
  }
  return result;
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Branch sample_trajectory(const Circuit& c, const DensityMatrix& initial,
                         const NoiseConfig& noise, std::mt19937_64& rng) {
  check_inputs(c, initial, noise);
  const Operator p0 = projector(0);
  const Operator p1 = projector(1);
  auto pick = [&](std::vector<Partial> in, const MeasureMarker& m) {
    auto& b = in.front();
    Matrix r0 = conjugate(b.rho, p0, {m.qubit});
    const double w0 = r0.trace().real() / b.rho.trace().real();
    const int bit = uniform01(rng) < w0 ? 0 : 1;
    b.rho = bit == 0 ? std::move(r0) : conjugate(b.rho, p1, {m.qubit});
    b.rho /= b.rho.trace().real();
    b.outcomes.emplace_back(m.label, bit);
    return in;
  };
  auto partials = execute(c, initial, noise, pick);
  auto& p = partials.front();

  double kept = 1.0;
  for (auto& [label, bit] : p.outcomes) {
    const auto err = noise.readout.for_label(label);
    const double u = uniform01(rng);
    if (u < err.veto) {
      kept = 0.0;
    } else if (u < err.veto + err.eps) {
      bit ^= 1;
    }
  }
  DensityMatrix state(c.n_qubits(), p.rho / p.rho.trace().real());
  return Branch{std::move(p.outcomes), kept, std::move(state), kept == 0.0};
}

Histogram sample_shots(const std::vector<Branch>& branches, std::size_t n_shots,
                       std::uint64_t seed, std::uint64_t stream) {
  Histogram hist;
  if (n_shots == 0) return hist;
  double total = 0.0;
  for (const auto& b : branches) {
    total += b.probability;
    hist[b.key()] = 0;
  }
  if (branches.empty() || std::abs(total - 1.0) > kPhysicalTol) {
    throw std::invalid_argument(
        fmt::format("branch probabilities sum to {:.12f}, expected 1", total));
  }
  // Rounding can leave u beyond the last cumulative bin; such draws go to the
  // last branch with nonzero mass.
  const Branch* fallback = &branches.front();
  for (const auto& b : branches) {
    if (b.probability > 0.0) fallback = &b;
  }
  auto rng = make_stream(seed, stream);
  for (std::size_t s = 0; s < n_shots; ++s) {
    const double u = uniform01(rng) * total;
    double acc = 0.0;
    const Branch* hit = fallback;
    for (const auto& b : branches) {
      acc += b.probability;
      if (u < acc) {
        hit = &b;
        break;
      }
    }
    ++hist[hit->key()];
  }
  return hist;
}

}  // namespace repqed
