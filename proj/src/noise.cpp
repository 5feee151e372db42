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

#include "repqed/noise.hpp"

#include <cmath>

#include <fmt/core.h>

namespace repqed {

namespace {

void require_probability(double p, std::string_view what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(fmt::format("{} must lie in [0, 1], got {}", what, p));
  }
}

Matrix branch_mass(const Branch& b) {
  return b.degenerate ? b.state.matrix() : Matrix(b.state.matrix() * b.probability);
}

}  // namespace

// ---------------------------------------------------------------------------
// ErrorSpec

ErrorSpec ErrorSpec::coherent(double p_err, QubitList targets) {
  ErrorSpec s{ErrorMode::Coherent, p_err, std::move(targets)};
  s.validate();
  return s;
}

ErrorSpec ErrorSpec::incoherent(double p_err, QubitList targets) {
  ErrorSpec s{ErrorMode::Incoherent, p_err, std::move(targets)};
  s.validate();
  return s;
}

double ErrorSpec::theta() const { return theta_for_flip_probability(p_err); }

void ErrorSpec::validate() const {
  require_probability(p_err, "p_err");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] > 2) {
      throw std::invalid_argument(
          fmt::format("error target {} is not a data qubit (D_t, D_m, D_b)", targets[i]));
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (targets[i] == targets[j]) {
        throw std::invalid_argument(fmt::format("error target {} listed twice", targets[i]));
      }
    }
  }
}

double theta_for_flip_probability(double p_err) {
  require_probability(p_err, "p_err");
  return 2.0 * std::asin(std::sqrt(p_err));
}

double flip_probability_for_theta(double theta) {
  const double s = std::sin(theta / 2.0);
  return s * s;
}

Moment coherent_error_moment(const ErrorSpec& spec) {
  if (spec.mode != ErrorMode::Coherent) {
    throw std::invalid_argument("coherent_error_moment requires a coherent ErrorSpec");
  }
  spec.validate();
  Moment m;
  for (auto q : spec.targets) m.add(Gate::make(GateKind::RX, {q}, spec.theta()));
  return m;
}

std::vector<ErrorPattern> incoherent_patterns(double p, const QubitList& targets) {
  require_probability(p, "flip probability");
  const std::size_t k = targets.size();
  std::vector<ErrorPattern> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    ErrorPattern pat;
    for (std::size_t i = 0; i < k; ++i) {
      const bool flipped = (mask >> (k - 1 - i)) & 1U;
      if (flipped) pat.flips.push_back(targets[i]);
      pat.weight *= flipped ? p : 1.0 - p;
    }
    // p = 0 or 1 leaves a single pattern with nonzero weight.
    if (pat.weight > 0.0) out.push_back(std::move(pat));
  }
  return out;
}

Moment flip_moment(const QubitList& flips) {
  Moment m;
  for (auto q : flips) m.add(Gate::make(GateKind::X, {q}));
  return m;
}

// ---------------------------------------------------------------------------
// Readout

ReadoutModel ReadoutModel::ancillas(double eps_t, double eps_b, double veto_t,
                                    double veto_b) {
  ReadoutModel m;
  m.set(kTopParityLabel, {eps_t, veto_t});
  m.set(kBottomParityLabel, {eps_b, veto_b});
  return m;
}

ReadoutModel& ReadoutModel::set(const std::string& label, ReadoutError err) {
  require_probability(err.eps, label + " eps");
  require_probability(err.veto, label + " veto");
  if (err.eps + err.veto > 1.0) {
    throw std::invalid_argument(
        fmt::format("{}: eps + veto = {} exceeds 1", label, err.eps + err.veto));
  }
  per_label_[label] = err;
  return *this;
}

ReadoutError ReadoutModel::for_label(const std::string& label) const {
  auto it = per_label_.find(label);
  return it == per_label_.end() ? ReadoutError{} : it->second;
}

bool ReadoutModel::ideal() const {
  for (const auto& [label, err] : per_label_) {
    if (err.eps != 0.0 || err.veto != 0.0) return false;
  }
  return true;
}

PostselectResult confuse_and_postselect(const std::vector<Branch>& branches,
                                        const ReadoutModel& model) {
  if (branches.empty()) return {{}, 0.0};

  std::vector<std::string> labels;
  for (const auto& o : branches.front().outcomes) labels.push_back(o.first);
  for (const auto& b : branches) {
    bool same = b.outcomes.size() == labels.size();
    for (std::size_t i = 0; same && i < labels.size(); ++i) same = b.outcomes[i].first == labels[i];
    if (!same) throw std::invalid_argument("sibling branches carry different outcome labels");
  }

  std::vector<ReadoutError> errs;
  for (const auto& l : labels) {
    errs.push_back(model.for_label(l));
    if (errs.back().eps + errs.back().veto > 1.0) {
      throw std::invalid_argument(fmt::format("{}: eps + veto exceeds 1", l));
    }
  }

  const std::size_t k = labels.size();
  const std::size_t n_keys = std::size_t{1} << k;
  const auto dim = static_cast<Eigen::Index>(branches.front().state.dim());
  const std::size_t n_qubits = branches.front().state.n_qubits();

  std::vector<Matrix> mass(n_keys, Matrix::Zero(dim, dim));
  std::vector<double> weight(n_keys, 0.0);
  for (const auto& b : branches) {
    const Matrix bm = branch_mass(b);
    const double bp = b.degenerate ? bm.trace().real() : b.probability;
    for (std::size_t declared = 0; declared < n_keys; ++declared) {
      double w = 1.0;
      for (std::size_t i = 0; i < k; ++i) {
        const int d = static_cast<int>((declared >> (k - 1 - i)) & 1U);
        const bool correct = d == b.outcomes[i].second;
        w *= correct ? 1.0 - errs[i].eps - errs[i].veto : errs[i].eps;
      }
      if (w == 0.0) continue;
      mass[declared] += w * bm;
      weight[declared] += w * bp;
    }
  }

  double retained = 0.0;
  for (double w : weight) retained += w;
  PostselectResult result;
  result.retained_fraction = retained;
  if (retained <= 0.0) {
    result.retained_fraction = 0.0;
    return result;
  }

  for (std::size_t declared = 0; declared < n_keys; ++declared) {
    Branch out{{}, weight[declared] / retained, DensityMatrix(n_qubits, mass[declared]), false};
    for (std::size_t i = 0; i < k; ++i) {
      out.outcomes.emplace_back(labels[i], static_cast<int>((declared >> (k - 1 - i)) & 1U));
    }
    if (out.probability < 1e-12) {
      out.degenerate = true;
      out.state = out.state.scaled(1.0 / retained);
    } else {
      out.state = out.state.scaled(1.0 / weight[declared]);
    }
    result.branches.push_back(std::move(out));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Decoherence

void DecoherenceConfig::validate() const {
  for (std::size_t q = 0; q < qubits.size(); ++q) {
    const auto& c = qubits[q];
    if (!(c.t1_ns > 0.0) || !(c.t2_ns > 0.0)) {
      throw std::invalid_argument(fmt::format("qubit {}: T1 and T2 must be positive", q));
    }
    if (enabled && c.t2_ns > 2.0 * c.t1_ns) {
      throw std::invalid_argument(fmt::format(
          "qubit {}: T2 = {} ns exceeds 2·T1 = {} ns", q, c.t2_ns, 2.0 * c.t1_ns));
    }
  }
}

KrausChannel idle_channel(const QubitCoherence& c, double duration_ns) {
  if (c.t2_ns > 2.0 * c.t1_ns) {
    throw std::invalid_argument(
        fmt::format("T2 = {} ns exceeds 2·T1 = {} ns", c.t2_ns, 2.0 * c.t1_ns));
  }
  if (!(duration_ns >= 0.0)) throw std::invalid_argument("idle duration must be >= 0");
  const double gamma = 1.0 - std::exp(-duration_ns / c.t1_ns);
  const double dephasing_rate = 1.0 / c.t2_ns - 0.5 / c.t1_ns;
  const double q = 0.5 * (1.0 - std::exp(-duration_ns * dephasing_rate));
  return channels::amplitude_damping(gamma).then(channels::phase_flip(q));
}

std::vector<ChannelSite> decoherence_channels(const DecoherenceConfig& cfg,
                                              const Moment& moment,
                                              std::size_t n_qubits) {
  std::vector<ChannelSite> sites;
  if (!cfg.enabled) return sites;
  cfg.validate();
  const double t = moment.duration_ns();
  const std::size_t n = std::min(n_qubits, cfg.qubits.size());
  for (std::size_t q = 0; q < n; ++q) {
    sites.push_back(ChannelSite{idle_channel(cfg.qubits[q], t), {q},
                                fmt::format("decoherence[q{}]", q)});
  }
  return sites;
}

// ---------------------------------------------------------------------------

bool NoiseConfig::is_ideal() const {
  return !decoherence.enabled && readout.ideal() && initial_excitation == 0.0;
}

void NoiseConfig::validate() const {
  decoherence.validate();
  require_probability(initial_excitation, "initial_excitation");
}

DensityMatrix apply_initial_excitation(const DensityMatrix& rho, const QubitList& qubits,
                                       double excitation) {
  if (excitation == 0.0) return rho;
  DensityMatrix out = rho;
  const auto ch = channels::bit_flip(excitation);
  for (auto q : qubits) out = apply_channel(out, ch, {q});
  return out;
}

}  // namespace repqed
