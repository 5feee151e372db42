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

#include "repqed/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>
#include <fmt/core.h>
#include <json.hpp>

namespace repqed {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string basis_label(std::size_t index) {
  return fmt::format("{}{}{}", (index >> 2) & 1U, (index >> 1) & 1U, index & 1U);
}

SyndromeDistribution empty_distribution() {
  SyndromeDistribution d;
  for (const auto& s : Syndrome::all()) d[s.str()] = 0.0;
  return d;
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 1.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

// ---------------------------------------------------------------------------
// Parity characterization

ParityCheckResult parity_check(const ExperimentConfig& cfg) {
  const NoiseConfig noise = cfg.noise_config();
  const Circuit round = stabilizer_round();
  ParityCheckResult out;
  std::map<std::size_t, SyndromeDistribution> exact_by_input;
  std::map<std::size_t, SyndromeDistribution> sampled_by_input;
  std::vector<double> retained;

  for (std::size_t input = 0; input < 8; ++input) {
    DensityMatrix rho = DensityMatrix::from_pure(PureState::basis(reg::kSize, input << 2));
    rho = apply_initial_excitation(rho, reg::kAncillas, noise.initial_excitation);
    const RunResult run = run_exact(round, rho, noise);
    retained.push_back(run.retained_fraction);

    SyndromeDistribution dist = empty_distribution();
    std::map<std::string, std::string> key_to_syndrome;
    for (const auto& b : run.branches) {
      dist[syndrome_of(b).str()] += b.probability;
      key_to_syndrome[b.key()] = syndrome_of(b).str();
    }
    out.exact[input] = dist;
    exact_by_input[input] = dist;

    if (cfg.shots > 0 && !run.branches.empty()) {
      const Histogram raw = sample_shots(run.branches, cfg.shots, *cfg.seed, input);
      Histogram h;
      SyndromeDistribution as_double = empty_distribution();
      for (const auto& s : Syndrome::all()) h[s.str()] = 0;
      for (const auto& [key, count] : raw) {
        h[key_to_syndrome.at(key)] += count;
        as_double[key_to_syndrome.at(key)] += static_cast<double>(count);
      }
      out.histograms[input] = h;
      sampled_by_input[input] = as_double;
    }
  }
  out.assignment_fidelity = assignment_fidelity(exact_by_input);
  if (sampled_by_input.size() == 8) {
    out.sampled_assignment_fidelity = assignment_fidelity(sampled_by_input);
  }
  out.retained_fraction = mean(retained);
  return out;
}

ChiSquare chi_square(const Histogram& counts, const SyndromeDistribution& probabilities) {
  std::size_t total = 0;
  for (const auto& [key, c] : counts) total += c;
  ChiSquare r;
  std::size_t bins = 0;
  for (const auto& [key, p] : probabilities) {
    const auto it = counts.find(key);
    const double observed = it == counts.end() ? 0.0 : static_cast<double>(it->second);
    const double expected = p * static_cast<double>(total);
    if (expected <= 0.0) {
      if (observed > 0.0) r.statistic = std::numeric_limits<double>::infinity();
      continue;
    }
    ++bins;
    r.statistic += (observed - expected) * (observed - expected) / expected;
  }
  for (const auto& [key, c] : counts) {
    if (c > 0 && !probabilities.contains(key)) r.statistic = std::numeric_limits<double>::infinity();
  }
  r.dof = bins > 0 ? bins - 1 : 0;
  if (std::isinf(r.statistic)) {
    r.p_value = 0.0;
  } else if (r.dof == 0) {
    r.p_value = 1.0;
  } else {
    const boost::math::chi_squared_distribution<double> dist(static_cast<double>(r.dof));
    r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Entanglement by measurement

PureState phase_superposition(double phi) {
  Vector v(2);
  v(0) = 1.0 / std::sqrt(2.0);
  v(1) = std::polar(1.0 / std::sqrt(2.0), phi);
  return PureState(1, v);
}

EntangleResult entangle(const ExperimentConfig& cfg) {
  const NoiseConfig noise = cfg.noise_config();
  const Circuit top_only = stabilizer_round({true, false});
  const Circuit bottom_only = stabilizer_round({false, true});
  const Circuit both = stabilizer_round();

  EntangleResult out;
  std::vector<double> retained_single;
  std::vector<double> retained_double;
  std::optional<DensityMatrix> best_state;
  double best_abs = -1.0;

  for (double phi : cfg.phi_grid) {
    DensityMatrix input = measurement_encoding_input(phase_superposition(phi));
    input = apply_initial_excitation(input, reg::kAncillas, noise.initial_excitation);

    for (const bool top : {true, false}) {
      const RunResult run = run_exact(top ? top_only : bottom_only, input, noise);
      retained_single.push_back(run.retained_fraction);
      const std::string& label = top ? kTopParityLabel : kBottomParityLabel;
      const QubitList pair = top ? QubitList{reg::kDt, reg::kDm} : QubitList{reg::kDm, reg::kDb};
      for (const auto& b : run.branches) {
        WitnessRow row{phi, top ? "top" : "bottom", b.outcome(label) ? 'o' : 'e', b.probability,
                       {kNaN, kNaN, kNaN, kNaN}};
        if (!b.degenerate) row.w = witnesses(partial_trace(b.state, pair));
        out.witnesses.push_back(row);
      }
    }

    const RunResult run = run_exact(both, input, noise);
    retained_double.push_back(run.retained_fraction);
    const PureState ghz = ghz_state(phi);
    for (const auto& db : to_data_branches(run)) {
      MerminRow row{phi, db.syndrome, db.probability, kNaN, kNaN, kNaN, kNaN};
      if (!db.degenerate) {
        const DensityMatrix corrected =
            apply_operator(db.data, encoding_correction_for(db.syndrome), reg::kData);
        row.mermin = mermin(db.data);
        row.mermin_corrected = mermin(corrected);
        row.ghz_fidelity = fidelity_to_pure(db.data, ghz);
        row.ghz_fidelity_corrected = fidelity_to_pure(corrected, ghz);
        if (db.syndrome == Syndrome::parse("oo") && std::abs(row.mermin) > best_abs + 1e-12) {
          best_abs = std::abs(row.mermin);
          out.best_phi = phi;
          best_state = db.data;
        }
      }
      out.mermin.push_back(row);
    }
  }
  if (best_state) out.paulis = pauli_expectations(*best_state);
  out.retained_single = mean(retained_single);
  out.retained_double = mean(retained_double);
  return out;
}

// ---------------------------------------------------------------------------
// Fidelity sweeps

std::optional<double> crossover(const std::vector<FidelityReport>& qed,
                                const std::vector<FidelityReport>& idle, double tol) {
  if (qed.size() != idle.size()) {
    throw std::invalid_argument("crossover: QED and idle curves differ in length");
  }
  for (std::size_t i = 0; i < qed.size(); ++i) {
    if (qed[i].average >= idle[i].average - tol) return qed[i].p_err;
  }
  return std::nullopt;
}

SweepResult qed_sweep(const ExperimentConfig& cfg) {
  const NoiseConfig noise = cfg.noise_config();
  SweepResult out;
  std::map<std::pair<int, Pipeline>, std::vector<FidelityReport>> f3q_curves;
  std::map<Pipeline, std::vector<FidelityReport>> fl_curves;

  for (const Scenario scenario : {Scenario::One, Scenario::Three}) {
    const QubitList targets = scenario_targets(scenario);
    const int tag = static_cast<int>(scenario);
    for (const Pipeline pipeline : {Pipeline::Qed, Pipeline::Idle}) {
      std::vector<double> retained;
      for (double p : cfg.p_grid) {
        const ErrorSpec spec = cfg.error_mode == ErrorMode::Coherent
                                   ? ErrorSpec::coherent(p, targets)
                                   : ErrorSpec::incoherent(p, targets);
        const auto outcomes = run_rounds(spec, pipeline, noise);
        for (const auto& o : outcomes) retained.push_back(o.retained_fraction);

        FidelityReport r = f3q(outcomes);
        r.scenario = tag;
        r.p_err = p;
        out.f3q.push_back(r);
        f3q_curves[{tag, pipeline}].push_back(r);

        if (scenario == Scenario::Three) {
          const auto second = incoherent_patterns(p, reg::kData);
          FidelityReport fl = f_logical(outcomes, second);
          fl.scenario = tag;
          fl.p_err = p;
          out.fl.push_back(fl);
          fl_curves[pipeline].push_back(fl);
        }
      }
      out.retained[fmt::format("scenario{}_{}", tag, to_string(pipeline))] = mean(retained);
    }
  }

  for (const int tag : {1, 3}) {
    const auto& q = f3q_curves.at({tag, Pipeline::Qed});
    const auto& i = f3q_curves.at({tag, Pipeline::Idle});
    out.crossovers.push_back({"f3q", tag, crossover(q, i), q.front().average - i.front().average});
  }
  const auto& q = fl_curves.at(Pipeline::Qed);
  const auto& i = fl_curves.at(Pipeline::Idle);
  out.crossovers.push_back({"fl", 3, crossover(q, i), q.front().average - i.front().average});
  return out;
}

// ---------------------------------------------------------------------------
// Output

namespace {

class Emitter {
 public:
  Emitter(const ExperimentConfig& cfg, const RunOptions& opts, std::string command)
      : cfg_(cfg), opts_(opts), command_(std::move(command)), hash_(config_hash(cfg)),
        start_(std::chrono::steady_clock::now()) {
    fs::create_directories(opts_.out_dir);
  }

  std::string header() const { return fmt::format("# config_hash: {}\n", hash_); }

  void write(const std::string& name, const std::string& body) {
    const std::string contents = header() + body;
    const fs::path path = opts_.out_dir / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
    f << contents;
    f.close();
    files_.push_back({name, sha256_hex(contents)});
    summary_.files.push_back(path);
  }

  void retained(const std::string& key, double v) { retained_[key] = v; }

  void scalar(const std::string& key, double v) {
    scalars_[key] = v;
    summary_.scalars[key] = v;
  }

  RunSummary finish() {
    summary_.wall_clock_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    ordered_json m;
    m["tool"] = "repqed";
    m["version"] = std::string(kToolVersion);
    m["command"] = command_;
    m["config_hash"] = hash_;
    m["seed"] = cfg_.seed ? ordered_json(*cfg_.seed) : ordered_json(nullptr);
    m["config"] = ordered_json::parse(canonical_json(cfg_));
    m["retained_fractions"] = ordered_json::object();
    for (const auto& [k, v] : retained_) m["retained_fractions"][k] = v;
    m["summary"] = ordered_json::object();
    for (const auto& [k, v] : scalars_) {
      m["summary"][k] = std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
    }
    m["files"] = ordered_json::array();
    for (const auto& [name, digest] : files_) {
      m["files"].push_back({{"path", name}, {"sha256", digest}});
    }
    if (opts_.record_timing) m["wall_clock_s"] = summary_.wall_clock_s;

    summary_.manifest = opts_.out_dir / (command_ + ".manifest.json");
    std::ofstream f(summary_.manifest, std::ios::binary);
    if (!f) throw std::runtime_error(fmt::format("cannot write {}", summary_.manifest.string()));
    f << m.dump(2) << "\n";
    return summary_;
  }

 private:
  const ExperimentConfig& cfg_;
  const RunOptions& opts_;
  std::string command_;
  std::string hash_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::pair<std::string, std::string>> files_;
  std::map<std::string, double> retained_;
  std::map<std::string, double> scalars_;
  RunSummary summary_;
};

std::string fidelity_csv(const std::vector<FidelityReport>& reports) {
  std::string s = "scenario,pipeline,p_err,cardinal,value\n";
  for (const auto& r : reports) {
    for (std::size_t i = 0; i < kCardinals.size(); ++i) {
      s += fmt::format("{},{},{},{},{}\n", r.scenario, to_string(r.pipeline), r.p_err,
                       to_string(kCardinals[i]), r.per_cardinal[i]);
    }
    s += fmt::format("{},{},{},avg,{}\n", r.scenario, to_string(r.pipeline), r.p_err, r.average);
  }
  return s;
}

}  // namespace

RunSummary cmd_parity_check(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  Emitter e(cfg, opts, "parity-check");
  const ParityCheckResult r = parity_check(cfg);

  std::string probs = "input,syndrome,expected,probability\n";
  for (std::size_t input = 0; input < 8; ++input) {
    const std::string expected = expected_syndrome(input).str();
    for (const auto& [syn, p] : r.exact[input]) {
      probs += fmt::format("{},{},{},{}\n", basis_label(input), syn, syn == expected ? 1 : 0, p);
    }
  }
  e.write("parity_probabilities.csv", probs);

  if (cfg.shots > 0) {
    std::string hist = "input,syndrome,count\n";
    for (std::size_t input = 0; input < 8; ++input) {
      for (const auto& [syn, c] : r.histograms[input]) {
        hist += fmt::format("{},{},{}\n", basis_label(input), syn, c);
      }
    }
    e.write("parity_histogram.csv", hist);
  }
  e.write("syndrome_table.csv", syndrome_table_csv());

  e.scalar("assignment_fidelity", r.assignment_fidelity);
  if (r.sampled_assignment_fidelity) {
    e.scalar("sampled_assignment_fidelity", *r.sampled_assignment_fidelity);
  }
  e.retained("parity_check", r.retained_fraction);
  return e.finish();
}

RunSummary cmd_entangle(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  Emitter e(cfg, opts, "entangle");
  const EntangleResult r = entangle(cfg);

  std::string w =
      "phi,stabilizer,postselect,probability,w_phi_plus,w_phi_minus,w_psi_plus,w_psi_minus\n";
  for (const auto& row : r.witnesses) {
    w += fmt::format("{},{},{},{},{},{},{},{}\n", row.phi, row.stabilizer, row.postselect,
                     row.probability, row.w.w_phi_plus, row.w.w_phi_minus, row.w.w_psi_plus,
                     row.w.w_psi_minus);
  }
  e.write("witnesses.csv", w);

  std::string m =
      "phi,syndrome,probability,mermin,mermin_corrected,ghz_fidelity,ghz_fidelity_corrected\n";
  for (const auto& row : r.mermin) {
    m += fmt::format("{},{},{},{},{},{},{}\n", row.phi, row.syndrome.str(), row.probability,
                     row.mermin, row.mermin_corrected, row.ghz_fidelity,
                     row.ghz_fidelity_corrected);
  }
  e.write("mermin.csv", m);

  std::string t = "phi,pauli,value\n";
  for (const auto& [pauli, v] : r.paulis) t += fmt::format("{},{},{}\n", r.best_phi, pauli, v);
  e.write("tomography_paulis.csv", t);

  double best_m = kNaN;
  for (const auto& row : r.mermin) {
    if (row.phi == r.best_phi && row.syndrome == Syndrome::parse("oo")) best_m = row.mermin;
  }
  e.scalar("best_phi", r.best_phi);
  e.scalar("best_mermin_oo", best_m);
  e.retained("single_stabilizer", r.retained_single);
  e.retained("double_stabilizer", r.retained_double);
  return e.finish();
}

RunSummary cmd_qed_sweep(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  Emitter e(cfg, opts, "qed-sweep");
  const SweepResult r = qed_sweep(cfg);
  e.write("f3q.csv", fidelity_csv(r.f3q));
  e.write("fl.csv", fidelity_csv(r.fl));

  std::string c = "metric,scenario,crossover_p_err,qed_minus_idle_at_first_p\n";
  for (const auto& x : r.crossovers) {
    c += fmt::format("{},{},{},{}\n", x.metric, x.scenario,
                     x.p_err ? fmt::format("{}", *x.p_err) : std::string("none"), x.gap_at_first);
    e.scalar(fmt::format("crossover_{}_scenario{}", x.metric, x.scenario),
             x.p_err ? *x.p_err : kNaN);
  }
  e.write("crossover.csv", c);
  for (const auto& [k, v] : r.retained) e.retained(k, v);
  return e.finish();
}

RunSummary cmd_error_table(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  Emitter e(cfg, opts, "error-table");
  const CombinationTable t = error_combination_table(cfg.noise_config());

  std::string rows = "label,first_errors,second_errors,members,f_qed,f_idle,verdict\n";
  for (const auto& r : t.rows) {
    rows += fmt::format("{},{},{},{},{},{},{}\n", r.label, r.first_errors, r.second_errors,
                        r.members, r.f_qed, r.f_idle, to_string(r.verdict));
  }
  e.write("error_table.csv", rows);

  std::string grid = "first,second,label,f_qed,f_idle,verdict\n";
  for (const auto& g : t.grid) {
    grid += fmt::format("{},{},{},{},{},{}\n", flip_set_name(g.first), flip_set_name(g.second),
                        g.label, g.f_qed, g.f_idle, to_string(g.verdict));
  }
  e.write("error_grid.csv", grid);

  std::size_t qed_wins = 0;
  std::size_t idle_wins = 0;
  for (const auto& g : t.grid) {
    qed_wins += g.verdict == Verdict::QedWins;
    idle_wins += g.verdict == Verdict::IdleWins;
  }
  e.scalar("qed_wins", static_cast<double>(qed_wins));
  e.scalar("idle_wins", static_cast<double>(idle_wins));
  e.scalar("ties", static_cast<double>(t.grid.size() - qed_wins - idle_wins));
  return e.finish();
}

// ---------------------------------------------------------------------------
// Verification

VerifyReport verify(const fs::path& dir) {
  VerifyReport report;
  if (!fs::is_directory(dir)) {
    report.problems.push_back(fmt::format("{} is not a directory", dir.string()));
    return report;
  }
  std::vector<fs::path> manifests;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.size() > 14 && name.ends_with(".manifest.json")) manifests.push_back(entry.path());
  }
  std::sort(manifests.begin(), manifests.end());
  if (manifests.empty()) report.problems.push_back("no manifest files found");

  for (const auto& mpath : manifests) {
    ++report.manifests;
    const std::string mname = mpath.filename().string();
    ordered_json m;
    try {
      std::ifstream in(mpath, std::ios::binary);
      m = ordered_json::parse(in);
    } catch (const std::exception& ex) {
      report.problems.push_back(fmt::format("{}: unreadable manifest ({})", mname, ex.what()));
      continue;
    }
    if (!m.contains("config_hash") || !m.contains("config") || !m.contains("files")) {
      report.problems.push_back(fmt::format("{}: missing required fields", mname));
      continue;
    }
    const std::string hash = m.at("config_hash").get<std::string>();
    if (sha256_hex(m.at("config").dump()) != hash) {
      report.problems.push_back(
          fmt::format("{}: config echo does not hash to the recorded config hash", mname));
    }
    for (const auto& f : m.at("files")) {
      ++report.files;
      const std::string rel = f.at("path").get<std::string>();
      const fs::path path = dir / rel;
      if (!fs::exists(path)) {
        report.problems.push_back(fmt::format("{}: missing data file {}", mname, rel));
        continue;
      }
      if (sha256_file(path) != f.at("sha256").get<std::string>()) {
        report.problems.push_back(fmt::format("{}: {} content differs from manifest", mname, rel));
      }
      std::ifstream in(path, std::ios::binary);
      std::string first;
      std::getline(in, first);
      if (first != fmt::format("# config_hash: {}", hash)) {
        report.problems.push_back(
            fmt::format("{}: {} carries a different config hash", mname, rel));
      }
    }
  }
  return report;
}

}  // namespace repqed
