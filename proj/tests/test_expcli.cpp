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

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "repqed/config.hpp"
#include "repqed/experiments.hpp"

using namespace repqed;
namespace fs = std::filesystem;

namespace {

std::string message_of(std::string_view text) {
  try {
    parse_config(text, "cfg.json");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("repqed_unit_" + name);
  fs::remove_all(p);
  return p;
}

ExperimentConfig small_config() {
  ExperimentConfig cfg = default_config();
  cfg.phi_grid = {0.0, std::numbers::pi / 3};
  cfg.p_grid = {0.0, 0.25, 0.5};
  return cfg;
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("minimal config takes defaults") {
  const auto cfg = parse_config(R"({"schema_version": 1})");
  CHECK(cfg.phi_grid.size() == 13);
  CHECK(cfg.p_grid.size() == 21);
  CHECK(cfg.p_grid.back() == 1.0);
  CHECK(cfg.noise_config().is_ideal());
  CHECK_FALSE(cfg.seed.has_value());
}

TEST_CASE("syntax errors report line and column") {
  const std::string msg = message_of("{\n  \"schema_version\": 1,\n  \"shots\": ,\n}");
  CHECK(msg.find("cfg.json:3:") != std::string::npos);
}

TEST_CASE("field errors name the dotted path") {
  CHECK(message_of(R"({"schema_version": 1, "noise": {"readout": {"eps_x": 0.1}}})")
            .find("noise.readout.eps_x") != std::string::npos);
  CHECK(message_of(R"({"schema_version": 1, "noise": {"readout": {"eps_t": "high"}}})")
            .find("noise.readout.eps_t") != std::string::npos);
  CHECK(message_of(R"({"schema_version": 1, "grids": {"p_err": [0.1, 1.5]}})")
            .find("grids.p_err[1]") != std::string::npos);
  CHECK(message_of(R"({"schema_version": 1, "grids": {"phi": []}})").find("grids.phi") !=
        std::string::npos);
  CHECK(message_of(R"({"schema_version": 2})").find("schema_version") != std::string::npos);
  CHECK(message_of(R"({"shots": 5})").find("schema_version") != std::string::npos);
}

TEST_CASE("invariants: seed with shots, eps plus veto, T2 bound") {
  CHECK(message_of(R"({"schema_version": 1, "shots": 10})").find("seed") != std::string::npos);
  CHECK(message_of(R"({"schema_version": 1, "shots": 10, "seed": 3})").empty());
  CHECK(message_of(R"({"schema_version": 1, "noise": {"readout": {"eps_t": 0.6, "veto_t": 0.5}}})")
            .find("veto_t") != std::string::npos);
  CHECK(message_of(R"({"schema_version": 1, "noise": {"decoherence": {"qubits": {"D_m": {"t1_ns": 100, "t2_ns": 250}}}}})")
            .find("D_m.t2_ns") != std::string::npos);
}

TEST_CASE("grid specs expand and lists pass through") {
  const auto cfg = parse_config(
      R"({"schema_version": 1, "grids": {"phi": [0.5, 1.5], "p_err": {"start": 0, "stop": 0.5, "count": 6}}})");
  CHECK(cfg.phi_grid == std::vector<double>{0.5, 1.5});
  REQUIRE(cfg.p_grid.size() == 6);
  CHECK(cfg.p_grid[1] == doctest::Approx(0.1));
  CHECK(cfg.p_grid[5] == 0.5);
}

TEST_CASE("vetoes apply only under strong postselection") {
  const std::string base = R"({"schema_version": 1, "noise": {"readout": {"enabled": true, "eps_t": 0.01, "veto_t": 0.2}}, "postselection": ")";
  const auto opt = parse_config(base + "optimal-threshold\"}");
  const auto strong = parse_config(base + "strong\"}");
  CHECK(opt.noise_config().readout.for_label("P_t").veto == 0.0);
  CHECK(strong.noise_config().readout.for_label("P_t").veto == 0.2);
}

TEST_CASE("canonical echo and hash") {
  const auto a = parse_config(R"({"schema_version": 1, "seed": 4, "output": {"dir": "x"}})");
  auto b = parse_config(R"({"seed": 4, "schema_version": 1, "output": {"dir": "y"}})");
  CHECK(canonical_json(a) == canonical_json(b));
  CHECK(config_hash(a) == config_hash(b));
  CHECK(parse_config(canonical_json(a)).p_grid == a.p_grid);
  b.noise.eps_t = 0.01;
  CHECK(config_hash(a) != config_hash(b));
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("shipped example configs parse") {
  for (const char* name : {"ideal.json", "example_noisy.json"}) {
    CHECK_NOTHROW(load_config(fs::path(REPQED_CONFIG_DIR) / name));
  }
}

}  // TEST_SUITE

TEST_SUITE("expcli") {

TEST_CASE("parity check: ideal distribution is deterministic") {
  const auto r = parity_check(small_config());
  CHECK(r.assignment_fidelity == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 0; i < 8; ++i) {
    for (const auto& [syn, p] : r.exact[i]) {
      CHECK(p == doctest::Approx(syn == expected_syndrome(i).str() ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("parity check: readout errors cap assignment at 0.91") {
  auto cfg = small_config();
  cfg.noise.readout_enabled = true;
  cfg.noise.eps_t = cfg.noise.eps_b = 0.046;
  CHECK(std::abs(parity_check(cfg).assignment_fidelity - 0.910) < 0.001);
}

TEST_CASE("parity check: sampled histograms agree with exact probabilities") {
  auto cfg = small_config();
  cfg.noise.readout_enabled = true;
  cfg.noise.eps_t = 0.08;
  cfg.noise.eps_b = 0.03;
  cfg.shots = 100000;
  cfg.seed = 77;
  const auto r = parity_check(cfg);
  for (std::size_t i = 0; i < 8; ++i) {
    std::size_t total = 0;
    for (const auto& [syn, c] : r.histograms[i]) {
      total += c;
      const double p = r.exact[i].at(syn);
      const double sigma = std::sqrt(1e5 * p * (1 - p));
      CHECK(std::abs(static_cast<double>(c) - 1e5 * p) <= 3.0 * sigma + 1e-9);
    }
    CHECK(total == 100000);
    CHECK(chi_square(r.histograms[i], r.exact[i]).p_value > 0.001);
  }
}

TEST_CASE("chi-square helper") {
  const SyndromeDistribution p{{"a", 0.5}, {"b", 0.5}};
  CHECK(chi_square({{"a", 500}, {"b", 500}}, p).p_value == doctest::Approx(1.0));
  CHECK(chi_square({{"a", 600}, {"b", 400}}, p).p_value < 1e-6);
  CHECK(chi_square({{"a", 10}, {"c", 1}}, {{"a", 1.0}}).p_value == 0.0);
}

TEST_CASE("entangle: ideal witnesses, Mermin and corrected GHZ") {
  auto cfg = small_config();
  cfg.phi_grid.clear();
  for (int k = 0; k < 13; ++k) cfg.phi_grid.push_back(2 * std::numbers::pi * k / 12);
  const auto r = entangle(cfg);
  for (const auto& row : r.mermin) {
    CHECK(row.probability == doctest::Approx(0.25));
    CHECK(row.ghz_fidelity_corrected == doctest::Approx(1.0).epsilon(1e-12));
    if (row.syndrome == Syndrome::parse("oo")) {
      CHECK(row.mermin == doctest::Approx(4 * std::cos(row.phi)).epsilon(1e-12));
      CHECK(row.ghz_fidelity == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  CHECK(r.best_phi == 0.0);
  CHECK(r.paulis.at("XXX") == doctest::Approx(1.0));
  bool found = false;
  for (const auto& row : r.witnesses) {
    if (row.phi == 0.0 && row.postselect == 'o') {
      CHECK(row.w.w_phi_plus == doctest::Approx(-0.5));
      found = true;
    }
    if (row.phi == 0.0 && row.postselect == 'e') CHECK(row.w.w_psi_plus == doctest::Approx(-0.5));
  }
  CHECK(found);
  CHECK(r.retained_single == 1.0);
}

TEST_CASE("entangle: strong postselection reports the veto survival fraction") {
  auto cfg = small_config();
  cfg.postselection = PostselectionMode::Strong;
  cfg.noise.readout_enabled = true;
  cfg.noise.eps_t = cfg.noise.eps_b = 0.02;
  cfg.noise.veto_t = 0.1;
  cfg.noise.veto_b = 0.2;
  const auto r = entangle(cfg);
  CHECK(r.retained_double == doctest::Approx(0.9 * 0.8));
}

TEST_CASE("sweep: ideal crossover sits at zero") {
  const auto r = qed_sweep(small_config());
  CHECK(r.f3q.size() == 12);
  CHECK(r.fl.size() == 6);
  for (const auto& c : r.crossovers) {
    REQUIRE(c.p_err.has_value());
    CHECK(*c.p_err == 0.0);
  }
}

TEST_CASE("runner writes byte-stable outputs that verify") {
  auto cfg = small_config();
  cfg.shots = 2000;
  cfg.seed = 5;
  const auto a = scratch("a");
  const auto b = scratch("b");
  for (const auto& dir : {a, b}) {
    cmd_parity_check(cfg, {dir, false});
    cmd_entangle(cfg, {dir, false});
    cmd_qed_sweep(cfg, {dir, false});
    cmd_error_table(cfg, {dir, false});
  }
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    CHECK(slurp(entry.path()) == slurp(b / entry.path().filename()));
    ++compared;
  }
  CHECK(compared == 15);
  CHECK(verify(a).ok());

  // different seed changes the sampled histogram and the config hash
  cfg.seed = 6;
  const auto c = scratch("c");
  cmd_parity_check(cfg, {c, false});
  CHECK(slurp(a / "parity_histogram.csv") != slurp(c / "parity_histogram.csv"));
}

TEST_CASE("verify detects tampering and hash mismatches") {
  const auto cfg = small_config();
  const auto dir = scratch("tamper");
  cmd_parity_check(cfg, {dir, false});
  REQUIRE(verify(dir).ok());

  {
    std::ofstream f(dir / "parity_probabilities.csv", std::ios::app);
    f << "extra\n";
  }
  CHECK_FALSE(verify(dir).ok());

  const auto dir2 = scratch("rehash");
  cmd_parity_check(cfg, {dir2, false});
  auto other = cfg;
  other.name = "other";
  const auto dir3 = scratch("other");
  cmd_parity_check(other, {dir3, false});
  fs::copy_file(dir3 / "syndrome_table.csv", dir2 / "syndrome_table.csv",
                fs::copy_options::overwrite_existing);
  const auto report = verify(dir2);
  CHECK_FALSE(report.ok());
  bool saw_hash = false;
  for (const auto& p : report.problems) saw_hash |= p.find("config hash") != std::string::npos;
  CHECK(saw_hash);

  CHECK_FALSE(verify(scratch("empty")).ok());
}

TEST_CASE("timing is recorded only on request") {
  const auto cfg = small_config();
  const auto plain = scratch("plain");
  const auto timed = scratch("timed");
  cmd_error_table(cfg, {plain, false});
  cmd_error_table(cfg, {timed, true});
  CHECK(slurp(plain / "error-table.manifest.json").find("wall_clock_s") == std::string::npos);
  CHECK(slurp(timed / "error-table.manifest.json").find("wall_clock_s") != std::string::npos);
  CHECK(verify(timed).ok());
}

}  // TEST_SUITE
