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
#include <numbers>

#include "oracle.hpp"
#include "random_states.hpp"
#include "repqed/metrics.hpp"

using namespace repqed;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

DensityMatrix pure(const Vector& v, std::size_t n) { return DensityMatrix::from_pure(PureState(n, v)); }

unsigned mask_of(const QubitList& q) {
  unsigned m = 0;
  for (auto x : q) m |= 4U >> x;
  return m;
}

std::vector<double> grid21() {
  std::vector<double> g;
  for (int i = 0; i <= 20; ++i) g.push_back(i / 20.0);
  return g;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("assignment fidelity examples") {
  std::map<std::size_t, SyndromeDistribution> ideal, top_random;
  for (std::size_t i = 0; i < 8; ++i) {
    const auto s = expected_syndrome(i);
    ideal[i][s.str()] = 1.0;
    const auto other = Syndrome{s.top == Parity::Even ? Parity::Odd : Parity::Even, s.bottom};
    top_random[i][s.str()] = 50.0;  // raw counts are accepted
    top_random[i][other.str()] = 50.0;
  }
  CHECK(assignment_fidelity(ideal) == doctest::Approx(1.0));
  CHECK(assignment_fidelity(top_random) == doctest::Approx(0.5));
  ideal.erase(3);
  CHECK_THROWS(assignment_fidelity(ideal));
}

TEST_CASE("witness examples") {
  Vector phi(4);
  phi << 1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0);
  CHECK(witnesses(pure(phi, 2)).w_phi_plus == doctest::Approx(-0.5));
  CHECK(witnesses(DensityMatrix::zero_state(2)).w_phi_plus == doctest::Approx(0.0));
  const auto w = witnesses(DensityMatrix::maximally_mixed(2));
  for (double v : {w.w_phi_plus, w.w_phi_minus, w.w_psi_plus, w.w_psi_minus}) {
    CHECK(v == doctest::Approx(0.25));
  }
  CHECK_THROWS(witnesses(DensityMatrix::zero_state(3)));
}

TEST_CASE("each witness reaches -1/2 on its own Bell state") {
  const double r = 1.0 / std::sqrt(2.0);
  Vector pp(4), pm(4), sp(4), sm(4);
  pp << r, 0, 0, r;
  pm << r, 0, 0, -r;
  sp << 0, r, r, 0;
  sm << 0, r, -r, 0;
  CHECK(witnesses(pure(pm, 2)).w_phi_minus == doctest::Approx(-0.5));
  CHECK(witnesses(pure(sp, 2)).w_psi_plus == doctest::Approx(-0.5));
  CHECK(witnesses(pure(sm, 2)).w_psi_minus == doctest::Approx(-0.5));
  CHECK(witnesses(pure(pp, 2)).w_psi_plus == doctest::Approx(0.5));
}

TEST_CASE("witness floor holds for random states") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 500; ++i) {
    const auto w = witnesses(i % 2 ? testutil::random_mixed(rng, 2)
                                   : DensityMatrix::from_pure(testutil::random_pure(rng, 2)));
    for (double v : {w.w_phi_plus, w.w_phi_minus, w.w_psi_plus, w.w_psi_minus}) {
      CHECK(v >= -0.5 - 1e-9);
    }
  }
}

TEST_CASE("Mermin examples") {
  CHECK(mermin(DensityMatrix::from_pure(ghz_state(0.0))) == doctest::Approx(4.0));
  CHECK(mermin(DensityMatrix::zero_state(3)) == doctest::Approx(0.0));
  CHECK(mermin(DensityMatrix::from_pure(ghz_state(std::numbers::pi / 3))) == doctest::Approx(2.0));
  for (int k = 0; k < 13; ++k) {
    const double phi = 2 * std::numbers::pi * k / 12;
    CHECK(mermin(DensityMatrix::from_pure(ghz_state(phi))) == doctest::Approx(4 * std::cos(phi)));
  }
  CHECK_THROWS(mermin(DensityMatrix::zero_state(2)));
}

TEST_CASE("Mermin bounds: 4 in general, 2 for product states") {
  std::mt19937_64 rng(32);
  double worst_product = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const auto a = DensityMatrix::from_pure(testutil::random_pure(rng, 1));
    const auto b = DensityMatrix::from_pure(testutil::random_pure(rng, 1));
    const auto c = DensityMatrix::from_pure(testutil::random_pure(rng, 1));
    worst_product = std::max(worst_product, std::abs(mermin(a.tensor(b).tensor(c))));
  }
  CHECK(worst_product <= 2.0 + 1e-9);
  for (int i = 0; i < 200; ++i) {
    CHECK(std::abs(mermin(DensityMatrix::from_pure(testutil::random_pure(rng, 3)))) <= 4.0 + 1e-9);
  }
}

TEST_CASE("Pauli expectations and reconstruction") {
  const auto zero = pauli_expectations(DensityMatrix::zero_state(3));
  CHECK(zero.size() == 64);
  CHECK(zero.at("ZII") == doctest::Approx(1.0));
  CHECK(zero.at("XII") == doctest::Approx(0.0));
  const auto ghz = pauli_expectations(DensityMatrix::from_pure(ghz_state(0.0)));
  CHECK(ghz.at("XXX") == doctest::Approx(1.0));
  CHECK(ghz.at("ZZI") == doctest::Approx(1.0));
  CHECK(ghz.at("ZII") == doctest::Approx(0.0));
  for (const auto& [s, v] : pauli_expectations(DensityMatrix::maximally_mixed(3))) {
    CHECK(v == doctest::Approx(s == "III" ? 1.0 : 0.0));
  }
  std::mt19937_64 rng(33);
  const auto rho = testutil::random_mixed(rng, 3);
  CHECK(max_abs(reconstruct_from_paulis(pauli_expectations(rho)).matrix() - rho.matrix()) < 1e-9);
}

TEST_CASE("oracle confirms the closed forms before they are used as expectations") {
  for (double p : grid21()) {
    CHECK(oracle::f3q(oracle::kAll, p, true) == doctest::Approx(oracle::f3q_qed_closed(p)).epsilon(1e-12));
    CHECK(oracle::f3q(oracle::kAll, p, false) == doctest::Approx(oracle::f3q_idle_closed(p)).epsilon(1e-12));
    CHECK(oracle::f3q(oracle::kM, p, true) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(oracle::f3q(oracle::kM, p, false) == doctest::Approx(1.0 - p).epsilon(1e-12));
  }
}

TEST_CASE("F_3Q curves in the ideal limit") {
  for (double p : grid21()) {
    const auto q3 = f3q(run_rounds(ErrorSpec::incoherent(p, reg::kData), Pipeline::Qed));
    const auto i3 = f3q(run_rounds(ErrorSpec::incoherent(p, reg::kData), Pipeline::Idle));
    const auto q1 = f3q(run_rounds(ErrorSpec::incoherent(p, {reg::kDm}), Pipeline::Qed));
    const auto i1 = f3q(run_rounds(ErrorSpec::incoherent(p, {reg::kDm}), Pipeline::Idle));
    CHECK(std::abs(q3.average - oracle::f3q_qed_closed(p)) < 1e-9);
    CHECK(std::abs(i3.average - oracle::f3q_idle_closed(p)) < 1e-9);
    CHECK(std::abs(q1.average - 1.0) < 1e-9);
    CHECK(std::abs(i1.average - (1.0 - p)) < 1e-9);
    CHECK(q3.average >= i3.average - 1e-12);
    double mean = 0.0;
    for (double v : q3.per_cardinal) mean += v / 6.0;
    CHECK(mean == doctest::Approx(q3.average));
  }
  CHECK(f3q(run_rounds(ErrorSpec::incoherent(0.5, reg::kData), Pipeline::Qed)).average ==
        doctest::Approx(2.0 / 3.0));
  CHECK(f3q(run_rounds(ErrorSpec::incoherent(1.0, reg::kData), Pipeline::Qed)).average ==
        doctest::Approx(1.0 / 3.0));
  CHECK(f3q(run_rounds(ErrorSpec::incoherent(1.0, reg::kData), Pipeline::Idle)).average ==
        doctest::Approx(1.0 / 3.0));
}

TEST_CASE("f3q from branch outputs matches a direct recomputation for random logical inputs") {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 6; ++trial) {
    const auto psi = testutil::random_pure(rng, 1);
    const cplx a = psi.amplitudes()(0), b = psi.amplitudes()(1);
    const double p = 0.13 * (trial + 1);
    for (bool qed : {true, false}) {
      double lib = 0.0;
      const PureState target = logical_state(a, b);
      for (const auto& pat : incoherent_patterns(p, reg::kData)) {
        Circuit c = encode_by_gates();
        c.append(flip_moment(pat.flips));
        c.append(qed ? stabilizer_round() : idle_round());
        const auto run = run_exact(c, encoding_input(psi));
        for (const auto& br : run.branches) {
          const auto data = partial_trace(br.state, reg::kData);
          const Operator fix = qed ? correction_for(syndrome_of(br)) : gates::pauli_string("IXI");
          lib += pat.weight * br.probability * fidelity_to_pure(apply_operator(data, fix, reg::kData), target);
        }
      }
      double ref = 0.0;
      const auto psi_l = oracle::logical(a, b);
      for (const auto& [w, v] : oracle::first_round(psi_l, oracle::kAll, p, qed, false)) {
        ref += w * oracle::overlap(psi_l, v);
      }
      CHECK(lib == doctest::Approx(ref).epsilon(1e-10));
    }
  }
}

TEST_CASE("F_L matches the oracle across both error rounds") {
  for (double p1 : {0.0, 0.1, 0.35, 0.5, 0.9, 1.0}) {
    for (double p2 : {0.0, 0.2, 0.5}) {
      const auto second = incoherent_patterns(p2, reg::kData);
      for (bool qed : {true, false}) {
        const auto out = run_rounds(ErrorSpec::incoherent(p1, reg::kData), qed ? Pipeline::Qed : Pipeline::Idle);
        CHECK(f_logical(out, second).average ==
              doctest::Approx(oracle::f_logical(p1, p2, qed)).epsilon(1e-10));
      }
    }
  }
  const auto none = incoherent_patterns(0.0, reg::kData);
  CHECK(f_logical(run_rounds(ErrorSpec::incoherent(0.0, reg::kData), Pipeline::Qed), none).average ==
        doctest::Approx(1.0));
  CHECK(f_logical(run_rounds(ErrorSpec::incoherent(0.0, reg::kData), Pipeline::Idle), none).average ==
        doctest::Approx(1.0));
}

TEST_CASE("F_L for single errors on different and equal qubits") {
  const std::vector<ErrorPattern> on_m{{{reg::kDm}, 1.0}};
  const auto qed = f_logical(run_rounds(ErrorSpec::flips({reg::kDt}), Pipeline::Qed), on_m);
  const auto idle = f_logical(run_rounds(ErrorSpec::flips({reg::kDt}), Pipeline::Idle), on_m);
  CHECK(qed.average == doctest::Approx(1.0));
  CHECK(idle.average == doctest::Approx(1.0 / 3.0));
  // kCardinals order: 0, 1, +, -, +i, -i
  const std::array<double, 6> expected{0, 0, 1, 1, 0, 0};
  for (std::size_t i = 0; i < 6; ++i) CHECK(idle.per_cardinal[i] == doctest::Approx(expected[i]).epsilon(1e-12));

  const std::vector<ErrorPattern> on_t{{{reg::kDt}, 1.0}};
  CHECK(f_logical(run_rounds(ErrorSpec::flips({reg::kDt}), Pipeline::Qed), on_t).average == doctest::Approx(1.0));
  CHECK(f_logical(run_rounds(ErrorSpec::flips({reg::kDt}), Pipeline::Idle), on_t).average == doctest::Approx(1.0));
}

TEST_CASE("combination labels") {
  CHECK(combination_label({}, {}) == "0/0");
  CHECK(combination_label({0}, {0}) == "1/1a");
  CHECK(combination_label({0}, {2}) == "1/1b");
  CHECK(combination_label({0}, {0, 1}) == "1/2a");
  CHECK(combination_label({0}, {1, 2}) == "1/2b");
  CHECK(combination_label({0, 1}, {1}) == "2/1a");
  CHECK(combination_label({0, 1}, {0, 1}) == "2/2a");
  CHECK(combination_label({0, 1}, {1, 2}) == "2/2b");
  CHECK(combination_label({0, 1, 2}, {}) == "3/0");
  CHECK(flip_set_name({0, 2}) == "tb");
  CHECK(flip_set_name({}) == "-");
}

TEST_CASE("error-combination grid matches the oracle and the majority-vote classification") {
  const auto table = error_combination_table();
  REQUIRE(table.grid.size() == 64);
  for (const auto& e : table.grid) {
    const unsigned m1 = mask_of(e.first), m2 = mask_of(e.second);
    CHECK(e.f_qed == doctest::Approx(oracle::f_logical_fixed(m1, m2, true)).epsilon(1e-10));
    CHECK(e.f_idle == doctest::Approx(oracle::f_logical_fixed(m1, m2, false)).epsilon(1e-10));
    const bool qed_flip = (oracle::popcount(m1) >= 2) != (oracle::popcount(m2) >= 2);
    const bool idle_flip = oracle::popcount(m1 ^ m2) >= 2;
    const Verdict expected = qed_flip == idle_flip ? Verdict::Tie
                             : qed_flip            ? Verdict::IdleWins
                                                   : Verdict::QedWins;
    CHECK_MESSAGE(e.verdict == expected, e.label, " ", flip_set_name(e.first), "/", flip_set_name(e.second));
  }
  std::map<std::string, CombinationRow> rows;
  for (const auto& r : table.rows) rows[r.label] = r;
  CHECK(rows.at("1/1b").verdict == Verdict::QedWins);
  CHECK(rows.at("1/1b").f_qed == doctest::Approx(1.0));
  CHECK(rows.at("1/1b").f_idle < 1.0);
  CHECK(rows.at("1/1a").verdict == Verdict::Tie);
  CHECK(rows.at("0/0").f_qed == doctest::Approx(1.0));
  CHECK(rows.at("0/0").f_idle == doctest::Approx(1.0));
  CHECK(rows.at("1/0").f_qed == doctest::Approx(1.0));
  CHECK(rows.at("1/0").f_idle == doctest::Approx(1.0));
  CHECK(rows.at("3/0").verdict == Verdict::Tie);
  CHECK(rows.at("3/0").f_qed == doctest::Approx(rows.at("3/0").f_idle));
  CHECK(rows.at("2/2b").verdict == Verdict::QedWins);
  CHECK(rows.at("1/2a").verdict == Verdict::IdleWins);
  CHECK(rows.at("2/1a").verdict == Verdict::IdleWins);
}

TEST_CASE("fidelity reports reject mismatched inputs") {
  const auto qed = run_rounds(ErrorSpec::incoherent(0.1, reg::kData), Pipeline::Qed);
  CHECK_THROWS(f3q_idle(qed));
  CHECK_THROWS(f3q_qed(std::span<const RoundOutcome>(qed.data(), 3)));
}

}  // TEST_SUITE
