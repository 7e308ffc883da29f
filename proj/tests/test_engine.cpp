// Copyright 2026 The qmip Authors
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "support.hpp"

using namespace qmip;
using namespace qmip::testing;

namespace {

// Random classical one-prover verifier: every non-halting row splits its mass
// over two uniformly chosen targets in quarters, and the prover is a random
// table over {#, a}.
ProtocolSpec random_classical(std::mt19937& rng) {
  const std::vector<std::string> states = {"q0", "q1", "acc", "rej"};
  const std::vector<std::string> tape = {"^", "$", "0", "1"};
  const std::vector<std::string> moves = {"-1", "0", "+1"};
  const std::vector<std::string> gamma = {"#", "a"};
  std::uniform_int_distribution<int> pick_state(0, 3), pick_move(0, 2), pick_gamma(0, 1), pick_quarter(0, 4);
  std::string text = "[protocol]\nmode = 2pfa\nk = 1\ncutoff = 5\n[alphabets]\ninput = 0 1\ngamma1 = # a\n";
  text += "[verifier]\nstates = q0 q1 acc rej\ninitial = q0\naccept = acc\nreject = rej\n";
  for (int q = 0; q < 2; ++q) {
    for (const auto& t : tape) {
      for (const auto& g : gamma) {
        const int first = pick_quarter(rng);
        const std::string lhs = states[q] + " " + t + " " + g + " -> ";
        auto branch = [&](int quarters) {
          text += lhs + std::to_string(quarters) + "/4 " + states[pick_state(rng)] + " " + moves[pick_move(rng)] + " " +
                  gamma[pick_gamma(rng)] + "\n";
        };
        if (first > 0) branch(first);
        if (first < 4) branch(4 - first);
      }
    }
  }
  text += "[prover 1]\nstrategy = table\ntape = # a\nspace = 1\n";
  for (int step = 1; step <= 4; ++step) {
    for (const auto& g : gamma) {
      for (const auto& cell : gamma) {
        text += std::to_string(step) + " " + g + " " + cell + " -> " + gamma[pick_gamma(rng)] + " " +
                gamma[pick_gamma(rng)] + "\n";
      }
    }
  }
  return parse_protocol(text);
}

std::vector<std::pair<std::string, ProtocolSpec>> everything() {
  std::vector<std::pair<std::string, ProtocolSpec>> out;
  for (const auto& name : corpus_names()) out.emplace_back(name, corpus_protocol(name));
  for (auto& t : transform_corpus()) {
    out.emplace_back(t.name + "-lift", std::move(t.lift.protocol));
    out.emplace_back(t.name + "-reduce", std::move(t.reduce.protocol));
  }
  return out;
}

void check_conservation(const RunResult& r) {
  double acc = 0.0, rej = 0.0;
  for (const auto& round : r.rounds) {
    CHECK(round.cum_acc + round.cum_rej + round.residual == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(round.cum_acc >= acc - 1e-15);
    CHECK(round.cum_rej >= rej - 1e-15);
    acc = round.cum_acc;
    rej = round.cum_rej;
  }
  CHECK(r.final.p_acc + r.final.p_rej + r.final.p_unresolved == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.final.p_unresolved == doctest::Approx(r.rounds.back().residual));
}

}  // namespace

TEST_CASE("initial state is the single blank configuration") {
  ProtocolSpec p = corpus_protocol("nocomm");
  StateVector s = initial_state(p, "01");
  REQUIRE(s.size() == 1);
  // state, head, two communication cells, no tape cells
  CHECK(s.begin()->first == ConfigurationId{0, 0, 0, 0});
  CHECK(s.begin()->second == Amplitude(1.0));
  CHECK(initial_state(p, "").size() == 1);
  CHECK_THROWS_AS(initial_state(p, "0^"), Error);
  CHECK_THROWS_AS(initial_state(p, "2"), Error);
}

TEST_CASE("initial state includes blank private tapes") {
  ProtocolSpec p = lift_2ip_to_3qip(corpus_protocol("nocomm")).protocol;
  const ConfigurationId c = initial_state(p, "1").begin()->first;
  std::size_t cells = 0;
  for (const auto& prover : p.provers) cells += static_cast<std::size_t>(prover.space);
  CHECK(c.size() == 2 + 3 + cells);
  for (std::size_t i = 1; i < c.size(); ++i) CHECK(c[i] == 0);
}

TEST_CASE("always-accept and coinflip") {
  RunResult a = run(corpus_protocol("accept"), "0110");
  REQUIRE(a.rounds.size() == 1);
  CHECK(a.rounds[0].cum_acc == 1.0);
  CHECK(a.rounds[0].residual == 0.0);
  CHECK(a.final.p_acc == 1.0);

  RunResult c = run(corpus_protocol("coinflip"), "");
  CHECK(c.final.p_acc == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(c.final.p_rej == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(c.final.p_unresolved == 0.0);

  CHECK(run(corpus_protocol("reject"), "1").final.p_rej == 1.0);
  CHECK(run_classical(corpus_protocol("accept2ip"), "1").final.p_acc == 1.0);
  RunResult f = run_classical(corpus_protocol("coin2ip"), "0");
  CHECK(f.final.p_acc == 0.5);
  CHECK(f.final.p_rej == 0.5);
}

TEST_CASE("no-communication protocol with honest provers accepts half the time") {
  ProtocolSpec p = corpus_protocol("nocomm");
  for (const auto& x : inputs_up_to(3)) {
    RunResult r = run_classical(p, x);
    CHECK(r.final.p_acc == doctest::Approx(0.5));
    CHECK(r.final.p_unresolved == 0.0);
  }
}

TEST_CASE("one-way parity example") {
  ProtocolSpec p = corpus_protocol("onepfa");
  for (const auto& x : inputs_up_to(4)) {
    CAPTURE(x);
    const bool even = std::count(x.begin(), x.end(), '1') % 2 == 0;
    RunResult r = run_classical(p, x);
    CHECK(r.final.p_acc == doctest::Approx(even ? 1.0 : 0.5));
    CHECK(static_cast<int>(r.rounds.size()) == static_cast<int>(x.size()) + 2);
  }
}

TEST_CASE("cutoff leaves unresolved mass") {
  ProtocolSpec p = corpus_protocol("nocomm");
  RunOptions o;
  o.cutoff = 1;
  RunResult r = run(p, "0", o);
  CHECK(r.rounds.size() == 1);
  CHECK(r.final.p_acc == 0.0);
  CHECK(r.final.p_unresolved == doctest::Approx(1.0));
  o.cutoff = 0;
  CHECK_THROWS_AS(run(p, "0", o), Error);
}

TEST_CASE("missing transition is reported") {
  ProtocolSpec p = corpus_protocol("nocomm");
  p.verifier.rules.erase(RowKey{1, 0, {0, 0}});
  try {
    run(p, "");
    // Only the w0 branch lacks a rule, and it is always reached.
    FAIL("expected MissingTransition");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMissingTransition);
    CHECK(std::string(e.what()).find("w0") != std::string::npos);
  }
}

TEST_CASE("classical semantics rejects quantum weights") {
  ProtocolSpec p = corpus_protocol("coinflip");
  p.verifier.rules.begin()->second.back().weight = -p.verifier.rules.begin()->second.back().weight;
  try {
    run_classical(p, "");
    FAIL("expected NotClassical");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotClassical);
  }
}

TEST_CASE("engine agrees with the reference simulator") {
  for (const auto& [name, p] : everything()) {
    const bool quantum = is_quantum(p.verifier.mode);
    for (const auto& x : inputs_up_to(2)) {
      CAPTURE(name);
      CAPTURE(x);
      CHECK(oracle_deviation(run(p, x), oracle_run(p, x, quantum)) <= 1e-12);
    }
  }
}

TEST_CASE("property: random classical verifiers conserve mass and match the reference") {
  std::mt19937 rng(11);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    ProtocolSpec p = random_classical(rng);
    for (const std::string x : {"", "0", "10"}) {
      RunResult r = run_classical(p, x);
      check_conservation(r);
      CHECK(oracle_deviation(r, oracle_run(p, x, false)) <= 1e-12);
      ++checked;
    }
  }
  CHECK(checked == 180);
}

TEST_CASE("property: every corpus and transformed run conserves mass") {
  for (const auto& [name, p] : everything()) {
    CAPTURE(name);
    for (const auto& x : inputs_up_to(3)) check_conservation(run(p, x));
  }
}

TEST_CASE("quantum run of a classical-in-disguise protocol matches classical semantics") {
  for (const std::string name : {"accept2ip", "replycheck", "onepfa"}) {
    ProtocolSpec classical = corpus_protocol(name);
    ProtocolSpec quantum = classical;
    quantum.verifier.mode = is_one_way(classical.verifier.mode) ? Mode::k1qfa : Mode::k2qfa;
    for (auto& prover : quantum.provers) prover = make_reversible_prover(prover, quantum.cutoff);
    if (name == "onepfa") {
      // Replace the fair coin by a deterministic choice so every weight is 0 or 1.
      auto& row = quantum.verifier.rules.at(RowKey{1, 1, {0, 0}});
      row.erase(row.begin() + 1);
      row[0].weight = 1.0;
      auto& crow = classical.verifier.rules.at(RowKey{1, 1, {0, 0}});
      crow = row;
    }
    for (const auto& x : inputs_up_to(3)) {
      CAPTURE(name);
      CAPTURE(x);
      CHECK(max_deviation(run(quantum, x), run_classical(classical, x)) <= 1e-12);
      CHECK(max_deviation(run_with(quantum, x, Semantics::kClassical), run_classical(classical, x)) <= 1e-12);
    }
  }
}

TEST_CASE("extra prover space never changes the result") {
  for (const auto& [name, p] : everything()) {
    int widest = 0;
    for (const auto& prover : p.provers) widest = std::max(widest, prover.space);
    RunOptions o;
    o.space = widest + 3;
    for (const auto& x : inputs_up_to(2)) {
      CAPTURE(name);
      CHECK(max_deviation(run(p, x), run(p, x, o)) <= 1e-12);
    }
  }
}

TEST_CASE("doubling the cutoff past the natural halting round changes nothing") {
  for (const auto& name : corpus_names()) {
    ProtocolSpec p = corpus_protocol(name);
    RunOptions o;
    o.cutoff = 2 * p.cutoff;
    for (const auto& x : inputs_up_to(3)) {
      if (name == "onepfa" && x.size() > 4) continue;
      RunResult base = run(p, x);
      REQUIRE(base.final.p_unresolved == 0.0);
      RunResult doubled = run(p, x, o);
      CHECK(doubled.final.p_acc == doctest::Approx(base.final.p_acc).epsilon(1e-12));
      CHECK(doubled.final.p_rej == doctest::Approx(base.final.p_rej).epsilon(1e-12));
      CHECK(doubled.rounds.size() == base.rounds.size());
    }
  }
}

TEST_CASE("steps count one verifier move per round plus k prover moves after the first") {
  for (const auto& [name, p] : everything()) {
    RunResult r = run(p, "01");
    const long k = p.verifier.k();
    long expected = 0;
    double weighted = 0.0, running = 1.0;
    for (const auto& round : r.rounds) {
      const long moves = 1 + (round.round > 1 ? k : 0);
      expected += moves;
      weighted += running * static_cast<double>(moves);
      running = round.residual;
    }
    CAPTURE(name);
    CHECK(r.steps_counted == expected);
    CHECK(r.expected_moves == doctest::Approx(weighted).epsilon(1e-12));
  }
  RunResult n = run(corpus_protocol("nocomm"), "");
  CHECK(n.steps_counted == 4);
  CHECK(n.expected_moves == doctest::Approx(4.0));
}

TEST_CASE("a non-blank reply from the eraser rejects in the same round") {
  ProtocolSpec lifted = lift_2ip_to_3qip(corpus_protocol("replycheck")).protocol;
  Execution e(lifted, "0", Semantics::kQuantum);
  e.step();
  REQUIRE_FALSE(e.finished());
  const double before = e.residual_mass();
  e.apply_provers();
  StateVector tampered;
  for (const auto& [c, amp] : e.state()) {
    LocalState eraser = e.local(c, 2);
    eraser.comm = 1;
    tampered.add(e.with_local(c, 2, eraser), amp);
  }
  e.set_state(tampered, e.round());
  e.apply_verifier();
  const auto [acc, rej] = e.measure();
  CHECK(acc == 0.0);
  CHECK(rej == doctest::Approx(before).epsilon(1e-12));
  CHECK(e.residual_mass() == doctest::Approx(0.0));
}

TEST_CASE("max_deviation compares per-round and final statistics") {
  RunResult a = run(corpus_protocol("accept"), "");
  RunResult b = run(corpus_protocol("reject"), "");
  CHECK(max_deviation(a, a) == 0.0);
  CHECK(max_deviation(a, b) == 1.0);
}
