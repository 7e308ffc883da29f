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

#include <cmath>
#include <set>

#include "support.hpp"

using namespace qmip;
using namespace qmip::testing;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

using NamedOutput = std::tuple<std::string, int, std::vector<std::string>>;
using NamedColumn = std::map<NamedOutput, Amplitude>;

// Output column of one row with every symbol spelled out, so columns of
// different verifiers can be compared.
NamedColumn named_column(const VerifierSpec& v, const std::vector<Branch>& branches) {
  NamedColumn col;
  for (const auto& b : branches) {
    std::vector<std::string> comm;
    for (int i = 0; i < v.k(); ++i) {
      comm.push_back(v.comm[static_cast<std::size_t>(i)].symbol(b.comm[static_cast<std::size_t>(i)]));
    }
    col[{v.states[static_cast<std::size_t>(b.state)], b.move, comm}] += b.weight;
  }
  return col;
}

Amplitude column_dot(const NamedColumn& a, const NamedColumn& b) {
  Amplitude sum = 0.0;
  for (const auto& [key, amp] : a) {
    auto it = b.find(key);
    if (it != b.end()) sum += std::conj(amp) * it->second;
  }
  return sum;
}

const char* kSingleBranch = R"([protocol]
mode = 2qfa
k = 3
cutoff = 2
claims = restrictive

[alphabets]
input = 0 1
gamma1 = # a
gamma2 = # a
gamma3 = # a

[verifier]
states = q0 acc rej
initial = q0
accept = acc
reject = rej
q0 ^ # # # -> 1 acc +1 a # a

[prover 1]
strategy = table
* * - -> # -

[prover 2]
strategy = table
* * - -> # -

[prover 3]
strategy = eraser
tape = # a
space = 2
)";

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kParse;
}

}  // namespace

TEST_CASE("lift of always-accept is a single-branch quantum verifier") {
  LiftOutput l = lift_2ip_to_3qip(corpus_protocol("accept2ip"));
  const ProtocolSpec& q = l.protocol;
  CHECK(q.verifier.mode == Mode::k2qfa);
  CHECK(q.verifier.k() == 3);
  CHECK(q.claims_restrictive);
  for (const auto& [key, branches] : q.verifier.rules) {
    CHECK(branches.size() == 1);
    CHECK(branches[0].weight == Amplitude(1.0));
  }
  CHECK(run(q, "01").final.p_acc == 1.0);
}

TEST_CASE("lift outputs are well-formed restrictive eraser systems") {
  for (const auto& t : transform_corpus()) {
    CAPTURE(t.name);
    const ProtocolSpec& q = t.lift.protocol;
    CHECK(check_protocol(q).ok());
    CHECK(check_restrictive(q.verifier));
    CHECK(std::holds_alternative<EraserStrategy>(q.provers[2].strategy));
    // One entry per emitted row plus one for the rejection rule.
    CHECK(t.lift.provenance.size() == q.verifier.rules.size() + 1);
    for (const auto& [key, branches] : q.verifier.rules) {
      for (const auto& b : branches) {
        const double m = std::abs(b.weight);
        CHECK((std::abs(m - 1.0) < 1e-15 || std::abs(m - kInvSqrt2) < 1e-15));
      }
    }
  }
}

TEST_CASE("lift turns fair coins into 1/sqrt2 branches with distinct records") {
  LiftOutput l = lift_2ip_to_3qip(corpus_protocol("nocomm"));
  const VerifierSpec& v = l.protocol.verifier;
  const auto& row = v.rules.at(RowKey{0, 0, {0, 0, 0}});
  REQUIRE(row.size() == 2);
  CHECK(row[0].weight == Amplitude(kInvSqrt2));
  CHECK(row[1].weight == Amplitude(kInvSqrt2));
  CHECK(v.comm[2].symbol(row[0].comm[2]) == "[q0,^,#,#/#,#]");
  CHECK(v.comm[2].halting_symbols().size() == 8);
  const std::string text = format_provenance(l.provenance);
  CHECK(text.find("q0 ^ # # # <= q0 ^ # #") != std::string::npos);
}

TEST_CASE("lift preserves per-round statistics on every input up to length four") {
  for (const auto& t : transform_corpus()) {
    for (const auto& x : inputs_up_to(4)) {
      CAPTURE(t.name);
      CAPTURE(x);
      CHECK(max_deviation(run(t.lift.protocol, x), run_classical(t.lift.source, x)) <= 1e-9);
    }
  }
}

TEST_CASE("lift rejects inputs outside its domain") {
  ProtocolSpec biased = corpus_protocol("coin2ip");
  for (auto& [key, branches] : biased.verifier.rules) {
    if (branches.size() == 2) {
      branches[0].weight = 0.75;
      branches[1].weight = 0.25;
    }
  }
  CHECK(code_of([&] { lift_2ip_to_3qip(biased); }) == ErrorCode::kNotFairCoin);
  LiftOptions strict;
  strict.make_reversible = false;
  CHECK(code_of([&] { lift_2ip_to_3qip(corpus_protocol("nocomm"), strict); }) == ErrorCode::kNotReversible);
  CHECK(code_of([&] { lift_2ip_to_3qip(corpus_protocol("accept")); }) == ErrorCode::kInvalidSpec);
}

TEST_CASE("reversible wrapper keeps replies and becomes a permutation") {
  ProtocolSpec p = corpus_protocol("nocomm");
  const ProverSpec& honest = p.provers[0];
  ProverSpec wrapped = make_reversible_prover(honest, p.cutoff);
  CHECK(std::holds_alternative<ReversibleStrategy>(wrapped.strategy));
  CHECK(check_prover_unitary_on_basis(wrapped, 1).ok());
  for (int recv = 0; recv < static_cast<int>(honest.comm.live_size()); ++recv) {
    const auto inner = prover_act(honest, 1, LocalState{recv, {}});
    const auto outer = prover_act(wrapped, 1, LocalState{recv, blank_local(wrapped).tape});
    REQUIRE(inner.size() == 1);
    REQUIRE(outer.size() == 1);
    CHECK(outer[0].state.comm == inner[0].state.comm);
  }
  CHECK(make_reversible_prover(wrapped, p.cutoff) == wrapped);
  ProverSpec eraser = make_eraser(honest.comm, honest.comm, 2);
  CHECK(make_reversible_prover(eraser, 2) == eraser);
}

TEST_CASE("make_eraser shape and errors") {
  Alphabet g({"#", "a"});
  ProverSpec e = make_eraser(g, g, 3);
  CHECK(std::holds_alternative<EraserStrategy>(e.strategy));
  CHECK(e.space == 3);
  CHECK(e.comm == g);
  CHECK(check_prover(e).ok());
  CHECK(code_of([&] { make_eraser(Alphabet({"#", "a", "b"}), g, 3); }) == ErrorCode::kInvalidSpec);
  CHECK(code_of([&] { make_eraser(g, Alphabet({"a", "#"}), 3); }) == ErrorCode::kInvalidSpec);
}

TEST_CASE("reduce fans a single-branch row out over the mask") {
  ProtocolSpec p = parse_protocol(kSingleBranch);
  ReduceOptions o;
  o.unify = false;
  ReduceOutput r = reduce_3qip_to_2qip(p, o);
  const VerifierSpec& v = r.protocol.verifier;
  CHECK(v.k() == 2);
  CHECK(r.mask.live_symbols() == std::vector<std::string>{"#", "a"});
  CHECK(r.encoding.width == 1);
  const auto& row = v.rules.at(RowKey{0, 0, {0, 0}});
  NamedColumn col = named_column(v, row);
  // r = #: [a/#], [#/a].  r = a: [a/a], [#/#] which is the blank.
  NamedColumn expected{{{"acc", 1, {"[a/#]", "[#/a]"}}, kInvSqrt2}, {{"acc", 1, {"[a/a]", "#"}}, kInvSqrt2}};
  CHECK(col.size() == expected.size());
  for (const auto& [key, amp] : expected) CHECK(std::abs(col[key] - amp) < 1e-15);
}

TEST_CASE("reduce rejects inputs outside its domain") {
  ProtocolSpec p = parse_protocol(kSingleBranch);
  ProtocolSpec wide = p;
  auto& row = wide.verifier.rules.begin()->second;
  const double third = 1.0 / std::sqrt(3.0);
  row = {{1, 1, {1, 0, 1}, third}, {2, 1, {1, 0, 1}, third}, {0, 1, {1, 0, 1}, third}};
  CHECK(code_of([&] { reduce_3qip_to_2qip(wide); }) == ErrorCode::kNotRestrictive);

  ProtocolSpec no_eraser = p;
  no_eraser.provers[2] = no_eraser.provers[0];
  CHECK(code_of([&] { reduce_3qip_to_2qip(no_eraser); }) == ErrorCode::kNoEraser);

  ReduceOptions strict;
  strict.unify = false;
  ProtocolSpec lifted = lift_2ip_to_3qip(corpus_protocol("nocomm")).protocol;
  CHECK(code_of([&] { reduce_3qip_to_2qip(lifted, strict); }) == ErrorCode::kAlphabetMismatch);
  CHECK(code_of([&] { reduce_3qip_to_2qip(corpus_protocol("nocomm")); }) == ErrorCode::kInvalidSpec);
}

TEST_CASE("unify pads the shared alphabet to a power of two") {
  ProtocolSpec u = unify_alphabets(lift_2ip_to_3qip(corpus_protocol("nocomm")).protocol);
  const Alphabet& g = u.verifier.comm[0];
  CHECK(g.live_symbols() == std::vector<std::string>{"#", "a", "[q0,^,#,#/#,#]", "~p1"});
  for (const auto& a : u.verifier.comm) CHECK(a == g);
  // Provers only ever hold live symbols.
  for (const auto& prover : u.provers) CHECK(prover.comm.live_symbols() == g.live_symbols());
  CHECK(g.halting_symbols().size() == 8);
  for (const auto& t : transform_corpus()) {
    const std::size_t n = t.reduce.mask.live_size();
    CHECK((n & (n - 1)) == 0);
    CHECK(t.reduce.encoding.codes.size() == n);
  }
}

TEST_CASE("reduce outputs are well-formed and use the expected amplitudes") {
  for (const auto& t : transform_corpus()) {
    CAPTURE(t.name);
    const ProtocolSpec& q = t.reduce.protocol;
    CHECK(check_protocol(q).ok());
    const double g = static_cast<double>(t.reduce.mask.live_size());
    for (const auto& [key, branches] : q.verifier.rules) {
      for (const auto& b : branches) {
        const double m = std::abs(b.weight);
        CHECK((std::abs(m - 1.0 / std::sqrt(g)) < 1e-12 || std::abs(m - 1.0 / std::sqrt(2.0 * g)) < 1e-12));
      }
    }
  }
}

TEST_CASE("reduce preserves inner products between every pair of source rows") {
  for (const auto& t : transform_corpus()) {
    CAPTURE(t.name);
    const VerifierSpec& src = t.reduce.source.verifier;
    const VerifierSpec& dst = t.reduce.protocol.verifier;
    std::vector<std::pair<NamedColumn, NamedColumn>> cols;
    for (const auto& [key, branches] : src.rules) {
      if (key.comm[2] != 0) continue;
      RowKey lifted{key.state, key.tape, {}};
      for (int i = 0; i < 2; ++i) {
        lifted.comm.push_back(dst.comm[static_cast<std::size_t>(i)].index(
            track_token(src.comm[static_cast<std::size_t>(i)].symbol(key.comm[static_cast<std::size_t>(i)]), "#")));
      }
      const auto it = dst.rules.find(lifted);
      REQUIRE(it != dst.rules.end());
      cols.emplace_back(named_column(src, branches), named_column(dst, it->second));
    }
    double worst = 0.0;
    for (const auto& a : cols) {
      for (const auto& b : cols) {
        worst = std::max(worst, std::abs(column_dot(a.first, b.first) - column_dot(a.second, b.second)));
      }
    }
    CHECK(worst <= 1e-9);
    CHECK(reduce_inner_product_deviation(t.reduce) <= 1e-9);
  }
}

TEST_CASE("reduce preserves honest statistics and composes with lift") {
  for (const auto& t : transform_corpus()) {
    for (const auto& x : inputs_up_to(3)) {
      CAPTURE(t.name);
      CAPTURE(x);
      const RunResult reduced = run(t.reduce.protocol, x);
      CHECK(max_deviation(reduced, run(t.lift.protocol, x)) <= 1e-9);
      CHECK(max_deviation(reduced, run_classical(t.lift.source, x)) <= 1e-9);
    }
  }
}

TEST_CASE("completion of an empty table is the identity") {
  ProtocolSpec p = parse_protocol(kSingleBranch);
  VerifierSpec v = p.verifier;
  v.rules.clear();
  v.comm = {Alphabet({"#", "a"})};
  Completion c = complete_unitary(v);
  CHECK(c.added.size() == 4 * 2);
  for (const auto& [key, branches] : c.verifier.rules) {
    REQUIRE(branches.size() == 1);
    CHECK(branches[0].state == key.state);
    CHECK(branches[0].move == 0);
    CHECK(branches[0].comm == key.comm);
    CHECK(branches[0].weight == Amplitude(1.0));
  }
  CHECK(check_well_formed(c.verifier).ok());
}

TEST_CASE("completion stays orthogonal to an existing column") {
  ProtocolSpec p = parse_protocol(kSingleBranch);
  VerifierSpec v = p.verifier;
  v.comm = {Alphabet({"#", "a"})};
  v.rules = {{RowKey{0, 0, {0}}, {{0, 0, {1}, 1.0}}}};
  Completion c = complete_unitary(v);
  CHECK(c.added.size() == 7);
  const NamedColumn fixed = named_column(c.verifier, c.verifier.rules.at(RowKey{0, 0, {0}}));
  for (const auto& key : c.added) {
    // Columns only need to be orthogonal under the same tape symbol.
    if (key.tape != 0) continue;
    const NamedColumn col = named_column(c.verifier, c.verifier.rules.at(key));
    CHECK(std::abs(column_dot(fixed, col)) < 1e-12);
    CHECK(std::abs(column_dot(col, col) - 1.0) < 1e-12);
  }
  CHECK(check_well_formed(c.verifier).ok());

  VerifierSpec broken = v;
  broken.rules[RowKey{0, 0, {1}}] = {{0, 0, {1}, 1.0}};
  CHECK(code_of([&] { complete_unitary(broken); }) == ErrorCode::kNotOrthonormal);
}

TEST_CASE("completion of transform outputs touches only unreachable tuples") {
  for (const auto& t : transform_corpus()) {
    CAPTURE(t.name);
    Completion c = complete_unitary(t.lift.protocol.verifier);
    CHECK(check_well_formed(c.verifier).ok());
    std::set<RowKey> visited;
    RunOptions o;
    o.visited = &visited;
    for (const auto& x : inputs_up_to(4)) run(t.lift.protocol, x, o);
    for (const auto& key : c.added) CHECK_FALSE(visited.contains(key));
    // The completed verifier behaves identically on reachable inputs.
    ProtocolSpec completed = t.lift.protocol;
    completed.verifier = c.verifier;
    for (const auto& x : inputs_up_to(2)) CHECK(max_deviation(run(completed, x), run(t.lift.protocol, x)) <= 1e-12);
  }
}
