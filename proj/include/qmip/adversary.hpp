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

#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qmip/engine.hpp"
#include "qmip/protocol.hpp"

namespace qmip {

// Candidate strategies per prover; a tuple picks one candidate for each.
struct StrategyFamily {
  std::vector<std::vector<ProverSpec>> candidates;
  std::size_t size() const;
};

enum class FamilyKind {
  // Memoryless tables (step, received) -> reply over the reachable received
  // symbols, wrapped as permutations for quantum systems.
  kDeterministic,
  // Injective maps (received, blank tape) -> (reply, one tape cell); T <= 2.
  kPermutation,
  // Like kPermutation, but every received symbol goes to an equal-weight
  // superposition (|i> + |j>)/sqrt2 or (|i> - |j>)/sqrt2 of two images, with
  // disjoint image pairs; T <= 2.
  kRotation,
};

struct FamilyOptions {
  FamilyKind kind = FamilyKind::kDeterministic;
  // Reply alphabet per prover index; the live communication alphabet otherwise.
  std::map<int, std::vector<std::string>> replies;
  // Provers kept at the protocol's own strategy.
  std::set<int> fixed;
};

// QMIP_FAMILY_LIMIT when set, 10^6 otherwise.
std::size_t family_limit();

// Symbols the verifier can send to cell `prover` on a branch that keeps running.
std::vector<int> reachable_received(const VerifierSpec& v, int prover);

StrategyFamily make_family(const ProtocolSpec& p, const FamilyOptions& options, std::size_t limit = family_limit());

struct EvaluatedTuple {
  std::size_t index = 0;
  FinalStats stats;
};

struct AdversaryReport {
  std::vector<std::size_t> best;
  std::vector<ProverSpec> best_strategies;
  double max_p_acc = 0.0;
  double min_p_rej = 1.0;
  std::size_t tuples = 0;
  std::vector<EvaluatedTuple> table;
};

struct SearchOptions {
  std::size_t limit = family_limit();
  unsigned threads = 0;  // 0 picks the hardware concurrency
  bool keep_table = true;
};

// Mixed-radix decoding of a tuple index; prover 1 is the most significant digit.
std::vector<std::size_t> decode_tuple(const StrategyFamily& family, std::size_t index);

AdversaryReport search(const ProtocolSpec& p, std::string_view input, const StrategyFamily& family,
                       const SearchOptions& options = {});

// Smallest rejection probability over the family; unresolved mass does not reject.
double soundness_gap(const ProtocolSpec& p, std::string_view input, const StrategyFamily& family,
                     const SearchOptions& options = {});

struct DerandomizeOptions {
  std::size_t max_local_states = 100000;
  double tie_tolerance = 1e-12;
};

struct DerandomizeResult {
  // Deterministic tables for provers 1 and 2, usable in the classical source.
  std::vector<ProverSpec> classical;
  // The same choices as override strategies over the quantum system.
  std::vector<ProverSpec> overrides;
};

// Fixes, step by step and prover by prover, the lexicographically-first output
// of the adversary's support that minimizes the rejection probability of the
// subtree it leads to. Requires the third prover to be the eraser.
DerandomizeResult derandomize_provers(const ProtocolSpec& p, std::string_view input,
                                      const std::vector<ProverSpec>& adversaries,
                                      const DerandomizeOptions& options = {});

std::string format_report(const ProtocolSpec& p, const StrategyFamily& family, const AdversaryReport& report,
                          bool include_table);

}  // namespace qmip
