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

#include <map>
#include <memory>
#include <variant>
#include <vector>

#include "qmip/specs.hpp"

namespace qmip {

// Contents of one communication cell plus the prover's private tape, as
// indices into the prover's communication and tape alphabets.
struct LocalState {
  int comm = 0;
  std::vector<int> tape;
  auto operator<=>(const LocalState&) const = default;
};

struct LocalBranch {
  LocalState state;
  Amplitude weight;
};

inline constexpr int kAnyStep = 0;
inline constexpr int kAnySymbol = -1;

// Tape contents in table keys are stored with trailing blanks removed, so a
// table means the same thing under any space bound that fits it.
struct TableKey {
  int step = kAnyStep;
  int received = kAnySymbol;
  std::vector<int> tape;
  auto operator<=>(const TableKey&) const = default;
};

struct TableEntry {
  int reply = 0;
  std::vector<int> tape;
  auto operator<=>(const TableEntry&) const = default;
};

// Deterministic classical strategy: (step, received, tape) -> (reply, tape).
struct TableStrategy {
  std::map<TableKey, TableEntry> entries;
  bool operator==(const TableStrategy&) const = default;
};

// Permutation built from a deterministic table. The private tape is a log
// of received symbols (cell j-1 at step j); replies come from replaying the
// inner table over the log, so the combined map is injective.
struct ReversibleStrategy {
  TableStrategy inner;
  Alphabet inner_tape;
  bool operator==(const ReversibleStrategy&) const = default;
};

// Replies # and logs the received symbol into cell j-1 at step j.
struct EraserStrategy {
  bool operator==(const EraserStrategy&) const = default;
};

struct UnitaryStrategy {
  std::map<TableKey, std::vector<std::pair<TableEntry, Amplitude>>> entries;
  bool operator==(const UnitaryStrategy&) const = default;
};

// Honest prover of a masked two-prover system: runs `inner` on the upper
// track and moves the lower-track mask symbol into a blank stash cell.
struct StashStrategy {
  std::shared_ptr<const ProverSpec> inner;
  Alphabet mask;
  bool operator==(const StashStrategy& other) const;
};

// `base` with a fixed deterministic action on listed (step, local) pairs.
struct OverrideStrategy {
  std::shared_ptr<const ProverSpec> base;
  std::map<std::pair<int, LocalState>, LocalState> fixed;
  bool operator==(const OverrideStrategy& other) const;
};

using Strategy =
    std::variant<TableStrategy, ReversibleStrategy, EraserStrategy, UnitaryStrategy, StashStrategy, OverrideStrategy>;

struct ProverSpec {
  Alphabet comm;
  Alphabet tape;
  int space = 0;
  Strategy strategy;
  bool operator==(const ProverSpec&) const = default;
};

const char* strategy_name(const Strategy& s);

// One prover move at step `step` (1-based) on a basis state.
// Throws kMissingTransition when a table has no entry and kSpaceExceeded
// when the move needs a cell beyond the space bound.
std::vector<LocalBranch> prover_act(const ProverSpec& prover, int step, const LocalState& local);

// Blank tape of the prover's space bound.
LocalState blank_local(const ProverSpec& prover);

std::vector<int> trim_tape(std::vector<int> tape);

// Table strategy lookup; nullptr when absent.
const TableEntry* table_lookup(const TableStrategy& table, int step, int received, const std::vector<int>& tape);

// Listed entries are injective per step.
bool table_is_injective(const TableStrategy& table);

Report check_prover(const ProverSpec& prover, double tolerance = 1e-9);

// Enumerates the full local basis (comm x tape^space) and checks that the
// induced step-`step` map has orthonormal columns. Only sensible for tiny
// bases; used by tests and diagnostics.
Report check_prover_unitary_on_basis(const ProverSpec& prover, int step, double tolerance = 1e-9);

}  // namespace qmip
