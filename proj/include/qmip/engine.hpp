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
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qmip/amplitudes.hpp"
#include "qmip/protocol.hpp"

namespace qmip {

// Quantum semantics squares amplitudes at measurement; classical semantics
// sums nonnegative weights and never interferes.
enum class Semantics { kQuantum, kClassical };

struct RoundStats {
  int round = 0;
  double cum_acc = 0.0;
  double cum_rej = 0.0;
  double residual = 0.0;
};

struct FinalStats {
  double p_acc = 0.0;
  double p_rej = 0.0;
  double p_unresolved = 0.0;
};

struct RunResult {
  std::vector<RoundStats> rounds;
  FinalStats final;
  // One verifier move per round plus k prover moves from round 2 on.
  long steps_counted = 0;
  // The same count weighted by the mass still running at each round.
  double expected_moves = 0.0;
};

struct RunOptions {
  std::optional<int> cutoff;
  // Replaces every prover's space bound when set.
  std::optional<int> space;
  // Collects every verifier argument tuple evaluated during the run.
  std::set<RowKey>* visited = nullptr;
};

// Configuration layout: [state, head, comm_1..comm_k, tape_1 cells, .., tape_k cells].
// Communication symbols written by guard rules that are not in the alphabet
// are interned as negative ids.
class Execution {
 public:
  Execution(const ProtocolSpec& p, std::string_view input, Semantics semantics, const RunOptions& options = {});

  // Runs one full round and returns its (accept, reject) increments.
  std::pair<double, double> step();

  // Partial stages, exposed for adversary tooling.
  void apply_provers();
  void apply_verifier();
  std::pair<double, double> measure();

  int round() const { return round_; }
  int cutoff() const { return cutoff_; }
  bool finished() const { return round_ >= cutoff_ || state_.empty(); }
  double cum_acc() const { return cum_acc_; }
  double cum_rej() const { return cum_rej_; }
  double residual_mass() const;

  const StateVector& state() const { return state_; }
  // Replaces the running state; `round` is the number of completed rounds.
  void set_state(StateVector s, int round);

  const ProtocolSpec& protocol() const { return p_; }
  int input_length() const { return static_cast<int>(input_.size()); }

  int verifier_state(const ConfigurationId& c) const { return c[0]; }
  int head(const ConfigurationId& c) const { return c[1]; }
  LocalState local(const ConfigurationId& c, int prover) const;
  ConfigurationId with_local(const ConfigurationId& c, int prover, const LocalState& local) const;
  RowKey row_key(const ConfigurationId& c) const;

  std::string comm_symbol(int cell, int id) const;
  std::string describe(const ConfigurationId& c) const;

 private:
  int tape_symbol_at(int head) const;
  int intern(int cell, const std::string& token);

  ProtocolSpec p_;
  std::vector<int> input_;
  Semantics semantics_;
  RunOptions options_;
  int cutoff_ = 1;
  std::vector<std::size_t> tape_offset_;
  std::vector<std::map<std::string, int>> interned_;
  std::vector<std::vector<std::string>> interned_names_;
  StateVector state_;
  int round_ = 0;
  double cum_acc_ = 0.0;
  double cum_rej_ = 0.0;
};

StateVector initial_state(const ProtocolSpec& p, std::string_view input);

// Quantum semantics for quantum modes, classical semantics otherwise.
RunResult run(const ProtocolSpec& p, std::string_view input, const RunOptions& options = {});
RunResult run_classical(const ProtocolSpec& p, std::string_view input, const RunOptions& options = {});
RunResult run_with(const ProtocolSpec& p, std::string_view input, Semantics semantics, const RunOptions& options = {});

// Largest per-round deviation across the cumulative statistics of two runs.
// Rounds missing from the shorter run repeat its last entry.
double max_deviation(const RunResult& a, const RunResult& b);

}  // namespace qmip
