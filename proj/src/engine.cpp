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

#include "qmip/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qmip {

namespace {

void require_classical_weight(Amplitude w, const std::string& where) {
  if (w.imag() != 0.0 || w.real() < 0.0) {
    throw Error(ErrorCode::kNotClassical, "weight " + std::to_string(w.real()) + (w.imag() != 0.0 ? "+i" : "") +
                                              " is not a probability at " + where);
  }
}

}  // namespace

Execution::Execution(const ProtocolSpec& p, std::string_view input, Semantics semantics, const RunOptions& options)
    : p_(p), semantics_(semantics), options_(options) {
  const VerifierSpec& v = p_.verifier;
  if (static_cast<int>(p_.provers.size()) != v.k()) {
    throw Error(ErrorCode::kInvalidSpec, "protocol has " + std::to_string(p_.provers.size()) + " provers but k = " +
                                             std::to_string(v.k()));
  }
  for (char ch : input) {
    const int i = v.input.index(std::string(1, ch));
    if (!v.input.is_live(i)) {
      throw Error(ErrorCode::kInvalidInput, std::string("input symbol '") + ch + "' is not in the input alphabet");
    }
    input_.push_back(i);
  }
  cutoff_ = options_.cutoff.value_or(p_.cutoff);
  if (cutoff_ < 1) throw Error(ErrorCode::kInvalidInput, "cutoff must be at least 1");
  if (options_.space) {
    if (*options_.space < 0) throw Error(ErrorCode::kInvalidInput, "space bound must be nonnegative");
    for (auto& prover : p_.provers) prover.space = *options_.space;
  }
  interned_.resize(static_cast<std::size_t>(v.k()));
  interned_names_.resize(static_cast<std::size_t>(v.k()));
  std::size_t offset = 2 + static_cast<std::size_t>(v.k());
  for (const auto& prover : p_.provers) {
    tape_offset_.push_back(offset);
    offset += static_cast<std::size_t>(prover.space);
  }
  ConfigurationId init(offset, 0);
  init[0] = v.initial;
  state_.add(init, 1.0);
}

double Execution::residual_mass() const {
  return semantics_ == Semantics::kQuantum ? state_.norm_squared() : state_.total_weight();
}

void Execution::set_state(StateVector s, int round) {
  state_ = std::move(s);
  round_ = round;
}

LocalState Execution::local(const ConfigurationId& c, int prover) const {
  const auto i = static_cast<std::size_t>(prover);
  LocalState l;
  l.comm = c[2 + i];
  const auto begin = c.begin() + static_cast<std::ptrdiff_t>(tape_offset_[i]);
  l.tape.assign(begin, begin + p_.provers[i].space);
  return l;
}

ConfigurationId Execution::with_local(const ConfigurationId& c, int prover, const LocalState& l) const {
  const auto i = static_cast<std::size_t>(prover);
  ConfigurationId out = c;
  out[2 + i] = l.comm;
  std::copy(l.tape.begin(), l.tape.end(), out.begin() + static_cast<std::ptrdiff_t>(tape_offset_[i]));
  return out;
}

int Execution::tape_symbol_at(int head) const {
  if (head == 0) return 0;
  if (head == input_length() + 1) return 1;
  return 2 + input_[static_cast<std::size_t>(head - 1)];
}

RowKey Execution::row_key(const ConfigurationId& c) const {
  RowKey key{c[0], tape_symbol_at(c[1]), {}};
  key.comm.assign(c.begin() + 2, c.begin() + 2 + p_.verifier.k());
  return key;
}

int Execution::intern(int cell, const std::string& token) {
  const auto i = static_cast<std::size_t>(cell);
  const int known = p_.verifier.comm[i].index(token);
  if (known >= 0) return known;
  auto [it, inserted] = interned_[i].try_emplace(token, -static_cast<int>(interned_names_[i].size()) - 1);
  if (inserted) interned_names_[i].push_back(token);
  return it->second;
}

std::string Execution::comm_symbol(int cell, int id) const {
  const auto i = static_cast<std::size_t>(cell);
  if (id >= 0) return p_.verifier.comm[i].symbol(id);
  return interned_names_[i].at(static_cast<std::size_t>(-id - 1));
}

std::string Execution::describe(const ConfigurationId& c) const {
  const VerifierSpec& v = p_.verifier;
  std::ostringstream os;
  os << v.states[static_cast<std::size_t>(c[0])] << " head=" << c[1] << " comm=(";
  for (int i = 0; i < v.k(); ++i) os << (i ? "," : "") << comm_symbol(i, c[2 + static_cast<std::size_t>(i)]);
  os << ") tapes=(";
  for (int i = 0; i < v.k(); ++i) {
    const auto& prover = p_.provers[static_cast<std::size_t>(i)];
    os << (i ? "," : "");
    const auto tape = trim_tape(local(c, i).tape);
    if (tape.empty()) os << '-';
    for (std::size_t t = 0; t < tape.size(); ++t) os << (t ? "|" : "") << prover.tape.symbol(tape[t]);
  }
  os << ')';
  return os.str();
}

void Execution::apply_provers() {
  if (round_ == 0) return;
  const int step = round_;
  for (int i = 0; i < p_.verifier.k(); ++i) {
    const ProverSpec& prover = p_.provers[static_cast<std::size_t>(i)];
    std::map<LocalState, std::vector<LocalBranch>> cache;
    StateVector next;
    for (const auto& [c, amp] : state_) {
      LocalState l = local(c, i);
      auto it = cache.find(l);
      if (it == cache.end()) {
        auto branches = prover_act(prover, step, l);
        if (semantics_ == Semantics::kClassical) {
          for (const auto& b : branches) require_classical_weight(b.weight, "prover " + std::to_string(i + 1));
        }
        it = cache.emplace(std::move(l), std::move(branches)).first;
      }
      for (const auto& b : it->second) next.add(with_local(c, i, b.state), amp * b.weight);
    }
    next.prune();
    state_ = std::move(next);
  }
}

void Execution::apply_verifier() {
  const VerifierSpec& v = p_.verifier;
  const int cells = input_length() + 2;
  StateVector next;
  for (const auto& [c, amp] : state_) {
    RowKey key = row_key(c);
    if (options_.visited) options_.visited->insert(key);
    auto emit = [&](int q, int move, const std::vector<int>& comm, Amplitude w) {
      ConfigurationId out = c;
      out[0] = q;
      out[1] = ((c[1] + move) % cells + cells) % cells;
      std::copy(comm.begin(), comm.end(), out.begin() + 2);
      next.add(out, amp * w);
    };
    if (auto it = v.rules.find(key); it != v.rules.end()) {
      for (const auto& b : it->second) {
        if (semantics_ == Semantics::kClassical) require_classical_weight(b.weight, v.describe(key));
        emit(b.state, b.move, b.comm, b.weight);
      }
    } else if (auto g = guard_output(v, key)) {
      std::vector<int> comm;
      for (int i = 0; i < v.k(); ++i) comm.push_back(intern(i, g->comm[static_cast<std::size_t>(i)]));
      emit(g->state, g->move, comm, 1.0);
    } else {
      throw Error(ErrorCode::kMissingTransition, "verifier has no rule for (" + v.describe(key) + ") in round " +
                                                     std::to_string(round_ + 1));
    }
  }
  next.prune();
  state_ = std::move(next);
}

std::pair<double, double> Execution::measure() {
  const VerifierSpec& v = p_.verifier;
  auto acc = [&](const ConfigurationId& c) { return v.is_accepting(c[0]); };
  auto rej = [&](const ConfigurationId& c) { return v.is_rejecting(c[0]); };
  Measurement m = semantics_ == Semantics::kQuantum ? measure_halting(state_, acc, rej)
                                                    : measure_halting_classical(state_, acc, rej);
  state_ = std::move(m.residual);
  cum_acc_ += m.p_acc;
  cum_rej_ += m.p_rej;
  ++round_;
  return {m.p_acc, m.p_rej};
}

std::pair<double, double> Execution::step() {
  apply_provers();
  apply_verifier();
  return measure();
}

StateVector initial_state(const ProtocolSpec& p, std::string_view input) {
  return Execution(p, input, is_quantum(p.verifier.mode) ? Semantics::kQuantum : Semantics::kClassical).state();
}

RunResult run_with(const ProtocolSpec& p, std::string_view input, Semantics semantics, const RunOptions& options) {
  Execution ex(p, input, semantics, options);
  RunResult result;
  const int k = p.verifier.k();
  while (!ex.finished()) {
    const int moves = 1 + (ex.round() > 0 ? k : 0);
    result.steps_counted += moves;
    result.expected_moves += moves * ex.residual_mass();
    ex.step();
    result.rounds.push_back({ex.round(), ex.cum_acc(), ex.cum_rej(), ex.residual_mass()});
  }
  result.final = {ex.cum_acc(), ex.cum_rej(), ex.residual_mass()};
  return result;
}

RunResult run(const ProtocolSpec& p, std::string_view input, const RunOptions& options) {
  return run_with(p, input, is_quantum(p.verifier.mode) ? Semantics::kQuantum : Semantics::kClassical, options);
}

RunResult run_classical(const ProtocolSpec& p, std::string_view input, const RunOptions& options) {
  return run_with(p, input, Semantics::kClassical, options);
}

double max_deviation(const RunResult& a, const RunResult& b) {
  const std::size_t n = std::max(a.rounds.size(), b.rounds.size());
  double dev = 0.0;
  auto at = [](const RunResult& r, std::size_t i) {
    if (r.rounds.empty()) return RoundStats{};
    return r.rounds[std::min(i, r.rounds.size() - 1)];
  };
  for (std::size_t i = 0; i < n; ++i) {
    const RoundStats x = at(a, i);
    const RoundStats y = at(b, i);
    dev = std::max({dev, std::abs(x.cum_acc - y.cum_acc), std::abs(x.cum_rej - y.cum_rej),
                    std::abs(x.residual - y.residual)});
  }
  dev = std::max({dev, std::abs(a.final.p_acc - b.final.p_acc), std::abs(a.final.p_rej - b.final.p_rej),
                  std::abs(a.final.p_unresolved - b.final.p_unresolved)});
  return dev;
}

}  // namespace qmip
