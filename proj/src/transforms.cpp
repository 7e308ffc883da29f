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

#include "qmip/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qmip {

namespace {

int reject_state_for(VerifierSpec& v) {
  if (!v.reject.empty()) return *v.reject.begin();
  std::string name = "rej";
  while (v.state_index(name) >= 0) name += "'";
  v.states.push_back(name);
  const int q = static_cast<int>(v.states.size()) - 1;
  v.reject.insert(q);
  return q;
}

Alphabet extend(const Alphabet& base, const std::vector<std::string>& extra) {
  std::vector<std::string> live = base.live_symbols();
  live.insert(live.end(), extra.begin(), extra.end());
  return Alphabet(std::move(live), base.halting_symbols());
}

int remap_symbol(const Alphabet& from, const Alphabet& to, int i) {
  if (i == kAnySymbol) return kAnySymbol;
  const int j = to.index(from.symbol(i));
  if (j < 0) throw Error(ErrorCode::kAlphabetMismatch, "symbol '" + from.symbol(i) + "' is missing from the target alphabet");
  return j;
}

TableStrategy remap_table(const TableStrategy& t, const Alphabet& from, const Alphabet& to) {
  TableStrategy out;
  for (const auto& [key, e] : t.entries) {
    out.entries.emplace(TableKey{key.step, remap_symbol(from, to, key.received), key.tape},
                        TableEntry{remap_symbol(from, to, e.reply), e.tape});
  }
  return out;
}

}  // namespace

ProverSpec make_reversible_prover(const ProverSpec& f, int steps) {
  if (steps < 0) throw Error(ErrorCode::kInvalidInput, "step count must be nonnegative");
  if (std::holds_alternative<ReversibleStrategy>(f.strategy) || std::holds_alternative<EraserStrategy>(f.strategy)) {
    return f;
  }
  const auto* table = std::get_if<TableStrategy>(&f.strategy);
  if (!table) {
    throw Error(ErrorCode::kInvalidSpec, std::string("cannot make a ") + strategy_name(f.strategy) +
                                             " prover reversible; a deterministic table is required");
  }
  ProverSpec out;
  out.comm = Alphabet(f.comm.live_symbols());
  out.tape = out.comm;
  out.space = steps;
  out.strategy = ReversibleStrategy{*table, f.tape};
  return out;
}

ProverSpec make_eraser(const Alphabet& gamma, const Alphabet& delta, int cells) {
  if (cells < 0) throw Error(ErrorCode::kInvalidInput, "cell count must be nonnegative");
  for (const auto& s : gamma.live_symbols()) {
    if (!delta.is_live(delta.index(s))) {
      throw Error(ErrorCode::kInvalidSpec, "eraser tape alphabet cannot store '" + s + "'");
    }
  }
  if (gamma.index(kBlank) != 0 || delta.index(kBlank) != 0) {
    throw Error(ErrorCode::kInvalidSpec, "eraser alphabets must start with the blank");
  }
  ProverSpec out;
  out.comm = Alphabet(gamma.live_symbols());
  out.tape = Alphabet(delta.live_symbols());
  out.space = cells;
  out.strategy = EraserStrategy{};
  return out;
}

LiftOutput lift_2ip_to_3qip(const ProtocolSpec& p, const LiftOptions& options) {
  const VerifierSpec& v = p.verifier;
  if (is_quantum(v.mode)) throw Error(ErrorCode::kInvalidSpec, "lift expects a classical verifier");
  if (v.k() != 2 || p.provers.size() != 2) throw Error(ErrorCode::kInvalidSpec, "lift expects exactly two provers");
  if (auto bad = fair_coin_violations(v); !bad.empty()) {
    throw Error(ErrorCode::kNotFairCoin, "row (" + v.describe(bad.front()) +
                                             ") is neither deterministic nor a fair coin between two outcomes");
  }

  LiftOutput out;
  out.source = p;
  ProtocolSpec& q = out.protocol;
  q.name = p.name.empty() ? std::string("lift") : p.name + "-lift";
  q.a = p.a;
  q.b = p.b;
  q.cutoff = p.cutoff;
  q.claims_restrictive = true;

  VerifierSpec& w = q.verifier;
  w.mode = is_one_way(v.mode) ? Mode::k1qfa : Mode::k2qfa;
  w.states = v.states;
  w.initial = v.initial;
  w.accept = v.accept;
  w.reject = v.reject;
  w.input = v.input;
  const int rej = reject_state_for(w);

  auto record = [&](const RowKey& key, const Branch& b) {
    return "[" + v.states[static_cast<std::size_t>(key.state)] + "," + v.tape_symbol(key.tape) + "," +
           v.comm[0].symbol(key.comm[0]) + "," + v.comm[1].symbol(key.comm[1]) + "/" + v.comm[0].symbol(b.comm[0]) +
           "," + v.comm[1].symbol(b.comm[1]) + "]";
  };
  std::vector<std::string> live{std::string(kBlank)};
  std::vector<std::string> halting;
  for (const auto& [key, branches] : v.rules) {
    for (const auto& b : branches) (v.is_halting(b.state) ? halting : live).push_back(record(key, b));
  }
  const Alphabet g3(live, halting);
  w.comm = {v.comm[0], v.comm[1], g3};

  for (const auto& [key, branches] : v.rules) {
    RowKey k2{key.state, key.tape, {key.comm[0], key.comm[1], 0}};
    std::vector<Branch> out_branches;
    const Amplitude weight = branches.size() == 2 ? Amplitude(1.0 / std::sqrt(2.0)) : Amplitude(1.0);
    for (const auto& b : branches) {
      out_branches.push_back({b.state, b.move, {b.comm[0], b.comm[1], g3.index(record(key, b))}, weight});
    }
    w.rules.emplace(k2, std::move(out_branches));
    out.provenance.push_back({w.describe(k2), v.describe(key)});
  }
  w.guards.push_back(ForeignReplyGuard{2, rej});
  out.provenance.push_back({"q sigma g1 g2 xi (xi != #) -> " + w.states[static_cast<std::size_t>(rej)], "rejection rule"});

  for (const auto& prover : p.provers) {
    if (options.make_reversible) {
      q.provers.push_back(make_reversible_prover(prover, p.cutoff));
    } else if (const auto* t = std::get_if<TableStrategy>(&prover.strategy); t && !table_is_injective(*t)) {
      throw Error(ErrorCode::kNotReversible, "prover table is not injective");
    } else if (!t && !std::holds_alternative<ReversibleStrategy>(prover.strategy) &&
               !std::holds_alternative<EraserStrategy>(prover.strategy)) {
      throw Error(ErrorCode::kNotReversible, std::string(strategy_name(prover.strategy)) + " prover is not a permutation");
    } else {
      q.provers.push_back(prover);
    }
  }
  const Alphabet g3_live(g3.live_symbols());
  q.provers.push_back(make_eraser(g3_live, g3_live, p.cutoff));
  return out;
}

ProverSpec remap_prover_comm(const ProverSpec& prover, const Alphabet& comm) {
  ProverSpec out = prover;
  out.comm = Alphabet(comm.live_symbols());
  struct Visitor {
    const ProverSpec& in;
    ProverSpec& out;
    void operator()(const TableStrategy& t) const { out.strategy = remap_table(t, in.comm, out.comm); }
    void operator()(const ReversibleStrategy& r) const {
      out.strategy = ReversibleStrategy{remap_table(r.inner, in.comm, out.comm), r.inner_tape};
      out.tape = out.comm;
      // Logged cells hold communication indices, so the tape must follow.
      for (const auto& s : in.tape.live_symbols()) remap_symbol(in.tape, out.tape, in.tape.index(s));
    }
    void operator()(const EraserStrategy&) const {
      for (const auto& s : in.comm.live_symbols()) remap_symbol(in.comm, out.comm, in.comm.index(s));
      std::vector<std::string> extra;
      for (const auto& s : out.comm.live_symbols()) {
        if (!in.tape.contains(s)) extra.push_back(s);
      }
      out.tape = extend(in.tape, extra);
    }
    void operator()(const UnitaryStrategy& u) const {
      UnitaryStrategy r;
      for (const auto& [key, outs] : u.entries) {
        auto& dst = r.entries[TableKey{key.step, remap_symbol(in.comm, out.comm, key.received), key.tape}];
        for (const auto& [e, w] : outs) dst.push_back({TableEntry{remap_symbol(in.comm, out.comm, e.reply), e.tape}, w});
      }
      out.strategy = std::move(r);
    }
    void operator()(const StashStrategy&) const {
      throw Error(ErrorCode::kInvalidSpec, "stash provers cannot be re-indexed");
    }
    void operator()(const OverrideStrategy&) const {
      throw Error(ErrorCode::kInvalidSpec, "override provers cannot be re-indexed");
    }
  };
  std::visit(Visitor{prover, out}, prover.strategy);
  return out;
}

ProtocolSpec unify_alphabets(const ProtocolSpec& p) {
  const VerifierSpec& v = p.verifier;
  std::vector<std::string> live{std::string(kBlank)};
  auto add_unique = [](std::vector<std::string>& list, const std::string& s) {
    if (std::find(list.begin(), list.end(), s) == list.end()) list.push_back(s);
  };
  for (const auto& a : v.comm) {
    for (const auto& s : a.live_symbols()) add_unique(live, s);
  }
  std::size_t target = 2;
  while (target < live.size()) target *= 2;
  for (int n = 1; live.size() < target; ++n) {
    const std::string filler = "~p" + std::to_string(n);
    bool taken = std::find(live.begin(), live.end(), filler) != live.end();
    for (const auto& a : v.comm) taken = taken || a.contains(filler);
    if (!taken) live.push_back(filler);
  }
  std::vector<std::string> halting;
  for (const auto& a : v.comm) {
    for (const auto& s : a.halting_symbols()) {
      if (std::find(live.begin(), live.end(), s) == live.end()) add_unique(halting, s);
    }
  }
  const Alphabet gamma(live, halting);

  ProtocolSpec out = p;
  VerifierSpec& w = out.verifier;
  w.comm.assign(v.comm.size(), gamma);
  w.rules.clear();
  for (const auto& [key, branches] : v.rules) {
    RowKey k2 = key;
    for (std::size_t i = 0; i < key.comm.size(); ++i) k2.comm[i] = remap_symbol(v.comm[i], gamma, key.comm[i]);
    std::vector<Branch> bs = branches;
    for (auto& b : bs) {
      for (std::size_t i = 0; i < b.comm.size(); ++i) b.comm[i] = remap_symbol(v.comm[i], gamma, b.comm[i]);
    }
    w.rules.emplace(std::move(k2), std::move(bs));
  }
  for (auto& prover : out.provers) prover = remap_prover_comm(prover, gamma);
  return out;
}

namespace {

bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

// Lower-track token under mask r for a third-cell symbol; symbols outside the
// live alphabet only occur on halting branches and stay symbolic.
std::string masked(const Alphabet& gamma, int r, int tau3) {
  if (gamma.is_live(tau3)) return gamma.symbol(r ^ tau3);
  return "{" + gamma.symbol(r) + "^" + gamma.symbol(tau3) + "}";
}

int comm_index(Alphabet& a, const std::string& token) {
  const int i = a.index(token);
  return i >= 0 ? i : a.add_halting(token);
}

}  // namespace

ReduceOutput reduce_3qip_to_2qip(const ProtocolSpec& p, const ReduceOptions& options) {
  const VerifierSpec& v0 = p.verifier;
  if (!is_quantum(v0.mode)) throw Error(ErrorCode::kInvalidSpec, "reduce expects a quantum verifier");
  if (v0.k() != 3 || p.provers.size() != 3) throw Error(ErrorCode::kInvalidSpec, "reduce expects exactly three provers");
  if (auto bad = restrictive_violations(v0); !bad.empty()) {
    throw Error(ErrorCode::kNotRestrictive, "row (" + v0.describe(bad.front()) + ") is not restrictive");
  }
  if (!std::holds_alternative<EraserStrategy>(p.provers[2].strategy)) {
    throw Error(ErrorCode::kNoEraser, "the third prover is not the eraser");
  }
  if (!options.unify) {
    for (int i = 1; i < 3; ++i) {
      if (v0.comm[static_cast<std::size_t>(i)].live_symbols() != v0.comm[0].live_symbols()) {
        throw Error(ErrorCode::kAlphabetMismatch, "communication alphabets differ");
      }
    }
    if (!is_power_of_two(v0.comm[0].live_size())) {
      throw Error(ErrorCode::kAlphabetMismatch, "communication alphabet size is not a power of two");
    }
  }

  ReduceOutput out;
  out.source = options.unify ? unify_alphabets(p) : p;
  const VerifierSpec& v = out.source.verifier;
  const Alphabet& gamma = v.comm[0];
  const int g = static_cast<int>(gamma.live_size());
  out.mask = Alphabet(gamma.live_symbols());
  out.encoding = fixed_width_binary_encoding(out.mask);
  const Alphabet track = make_track_alphabet(out.mask, out.mask);
  const Amplitude scale = 1.0 / std::sqrt(static_cast<double>(g));

  ProtocolSpec& q = out.protocol;
  q.name = p.name.empty() ? std::string("reduce") : p.name + "-reduce";
  q.a = p.a;
  q.b = p.b;
  q.cutoff = p.cutoff;
  VerifierSpec& w = q.verifier;
  w.mode = v.mode;
  w.states = v.states;
  w.initial = v.initial;
  w.accept = v.accept;
  w.reject = v.reject;
  w.input = v.input;
  w.comm = {track, track};
  const int rej = reject_state_for(w);

  for (const auto& [key, branches] : v.rules) {
    if (key.comm[2] != 0) continue;
    RowKey k2{key.state, key.tape,
              {track.index(track_token(gamma.symbol(key.comm[0]), kBlank)),
               track.index(track_token(gamma.symbol(key.comm[1]), kBlank))}};
    std::vector<Branch> bs;
    for (int r = 0; r < g; ++r) {
      for (const auto& b : branches) {
        const int c1 = comm_index(w.comm[0], track_token(gamma.symbol(b.comm[0]), gamma.symbol(r)));
        const int c2 = comm_index(w.comm[1], track_token(gamma.symbol(b.comm[1]), masked(gamma, r, b.comm[2])));
        bs.push_back({b.state, b.move, {c1, c2}, b.weight * scale});
      }
    }
    w.rules.emplace(std::move(k2), std::move(bs));
  }
  w.guards.push_back(IllegalTrackGuard{rej});

  for (int i = 0; i < 2; ++i) {
    const ProverSpec& inner = out.source.provers[static_cast<std::size_t>(i)];
    std::vector<std::string> extra;
    for (const auto& s : out.mask.live_symbols()) {
      if (!inner.tape.contains(s)) extra.push_back(s);
    }
    std::vector<std::string> tape = inner.tape.live_symbols();
    tape.insert(tape.end(), extra.begin(), extra.end());
    ProverSpec honest;
    honest.comm = Alphabet(track.live_symbols());
    honest.tape = Alphabet(std::move(tape));
    honest.space = inner.space + p.cutoff;
    honest.strategy = StashStrategy{std::make_shared<const ProverSpec>(inner), out.mask};
    q.provers.push_back(std::move(honest));
  }
  return out;
}

namespace {

using OutputKey = std::vector<int>;  // state, move, comm...
using Column = std::map<OutputKey, Amplitude>;

Column column_of(const std::vector<Branch>& branches) {
  Column c;
  for (const auto& b : branches) {
    OutputKey k{b.state, b.move};
    k.insert(k.end(), b.comm.begin(), b.comm.end());
    c[k] += b.weight;
  }
  return c;
}

Amplitude dot(const Column& a, const Column& b) {
  Amplitude s = 0.0;
  const Column& small = a.size() <= b.size() ? a : b;
  const Column& large = a.size() <= b.size() ? b : a;
  for (const auto& [k, x] : small) {
    auto it = large.find(k);
    if (it == large.end()) continue;
    s += &small == &a ? std::conj(x) * it->second : std::conj(it->second) * x;
  }
  return s;
}

}  // namespace

double reduce_inner_product_deviation(const ReduceOutput& out) {
  const VerifierSpec& v = out.source.verifier;
  const VerifierSpec& w = out.protocol.verifier;
  const Alphabet& gamma = v.comm[0];
  std::map<int, std::vector<std::pair<Column, Column>>> by_tape;
  for (const auto& [key, branches] : v.rules) {
    if (key.comm[2] != 0) continue;
    RowKey k2{key.state, key.tape,
              {w.comm[0].index(track_token(gamma.symbol(key.comm[0]), kBlank)),
               w.comm[1].index(track_token(gamma.symbol(key.comm[1]), kBlank))}};
    auto it = w.rules.find(k2);
    if (it == w.rules.end()) return INFINITY;
    by_tape[key.tape].emplace_back(column_of(branches), column_of(it->second));
  }
  double dev = 0.0;
  for (const auto& [t, cols] : by_tape) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      for (std::size_t j = i; j < cols.size(); ++j) {
        dev = std::max(dev, std::abs(dot(cols[i].first, cols[j].first) - dot(cols[i].second, cols[j].second)));
      }
    }
  }
  return dev;
}

Completion complete_unitary(const VerifierSpec& v) {
  if (!is_quantum(v.mode)) throw Error(ErrorCode::kInvalidSpec, "completion applies to quantum verifiers");
  if (Report r = check_well_formed(v); !r.ok()) {
    throw Error(ErrorCode::kNotOrthonormal, "existing columns are not orthonormal: " + r.violations.front().message);
  }
  const int k = v.k();
  std::vector<int> nonhalting;
  for (int q = 0; q < static_cast<int>(v.states.size()); ++q) {
    if (!v.is_halting(q)) nonhalting.push_back(q);
  }
  std::size_t tuples = 1;
  for (const auto& a : v.comm) tuples *= a.live_size();
  const std::size_t basis_size = tuples * v.states.size() * 3;
  if (tuples * nonhalting.size() > 200000 || basis_size > 2000000) {
    throw Error(ErrorCode::kUnbounded, "argument space too large to complete");
  }
  auto tuple_at = [&](std::size_t n) {
    std::vector<int> c(static_cast<std::size_t>(k));
    for (int i = k - 1; i >= 0; --i) {
      const std::size_t size = v.comm[static_cast<std::size_t>(i)].live_size();
      c[static_cast<std::size_t>(i)] = static_cast<int>(n % size);
      n /= size;
    }
    return c;
  };
  const std::vector<int> moves = is_one_way(v.mode) ? std::vector<int>{1} : std::vector<int>{-1, 0, 1};

  Completion out{v, {}};
  for (int t = 0; t < v.tape_symbol_count(); ++t) {
    std::vector<Column> columns;
    for (const auto& [key, branches] : v.rules) {
      if (key.tape == t) columns.push_back(column_of(branches));
    }
    for (int q : nonhalting) {
      for (std::size_t n = 0; n < tuples; ++n) {
        RowKey key{q, t, tuple_at(n)};
        if (v.rules.contains(key) || guard_output(v, key)) continue;
        std::vector<OutputKey> candidates;
        OutputKey identity{q, moves.size() == 1 ? 1 : 0};
        identity.insert(identity.end(), key.comm.begin(), key.comm.end());
        candidates.push_back(identity);
        bool found = false;
        Column next;
        for (std::size_t c = 0; !found; ++c) {
          if (c > basis_size) throw Error(ErrorCode::kNotOrthonormal, "no orthogonal direction left for " + v.describe(key));
          OutputKey e;
          if (c == 0) {
            e = identity;
          } else {
            const std::size_t idx = c - 1;
            const std::size_t m = idx % moves.size();
            const std::size_t rest = idx / moves.size();
            e = {static_cast<int>(rest / tuples), moves[m]};
            const auto comm = tuple_at(rest % tuples);
            e.insert(e.end(), comm.begin(), comm.end());
            if (e == identity) continue;
          }
          Column col{{e, 1.0}};
          for (int pass = 0; pass < 2; ++pass) {
            for (const auto& existing : columns) {
              const Amplitude overlap = dot(existing, col);
              if (std::abs(overlap) < 1e-15) continue;
              for (const auto& [ok, amp] : existing) col[ok] -= overlap * amp;
            }
          }
          double norm = 0.0;
          for (const auto& [ok, amp] : col) norm += std::norm(amp);
          if (norm < 1e-6) continue;
          const double scale = 1.0 / std::sqrt(norm);
          for (auto& [ok, amp] : col) {
            amp *= scale;
            if (std::abs(amp) >= kPruneThreshold) next[ok] = amp;
          }
          found = true;
        }
        std::vector<Branch> branches;
        for (const auto& [ok, amp] : next) {
          branches.push_back({ok[0], ok[1], std::vector<int>(ok.begin() + 2, ok.end()), amp});
        }
        columns.push_back(next);
        out.verifier.rules.emplace(key, std::move(branches));
        out.added.push_back(key);
      }
    }
  }
  return out;
}

std::string format_provenance(const std::vector<ProvenanceEntry>& provenance) {
  std::ostringstream os;
  for (const auto& e : provenance) os << e.emitted << " <= " << e.source << '\n';
  return os.str();
}

}  // namespace qmip
