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

#include "qmip/prover.hpp"

#include <cmath>
#include <sstream>

namespace qmip {

bool StashStrategy::operator==(const StashStrategy& other) const {
  if (!(mask == other.mask)) return false;
  if (inner == other.inner) return true;
  return inner && other.inner && *inner == *other.inner;
}

bool OverrideStrategy::operator==(const OverrideStrategy& other) const {
  if (fixed != other.fixed) return false;
  if (base == other.base) return true;
  return base && other.base && *base == *other.base;
}

const char* strategy_name(const Strategy& s) {
  struct Visitor {
    const char* operator()(const TableStrategy&) const { return "table"; }
    const char* operator()(const ReversibleStrategy&) const { return "reversible"; }
    const char* operator()(const EraserStrategy&) const { return "eraser"; }
    const char* operator()(const UnitaryStrategy&) const { return "unitary"; }
    const char* operator()(const StashStrategy&) const { return "stash"; }
    const char* operator()(const OverrideStrategy&) const { return "override"; }
  };
  return std::visit(Visitor{}, s);
}

std::vector<int> trim_tape(std::vector<int> tape) {
  while (!tape.empty() && tape.back() == 0) tape.pop_back();
  return tape;
}

LocalState blank_local(const ProverSpec& prover) {
  return {0, std::vector<int>(static_cast<std::size_t>(prover.space), 0)};
}

const TableEntry* table_lookup(const TableStrategy& table, int step, int received, const std::vector<int>& tape) {
  const std::vector<int> trimmed = trim_tape(tape);
  for (int s : {step, kAnyStep}) {
    for (int r : {received, kAnySymbol}) {
      auto it = table.entries.find(TableKey{s, r, trimmed});
      if (it != table.entries.end()) return &it->second;
    }
  }
  return nullptr;
}

namespace {

std::string describe_local(const ProverSpec& p, int step, const LocalState& local) {
  std::ostringstream os;
  os << "step " << step << " received '" << p.comm.symbol(local.comm) << "' tape '";
  for (int c : trim_tape(local.tape)) os << p.tape.symbol(c);
  os << "'";
  return os.str();
}

std::vector<int> padded(const ProverSpec& p, std::vector<int> tape, int step, const LocalState& local) {
  if (static_cast<int>(tape.size()) > p.space) {
    throw Error(ErrorCode::kSpaceExceeded, "tape needs " + std::to_string(tape.size()) + " cells, bound is " +
                                               std::to_string(p.space) + " (" + describe_local(p, step, local) + ")");
  }
  tape.resize(static_cast<std::size_t>(p.space), 0);
  return tape;
}

[[noreturn]] void missing(const ProverSpec& p, int step, const LocalState& local) {
  throw Error(ErrorCode::kMissingTransition,
              std::string(strategy_name(p.strategy)) + " prover has no entry for " + describe_local(p, step, local));
}

[[noreturn]] void out_of_space(const ProverSpec& p, int step, const LocalState& local) {
  throw Error(ErrorCode::kSpaceExceeded, "no blank cell left for " + describe_local(p, step, local));
}

std::vector<LocalBranch> act_table(const ProverSpec& p, const TableStrategy& s, int step, const LocalState& local) {
  const TableEntry* e = table_lookup(s, step, local.comm, local.tape);
  if (!e) missing(p, step, local);
  return {{{e->reply, padded(p, e->tape, step, local)}, 1.0}};
}

std::vector<LocalBranch> act_reversible(const ProverSpec& p, const ReversibleStrategy& s, int step,
                                        const LocalState& local) {
  const std::size_t cell = static_cast<std::size_t>(step - 1);
  if (static_cast<int>(cell) >= p.space) out_of_space(p, step, local);
  const int g = static_cast<int>(p.comm.live_size());
  const int z = local.tape[cell];
  LocalState out = local;
  out.tape[cell] = (z + local.comm) % g;

  std::vector<int> inner_tape;
  int reply = 0;
  for (std::size_t t = 0; t <= cell; ++t) {
    const TableEntry* e = table_lookup(s.inner, static_cast<int>(t) + 1, out.tape[t], inner_tape);
    if (!e) missing(p, step, local);
    inner_tape = e->tape;
    reply = e->reply;
  }
  out.comm = (reply + z) % g;
  return {{std::move(out), 1.0}};
}

std::vector<LocalBranch> act_eraser(const ProverSpec& p, int step, const LocalState& local) {
  const std::size_t cell = static_cast<std::size_t>(step - 1);
  if (static_cast<int>(cell) >= p.space) {
    if (local.comm != 0) out_of_space(p, step, local);
    return {{local, 1.0}};
  }
  const int zi = p.comm.index(p.tape.symbol(local.tape[cell]));
  if (!p.comm.is_live(zi)) return {{local, 1.0}};
  const int g = static_cast<int>(p.comm.live_size());
  LocalState out = local;
  out.comm = zi;
  out.tape[cell] = p.tape.index(p.comm.symbol((zi + local.comm) % g));
  return {{std::move(out), 1.0}};
}

std::vector<LocalBranch> act_unitary(const ProverSpec& p, const UnitaryStrategy& s, int step, const LocalState& local) {
  const std::vector<int> trimmed = trim_tape(local.tape);
  const std::vector<std::pair<TableEntry, Amplitude>>* outs = nullptr;
  for (int st : {step, kAnyStep}) {
    for (int r : {local.comm, kAnySymbol}) {
      auto it = s.entries.find(TableKey{st, r, trimmed});
      if (!outs && it != s.entries.end()) outs = &it->second;
    }
  }
  if (!outs) missing(p, step, local);
  std::vector<LocalBranch> result;
  result.reserve(outs->size());
  for (const auto& [entry, amp] : *outs) result.push_back({{entry.reply, padded(p, entry.tape, step, local)}, amp});
  return result;
}

std::vector<LocalBranch> act_stash(const ProverSpec& p, const StashStrategy& s, int step, const LocalState& local) {
  const ProverSpec& inner = *s.inner;
  auto track = split_track(p.comm.symbol(local.comm));
  if (!track) return {{local, 1.0}};
  const int ui = inner.comm.index(track->first);
  const int li = s.mask.index(track->second);
  if (!inner.comm.is_live(ui) || !s.mask.is_live(li)) return {{local, 1.0}};

  LocalState inner_local{ui, std::vector<int>(static_cast<std::size_t>(inner.space), 0)};
  for (int c = 0; c < inner.space; ++c) {
    const int id = inner.tape.index(p.tape.symbol(local.tape[static_cast<std::size_t>(c)]));
    if (id < 0) return {{local, 1.0}};
    inner_local.tape[static_cast<std::size_t>(c)] = id;
  }

  const std::size_t stash = static_cast<std::size_t>(inner.space + step - 1);
  std::vector<int> tape = local.tape;
  int lower_out = 0;
  if (static_cast<int>(stash) >= p.space) {
    if (li != 0) out_of_space(p, step, local);
  } else {
    const int zi = s.mask.index(p.tape.symbol(local.tape[stash]));
    if (!s.mask.is_live(zi)) return {{local, 1.0}};
    lower_out = zi;
    tape[stash] = p.tape.index(s.mask.symbol((zi + li) % static_cast<int>(s.mask.live_size())));
  }

  std::vector<LocalBranch> result;
  for (const auto& b : prover_act(inner, step, inner_local)) {
    const int c = p.comm.index(track_token(inner.comm.symbol(b.state.comm), s.mask.symbol(lower_out)));
    if (c < 0) throw Error(ErrorCode::kInvalidSpec, "stash prover reply falls outside its track alphabet");
    std::vector<int> out_tape = tape;
    for (int i = 0; i < inner.space; ++i) {
      out_tape[static_cast<std::size_t>(i)] = p.tape.index(inner.tape.symbol(b.state.tape[static_cast<std::size_t>(i)]));
    }
    result.push_back({{c, std::move(out_tape)}, b.weight});
  }
  return result;
}

}  // namespace

std::vector<LocalBranch> prover_act(const ProverSpec& prover, int step, const LocalState& local) {
  struct Visitor {
    const ProverSpec& p;
    int step;
    const LocalState& local;
    std::vector<LocalBranch> operator()(const TableStrategy& s) const { return act_table(p, s, step, local); }
    std::vector<LocalBranch> operator()(const ReversibleStrategy& s) const {
      return act_reversible(p, s, step, local);
    }
    std::vector<LocalBranch> operator()(const EraserStrategy&) const { return act_eraser(p, step, local); }
    std::vector<LocalBranch> operator()(const UnitaryStrategy& s) const { return act_unitary(p, s, step, local); }
    std::vector<LocalBranch> operator()(const StashStrategy& s) const { return act_stash(p, s, step, local); }
    std::vector<LocalBranch> operator()(const OverrideStrategy& s) const {
      auto it = s.fixed.find({step, local});
      if (it != s.fixed.end()) return {{it->second, 1.0}};
      return prover_act(*s.base, step, local);
    }
  };
  return std::visit(Visitor{prover, step, local}, prover.strategy);
}

bool table_is_injective(const TableStrategy& table) {
  std::map<int, std::set<std::pair<int, std::vector<int>>>> images;
  for (const auto& [key, entry] : table.entries) {
    // A wildcard row sends every received symbol to one image.
    if (key.received == kAnySymbol) return false;
    if (!images[key.step].insert({entry.reply, entry.tape}).second) return false;
  }
  return true;
}

namespace {

void check_gram(const std::vector<std::pair<std::string, std::map<std::pair<int, std::vector<int>>, Amplitude>>>& cols,
                double tol, Report& report) {
  std::map<std::pair<int, std::vector<int>>, std::vector<std::pair<std::size_t, Amplitude>>> by_out;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    double norm = 0.0;
    for (const auto& [out, amp] : cols[c].second) {
      norm += std::norm(amp);
      by_out[out].emplace_back(c, amp);
    }
    if (std::abs(norm - 1.0) > tol) report.add("column " + cols[c].first + " is not normalized");
  }
  std::map<std::pair<std::size_t, std::size_t>, Amplitude> gram;
  for (const auto& [out, terms] : by_out) {
    for (std::size_t i = 0; i < terms.size(); ++i) {
      for (std::size_t j = i + 1; j < terms.size(); ++j) {
        gram[{terms[i].first, terms[j].first}] += std::conj(terms[i].second) * terms[j].second;
      }
    }
  }
  for (const auto& [pair, ip] : gram) {
    if (std::abs(ip) > tol) report.add("columns " + cols[pair.first].first + " and " + cols[pair.second].first + " overlap");
  }
}

}  // namespace

Report check_prover(const ProverSpec& prover, double tolerance) {
  Report report;
  if (prover.comm.live_size() == 0 || prover.comm.symbol(0) != kBlank) report.add("communication alphabet must start with #");
  if (prover.tape.live_size() == 0 || prover.tape.symbol(0) != kBlank) report.add("tape alphabet must start with #");
  if (prover.space < 0) report.add("negative space bound");
  if (!report.ok()) return report;

  if (const auto* t = std::get_if<TableStrategy>(&prover.strategy)) {
    for (const auto& [key, entry] : t->entries) {
      if (static_cast<int>(entry.tape.size()) > prover.space) report.add("table entry writes beyond the space bound");
      if (!prover.comm.is_live(entry.reply)) report.add("table entry replies with an unknown symbol");
    }
  } else if (const auto* r = std::get_if<ReversibleStrategy>(&prover.strategy)) {
    if (prover.tape.live_symbols() != prover.comm.live_symbols()) {
      report.add("reversible prover must log over its communication alphabet");
    }
    (void)r;
  } else if (std::holds_alternative<EraserStrategy>(prover.strategy)) {
    for (const auto& s : prover.comm.live_symbols()) {
      if (!prover.tape.contains(s)) report.add("eraser tape alphabet lacks received symbol '" + s + "'");
    }
  } else if (const auto* u = std::get_if<UnitaryStrategy>(&prover.strategy)) {
    std::map<int, std::vector<std::pair<std::string, std::map<std::pair<int, std::vector<int>>, Amplitude>>>> per_step;
    for (const auto& [key, outs] : u->entries) {
      std::map<std::pair<int, std::vector<int>>, Amplitude> col;
      for (const auto& [entry, amp] : outs) {
        if (static_cast<int>(entry.tape.size()) > prover.space) report.add("unitary entry writes beyond the space bound");
        col[{entry.reply, entry.tape}] += amp;
      }
      std::string label = "step " + (key.step == kAnyStep ? std::string("*") : std::to_string(key.step)) + " '" +
                          (key.received == kAnySymbol ? std::string("*") : prover.comm.symbol(key.received)) + "'";
      per_step[key.step].emplace_back(std::move(label), std::move(col));
    }
    for (const auto& [step, cols] : per_step) check_gram(cols, tolerance, report);
  } else if (const auto* s = std::get_if<StashStrategy>(&prover.strategy)) {
    if (!s->inner) {
      report.add("stash prover has no inner strategy");
    } else {
      report.merge(check_prover(*s->inner, tolerance), "inner: ");
      if (prover.space < s->inner->space) report.add("stash prover space smaller than its inner prover's");
    }
    for (const auto& sym : s->mask.live_symbols()) {
      if (!prover.tape.contains(sym)) report.add("stash tape alphabet lacks mask symbol '" + sym + "'");
    }
  } else if (const auto* o = std::get_if<OverrideStrategy>(&prover.strategy)) {
    if (!o->base) report.add("override prover has no base strategy");
  }
  return report;
}

Report check_prover_unitary_on_basis(const ProverSpec& prover, int step, double tolerance) {
  Report report;
  const int nd = static_cast<int>(prover.tape.live_size());
  std::vector<std::pair<std::string, std::map<std::pair<int, std::vector<int>>, Amplitude>>> cols;
  LocalState local{0, std::vector<int>(static_cast<std::size_t>(prover.space), 0)};
  for (int c = 0; c < static_cast<int>(prover.comm.live_size()); ++c) {
    std::fill(local.tape.begin(), local.tape.end(), 0);
    while (true) {
      local.comm = c;
      std::map<std::pair<int, std::vector<int>>, Amplitude> col;
      try {
        for (const auto& b : prover_act(prover, step, local)) col[{b.state.comm, b.state.tape}] += b.weight;
      } catch (const Error& e) {
        report.add(std::string("basis state raised ") + e.what());
      }
      cols.emplace_back(describe_local(prover, step, local), std::move(col));
      int i = prover.space - 1;
      while (i >= 0 && ++local.tape[static_cast<std::size_t>(i)] == nd) local.tape[static_cast<std::size_t>(i--)] = 0;
      if (i < 0) break;
    }
  }
  check_gram(cols, tolerance, report);
  return report;
}

}  // namespace qmip
