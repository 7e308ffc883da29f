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

#include "qmip/adversary.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "qmip/transforms.hpp"

namespace qmip {

std::size_t StrategyFamily::size() const {
  std::size_t n = 1;
  for (const auto& c : candidates) {
    if (c.empty()) return 0;
    if (n > SIZE_MAX / c.size()) return SIZE_MAX;
    n *= c.size();
  }
  return n;
}

std::size_t family_limit() {
  if (const char* env = std::getenv("QMIP_FAMILY_LIMIT")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 1000000;
}

std::vector<int> reachable_received(const VerifierSpec& v, int prover) {
  std::set<int> seen{0};
  for (const auto& [key, branches] : v.rules) {
    for (const auto& b : branches) {
      if (!v.is_halting(b.state)) seen.insert(b.comm[static_cast<std::size_t>(prover)]);
    }
  }
  return {seen.begin(), seen.end()};
}

namespace {

[[noreturn]] void too_large(double count, std::size_t limit) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "family has %.6g tuples, limit is %zu", count, limit);
  throw Error(ErrorCode::kFamilyTooLarge, buf);
}

std::vector<int> reply_indices(const ProverSpec& prover, const FamilyOptions& options, int i) {
  std::vector<int> out;
  auto it = options.replies.find(i);
  if (it == options.replies.end()) {
    for (int s = 0; s < static_cast<int>(prover.comm.live_size()); ++s) out.push_back(s);
    return out;
  }
  for (const auto& name : it->second) {
    const int s = prover.comm.index(name);
    if (!prover.comm.is_live(s)) {
      throw Error(ErrorCode::kInvalidInput, "reply '" + name + "' is not in prover " + std::to_string(i + 1) + "'s alphabet");
    }
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  }
  if (out.empty()) throw Error(ErrorCode::kInvalidInput, "empty reply alphabet");
  return out;
}

std::vector<ProverSpec> deterministic_candidates(const ProtocolSpec& p, int i, const std::vector<int>& replies,
                                                 const std::vector<int>& received, std::size_t limit) {
  const ProverSpec& prover = p.provers[static_cast<std::size_t>(i)];
  const int steps = p.cutoff - 1;
  const std::size_t digits = static_cast<std::size_t>(steps) * received.size();
  const double count = std::pow(static_cast<double>(replies.size()), static_cast<double>(digits));
  if (count > static_cast<double>(limit)) too_large(count, limit);
  const bool quantum = is_quantum(p.verifier.mode);

  std::vector<ProverSpec> out;
  std::vector<std::size_t> digit(digits, 0);
  while (true) {
    TableStrategy t;
    for (std::size_t d = 0; d < digits; ++d) {
      const int step = static_cast<int>(d / received.size()) + 1;
      t.entries.emplace(TableKey{step, received[d % received.size()], {}}, TableEntry{replies[digit[d]], {}});
    }
    // Unreachable inputs get a blank reply; they are never evaluated.
    t.entries.emplace(TableKey{kAnyStep, kAnySymbol, {}}, TableEntry{0, {}});
    ProverSpec base{Alphabet(prover.comm.live_symbols()), Alphabet({std::string(kBlank)}), 0, std::move(t)};
    out.push_back(quantum ? make_reversible_prover(base, p.cutoff) : std::move(base));
    std::size_t d = digits;
    while (d > 0 && ++digit[d - 1] == replies.size()) digit[--d] = 0;
    if (d == 0) break;
  }
  return out;
}

std::vector<ProverSpec> permutation_candidates(const ProtocolSpec& p, int i, const std::vector<int>& replies,
                                               const std::vector<int>& received, std::size_t limit, bool rotations) {
  const ProverSpec& prover = p.provers[static_cast<std::size_t>(i)];
  std::vector<std::string> tape_symbols{std::string(kBlank)};
  for (int r : replies) {
    if (prover.comm.symbol(r) != kBlank) tape_symbols.push_back(prover.comm.symbol(r));
  }
  const Alphabet tape(tape_symbols);
  std::vector<std::pair<int, int>> images;
  for (int r : replies) {
    for (int d = 0; d < static_cast<int>(tape.size()); ++d) images.emplace_back(r, d);
  }
  // Rotations consume two images per received symbol: an ordered pair with
  // i < j and a sign.
  const std::size_t per = rotations ? 2 : 1;
  double count = 1.0;
  for (std::size_t n = 0; n < received.size(); ++n) {
    const double free = static_cast<double>(images.size()) - static_cast<double>(per * n);
    count *= free <= 0 ? 0.0 : rotations ? free * (free - 1.0) : free;
  }
  if (count > static_cast<double>(limit)) too_large(count, limit);

  std::vector<ProverSpec> out;
  struct Choice {
    std::size_t first = 0;
    std::size_t second = 0;
    double sign = 1.0;
  };
  std::vector<Choice> choice(received.size());
  std::vector<bool> used(images.size(), false);
  const double h = 1.0 / std::sqrt(2.0);
  auto entry = [&](std::size_t m) {
    const auto [reply, cell] = images[m];
    return TableEntry{reply, trim_tape({cell})};
  };
  auto emit = [&] {
    UnitaryStrategy u;
    for (std::size_t n = 0; n < received.size(); ++n) {
      auto& outs = u.entries[TableKey{1, received[n], {}}];
      if (rotations) {
        outs.push_back({entry(choice[n].first), h});
        outs.push_back({entry(choice[n].second), choice[n].sign * h});
      } else {
        outs.push_back({entry(choice[n].first), 1.0});
      }
    }
    out.push_back(ProverSpec{Alphabet(prover.comm.live_symbols()), tape, 1, std::move(u)});
  };
  auto rec = [&](auto&& self, std::size_t n) -> void {
    if (n == received.size()) {
      emit();
      return;
    }
    for (std::size_t a = 0; a < images.size(); ++a) {
      if (used[a]) continue;
      used[a] = true;
      if (!rotations) {
        choice[n] = {a, a, 1.0};
        self(self, n + 1);
      } else {
        for (std::size_t b = a + 1; b < images.size(); ++b) {
          if (used[b]) continue;
          used[b] = true;
          for (double sign : {1.0, -1.0}) {
            choice[n] = {a, b, sign};
            self(self, n + 1);
          }
          used[b] = false;
        }
      }
      used[a] = false;
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace

StrategyFamily make_family(const ProtocolSpec& p, const FamilyOptions& options, std::size_t limit) {
  const VerifierSpec& v = p.verifier;
  if (static_cast<int>(p.provers.size()) != v.k()) throw Error(ErrorCode::kInvalidSpec, "prover count differs from k");
  if (options.kind != FamilyKind::kDeterministic && p.cutoff > 2) {
    throw Error(ErrorCode::kInvalidInput, "permutation and rotation families are defined for cutoff T <= 2");
  }
  StrategyFamily family;
  for (int i = 0; i < v.k(); ++i) {
    const ProverSpec& prover = p.provers[static_cast<std::size_t>(i)];
    if (options.fixed.contains(i) || p.cutoff < 2) {
      family.candidates.push_back({prover});
      continue;
    }
    const auto replies = reply_indices(prover, options, i);
    std::vector<int> received;
    for (int s : reachable_received(v, i)) {
      const int j = prover.comm.index(v.comm[static_cast<std::size_t>(i)].symbol(s));
      if (prover.comm.is_live(j)) received.push_back(j);
    }
    family.candidates.push_back(options.kind == FamilyKind::kDeterministic
                                    ? deterministic_candidates(p, i, replies, received, limit)
                                    : permutation_candidates(p, i, replies, received, limit,
                                                             options.kind == FamilyKind::kRotation));
  }
  if (family.size() > limit) {
    too_large(static_cast<double>(family.size()), limit);
  }
  return family;
}

std::vector<std::size_t> decode_tuple(const StrategyFamily& family, std::size_t index) {
  std::vector<std::size_t> digits(family.candidates.size());
  for (std::size_t i = family.candidates.size(); i-- > 0;) {
    digits[i] = index % family.candidates[i].size();
    index /= family.candidates[i].size();
  }
  return digits;
}

AdversaryReport search(const ProtocolSpec& p, std::string_view input, const StrategyFamily& family,
                       const SearchOptions& options) {
  if (family.candidates.size() != p.provers.size()) {
    throw Error(ErrorCode::kInvalidInput, "family covers " + std::to_string(family.candidates.size()) + " provers, protocol has " +
                                              std::to_string(p.provers.size()));
  }
  const std::size_t n = family.size();
  if (n == 0) throw Error(ErrorCode::kInvalidInput, "family is empty");
  if (n > options.limit) too_large(static_cast<double>(n), options.limit);

  std::vector<FinalStats> results(n);
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::size_t error_index = SIZE_MAX;
  std::exception_ptr error;
  auto worker = [&] {
    ProtocolSpec q = p;
    for (std::size_t t = next++; t < n; t = next++) {
      const auto digits = decode_tuple(family, t);
      for (std::size_t i = 0; i < digits.size(); ++i) q.provers[i] = family.candidates[i][digits[i]];
      try {
        results[t] = run(q, input).final;
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (t < error_index) {
          error_index = t;
          error = std::current_exception();
        }
      }
    }
  };
  unsigned threads = options.threads ? options.threads : std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);

  AdversaryReport report;
  report.tuples = n;
  std::size_t best = 0;
  report.max_p_acc = results[0].p_acc;
  report.min_p_rej = results[0].p_rej;
  for (std::size_t t = 1; t < n; ++t) {
    if (results[t].p_acc > report.max_p_acc + 1e-12) {
      report.max_p_acc = results[t].p_acc;
      best = t;
    }
    report.min_p_rej = std::min(report.min_p_rej, results[t].p_rej);
  }
  report.best = decode_tuple(family, best);
  for (std::size_t i = 0; i < report.best.size(); ++i) report.best_strategies.push_back(family.candidates[i][report.best[i]]);
  if (options.keep_table) {
    report.table.reserve(n);
    for (std::size_t t = 0; t < n; ++t) report.table.push_back({t, results[t]});
  }
  return report;
}

double soundness_gap(const ProtocolSpec& p, std::string_view input, const StrategyFamily& family,
                     const SearchOptions& options) {
  SearchOptions o = options;
  o.keep_table = false;
  return search(p, input, family, o).min_p_rej;
}

namespace {

using FixedMap = std::map<std::pair<int, LocalState>, LocalState>;

ProtocolSpec with_overrides(const ProtocolSpec& p, const std::vector<std::shared_ptr<const ProverSpec>>& adversaries,
                            const std::vector<FixedMap>& fixed) {
  ProtocolSpec q = p;
  for (std::size_t i = 0; i < adversaries.size(); ++i) {
    const ProverSpec& a = *adversaries[i];
    q.provers[i] = ProverSpec{a.comm, a.tape, a.space, OverrideStrategy{adversaries[i], fixed[i]}};
  }
  return q;
}

double subtree_rejection(const ProtocolSpec& q, std::string_view input, StateVector sub, int round) {
  Execution ex(q, input, Semantics::kQuantum);
  ex.set_state(std::move(sub), round);
  while (!ex.finished()) ex.step();
  return ex.cum_rej();
}

}  // namespace

DerandomizeResult derandomize_provers(const ProtocolSpec& p, std::string_view input,
                                      const std::vector<ProverSpec>& adversaries, const DerandomizeOptions& options) {
  if (!is_quantum(p.verifier.mode)) throw Error(ErrorCode::kInvalidSpec, "derandomization expects a quantum system");
  if (p.provers.size() != 3 || p.verifier.k() != 3) throw Error(ErrorCode::kInvalidSpec, "derandomization expects three provers");
  if (!std::holds_alternative<EraserStrategy>(p.provers[2].strategy)) {
    throw Error(ErrorCode::kNoEraser, "the third prover is not the eraser");
  }
  if (adversaries.size() != 2) throw Error(ErrorCode::kInvalidInput, "expected adversaries for provers 1 and 2");

  std::vector<std::shared_ptr<const ProverSpec>> adv;
  for (const auto& a : adversaries) adv.push_back(std::make_shared<const ProverSpec>(a));
  std::vector<FixedMap> fixed(2);

  for (int step = 1; step < p.cutoff; ++step) {
    Execution ex(with_overrides(p, adv, fixed), input, Semantics::kQuantum);
    while (ex.round() < step && !ex.state().empty()) ex.step();
    if (ex.state().empty()) break;
    const StateVector start = ex.state();

    for (int i = 0; i < 2; ++i) {
      std::map<LocalState, StateVector> groups;
      for (const auto& [c, amp] : start) groups[ex.local(c, i)].add(c, amp);
      if (groups.size() > options.max_local_states) {
        throw Error(ErrorCode::kUnbounded, std::to_string(groups.size()) + " reachable local states at step " +
                                               std::to_string(step) + " exceed the guard");
      }
      for (auto& [local, sub] : groups) {
        std::set<LocalState> support;
        for (const auto& b : prover_act(*adv[static_cast<std::size_t>(i)], step, local)) {
          if (std::abs(b.weight) >= kPruneThreshold) support.insert(b.state);
        }
        const LocalState* best = nullptr;
        double best_rej = 0.0;
        for (const auto& out : support) {
          std::vector<FixedMap> trial = fixed;
          trial[static_cast<std::size_t>(i)][{step, local}] = out;
          const double rej = subtree_rejection(with_overrides(p, adv, trial), input, sub, step);
          if (!best || rej < best_rej - options.tie_tolerance) {
            best = &out;
            best_rej = rej;
          }
        }
        if (best) fixed[static_cast<std::size_t>(i)][{step, local}] = *best;
      }
    }
  }

  DerandomizeResult result;
  const ProtocolSpec final_system = with_overrides(p, adv, fixed);
  for (std::size_t i = 0; i < 2; ++i) {
    TableStrategy t;
    for (const auto& [key, out] : fixed[i]) {
      t.entries.emplace(TableKey{key.first, key.second.comm, trim_tape(key.second.tape)},
                        TableEntry{out.comm, trim_tape(out.tape)});
    }
    const ProverSpec& a = *adv[i];
    result.classical.push_back(ProverSpec{a.comm, a.tape, a.space, std::move(t)});
    result.overrides.push_back(final_system.provers[i]);
  }
  return result;
}

namespace {

std::string describe_strategy(const ProverSpec& prover) {
  std::ostringstream os;
  auto key_text = [&](const TableKey& k) {
    std::string s = (k.step == kAnyStep ? std::string("*") : std::to_string(k.step)) + ":" +
                    (k.received == kAnySymbol ? std::string("*") : prover.comm.symbol(k.received));
    return s;
  };
  auto table_text = [&](const TableStrategy& t) {
    bool first = true;
    for (const auto& [k, e] : t.entries) {
      if (k.step == kAnyStep && k.received == kAnySymbol) continue;
      os << (first ? "" : " ") << key_text(k) << "->" << prover.comm.symbol(e.reply);
      first = false;
    }
  };
  if (const auto* t = std::get_if<TableStrategy>(&prover.strategy)) {
    os << "table ";
    table_text(*t);
  } else if (const auto* r = std::get_if<ReversibleStrategy>(&prover.strategy)) {
    os << "reversible ";
    table_text(r->inner);
  } else if (const auto* u = std::get_if<UnitaryStrategy>(&prover.strategy)) {
    os << "unitary";
    for (const auto& [k, outs] : u->entries) {
      for (const auto& [e, w] : outs) {
        os << ' ' << key_text(k) << "->" << prover.comm.symbol(e.reply) << '|'
           << (e.tape.empty() ? std::string("-") : prover.tape.symbol(e.tape.front()));
      }
    }
  } else {
    os << strategy_name(prover.strategy);
  }
  return os.str();
}

}  // namespace

std::string format_report(const ProtocolSpec&, const StrategyFamily& family, const AdversaryReport& report,
                          bool include_table) {
  std::ostringstream os;
  char buf[160];
  os << "tuples=" << report.tuples << '\n';
  for (std::size_t i = 0; i < family.candidates.size(); ++i) {
    os << "prover " << i + 1 << " candidates=" << family.candidates[i].size() << '\n';
  }
  os << "best=";
  for (std::size_t i = 0; i < report.best.size(); ++i) os << (i ? "," : "") << report.best[i];
  os << '\n';
  for (std::size_t i = 0; i < report.best_strategies.size(); ++i) {
    os << "best prover " << i + 1 << ": " << describe_strategy(report.best_strategies[i]) << '\n';
  }
  if (include_table) {
    for (const auto& e : report.table) {
      const auto digits = decode_tuple(family, e.index);
      os << "tuple";
      for (auto d : digits) os << ' ' << d;
      std::snprintf(buf, sizeof buf, " p_acc=%.9f p_rej=%.9f p_unresolved=%.9f\n", e.stats.p_acc, e.stats.p_rej,
                    e.stats.p_unresolved);
      os << buf;
    }
  }
  std::snprintf(buf, sizeof buf, "min_p_rej=%.9f\nmax_p_acc=%.9f\n", report.min_p_rej, report.max_p_acc);
  os << buf;
  return os.str();
}

}  // namespace qmip
