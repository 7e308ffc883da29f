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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qmip/protocol.hpp"
#include "qmip/specs.hpp"

namespace qmip {

namespace {

using OutKey = std::vector<int>;

struct Column {
  RowKey key;
  std::map<OutKey, Amplitude> terms;
};

std::string fmt_amp(Amplitude a) {
  std::ostringstream os;
  os.precision(12);
  if (a.imag() == 0.0) {
    os << a.real();
  } else {
    os << a.real() << (a.imag() < 0 ? "" : "+") << a.imag() << 'i';
  }
  return os.str();
}

void check_structure(const VerifierSpec& v, Report& report) {
  const int nq = static_cast<int>(v.states.size());
  if (nq == 0) report.add("verifier has no states");
  if (v.initial < 0 || v.initial >= nq) report.add("initial state out of range");
  for (int q : v.accept) {
    if (v.reject.contains(q)) report.add("state " + v.states[q] + " is both accepting and rejecting");
  }
  if (v.is_halting(v.initial)) report.add("initial state is halting");
  for (const auto& s : v.input.all_symbols()) {
    if (s.size() != 1 || s == kLeftEndmarker || s == kRightEndmarker || s == kBlank) {
      report.add("input symbol '" + s + "' must be a single character other than ^, $ and #");
    }
  }
  if (v.k() < 1) report.add("verifier needs at least one prover");
  for (int i = 0; i < v.k(); ++i) {
    const auto& a = v.comm[i];
    if (a.live_size() == 0 || a.symbol(0) != kBlank) {
      report.add("communication alphabet " + std::to_string(i + 1) + " must start with #");
    }
    for (const auto& s : a.all_symbols()) {
      if (!s.empty() && s.front() == kReservedPrefix) {
        report.add("symbol '" + s + "' uses the reserved prefix '!'");
      }
    }
  }

  for (const auto& [key, branches] : v.rules) {
    const std::string row = v.describe(key);
    if (key.state < 0 || key.state >= nq || key.tape < 0 || key.tape >= v.tape_symbol_count() ||
        static_cast<int>(key.comm.size()) != v.k()) {
      report.add("malformed row key " + row);
      continue;
    }
    for (int i = 0; i < v.k(); ++i) {
      if (!v.comm[i].is_live(key.comm[i])) report.add("row " + row + " reads a non-live symbol");
    }
    if (v.is_halting(key.state)) report.add("row " + row + " is defined on a halting state");
    if (branches.empty()) report.add("row " + row + " has no outcomes");
    if (guard_output(v, key)) report.add("row " + row + " lies inside a guard rule's domain");
    for (const auto& b : branches) {
      if (b.state < 0 || b.state >= nq || static_cast<int>(b.comm.size()) != v.k()) {
        report.add("row " + row + " has a malformed outcome");
        continue;
      }
      if (b.move < -1 || b.move > 1) report.add("row " + row + " has head move outside {-1,0,+1}");
      if (is_one_way(v.mode) && b.move != 1) report.add("row " + row + " moves the head left or stays (one-way mode)");
      for (int i = 0; i < v.k(); ++i) {
        if (b.comm[i] < 0 || b.comm[i] >= static_cast<int>(v.comm[i].size())) {
          report.add("row " + row + " writes an unknown symbol");
        } else if (!v.is_halting(b.state) && !v.comm[i].is_live(b.comm[i])) {
          report.add("row " + row + " writes halting-only symbol '" + v.comm[i].symbol(b.comm[i]) +
                     "' into a non-halting configuration");
        }
      }
    }
  }

  for (const auto& guard : v.guards) {
    std::visit(
        [&](const auto& g) {
          if (!v.is_rejecting(g.reject_state)) report.add("guard rule targets a non-rejecting state");
        },
        guard);
    if (const auto* g = std::get_if<ForeignReplyGuard>(&guard); g && (g->cell < 0 || g->cell >= v.k())) {
      report.add("foreign-reply guard names a missing cell");
    }
    if (std::holds_alternative<IllegalTrackGuard>(guard) && v.k() != 2) {
      report.add("illegal-track guard requires exactly two provers");
    }
  }
}

void check_classical_rows(const VerifierSpec& v, double tol, Report& report) {
  for (const auto& [key, branches] : v.rules) {
    double sum = 0.0;
    for (const auto& b : branches) {
      if (b.weight.imag() != 0.0 || b.weight.real() < 0.0) {
        report.add("row " + v.describe(key) + " has a weight that is not a probability");
      }
      sum += b.weight.real();
    }
    if (std::abs(sum - 1.0) > tol) {
      report.add("row " + v.describe(key) + " sums to " + fmt_amp(sum) + " instead of 1");
    }
  }
}

std::size_t guard_domain_size(const VerifierSpec& v) {
  std::size_t size = static_cast<std::size_t>(v.states.size()) * static_cast<std::size_t>(v.tape_symbol_count());
  for (const auto& a : v.comm) {
    size *= a.live_size();
    if (size > (std::size_t{1} << 40)) break;
  }
  return size;
}

void enumerate_guard_columns(const VerifierSpec& v, std::vector<Column>& columns,
                             std::map<std::string, int>& interned) {
  const int k = v.k();
  for (int q = 0; q < static_cast<int>(v.states.size()); ++q) {
    if (v.is_halting(q)) continue;
    for (int t = 0; t < v.tape_symbol_count(); ++t) {
      RowKey key{q, t, std::vector<int>(static_cast<std::size_t>(k), 0)};
      while (true) {
        if (!v.rules.contains(key)) {
          if (auto out = guard_output(v, key)) {
            Column col{key, {}};
            OutKey ok{out->state, out->move};
            for (int i = 0; i < k; ++i) {
              int id = v.comm[i].index(out->comm[i]);
              if (id < 0) id = -1 - interned.try_emplace(out->comm[i], static_cast<int>(interned.size())).first->second;
              ok.push_back(id);
            }
            col.terms[ok] += 1.0;
            columns.push_back(std::move(col));
          }
        }
        int i = k - 1;
        while (i >= 0 && ++key.comm[i] == static_cast<int>(v.comm[i].live_size())) key.comm[i--] = 0;
        if (i < 0) break;
      }
    }
  }
}

void check_columns(const VerifierSpec& v, const std::vector<Column>& columns, double tol, Report& report) {
  std::map<OutKey, std::vector<std::pair<std::size_t, Amplitude>>> by_output;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    double norm = 0.0;
    for (const auto& [out, amp] : columns[c].terms) {
      norm += std::norm(amp);
      by_output[out].emplace_back(c, amp);
    }
    if (std::abs(norm - 1.0) > tol) {
      report.add("row " + v.describe(columns[c].key) + " has squared norm " + fmt_amp(norm));
    }
  }
  std::map<std::pair<std::size_t, std::size_t>, Amplitude> gram;
  for (const auto& [out, terms] : by_output) {
    for (std::size_t i = 0; i < terms.size(); ++i) {
      for (std::size_t j = i + 1; j < terms.size(); ++j) {
        gram[{terms[i].first, terms[j].first}] += std::conj(terms[i].second) * terms[j].second;
      }
    }
  }
  for (const auto& [pair, ip] : gram) {
    if (std::abs(ip) > tol) {
      report.add("rows " + v.describe(columns[pair.first].key) + " and " + v.describe(columns[pair.second].key) +
                 " are not orthogonal: inner product " + fmt_amp(ip));
    }
  }
}

}  // namespace

Report check_well_formed(const VerifierSpec& v, const WellFormedOptions& options) {
  Report report;
  check_structure(v, report);
  if (!report.ok()) return report;

  if (!is_quantum(v.mode)) {
    check_classical_rows(v, options.tolerance, report);
    return report;
  }

  const bool enumerate = !v.guards.empty() && guard_domain_size(v) <= options.enumerate_guard_limit;
  if (!v.guards.empty() && !enumerate) report.structural_guard_checks += v.guards.size();

  std::vector<std::vector<Column>> per_tape(static_cast<std::size_t>(v.tape_symbol_count()));
  for (const auto& [key, branches] : v.rules) {
    Column col{key, {}};
    for (const auto& b : branches) {
      OutKey out{b.state, b.move};
      out.insert(out.end(), b.comm.begin(), b.comm.end());
      col.terms[out] += b.weight;
    }
    per_tape[static_cast<std::size_t>(key.tape)].push_back(std::move(col));
  }
  if (enumerate) {
    std::map<std::string, int> interned;
    std::vector<Column> guard_cols;
    enumerate_guard_columns(v, guard_cols, interned);
    for (auto& c : guard_cols) per_tape[static_cast<std::size_t>(c.key.tape)].push_back(std::move(c));
  }
  for (const auto& cols : per_tape) check_columns(v, cols, options.tolerance, report);
  return report;
}

std::vector<RowKey> restrictive_violations(const VerifierSpec& v) {
  std::vector<RowKey> bad;
  for (const auto& [key, branches] : v.rules) {
    double mass = 0.0;
    for (const auto& b : branches) mass += std::norm(b.weight);
    if (branches.empty() || branches.size() > 2 || std::abs(mass - 1.0) > 1e-9) bad.push_back(key);
  }
  return bad;
}

bool check_restrictive(const VerifierSpec& v) { return restrictive_violations(v).empty(); }

std::vector<RowKey> fair_coin_violations(const VerifierSpec& v) {
  std::vector<RowKey> bad;
  for (const auto& [key, branches] : v.rules) {
    bool ok = false;
    if (branches.size() == 1) {
      ok = std::abs(branches[0].weight - Amplitude{1.0}) < 1e-12;
    } else if (branches.size() == 2) {
      const auto& a = branches[0];
      const auto& b = branches[1];
      const bool distinct = a.state != b.state || a.move != b.move || a.comm != b.comm;
      ok = distinct && std::abs(a.weight - Amplitude{0.5}) < 1e-12 && std::abs(b.weight - Amplitude{0.5}) < 1e-12;
    }
    if (!ok) bad.push_back(key);
  }
  return bad;
}

Report check_protocol(const ProtocolSpec& p, const WellFormedOptions& options) {
  Report report;
  report.merge(check_well_formed(p.verifier, options), "verifier: ");
  if (p.cutoff < 1) report.add("cutoff must be at least 1");
  if (!(p.a > 0.0 && p.a <= 1.0) || !(p.b > 0.0 && p.b <= 1.0)) report.add("thresholds a, b must lie in (0,1]");
  if (static_cast<int>(p.provers.size()) != p.verifier.k()) {
    report.add("protocol declares " + std::to_string(p.provers.size()) + " provers but the verifier talks to " +
               std::to_string(p.verifier.k()));
    return report;
  }
  for (std::size_t i = 0; i < p.provers.size(); ++i) {
    const std::string prefix = "prover " + std::to_string(i + 1) + ": ";
    if (p.provers[i].comm.live_symbols() != p.verifier.comm[i].live_symbols()) {
      report.add(prefix + "communication alphabet differs from the verifier's");
    }
    report.merge(check_prover(p.provers[i], options.tolerance), prefix);
  }
  if (p.claims_restrictive) {
    if (!is_quantum(p.verifier.mode)) report.add("restrictive claim on a classical verifier");
    for (const auto& key : restrictive_violations(p.verifier)) {
      report.add("row " + p.verifier.describe(key) + " is not of restrictive two-branch form");
    }
  }
  return report;
}

int sufficient_space_bound(const ProtocolSpec& p) {
  std::size_t gamma_hat = 1;
  for (const auto& a : p.verifier.comm) gamma_hat = std::max(gamma_hat, a.live_size());
  int bits = 0;
  while ((std::size_t{1} << bits) < gamma_hat) ++bits;
  return 2 * p.cutoff * bits;
}

}  // namespace qmip
