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

// Shared fixtures for the test binaries, including an independent reference
// simulator used as the oracle for engine results.

#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "qmip/engine.hpp"
#include "qmip/spec_file.hpp"
#include "qmip/transforms.hpp"

namespace qmip::testing {

inline std::string corpus_path(const std::string& name) { return std::string(QMIP_CORPUS_DIR) + "/" + name + ".qmip"; }

inline ProtocolSpec corpus_protocol(const std::string& name) { return load_protocol(corpus_path(name)); }

inline const std::vector<std::string>& corpus_names() {
  static const std::vector<std::string> names{"accept",  "accept2ip", "coin2ip",  "coinflip",
                                              "nocomm",  "onepfa",    "reject",   "replycheck"};
  return names;
}

// Classical two-prover corpus entries, the inputs of the lift.
inline const std::vector<std::string>& classical_names() {
  static const std::vector<std::string> names{"accept2ip", "coin2ip", "nocomm", "onepfa", "replycheck"};
  return names;
}

// Every binary string of length at most n.
inline std::vector<std::string> inputs_up_to(int n) {
  std::vector<std::string> out{""};
  for (int len = 1; len <= n; ++len) {
    for (int bits = 0; bits < (1 << len); ++bits) {
      std::string s;
      for (int i = len - 1; i >= 0; --i) s += ((bits >> i) & 1) ? '1' : '0';
      out.push_back(s);
    }
  }
  return out;
}

struct OracleRound {
  double cum_acc = 0.0;
  double cum_rej = 0.0;
  double residual = 0.0;
};

// Reference simulation. Configurations carry symbol names rather than
// indices, all provers act jointly as one tensor-product step, and the mass
// at each round is recomputed from scratch.
inline std::vector<OracleRound> oracle_run(const ProtocolSpec& p, const std::string& x, bool quantum,
                                           int cutoff = 0) {
  const VerifierSpec& v = p.verifier;
  const int k = v.k();
  const int cells = static_cast<int>(x.size()) + 2;
  using Config = std::tuple<std::string, int, std::vector<std::string>, std::vector<std::vector<int>>>;
  std::map<Config, std::complex<double>> state;
  std::vector<std::vector<int>> blank;
  for (const auto& prover : p.provers) blank.emplace_back(static_cast<std::size_t>(prover.space), 0);
  state[{v.states[static_cast<std::size_t>(v.initial)], 0, std::vector<std::string>(static_cast<std::size_t>(k), "#"),
         blank}] = 1.0;

  auto mass = [&](std::complex<double> a) { return quantum ? std::norm(a) : a.real(); };
  std::vector<OracleRound> rounds;
  double acc = 0.0, rej = 0.0;
  const int T = cutoff > 0 ? cutoff : p.cutoff;
  for (int j = 1; j <= T && !state.empty(); ++j) {
    if (j > 1) {
      std::map<Config, std::complex<double>> next;
      for (const auto& [c, amp] : state) {
        const auto& [q, head, comm, tapes] = c;
        std::vector<std::vector<LocalBranch>> moves;
        for (int i = 0; i < k; ++i) {
          const ProverSpec& prover = p.provers[static_cast<std::size_t>(i)];
          LocalState local{prover.comm.index(comm[static_cast<std::size_t>(i)]), tapes[static_cast<std::size_t>(i)]};
          moves.push_back(prover_act(prover, j - 1, local));
        }
        std::vector<std::size_t> pick(static_cast<std::size_t>(k), 0);
        while (true) {
          std::vector<std::string> comm2(static_cast<std::size_t>(k));
          std::vector<std::vector<int>> tapes2(static_cast<std::size_t>(k));
          std::complex<double> w = amp;
          for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
            const LocalBranch& b = moves[i][pick[i]];
            comm2[i] = p.provers[i].comm.symbol(b.state.comm);
            tapes2[i] = b.state.tape;
            w *= b.weight;
          }
          next[{q, head, comm2, tapes2}] += w;
          std::size_t i = static_cast<std::size_t>(k);
          while (i > 0 && ++pick[i - 1] == moves[i - 1].size()) pick[--i] = 0;
          if (i == 0) break;
        }
      }
      state = std::move(next);
    }
    std::map<Config, std::complex<double>> after;
    for (const auto& [c, amp] : state) {
      if (std::abs(amp) < 1e-15) continue;
      const auto& [q, head, comm, tapes] = c;
      const std::string sigma =
          head == 0 ? std::string("^") : head == cells - 1 ? std::string("$") : std::string(1, x[static_cast<std::size_t>(head - 1)]);
      RowKey key{v.state_index(q), v.tape_symbol_index(sigma), {}};
      for (int i = 0; i < k; ++i) key.comm.push_back(v.comm[static_cast<std::size_t>(i)].index(comm[static_cast<std::size_t>(i)]));
      auto it = v.rules.find(key);
      if (it != v.rules.end()) {
        for (const auto& b : it->second) {
          std::vector<std::string> out;
          for (int i = 0; i < k; ++i) out.push_back(v.comm[static_cast<std::size_t>(i)].symbol(b.comm[static_cast<std::size_t>(i)]));
          after[{v.states[static_cast<std::size_t>(b.state)], ((head + b.move) % cells + cells) % cells, out, tapes}] +=
              amp * b.weight;
        }
      } else if (auto g = guard_output(v, key)) {
        after[{v.states[static_cast<std::size_t>(g->state)], ((head + g->move) % cells + cells) % cells, g->comm, tapes}] += amp;
      } else {
        throw Error(ErrorCode::kMissingTransition, "oracle: no rule for " + v.describe(key));
      }
    }
    state.clear();
    for (const auto& [c, amp] : after) {
      const int q = v.state_index(std::get<0>(c));
      if (v.is_accepting(q)) {
        acc += mass(amp);
      } else if (v.is_rejecting(q)) {
        rej += mass(amp);
      } else if (std::abs(amp) >= 1e-15) {
        state[c] = amp;
      }
    }
    double residual = 0.0;
    for (const auto& [c, amp] : state) residual += mass(amp);
    rounds.push_back({acc, rej, residual});
  }
  return rounds;
}

// Largest per-round deviation between an engine result and the oracle.
inline double oracle_deviation(const RunResult& r, const std::vector<OracleRound>& o) {
  double dev = r.rounds.size() == o.size() ? 0.0 : 1.0;
  for (std::size_t i = 0; i < std::min(r.rounds.size(), o.size()); ++i) {
    dev = std::max({dev, std::abs(r.rounds[i].cum_acc - o[i].cum_acc), std::abs(r.rounds[i].cum_rej - o[i].cum_rej),
                    std::abs(r.rounds[i].residual - o[i].residual)});
  }
  return dev;
}

// Every protocol the transforms produce from the corpus.
struct Transformed {
  std::string name;
  LiftOutput lift;
  ReduceOutput reduce;
};

inline std::vector<Transformed> transform_corpus() {
  std::vector<Transformed> out;
  for (const auto& name : classical_names()) {
    LiftOutput l = lift_2ip_to_3qip(corpus_protocol(name));
    ReduceOutput r = reduce_3qip_to_2qip(l.protocol);
    out.push_back({name, std::move(l), std::move(r)});
  }
  return out;
}

}  // namespace qmip::testing
