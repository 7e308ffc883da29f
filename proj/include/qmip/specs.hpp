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

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "qmip/amplitudes.hpp"

namespace qmip {

inline constexpr std::string_view kBlank = "#";
inline constexpr std::string_view kLeftEndmarker = "^";
inline constexpr std::string_view kRightEndmarker = "$";
// Symbols beginning with this character are reserved for rejection records
// emitted by guard rules and never appear in a declared alphabet.
inline constexpr char kReservedPrefix = '!';

// Ordered symbol set. Live symbols come first and may sit in a communication
// cell of a non-halting configuration; halting-only symbols are written only
// on transitions into halting states and are never read back.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> live, std::vector<std::string> halting = {});

  int index(std::string_view symbol) const;  // -1 when absent
  bool contains(std::string_view symbol) const { return index(symbol) >= 0; }
  bool is_live(int i) const { return i >= 0 && static_cast<std::size_t>(i) < live_; }
  const std::string& symbol(int i) const { return symbols_.at(static_cast<std::size_t>(i)); }

  std::size_t size() const { return symbols_.size(); }
  std::size_t live_size() const { return live_; }
  std::vector<std::string> live_symbols() const;
  std::vector<std::string> halting_symbols() const;
  const std::vector<std::string>& all_symbols() const { return symbols_; }

  // Appends a halting-only symbol if not already present; returns its index.
  int add_halting(const std::string& symbol);

  bool operator==(const Alphabet& other) const {
    return symbols_ == other.symbols_ && live_ == other.live_;
  }

 private:
  std::vector<std::string> symbols_;
  std::size_t live_ = 0;
  std::unordered_map<std::string, int> index_;
};

// Track symbols: "[upper/lower]"; the all-blank track is the blank itself.
std::string track_token(std::string_view upper, std::string_view lower);
std::optional<std::pair<std::string, std::string>> split_track(std::string_view token);
Alphabet make_track_alphabet(const Alphabet& upper, const Alphabet& lower);
// Cell-wise pairing of two strings, padding the shorter with blanks.
std::vector<std::string> pair_strings(const std::vector<std::string>& upper, const std::vector<std::string>& lower);

struct BinaryEncoding {
  int width = 0;
  std::map<std::string, std::string> codes;
};
BinaryEncoding fixed_width_binary_encoding(const Alphabet& alphabet);

enum class Mode { k1qfa, k2qfa, k1pfa, k2pfa };

const char* mode_name(Mode mode);
std::optional<Mode> parse_mode(std::string_view name);
inline bool is_quantum(Mode m) { return m == Mode::k1qfa || m == Mode::k2qfa; }
inline bool is_one_way(Mode m) { return m == Mode::k1qfa || m == Mode::k1pfa; }

struct RowKey {
  int state = 0;
  int tape = 0;  // index into the verifier's tape symbols
  std::vector<int> comm;
  auto operator<=>(const RowKey&) const = default;
};

struct Branch {
  int state = 0;
  int move = 0;  // -1, 0, +1
  std::vector<int> comm;
  Amplitude weight;
  bool operator==(const Branch&) const = default;
};

using TransitionTable = std::map<RowKey, std::vector<Branch>>;

// Rejects any configuration whose `cell` holds a non-blank reply. The record
// "![q,sigma,others/xi]" is written into that cell; the other cells get #.
struct ForeignReplyGuard {
  int cell = 0;
  int reject_state = 0;
  bool operator==(const ForeignReplyGuard&) const = default;
};

// Two-cell track communication: any reply "[u/s]" with s != # is rejected,
// writing "!<q,u1/s1>" and "!<sigma,u2/s2>".
struct IllegalTrackGuard {
  int reject_state = 0;
  bool operator==(const IllegalTrackGuard&) const = default;
};

using Guard = std::variant<ForeignReplyGuard, IllegalTrackGuard>;

struct GuardOutput {
  int state = 0;
  int move = 0;
  std::vector<std::string> comm;
};

struct VerifierSpec {
  Mode mode = Mode::k2qfa;
  std::vector<std::string> states;
  int initial = 0;
  std::set<int> accept;
  std::set<int> reject;
  Alphabet input;            // excludes the endmarkers
  std::vector<Alphabet> comm;
  TransitionTable rules;
  std::vector<Guard> guards;

  int k() const { return static_cast<int>(comm.size()); }
  int state_index(std::string_view name) const;
  bool is_accepting(int q) const { return accept.contains(q); }
  bool is_rejecting(int q) const { return reject.contains(q); }
  bool is_halting(int q) const { return is_accepting(q) || is_rejecting(q); }

  // Tape symbol indices: 0 = left endmarker, 1 = right endmarker, 2.. = input.
  int tape_symbol_count() const { return static_cast<int>(input.size()) + 2; }
  std::string tape_symbol(int t) const;
  int tape_symbol_index(std::string_view name) const;

  std::string describe(const RowKey& key) const;
};

// Guard output for `key`, or nullopt when no guard covers it. Guards never
// fire on halting states.
std::optional<GuardOutput> guard_output(const VerifierSpec& v, const RowKey& key);

struct ProverSpec;

struct Violation {
  std::string message;
};

struct Report {
  std::vector<Violation> violations;
  std::size_t structural_guard_checks = 0;
  bool ok() const { return violations.empty(); }
  void add(std::string message) { violations.push_back({std::move(message)}); }
  void merge(const Report& other, std::string_view prefix = {});
  std::string to_string() const;
};

struct WellFormedOptions {
  // Guard families whose domain is at most this many argument tuples are
  // enumerated into the inner-product check; larger ones are checked
  // structurally.
  std::size_t enumerate_guard_limit = 200000;
  double tolerance = 1e-9;
};

Report check_well_formed(const VerifierSpec& v, const WellFormedOptions& options = {});
bool check_restrictive(const VerifierSpec& v);
std::vector<RowKey> restrictive_violations(const VerifierSpec& v);
// Fair-coin normal form: every row has one outcome of weight 1 or two
// distinct outcomes of weight 1/2.
std::vector<RowKey> fair_coin_violations(const VerifierSpec& v);

}  // namespace qmip
