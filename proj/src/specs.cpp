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

#include "qmip/specs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qmip {

Alphabet::Alphabet(std::vector<std::string> live, std::vector<std::string> halting) {
  for (auto& s : live) {
    if (index_.try_emplace(s, static_cast<int>(symbols_.size())).second) symbols_.push_back(std::move(s));
  }
  live_ = symbols_.size();
  for (auto& s : halting) add_halting(s);
}

int Alphabet::index(std::string_view symbol) const {
  auto it = index_.find(std::string(symbol));
  return it == index_.end() ? -1 : it->second;
}

std::vector<std::string> Alphabet::live_symbols() const {
  return {symbols_.begin(), symbols_.begin() + static_cast<std::ptrdiff_t>(live_)};
}

std::vector<std::string> Alphabet::halting_symbols() const {
  return {symbols_.begin() + static_cast<std::ptrdiff_t>(live_), symbols_.end()};
}

int Alphabet::add_halting(const std::string& symbol) {
  auto [it, inserted] = index_.try_emplace(symbol, static_cast<int>(symbols_.size()));
  if (inserted) symbols_.push_back(symbol);
  return it->second;
}

std::string track_token(std::string_view upper, std::string_view lower) {
  if (upper == kBlank && lower == kBlank) return std::string(kBlank);
  std::string out;
  out.reserve(upper.size() + lower.size() + 3);
  out += '[';
  out += upper;
  out += '/';
  out += lower;
  out += ']';
  return out;
}

std::optional<std::pair<std::string, std::string>> split_track(std::string_view token) {
  if (token == kBlank) return std::pair{std::string(kBlank), std::string(kBlank)};
  if (token.size() < 3 || token.front() != '[' || token.back() != ']') return std::nullopt;
  int depth = 0;
  for (std::size_t i = 0; i + 1 < token.size(); ++i) {
    char c = token[i];
    if (c == '[') {
      ++depth;
    } else if (c == ']') {
      --depth;
    } else if (c == '/' && depth == 1) {
      return std::pair{std::string(token.substr(1, i - 1)), std::string(token.substr(i + 1, token.size() - i - 2))};
    }
  }
  return std::nullopt;
}

Alphabet make_track_alphabet(const Alphabet& upper, const Alphabet& lower) {
  std::vector<std::string> symbols;
  symbols.reserve(upper.live_size() * lower.live_size());
  for (const auto& u : upper.live_symbols()) {
    for (const auto& l : lower.live_symbols()) symbols.push_back(track_token(u, l));
  }
  return Alphabet(std::move(symbols));
}

std::vector<std::string> pair_strings(const std::vector<std::string>& upper, const std::vector<std::string>& lower) {
  const std::size_t n = std::max(upper.size(), lower.size());
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string_view u = i < upper.size() ? std::string_view(upper[i]) : kBlank;
    std::string_view l = i < lower.size() ? std::string_view(lower[i]) : kBlank;
    out.push_back(track_token(u, l));
  }
  return out;
}

BinaryEncoding fixed_width_binary_encoding(const Alphabet& alphabet) {
  std::vector<std::string> order = alphabet.live_symbols();
  auto blank = std::find(order.begin(), order.end(), kBlank);
  if (blank != order.end()) std::rotate(order.begin(), blank, blank + 1);

  BinaryEncoding enc;
  const std::size_t n = std::max<std::size_t>(order.size(), 2);
  while ((std::size_t{1} << enc.width) < n) ++enc.width;
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::string code(static_cast<std::size_t>(enc.width), '0');
    for (int bit = 0; bit < enc.width; ++bit) {
      if ((i >> bit) & 1U) code[static_cast<std::size_t>(enc.width - 1 - bit)] = '1';
    }
    enc.codes.emplace(order[i], std::move(code));
  }
  return enc;
}

const char* mode_name(Mode mode) {
  switch (mode) {
    case Mode::k1qfa: return "1qfa";
    case Mode::k2qfa: return "2qfa";
    case Mode::k1pfa: return "1pfa";
    case Mode::k2pfa: return "2pfa";
  }
  return "?";
}

std::optional<Mode> parse_mode(std::string_view name) {
  if (name == "1qfa") return Mode::k1qfa;
  if (name == "2qfa") return Mode::k2qfa;
  if (name == "1pfa") return Mode::k1pfa;
  if (name == "2pfa") return Mode::k2pfa;
  return std::nullopt;
}

int VerifierSpec::state_index(std::string_view name) const {
  auto it = std::find(states.begin(), states.end(), name);
  return it == states.end() ? -1 : static_cast<int>(it - states.begin());
}

std::string VerifierSpec::tape_symbol(int t) const {
  if (t == 0) return std::string(kLeftEndmarker);
  if (t == 1) return std::string(kRightEndmarker);
  return input.symbol(t - 2);
}

int VerifierSpec::tape_symbol_index(std::string_view name) const {
  if (name == kLeftEndmarker) return 0;
  if (name == kRightEndmarker) return 1;
  int i = input.index(name);
  return i < 0 ? -1 : i + 2;
}

std::string VerifierSpec::describe(const RowKey& key) const {
  std::ostringstream os;
  os << (key.state >= 0 && key.state < static_cast<int>(states.size()) ? states[key.state] : "?") << ' '
     << tape_symbol(key.tape);
  for (std::size_t i = 0; i < key.comm.size(); ++i) os << ' ' << comm[i].symbol(key.comm[i]);
  return os.str();
}

std::optional<GuardOutput> guard_output(const VerifierSpec& v, const RowKey& key) {
  if (v.is_halting(key.state)) return std::nullopt;
  for (const auto& guard : v.guards) {
    if (const auto* g = std::get_if<ForeignReplyGuard>(&guard)) {
      if (key.comm[g->cell] == 0) continue;
      std::string record = "![" + v.states[key.state] + "," + v.tape_symbol(key.tape);
      for (int i = 0; i < v.k(); ++i) {
        if (i != g->cell) record += "," + v.comm[i].symbol(key.comm[i]);
      }
      record += "/" + v.comm[g->cell].symbol(key.comm[g->cell]) + "]";
      GuardOutput out{g->reject_state, +1, std::vector<std::string>(v.k(), std::string(kBlank))};
      out.comm[g->cell] = std::move(record);
      return out;
    }
    if (const auto* g = std::get_if<IllegalTrackGuard>(&guard)) {
      if (v.k() != 2) continue;
      auto t1 = split_track(v.comm[0].symbol(key.comm[0]));
      auto t2 = split_track(v.comm[1].symbol(key.comm[1]));
      if (!t1 || !t2) continue;
      if (t1->second == kBlank && t2->second == kBlank) continue;
      GuardOutput out{g->reject_state, +1, {}};
      out.comm.push_back("!<" + v.states[key.state] + "," + t1->first + "/" + t1->second + ">");
      out.comm.push_back("!<" + v.tape_symbol(key.tape) + "," + t2->first + "/" + t2->second + ">");
      return out;
    }
  }
  return std::nullopt;
}

void Report::merge(const Report& other, std::string_view prefix) {
  for (const auto& v : other.violations) violations.push_back({std::string(prefix) + v.message});
  structural_guard_checks += other.structural_guard_checks;
}

std::string Report::to_string() const {
  if (ok()) return "ok\n";
  std::ostringstream os;
  for (const auto& v : violations) os << "violation: " << v.message << '\n';
  return os.str();
}

}  // namespace qmip
