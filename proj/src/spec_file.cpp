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

#include "qmip/spec_file.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qmip {

namespace {

struct Line {
  int number = 0;
  std::string text;
};

struct Section {
  std::string name;
  int line = 0;
  std::vector<std::pair<std::string, Line>> keys;
  std::vector<Line> rows;
};

[[noreturn]] void fail(int line, const std::string& msg) {
  throw Error(ErrorCode::kParse, (line > 0 ? "line " + std::to_string(line) + ": " : std::string()) + msg);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream is{std::string(s)};
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::vector<Section> read_sections(std::string_view text) {
  std::vector<Section> sections;
  std::istringstream is{std::string(text)};
  std::string raw;
  int number = 0;
  while (std::getline(is, raw)) {
    ++number;
    std::string line = trim(raw);
    if (line.empty() || line.front() == ';') continue;
    if (line.front() == '[' && line.back() == ']' && line.find("->") == std::string::npos) {
      sections.push_back({trim(std::string_view(line).substr(1, line.size() - 2)), number, {}, {}});
      continue;
    }
    if (sections.empty()) fail(number, "content before the first section header");
    if (line.find("->") != std::string::npos) {
      sections.back().rows.push_back({number, line});
    } else if (auto eq = line.find('='); eq != std::string::npos) {
      sections.back().keys.emplace_back(trim(std::string_view(line).substr(0, eq)),
                                        Line{number, trim(std::string_view(line).substr(eq + 1))});
    } else {
      fail(number, "expected 'key = value' or a transition row");
    }
  }
  return sections;
}

int parse_int(const std::string& s, int line) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) fail(line, "expected an integer, got '" + s + "'");
  return v;
}

double parse_double(const std::string& s, int line) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) fail(line, "expected a number, got '" + s + "'");
  return v;
}

class KeyReader {
 public:
  KeyReader(const Section& s, std::vector<std::string> allowed) : section_(s) {
    for (const auto& [key, line] : s.keys) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        fail(line.number, "unknown key '" + key + "' in [" + s.name + "]");
      }
    }
  }

  const Line* get(std::string_view key) const {
    const Line* found = nullptr;
    for (const auto& [k, line] : section_.keys) {
      if (k == key) {
        if (found) fail(line.number, "duplicate key '" + std::string(key) + "'");
        found = &line;
      }
    }
    return found;
  }

  const Line& require(std::string_view key) const {
    const Line* l = get(key);
    if (!l) fail(section_.line, "[" + section_.name + "] is missing key '" + std::string(key) + "'");
    return *l;
  }

  std::vector<const Line*> all(std::string_view key) const {
    std::vector<const Line*> out;
    for (const auto& [k, line] : section_.keys) {
      if (k == key) out.push_back(&line);
    }
    return out;
  }

 private:
  const Section& section_;
};

int symbol_index(const Alphabet& a, const std::string& s, int line, std::string_view what) {
  int i = a.index(s);
  if (i < 0) fail(line, "unknown " + std::string(what) + " symbol '" + s + "'");
  return i;
}

std::vector<int> parse_tape(const Alphabet& a, const std::string& token, int line) {
  std::vector<int> out;
  if (token == "-") return out;
  std::size_t start = 0;
  while (true) {
    auto bar = token.find('|', start);
    out.push_back(symbol_index(a, token.substr(start, bar - start), line, "tape"));
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  return trim_tape(std::move(out));
}

std::string format_tape(const Alphabet& a, const std::vector<int>& tape) {
  auto t = trim_tape(tape);
  if (t.empty()) return "-";
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) out += (i ? "|" : "") + a.symbol(t[i]);
  return out;
}

ProverSpec parse_prover(const std::map<std::string, const Section*>& by_name, const std::string& name,
                        const Alphabet* default_comm) {
  auto it = by_name.find(name);
  if (it == by_name.end()) fail(0, "missing section [" + name + "]");
  const Section& s = *it->second;
  KeyReader keys(s, {"strategy", "tape", "space", "comm", "inner-tape", "mask"});
  ProverSpec p;
  if (const Line* c = keys.get("comm")) {
    p.comm = Alphabet(split_ws(c->text));
  } else if (default_comm) {
    p.comm = Alphabet(default_comm->live_symbols());
  } else {
    fail(s.line, "[" + name + "] needs a 'comm' alphabet");
  }
  p.tape = Alphabet(keys.get("tape") ? split_ws(keys.get("tape")->text) : std::vector<std::string>{"#"});
  p.space = keys.get("space") ? parse_int(keys.get("space")->text, keys.get("space")->number) : 0;
  const Line& strat = keys.require("strategy");

  auto read_table = [&](const Alphabet& tape_alpha) {
    TableStrategy t;
    for (const auto& row : s.rows) {
      auto toks = split_ws(row.text);
      if (toks.size() != 6 || toks[3] != "->") fail(row.number, "table rows read 'step received tape -> reply tape'");
      TableKey key{toks[0] == "*" ? kAnyStep : parse_int(toks[0], row.number),
                   toks[1] == "*" ? kAnySymbol : symbol_index(p.comm, toks[1], row.number, "communication"),
                   parse_tape(tape_alpha, toks[2], row.number)};
      TableEntry e{symbol_index(p.comm, toks[4], row.number, "communication"), parse_tape(tape_alpha, toks[5], row.number)};
      if (!t.entries.emplace(key, e).second) fail(row.number, "duplicate table entry");
    }
    return t;
  };

  if (strat.text == "table") {
    p.strategy = read_table(p.tape);
  } else if (strat.text == "reversible") {
    ReversibleStrategy r;
    r.inner_tape = Alphabet(keys.get("inner-tape") ? split_ws(keys.get("inner-tape")->text) : std::vector<std::string>{"#"});
    r.inner = read_table(r.inner_tape);
    p.strategy = std::move(r);
  } else if (strat.text == "eraser") {
    if (!s.rows.empty()) fail(s.rows.front().number, "eraser provers take no rows");
    p.strategy = EraserStrategy{};
  } else if (strat.text == "unitary") {
    UnitaryStrategy u;
    for (const auto& row : s.rows) {
      auto toks = split_ws(row.text);
      if (toks.size() != 7 || toks[3] != "->") {
        fail(row.number, "unitary rows read 'step received tape -> weight reply tape'");
      }
      TableKey key{toks[0] == "*" ? kAnyStep : parse_int(toks[0], row.number),
                   toks[1] == "*" ? kAnySymbol : symbol_index(p.comm, toks[1], row.number, "communication"),
                   parse_tape(p.tape, toks[2], row.number)};
      Amplitude w;
      try {
        w = parse_weight(toks[4]);
      } catch (const Error&) {
        fail(row.number, "bad weight '" + toks[4] + "'");
      }
      u.entries[key].push_back(
          {TableEntry{symbol_index(p.comm, toks[5], row.number, "communication"), parse_tape(p.tape, toks[6], row.number)},
           w});
    }
    p.strategy = std::move(u);
  } else if (strat.text == "stash") {
    if (!s.rows.empty()) fail(s.rows.front().number, "stash provers take no rows");
    StashStrategy st;
    st.mask = Alphabet(split_ws(keys.require("mask").text));
    st.inner = std::make_shared<const ProverSpec>(parse_prover(by_name, name + " inner", nullptr));
    p.strategy = std::move(st);
  } else {
    fail(strat.number, "unknown strategy '" + strat.text + "'");
  }
  return p;
}

void serialize_prover(std::ostringstream& os, const ProverSpec& p, const std::string& name, bool write_comm) {
  os << "\n[" << name << "]\n";
  if (write_comm) {
    os << "comm =";
    for (const auto& s : p.comm.live_symbols()) os << ' ' << s;
    os << '\n';
  }
  os << "strategy = " << strategy_name(p.strategy) << '\n';
  os << "tape =";
  for (const auto& s : p.tape.live_symbols()) os << ' ' << s;
  os << "\nspace = " << p.space << '\n';

  auto write_table = [&](const TableStrategy& t, const Alphabet& tape) {
    for (const auto& [key, e] : t.entries) {
      os << (key.step == kAnyStep ? std::string("*") : std::to_string(key.step)) << ' '
         << (key.received == kAnySymbol ? std::string("*") : p.comm.symbol(key.received)) << ' '
         << format_tape(tape, key.tape) << " -> " << p.comm.symbol(e.reply) << ' ' << format_tape(tape, e.tape) << '\n';
    }
  };

  if (const auto* t = std::get_if<TableStrategy>(&p.strategy)) {
    write_table(*t, p.tape);
  } else if (const auto* r = std::get_if<ReversibleStrategy>(&p.strategy)) {
    os << "inner-tape =";
    for (const auto& s : r->inner_tape.live_symbols()) os << ' ' << s;
    os << '\n';
    write_table(r->inner, r->inner_tape);
  } else if (const auto* u = std::get_if<UnitaryStrategy>(&p.strategy)) {
    for (const auto& [key, outs] : u->entries) {
      for (const auto& [e, w] : outs) {
        os << (key.step == kAnyStep ? std::string("*") : std::to_string(key.step)) << ' '
           << (key.received == kAnySymbol ? std::string("*") : p.comm.symbol(key.received)) << ' '
           << format_tape(p.tape, key.tape) << " -> " << format_weight(w) << ' ' << p.comm.symbol(e.reply) << ' '
           << format_tape(p.tape, e.tape) << '\n';
      }
    }
  } else if (const auto* st = std::get_if<StashStrategy>(&p.strategy)) {
    os << "mask =";
    for (const auto& s : st->mask.live_symbols()) os << ' ' << s;
    os << '\n';
    serialize_prover(os, *st->inner, name + " inner", true);
  } else if (std::holds_alternative<OverrideStrategy>(p.strategy)) {
    throw Error(ErrorCode::kInvalidSpec, "override strategies have no file form");
  }
}

}  // namespace

Amplitude parse_weight(std::string_view token) {
  std::string t(token);
  auto bad = [&]() -> Amplitude { throw Error(ErrorCode::kParse, "bad weight '" + t + "'"); };
  if (t.empty()) return bad();
  if (t.front() == '(') {
    auto comma = t.find(',');
    if (t.back() != ')' || comma == std::string::npos) return bad();
    char* e1 = nullptr;
    char* e2 = nullptr;
    std::string re = t.substr(1, comma - 1);
    std::string im = t.substr(comma + 1, t.size() - comma - 2);
    double r = std::strtod(re.c_str(), &e1);
    double i = std::strtod(im.c_str(), &e2);
    if (re.empty() || im.empty() || *e1 || *e2) return bad();
    return {r, i};
  }
  double sign = 1.0;
  std::string body = t;
  if (body.front() == '-') {
    sign = -1.0;
    body.erase(0, 1);
  }
  auto slash = body.find('/');
  auto number = [&](const std::string& s) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end || !std::isfinite(v)) bad();
    return v;
  };
  if (slash == std::string::npos) return sign * number(body);
  const double num = number(body.substr(0, slash));
  std::string den = body.substr(slash + 1);
  if (den.rfind("sqrt", 0) == 0) {
    const double d = number(den.substr(4));
    if (d <= 0) return bad();
    return sign * num / std::sqrt(d);
  }
  const double d = number(den);
  if (d == 0) return bad();
  return sign * num / d;
}

std::string format_weight(Amplitude w) {
  char buf[64];
  if (w.imag() != 0.0) {
    std::snprintf(buf, sizeof buf, "(%.17g,%.17g)", w.real(), w.imag());
    return buf;
  }
  const double r = w.real();
  const std::string sign = r < 0 ? "-" : "";
  const double m = std::abs(r);
  if (m == 0.0) return "0";
  for (int den = 1; den <= 64; ++den) {
    const double num = std::round(m * den);
    if (num >= 1 && num <= 64 * den && std::abs(m - num / den) <= 1e-15 * std::max(1.0, m)) {
      long n = static_cast<long>(num);
      if (m != static_cast<double>(n) / den) continue;
      return den == 1 ? sign + std::to_string(n) : sign + std::to_string(n) + "/" + std::to_string(den);
    }
  }
  for (int num = 1; num <= 8; ++num) {
    const double ratio = num / m;
    const double n = std::round(ratio * ratio);
    if (n >= 2 && n <= 1 << 20 && static_cast<double>(num) / std::sqrt(n) == m) {
      return sign + std::to_string(num) + "/sqrt" + std::to_string(static_cast<long>(n));
    }
  }
  std::snprintf(buf, sizeof buf, "%.17g", r);
  return buf;
}

ProtocolSpec parse_protocol(std::string_view text) {
  auto sections = read_sections(text);
  std::map<std::string, const Section*> by_name;
  for (const auto& s : sections) {
    if (!by_name.emplace(s.name, &s).second) fail(s.line, "duplicate section [" + s.name + "]");
  }
  auto section = [&](const std::string& name) -> const Section& {
    auto it = by_name.find(name);
    if (it == by_name.end()) fail(0, "missing section [" + name + "]");
    return *it->second;
  };

  ProtocolSpec p;
  const Section& proto = section("protocol");
  KeyReader pk(proto, {"name", "mode", "k", "a", "b", "cutoff", "claims"});
  if (!proto.rows.empty()) fail(proto.rows.front().number, "[protocol] takes no rows");
  p.name = pk.get("name") ? pk.get("name")->text : std::string();
  const Line& mode_line = pk.require("mode");
  auto mode = parse_mode(mode_line.text);
  if (!mode) fail(mode_line.number, "unknown mode '" + mode_line.text + "'");
  p.verifier.mode = *mode;
  const int k = parse_int(pk.require("k").text, pk.require("k").number);
  if (k < 1) fail(pk.require("k").number, "k must be at least 1");
  p.cutoff = parse_int(pk.require("cutoff").text, pk.require("cutoff").number);
  p.a = pk.get("a") ? parse_double(pk.get("a")->text, pk.get("a")->number) : 1.0;
  p.b = pk.get("b") ? parse_double(pk.get("b")->text, pk.get("b")->number) : 1.0;
  if (const Line* c = pk.get("claims")) {
    if (c->text != "restrictive") fail(c->number, "unknown claim '" + c->text + "'");
    p.claims_restrictive = true;
  }

  const Section& alph = section("alphabets");
  std::vector<std::string> allowed{"input"};
  for (int i = 1; i <= k; ++i) {
    allowed.push_back("gamma" + std::to_string(i));
    allowed.push_back("halt-gamma" + std::to_string(i));
  }
  KeyReader ak(alph, allowed);
  p.verifier.input = Alphabet(split_ws(ak.require("input").text));
  for (int i = 1; i <= k; ++i) {
    const auto* halt = ak.get("halt-gamma" + std::to_string(i));
    p.verifier.comm.emplace_back(split_ws(ak.require("gamma" + std::to_string(i)).text),
                                 halt ? split_ws(halt->text) : std::vector<std::string>{});
  }

  VerifierSpec& v = p.verifier;
  const Section& ver = section("verifier");
  KeyReader vk(ver, {"states", "initial", "accept", "reject", "guard"});
  v.states = split_ws(vk.require("states").text);
  auto state = [&](const std::string& name, int line) {
    int q = v.state_index(name);
    if (q < 0) fail(line, "unknown state '" + name + "'");
    return q;
  };
  v.initial = state(vk.require("initial").text, vk.require("initial").number);
  if (const Line* a = vk.get("accept")) {
    for (const auto& s : split_ws(a->text)) v.accept.insert(state(s, a->number));
  }
  if (const Line* r = vk.get("reject")) {
    for (const auto& s : split_ws(r->text)) v.reject.insert(state(s, r->number));
  }
  for (const Line* g : vk.all("guard")) {
    auto toks = split_ws(g->text);
    if (toks.size() == 3 && toks[0] == "foreign-reply") {
      v.guards.push_back(ForeignReplyGuard{parse_int(toks[1], g->number) - 1, state(toks[2], g->number)});
    } else if (toks.size() == 2 && toks[0] == "illegal-track") {
      v.guards.push_back(IllegalTrackGuard{state(toks[1], g->number)});
    } else {
      fail(g->number, "guard reads 'foreign-reply CELL STATE' or 'illegal-track STATE'");
    }
  }

  std::map<RowKey, std::pair<int, std::vector<Branch>>> rows;
  for (const auto& row : ver.rows) {
    auto toks = split_ws(row.text);
    const std::size_t n = static_cast<std::size_t>(k);
    if (toks.size() != 2 * n + 6 || toks[n + 2] != "->") {
      fail(row.number, "verifier rows read 'q sigma g1..gk -> weight q' d t1..tk'");
    }
    Branch b;
    try {
      b.weight = parse_weight(toks[n + 3]);
    } catch (const Error&) {
      fail(row.number, "bad weight '" + toks[n + 3] + "'");
    }
    b.state = state(toks[n + 4], row.number);
    const std::string& d = toks[n + 5];
    if (d == "+1" || d == "1") {
      b.move = 1;
    } else if (d == "0") {
      b.move = 0;
    } else if (d == "-1") {
      b.move = -1;
    } else {
      fail(row.number, "head move must be -1, 0 or +1");
    }
    for (std::size_t i = 0; i < n; ++i) {
      b.comm.push_back(symbol_index(v.comm[i], toks[n + 6 + i], row.number, "communication"));
    }

    std::vector<std::vector<int>> options;
    int wildcards = 0;
    std::vector<int> tapes;
    if (toks[1] == "*") {
      ++wildcards;
      for (int t = 0; t < v.tape_symbol_count(); ++t) tapes.push_back(t);
    } else {
      int t = v.tape_symbol_index(toks[1]);
      if (t < 0) fail(row.number, "unknown tape symbol '" + toks[1] + "'");
      tapes.push_back(t);
    }
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<int> opts;
      if (toks[2 + i] == "*") {
        ++wildcards;
        for (int s = 0; s < static_cast<int>(v.comm[i].live_size()); ++s) opts.push_back(s);
      } else {
        opts.push_back(symbol_index(v.comm[i], toks[2 + i], row.number, "communication"));
      }
      options.push_back(std::move(opts));
    }
    const int q = state(toks[0], row.number);
    for (int t : tapes) {
      std::vector<std::size_t> pos(n, 0);
      while (true) {
        RowKey key{q, t, {}};
        for (std::size_t i = 0; i < n; ++i) key.comm.push_back(options[i][pos[i]]);
        auto [it, inserted] = rows.try_emplace(key, wildcards, std::vector<Branch>{});
        if (wildcards < it->second.first) it->second = {wildcards, {}};
        if (wildcards == it->second.first) it->second.second.push_back(b);
        std::size_t i = n;
        while (i > 0 && ++pos[i - 1] == options[i - 1].size()) pos[--i] = 0;
        if (i == 0) break;
      }
    }
  }
  for (auto& [key, entry] : rows) v.rules.emplace(key, std::move(entry.second));

  for (int i = 1; i <= k; ++i) {
    p.provers.push_back(parse_prover(by_name, "prover " + std::to_string(i), &v.comm[static_cast<std::size_t>(i - 1)]));
  }
  for (const auto& s : sections) {
    bool known = s.name == "protocol" || s.name == "alphabets" || s.name == "verifier";
    for (int i = 1; i <= k && !known; ++i) known = s.name.rfind("prover " + std::to_string(i), 0) == 0;
    if (!known) fail(s.line, "unknown section [" + s.name + "]");
  }
  return p;
}

std::string serialize_protocol(const ProtocolSpec& p) {
  const VerifierSpec& v = p.verifier;
  std::ostringstream os;
  os.precision(17);
  os << "[protocol]\n";
  if (!p.name.empty()) os << "name = " << p.name << '\n';
  os << "mode = " << mode_name(v.mode) << "\nk = " << v.k() << "\na = " << p.a << "\nb = " << p.b
     << "\ncutoff = " << p.cutoff << '\n';
  if (p.claims_restrictive) os << "claims = restrictive\n";

  os << "\n[alphabets]\ninput =";
  for (const auto& s : v.input.live_symbols()) os << ' ' << s;
  os << '\n';
  for (int i = 0; i < v.k(); ++i) {
    os << "gamma" << i + 1 << " =";
    for (const auto& s : v.comm[i].live_symbols()) os << ' ' << s;
    os << '\n';
    auto halt = v.comm[i].halting_symbols();
    if (!halt.empty()) {
      os << "halt-gamma" << i + 1 << " =";
      for (const auto& s : halt) os << ' ' << s;
      os << '\n';
    }
  }

  os << "\n[verifier]\nstates =";
  for (const auto& s : v.states) os << ' ' << s;
  os << "\ninitial = " << v.states[v.initial] << '\n';
  if (!v.accept.empty()) {
    os << "accept =";
    for (int q : v.accept) os << ' ' << v.states[q];
    os << '\n';
  }
  if (!v.reject.empty()) {
    os << "reject =";
    for (int q : v.reject) os << ' ' << v.states[q];
    os << '\n';
  }
  for (const auto& g : v.guards) {
    if (const auto* f = std::get_if<ForeignReplyGuard>(&g)) {
      os << "guard = foreign-reply " << f->cell + 1 << ' ' << v.states[f->reject_state] << '\n';
    } else if (const auto* t = std::get_if<IllegalTrackGuard>(&g)) {
      os << "guard = illegal-track " << v.states[t->reject_state] << '\n';
    }
  }
  for (const auto& [key, branches] : v.rules) {
    const std::string lhs = v.describe(key);
    for (const auto& b : branches) {
      os << lhs << " -> " << format_weight(b.weight) << ' ' << v.states[b.state] << ' '
         << (b.move > 0 ? "+1" : b.move < 0 ? "-1" : "0");
      for (int i = 0; i < v.k(); ++i) os << ' ' << v.comm[i].symbol(b.comm[i]);
      os << '\n';
    }
  }

  for (std::size_t i = 0; i < p.provers.size(); ++i) {
    const bool custom_comm = i >= v.comm.size() || p.provers[i].comm.live_symbols() != v.comm[i].live_symbols();
    serialize_prover(os, p.provers[i], "prover " + std::to_string(i + 1), custom_comm);
  }
  return os.str();
}

ProtocolSpec load_protocol(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParse, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_protocol(ss.str());
}

void save_protocol(const ProtocolSpec& p, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kInvalidInput, "cannot write '" + path + "'");
  out << serialize_protocol(p);
}

}  // namespace qmip
