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

#include "qmip/qmip.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <sstream>
#include <string>

#include "corpus.hpp"
#include "qmip/adversary.hpp"
#include "qmip/engine.hpp"
#include "qmip/spec_file.hpp"
#include "qmip/transforms.hpp"

struct qmip_protocol {
  qmip::ProtocolSpec spec;
};

struct qmip_result {
  qmip::RunResult result;
  std::string trace;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_error_name;

int fail(int status, std::string name, std::string message) {
  last_error_name = std::move(name);
  last_error = std::move(message);
  return status;
}

int status_of(qmip::ErrorKind kind) {
  switch (kind) {
    case qmip::ErrorKind::kParse: return QMIP_ERR_PARSE;
    case qmip::ErrorKind::kValidation: return QMIP_ERR_VALIDATION;
    case qmip::ErrorKind::kRuntime: return QMIP_ERR_RUNTIME;
  }
  return QMIP_ERR_RUNTIME;
}

template <typename F>
int guarded(F&& body) {
  try {
    last_error.clear();
    last_error_name.clear();
    return body();
  } catch (const qmip::Error& e) {
    return fail(status_of(e.kind()), qmip::error_code_name(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(QMIP_ERR_RUNTIME, "OutOfMemory", "out of memory");
  } catch (const std::exception& e) {
    return fail(QMIP_ERR_RUNTIME, "Internal", e.what());
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

int usage(const char* what) { return fail(QMIP_ERR_USAGE, "Usage", what); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

int parse_prover_number(const std::string& text, std::size_t k) {
  char* end = nullptr;
  const long n = std::strtol(text.c_str(), &end, 10);
  if (text.empty() || *end != '\0' || n < 1 || static_cast<std::size_t>(n) > k) {
    throw qmip::Error(qmip::ErrorCode::kInvalidInput, "bad prover number '" + text + "'");
  }
  return static_cast<int>(n) - 1;
}

}  // namespace

extern "C" {

const char* qmip_last_error(void) { return last_error.c_str(); }
const char* qmip_last_error_name(void) { return last_error_name.c_str(); }

void qmip_string_free(char* s) { std::free(s); }

int qmip_protocol_load(const char* path, qmip_protocol** out) {
  if (!path || !out) return usage("qmip_protocol_load: null argument");
  return guarded([&] {
    *out = new qmip_protocol{qmip::load_protocol(path)};
    return QMIP_OK;
  });
}

int qmip_protocol_parse(const char* text, qmip_protocol** out) {
  if (!text || !out) return usage("qmip_protocol_parse: null argument");
  return guarded([&] {
    *out = new qmip_protocol{qmip::parse_protocol(text)};
    return QMIP_OK;
  });
}

void qmip_protocol_free(qmip_protocol* p) { delete p; }

int qmip_protocol_serialize(const qmip_protocol* p, char** out) {
  if (!p || !out) return usage("qmip_protocol_serialize: null argument");
  return guarded([&] {
    *out = copy_string(qmip::serialize_protocol(p->spec));
    return QMIP_OK;
  });
}

int qmip_protocol_save(const qmip_protocol* p, const char* path) {
  if (!p || !path) return usage("qmip_protocol_save: null argument");
  return guarded([&] {
    qmip::save_protocol(p->spec, path);
    return QMIP_OK;
  });
}

int qmip_protocol_summary(const qmip_protocol* p, char** out) {
  if (!p || !out) return usage("qmip_protocol_summary: null argument");
  return guarded([&] {
    std::ostringstream os;
    os.precision(17);
    os << "name=" << p->spec.name << "\nmode=" << qmip::mode_name(p->spec.verifier.mode) << "\nk=" << p->spec.verifier.k()
       << "\ncutoff=" << p->spec.cutoff << "\na=" << p->spec.a << "\nb=" << p->spec.b << '\n';
    *out = copy_string(os.str());
    return QMIP_OK;
  });
}

int qmip_validate(const qmip_protocol* p, char** report) {
  if (!p || !report) return usage("qmip_validate: null argument");
  return guarded([&] {
    const qmip::Report r = qmip::check_protocol(p->spec);
    std::string text = r.to_string();
    if (r.structural_guard_checks > 0) {
      text += "guard families checked structurally: " + std::to_string(r.structural_guard_checks) + "\n";
    }
    *report = copy_string(text);
    if (r.ok()) return QMIP_OK;
    return fail(QMIP_ERR_VALIDATION, "InvalidSpec", r.violations.front().message);
  });
}

void qmip_run_options_init(qmip_run_options* options) {
  if (options) *options = qmip_run_options{0, -1, QMIP_SEMANTICS_AUTO, 0};
}

int qmip_run(const qmip_protocol* p, const char* input, const qmip_run_options* options, qmip_result** out) {
  if (!p || !input || !out) return usage("qmip_run: null argument");
  qmip_run_options o;
  qmip_run_options_init(&o);
  if (options) o = *options;
  if (o.semantics < QMIP_SEMANTICS_AUTO || o.semantics > QMIP_SEMANTICS_CLASSICAL) {
    return usage("qmip_run: unknown semantics");
  }
  return guarded([&] {
    qmip::RunOptions ro;
    if (o.cutoff > 0) ro.cutoff = o.cutoff;
    if (o.space >= 0) ro.space = o.space;
    qmip::Semantics sem = qmip::is_quantum(p->spec.verifier.mode) ? qmip::Semantics::kQuantum : qmip::Semantics::kClassical;
    if (o.semantics == QMIP_SEMANTICS_QUANTUM) sem = qmip::Semantics::kQuantum;
    if (o.semantics == QMIP_SEMANTICS_CLASSICAL) sem = qmip::Semantics::kClassical;

    auto result = std::make_unique<qmip_result>();
    if (!o.trace) {
      result->result = qmip::run_with(p->spec, input, sem, ro);
    } else {
      // Mirrors run_with while recording the surviving configurations.
      qmip::Execution ex(p->spec, input, sem, ro);
      std::ostringstream os;
      const int k = p->spec.verifier.k();
      char buf[96];
      while (!ex.finished()) {
        const int moves = 1 + (ex.round() > 0 ? k : 0);
        result->result.steps_counted += moves;
        result->result.expected_moves += moves * ex.residual_mass();
        const auto [acc, rej] = ex.step();
        result->result.rounds.push_back({ex.round(), ex.cum_acc(), ex.cum_rej(), ex.residual_mass()});
        std::snprintf(buf, sizeof buf, "round %d: +acc=%.9f +rej=%.9f\n", ex.round(), acc, rej);
        os << buf;
        for (const auto& [c, amp] : ex.state()) {
          std::snprintf(buf, sizeof buf, "  (%.9f,%.9f) ", amp.real(), amp.imag());
          os << buf << ex.describe(c) << '\n';
        }
      }
      result->result.final = {ex.cum_acc(), ex.cum_rej(), ex.residual_mass()};
      result->trace = os.str();
    }
    *out = result.release();
    return QMIP_OK;
  });
}

void qmip_result_free(qmip_result* r) { delete r; }

size_t qmip_result_round_count(const qmip_result* r) { return r ? r->result.rounds.size() : 0; }

int qmip_result_round(const qmip_result* r, size_t i, qmip_round* out) {
  if (!r || !out) return usage("qmip_result_round: null argument");
  if (i >= r->result.rounds.size()) return usage("qmip_result_round: index out of range");
  const auto& s = r->result.rounds[i];
  *out = qmip_round{s.round, s.cum_acc, s.cum_rej, s.residual};
  return QMIP_OK;
}

void qmip_result_final(const qmip_result* r, double* p_acc, double* p_rej, double* p_unresolved) {
  if (!r) return;
  if (p_acc) *p_acc = r->result.final.p_acc;
  if (p_rej) *p_rej = r->result.final.p_rej;
  if (p_unresolved) *p_unresolved = r->result.final.p_unresolved;
}

long qmip_result_steps(const qmip_result* r) { return r ? r->result.steps_counted : 0; }
double qmip_result_expected_moves(const qmip_result* r) { return r ? r->result.expected_moves : 0.0; }
const char* qmip_result_trace(const qmip_result* r) { return r ? r->trace.c_str() : ""; }

double qmip_result_max_deviation(const qmip_result* a, const qmip_result* b) {
  if (!a || !b) return -1.0;
  return qmip::max_deviation(a->result, b->result);
}

int qmip_lift(const qmip_protocol* p, qmip_protocol** out, char** provenance) {
  if (!p || !out) return usage("qmip_lift: null argument");
  return guarded([&] {
    qmip::LiftOutput l = qmip::lift_2ip_to_3qip(p->spec);
    if (provenance) *provenance = copy_string(qmip::format_provenance(l.provenance));
    *out = new qmip_protocol{std::move(l.protocol)};
    return QMIP_OK;
  });
}

int qmip_reduce(const qmip_protocol* p, qmip_protocol** out, char** mask) {
  if (!p || !out) return usage("qmip_reduce: null argument");
  return guarded([&] {
    qmip::ReduceOutput r = qmip::reduce_3qip_to_2qip(p->spec);
    if (mask) {
      std::ostringstream os;
      for (const auto& s : r.mask.live_symbols()) os << s << ' ' << r.encoding.codes.at(s) << '\n';
      *mask = copy_string(os.str());
    }
    *out = new qmip_protocol{std::move(r.protocol)};
    return QMIP_OK;
  });
}

void qmip_adversary_options_init(qmip_adversary_options* options) {
  if (options) *options = qmip_adversary_options{QMIP_FAMILY_DETERMINISTIC, nullptr, nullptr, 0, 0};
}

int qmip_adversary(const qmip_protocol* p, const char* input, const qmip_adversary_options* options,
                   double* max_p_acc, char** report) {
  if (!p || !input) return usage("qmip_adversary: null argument");
  qmip_adversary_options o;
  qmip_adversary_options_init(&o);
  if (options) o = *options;
  if (o.family < QMIP_FAMILY_DETERMINISTIC || o.family > QMIP_FAMILY_ROTATION) {
    return usage("qmip_adversary: unknown family");
  }
  return guarded([&] {
    const std::size_t k = p->spec.provers.size();
    qmip::FamilyOptions fo;
    fo.kind = o.family == QMIP_FAMILY_DETERMINISTIC ? qmip::FamilyKind::kDeterministic
              : o.family == QMIP_FAMILY_PERMUTATION ? qmip::FamilyKind::kPermutation
                                                    : qmip::FamilyKind::kRotation;
    if (o.replies) {
      std::istringstream groups(o.replies);
      std::string group;
      while (std::getline(groups, group, ';')) {
        if (trim(group).empty()) continue;
        const auto eq = group.find('=');
        if (eq == std::string::npos) {
          throw qmip::Error(qmip::ErrorCode::kInvalidInput, "reply list '" + group + "' lacks '='");
        }
        const int i = parse_prover_number(trim(group.substr(0, eq)), k);
        std::istringstream symbols(group.substr(eq + 1));
        std::string s;
        while (symbols >> s) fo.replies[i].push_back(s);
      }
    }
    if (o.fixed) {
      std::istringstream fixed(o.fixed);
      std::string s;
      while (fixed >> s) fo.fixed.insert(parse_prover_number(s, k));
    }
    const std::size_t limit = o.limit ? o.limit : qmip::family_limit();
    const qmip::StrategyFamily family = qmip::make_family(p->spec, fo, limit);
    qmip::SearchOptions so;
    so.limit = limit;
    so.keep_table = o.include_table != 0;
    const qmip::AdversaryReport r = qmip::search(p->spec, input, family, so);
    if (max_p_acc) *max_p_acc = r.max_p_acc;
    if (report) *report = copy_string(qmip::format_report(p->spec, family, r, so.keep_table));
    return QMIP_OK;
  });
}

size_t qmip_corpus_count(void) {
  try {
    return qmip::corpus().size();
  } catch (...) {
    return 0;
  }
}

const char* qmip_corpus_name(size_t i) {
  const auto& c = qmip::corpus();
  return i < c.size() ? c[i].name.c_str() : nullptr;
}

const char* qmip_corpus_text(size_t i) {
  const auto& c = qmip::corpus();
  return i < c.size() ? c[i].text.c_str() : nullptr;
}

}  // extern "C"
