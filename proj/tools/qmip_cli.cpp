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

// Command-line front end. Links only the C API.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qmip/qmip.h"

namespace {

struct ProtocolDeleter {
  void operator()(qmip_protocol* p) const { qmip_protocol_free(p); }
};
struct ResultDeleter {
  void operator()(qmip_result* r) const { qmip_result_free(r); }
};
struct StringDeleter {
  void operator()(char* s) const { qmip_string_free(s); }
};
using Protocol = std::unique_ptr<qmip_protocol, ProtocolDeleter>;
using Result = std::unique_ptr<qmip_result, ResultDeleter>;
using String = std::unique_ptr<char, StringDeleter>;

int report_error(int status) {
  std::fprintf(stderr, "error: %s\n", qmip_last_error());
  return status;
}

int load(const std::string& path, Protocol& out) {
  qmip_protocol* p = nullptr;
  const int status = qmip_protocol_load(path.c_str(), &p);
  out.reset(p);
  return status;
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) std::fprintf(stderr, "error: cannot write '%s'\n", path.c_str());
  return static_cast<bool>(out);
}

std::string input_arg(const std::string& s) { return s == "-" ? std::string() : s; }

int cmd_validate(const std::string& file) {
  Protocol p;
  if (int s = load(file, p)) return report_error(s);
  char* raw = nullptr;
  const int status = qmip_validate(p.get(), &raw);
  String report(raw);
  if (report) std::fputs(report.get(), stdout);
  if (status != QMIP_OK && !report) return report_error(status);
  return status;
}

struct RunArgs {
  std::string file;
  std::string input;
  int cutoff = 0;
  int space = -1;
  std::string semantics = "auto";
  bool trace = false;
  bool machine = false;
};

int cmd_run(const RunArgs& a) {
  Protocol p;
  if (int s = load(a.file, p)) return report_error(s);
  qmip_run_options o;
  qmip_run_options_init(&o);
  o.cutoff = a.cutoff;
  o.space = a.space;
  o.trace = a.trace ? 1 : 0;
  o.semantics = a.semantics == "quantum" ? QMIP_SEMANTICS_QUANTUM
                : a.semantics == "classical" ? QMIP_SEMANTICS_CLASSICAL
                                             : QMIP_SEMANTICS_AUTO;
  qmip_result* raw = nullptr;
  if (int s = qmip_run(p.get(), input_arg(a.input).c_str(), &o, &raw)) return report_error(s);
  Result r(raw);
  if (a.trace) std::fputs(qmip_result_trace(r.get()), stdout);
  if (!a.machine) std::printf("%-6s %-12s %-12s %-12s\n", "round", "cum_acc", "cum_rej", "residual");
  for (size_t i = 0; i < qmip_result_round_count(r.get()); ++i) {
    qmip_round round;
    qmip_result_round(r.get(), i, &round);
    if (a.machine) {
      std::printf("round=%d cum_acc=%.12f cum_rej=%.12f residual=%.12f\n", round.round, round.cum_acc, round.cum_rej,
                  round.residual);
    } else {
      std::printf("%-6d %-12.9f %-12.9f %-12.9f\n", round.round, round.cum_acc, round.cum_rej, round.residual);
    }
  }
  double acc = 0, rej = 0, unresolved = 0;
  qmip_result_final(r.get(), &acc, &rej, &unresolved);
  std::printf("steps=%ld\nexpected_moves=%.9f\np_rej=%.9f\np_unresolved=%.9f\np_acc=%.9f\n", qmip_result_steps(r.get()),
              qmip_result_expected_moves(r.get()), rej, unresolved, acc);
  return 0;
}

int cmd_lift(const std::string& file, const std::string& out) {
  Protocol p;
  if (int s = load(file, p)) return report_error(s);
  qmip_protocol* lifted = nullptr;
  char* prov = nullptr;
  if (int s = qmip_lift(p.get(), &lifted, &prov)) return report_error(s);
  Protocol q(lifted);
  String provenance(prov);
  if (int s = qmip_protocol_save(q.get(), out.c_str())) return report_error(s);
  if (!write_file(out + ".provenance", provenance.get())) return QMIP_ERR_RUNTIME;
  std::printf("wrote %s\nwrote %s.provenance\n", out.c_str(), out.c_str());
  return 0;
}

int cmd_reduce(const std::string& file, const std::string& out) {
  Protocol p;
  if (int s = load(file, p)) return report_error(s);
  qmip_protocol* reduced = nullptr;
  char* mask_raw = nullptr;
  if (int s = qmip_reduce(p.get(), &reduced, &mask_raw)) return report_error(s);
  Protocol q(reduced);
  String mask(mask_raw);
  if (int s = qmip_protocol_save(q.get(), out.c_str())) return report_error(s);
  if (!write_file(out + ".mask", mask.get())) return QMIP_ERR_RUNTIME;
  std::printf("wrote %s\nwrote %s.mask\n", out.c_str(), out.c_str());
  return 0;
}

struct AdversaryArgs {
  std::string file;
  std::string input;
  std::string family = "det";
  std::string replies;
  std::string fixed;
  size_t limit = 0;
  bool table = false;
};

int cmd_adversary(const AdversaryArgs& a) {
  Protocol p;
  if (int s = load(a.file, p)) return report_error(s);
  qmip_adversary_options o;
  qmip_adversary_options_init(&o);
  o.family = a.family == "perm" ? QMIP_FAMILY_PERMUTATION : a.family == "rot" ? QMIP_FAMILY_ROTATION : QMIP_FAMILY_DETERMINISTIC;
  o.replies = a.replies.empty() ? nullptr : a.replies.c_str();
  o.fixed = a.fixed.empty() ? nullptr : a.fixed.c_str();
  o.limit = a.limit;
  o.include_table = a.table ? 1 : 0;
  char* raw = nullptr;
  double best = 0;
  if (int s = qmip_adversary(p.get(), input_arg(a.input).c_str(), &o, &best, &raw)) return report_error(s);
  String report(raw);
  std::fputs(report.get(), stdout);
  return 0;
}

int cmd_compare(const std::string& fa, const std::string& fb, const std::vector<std::string>& inputs, int cutoff) {
  Protocol a, b;
  if (int s = load(fa, a)) return report_error(s);
  if (int s = load(fb, b)) return report_error(s);
  qmip_run_options o;
  qmip_run_options_init(&o);
  o.cutoff = cutoff;
  double worst = 0.0;
  std::printf("%-8s %-6s %-12s %-12s %-12s %-12s\n", "input", "round", "acc_a", "acc_b", "rej_a", "rej_b");
  for (const auto& raw_input : inputs) {
    const std::string x = input_arg(raw_input);
    qmip_result* ra = nullptr;
    qmip_result* rb = nullptr;
    if (int s = qmip_run(a.get(), x.c_str(), &o, &ra)) return report_error(s);
    Result ia(ra);
    if (int s = qmip_run(b.get(), x.c_str(), &o, &rb)) return report_error(s);
    Result ib(rb);
    const size_t n = std::max(qmip_result_round_count(ia.get()), qmip_result_round_count(ib.get()));
    for (size_t i = 0; i < n; ++i) {
      qmip_round x1{}, x2{};
      const size_t na = qmip_result_round_count(ia.get());
      const size_t nb = qmip_result_round_count(ib.get());
      if (na) qmip_result_round(ia.get(), std::min(i, na - 1), &x1);
      if (nb) qmip_result_round(ib.get(), std::min(i, nb - 1), &x2);
      std::printf("%-8s %-6zu %-12.9f %-12.9f %-12.9f %-12.9f\n", x.empty() ? "-" : x.c_str(), i + 1, x1.cum_acc,
                  x2.cum_acc, x1.cum_rej, x2.cum_rej);
    }
    worst = std::max(worst, qmip_result_max_deviation(ia.get(), ib.get()));
  }
  std::printf("max_deviation=%.3e\n", worst);
  return 0;
}

int cmd_corpus(const std::string& name, const std::string& out_dir, bool list) {
  const size_t n = qmip_corpus_count();
  if (list || (name.empty() && out_dir.empty())) {
    for (size_t i = 0; i < n; ++i) std::printf("%s\n", qmip_corpus_name(i));
    return 0;
  }
  if (!out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    for (size_t i = 0; i < n; ++i) {
      const std::string path = out_dir + "/" + qmip_corpus_name(i) + ".qmip";
      if (!write_file(path, qmip_corpus_text(i))) return QMIP_ERR_RUNTIME;
      std::printf("wrote %s\n", path.c_str());
    }
    return 0;
  }
  for (size_t i = 0; i < n; ++i) {
    if (name == qmip_corpus_name(i)) {
      std::fputs(qmip_corpus_text(i), stdout);
      return 0;
    }
  }
  std::fprintf(stderr, "error: no corpus entry named '%s'\n", name.c_str());
  return QMIP_ERR_USAGE;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Run, check and transform multi-prover interactive protocols with finite-automaton verifiers"};
  app.require_subcommand(1);

  std::string file;
  auto* validate = app.add_subcommand("validate", "Check a protocol file for well-formedness");
  validate->add_option("file", file, "Protocol file")->required();

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run a protocol with its honest provers");
  run_cmd->add_option("file", run.file, "Protocol file")->required();
  run_cmd->add_option("--input,-x", run.input, "Input string ('-' for empty)")->required();
  run_cmd->add_option("--cutoff", run.cutoff, "Override the round cutoff");
  run_cmd->add_option("--space", run.space, "Override every prover's space bound");
  run_cmd->add_option("--semantics", run.semantics, "auto, quantum or classical")
      ->check(CLI::IsMember({"auto", "quantum", "classical"}));
  run_cmd->add_flag("--trace", run.trace, "Print the configurations after every round");
  run_cmd->add_flag("--machine", run.machine, "Line-stable key=value output");

  std::string out;
  auto* lift = app.add_subcommand("lift", "Lift a classical two-prover system to three quantum provers");
  lift->add_option("file", file, "Protocol file")->required();
  lift->add_option("--out,-o", out, "Output protocol file")->required();

  auto* reduce = app.add_subcommand("reduce", "Reduce a three-prover system with an eraser to two provers");
  reduce->add_option("file", file, "Protocol file")->required();
  reduce->add_option("--out,-o", out, "Output protocol file")->required();

  AdversaryArgs adv;
  auto* adversary = app.add_subcommand("adversary", "Exhaustive search over a finite prover family");
  adversary->add_option("file", adv.file, "Protocol file")->required();
  adversary->add_option("--input,-x", adv.input, "Input string ('-' for empty)")->required();
  adversary->add_option("--family", adv.family, "det, perm or rot")->check(CLI::IsMember({"det", "perm", "rot"}));
  adversary->add_option("--replies", adv.replies, "Reply alphabets, e.g. \"1=# a;2=# a\"");
  adversary->add_option("--fixed", adv.fixed, "Provers kept honest, e.g. \"3\"");
  adversary->add_option("--limit", adv.limit, "Family size limit");
  adversary->add_flag("--table", adv.table, "Print every evaluated tuple");

  std::string file_b;
  std::vector<std::string> inputs;
  int compare_cutoff = 0;
  auto* compare = app.add_subcommand("compare", "Per-round comparison of two protocols");
  compare->add_option("a", file, "First protocol file")->required();
  compare->add_option("b", file_b, "Second protocol file")->required();
  compare->add_option("--inputs", inputs, "Inputs ('-' for empty)")->required();
  compare->add_option("--cutoff", compare_cutoff, "Override the round cutoff");

  std::string corpus_name, corpus_out;
  bool corpus_list = false;
  auto* corpus = app.add_subcommand("corpus", "List, print or write the built-in example protocols");
  corpus->add_option("name", corpus_name, "Entry to print");
  corpus->add_option("--out,-o", corpus_out, "Directory to write every entry into");
  corpus->add_flag("--list", corpus_list, "List entry names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : QMIP_ERR_USAGE;
  }

  if (*validate) return cmd_validate(file);
  if (*run_cmd) return cmd_run(run);
  if (*lift) return cmd_lift(file, out);
  if (*reduce) return cmd_reduce(file, out);
  if (*adversary) return cmd_adversary(adv);
  if (*compare) return cmd_compare(file, file_b, inputs, compare_cutoff);
  if (*corpus) return cmd_corpus(corpus_name, corpus_out, corpus_list);
  return QMIP_ERR_USAGE;
}
