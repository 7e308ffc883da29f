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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>

#include "qmip/qmip.h"

namespace {

std::string corpus_text(const std::string& name) {
  for (size_t i = 0; i < qmip_corpus_count(); ++i) {
    if (name == qmip_corpus_name(i)) return qmip_corpus_text(i);
  }
  return {};
}

qmip_protocol* load(const std::string& name) {
  qmip_protocol* p = nullptr;
  REQUIRE(qmip_protocol_load((std::string(QMIP_CORPUS_DIR) + "/" + name + ".qmip").c_str(), &p) == QMIP_OK);
  return p;
}

std::string take(char* s) {
  std::string out = s ? s : "";
  qmip_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("corpus is embedded") {
  CHECK(qmip_corpus_count() == 10);
  CHECK(corpus_text("nocomm").find("[protocol]") != std::string::npos);
  CHECK(corpus_text("nocomm-lift").find("k = 3") != std::string::npos);
  CHECK(qmip_corpus_name(99) == nullptr);
}

TEST_CASE("parse errors carry a status and a message") {
  qmip_protocol* p = nullptr;
  CHECK(qmip_protocol_parse("[protocol]\nmode = 9qfa\n", &p) == QMIP_ERR_PARSE);
  CHECK(p == nullptr);
  CHECK(std::string(qmip_last_error_name()) == "ParseError");
  CHECK(std::string(qmip_last_error()).find("line 2") != std::string::npos);
  CHECK(qmip_protocol_load("/nonexistent.qmip", &p) != QMIP_OK);
  CHECK(qmip_protocol_parse(nullptr, &p) == QMIP_ERR_USAGE);
}

TEST_CASE("run reports rounds and final statistics") {
  qmip_protocol* p = load("nocomm");
  qmip_run_options o;
  qmip_run_options_init(&o);
  CHECK(o.cutoff == 0);
  CHECK(o.space == -1);
  qmip_result* r = nullptr;
  REQUIRE(qmip_run(p, "01", &o, &r) == QMIP_OK);
  CHECK(qmip_result_round_count(r) == 2);
  qmip_round round;
  REQUIRE(qmip_result_round(r, 1, &round) == QMIP_OK);
  CHECK(round.round == 2);
  CHECK(round.cum_acc == doctest::Approx(0.5));
  CHECK(qmip_result_round(r, 2, &round) != QMIP_OK);
  double acc = 0, rej = 0, unresolved = 0;
  qmip_result_final(r, &acc, &rej, &unresolved);
  CHECK(acc == doctest::Approx(0.5));
  CHECK(rej == doctest::Approx(0.5));
  CHECK(unresolved == 0.0);
  CHECK(qmip_result_steps(r) == 4);
  CHECK(qmip_result_expected_moves(r) == doctest::Approx(4.0));
  CHECK(std::string(qmip_result_trace(r)).empty());
  CHECK(qmip_result_max_deviation(r, r) == 0.0);
  qmip_result_free(r);

  o.trace = 1;
  o.cutoff = 1;
  REQUIRE(qmip_run(p, "", &o, &r) == QMIP_OK);
  REQUIRE(qmip_result_trace(r) != nullptr);
  CHECK(std::string(qmip_result_trace(r)).find("round 1") != std::string::npos);
  qmip_result_final(r, &acc, &rej, &unresolved);
  CHECK(unresolved == doctest::Approx(1.0));
  qmip_result_free(r);

  CHECK(qmip_run(p, "x", nullptr, &r) == QMIP_ERR_RUNTIME);
  CHECK(std::string(qmip_last_error_name()) == "InvalidInput");
  qmip_protocol_free(p);
}

TEST_CASE("validation status and report") {
  qmip_protocol* p = load("coinflip");
  char* report = nullptr;
  CHECK(qmip_validate(p, &report) == QMIP_OK);
  CHECK(take(report).find("ok") != std::string::npos);
  qmip_protocol_free(p);

  std::string text = corpus_text("coinflip");
  const auto at = text.find("1/sqrt2 rej");
  REQUIRE(at != std::string::npos);
  text.replace(at, 7, "1/2");
  REQUIRE(qmip_protocol_parse(text.c_str(), &p) == QMIP_OK);
  CHECK(qmip_validate(p, &report) == QMIP_ERR_VALIDATION);
  CHECK_FALSE(take(report).empty());
  qmip_protocol_free(p);
}

TEST_CASE("lift, reduce and serialize through handles") {
  qmip_protocol* p = load("nocomm");
  qmip_protocol* lifted = nullptr;
  qmip_protocol* reduced = nullptr;
  char* provenance = nullptr;
  char* mask = nullptr;
  REQUIRE(qmip_lift(p, &lifted, &provenance) == QMIP_OK);
  CHECK(take(provenance).find("<=") != std::string::npos);
  REQUIRE(qmip_reduce(lifted, &reduced, &mask) == QMIP_OK);
  CHECK(take(mask).find("# 00") != std::string::npos);

  char* text = nullptr;
  REQUIRE(qmip_protocol_serialize(reduced, &text) == QMIP_OK);
  qmip_protocol* again = nullptr;
  REQUIRE(qmip_protocol_parse(text, &again) == QMIP_OK);
  qmip_string_free(text);

  qmip_result* a = nullptr;
  qmip_result* b = nullptr;
  REQUIRE(qmip_run(p, "1", nullptr, &a) == QMIP_OK);
  REQUIRE(qmip_run(again, "1", nullptr, &b) == QMIP_OK);
  CHECK(qmip_result_max_deviation(a, b) <= 1e-9);
  qmip_result_free(a);
  qmip_result_free(b);

  CHECK(qmip_reduce(p, &reduced, &mask) == QMIP_ERR_VALIDATION);
  char* summary = nullptr;
  REQUIRE(qmip_protocol_summary(lifted, &summary) == QMIP_OK);
  CHECK(take(summary).find("2qfa") != std::string::npos);
  for (qmip_protocol* h : {p, lifted, again}) qmip_protocol_free(h);
}

TEST_CASE("adversary search through the C API") {
  qmip_protocol* p = load("nocomm");
  qmip_adversary_options o;
  qmip_adversary_options_init(&o);
  double best = -1.0;
  char* report = nullptr;
  REQUIRE(qmip_adversary(p, "", &o, &best, &report) == QMIP_OK);
  CHECK(best == doctest::Approx(0.5));
  CHECK(take(report).find("max_p_acc=") != std::string::npos);
  o.limit = 2;
  CHECK(qmip_adversary(p, "", &o, &best, &report) == QMIP_ERR_RUNTIME);
  CHECK(std::string(qmip_last_error_name()) == "FamilyTooLarge");
  o.limit = 0;
  o.replies = "1=zz";
  CHECK(qmip_adversary(p, "", &o, &best, &report) != QMIP_OK);
  qmip_protocol_free(p);
}
