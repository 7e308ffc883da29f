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

#ifndef QMIP_QMIP_H_
#define QMIP_QMIP_H_

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define QMIP_API __attribute__((visibility("default")))
#else
#define QMIP_API
#endif

/* Status codes. Every fallible call returns one of these. */
#define QMIP_OK 0
#define QMIP_ERR_USAGE 1
#define QMIP_ERR_PARSE 2
#define QMIP_ERR_VALIDATION 3
#define QMIP_ERR_RUNTIME 4

typedef struct qmip_protocol qmip_protocol;
typedef struct qmip_result qmip_result;

/* Message and error name of the last failure on the calling thread. */
QMIP_API const char* qmip_last_error(void);
QMIP_API const char* qmip_last_error_name(void);

/* Strings returned through char** are owned by the caller. */
QMIP_API void qmip_string_free(char* s);

QMIP_API int qmip_protocol_load(const char* path, qmip_protocol** out);
QMIP_API int qmip_protocol_parse(const char* text, qmip_protocol** out);
QMIP_API void qmip_protocol_free(qmip_protocol* p);
QMIP_API int qmip_protocol_serialize(const qmip_protocol* p, char** out);
QMIP_API int qmip_protocol_save(const qmip_protocol* p, const char* path);
/* One "key=value" line each for name, mode, k, cutoff, a and b. */
QMIP_API int qmip_protocol_summary(const qmip_protocol* p, char** out);

/* QMIP_OK when well-formed, QMIP_ERR_VALIDATION otherwise; *report lists
   every violation either way. */
QMIP_API int qmip_validate(const qmip_protocol* p, char** report);

#define QMIP_SEMANTICS_AUTO 0
#define QMIP_SEMANTICS_QUANTUM 1
#define QMIP_SEMANTICS_CLASSICAL 2

typedef struct qmip_run_options {
  int cutoff;    /* <= 0 keeps the protocol's cutoff */
  int space;     /* < 0 keeps each prover's space bound */
  int semantics; /* QMIP_SEMANTICS_* */
  int trace;     /* nonzero records the state after every round */
} qmip_run_options;

QMIP_API void qmip_run_options_init(qmip_run_options* options);
QMIP_API int qmip_run(const qmip_protocol* p, const char* input, const qmip_run_options* options, qmip_result** out);
QMIP_API void qmip_result_free(qmip_result* r);

typedef struct qmip_round {
  int round;
  double cum_acc;
  double cum_rej;
  double residual;
} qmip_round;

QMIP_API size_t qmip_result_round_count(const qmip_result* r);
QMIP_API int qmip_result_round(const qmip_result* r, size_t i, qmip_round* out);
QMIP_API void qmip_result_final(const qmip_result* r, double* p_acc, double* p_rej, double* p_unresolved);
QMIP_API long qmip_result_steps(const qmip_result* r);
QMIP_API double qmip_result_expected_moves(const qmip_result* r);
/* Empty unless the run was traced. */
QMIP_API const char* qmip_result_trace(const qmip_result* r);
QMIP_API double qmip_result_max_deviation(const qmip_result* a, const qmip_result* b);

QMIP_API int qmip_lift(const qmip_protocol* p, qmip_protocol** out, char** provenance);
/* *mask receives the mask alphabet with its binary codes, one per line. */
QMIP_API int qmip_reduce(const qmip_protocol* p, qmip_protocol** out, char** mask);

#define QMIP_FAMILY_DETERMINISTIC 0
#define QMIP_FAMILY_PERMUTATION 1
#define QMIP_FAMILY_ROTATION 2

typedef struct qmip_adversary_options {
  int family;          /* QMIP_FAMILY_* */
  const char* replies; /* "1=# a;2=# a" restricts reply alphabets; NULL for all */
  const char* fixed;   /* "3" or "1 3" keeps listed provers honest; NULL for none */
  size_t limit;        /* 0 uses QMIP_FAMILY_LIMIT or 10^6 */
  int include_table;
} qmip_adversary_options;

QMIP_API void qmip_adversary_options_init(qmip_adversary_options* options);
QMIP_API int qmip_adversary(const qmip_protocol* p, const char* input, const qmip_adversary_options* options,
                            double* max_p_acc, char** report);

/* Built-in example protocols, including generated lift and reduce outputs. */
QMIP_API size_t qmip_corpus_count(void);
QMIP_API const char* qmip_corpus_name(size_t i);
QMIP_API const char* qmip_corpus_text(size_t i);

#ifdef __cplusplus
}
#endif

#endif  // QMIP_QMIP_H_
