// Copyright 2026 The qproof Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QPROOF_QPROOF_H
#define QPROOF_QPROOF_H

/* C interface to the qproof library. Every fallible call returns a status
 * code; on failure qproof_last_error() describes the problem (thread-local,
 * valid until the next call on the same thread). Strings returned through
 * `char**` out-parameters are owned by the caller and released with
 * qproof_string_free. Handles are released with their matching _free call. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QPROOF_API __declspec(dllexport)
#elif defined(QPROOF_BUILDING_LIBRARY)
#define QPROOF_API __attribute__((visibility("default")))
#else
#define QPROOF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qproof_status {
  QPROOF_OK = 0,
  QPROOF_ERR_CONFIG = 1,    /* bad parameters or key material */
  QPROOF_ERR_CONTRACT = 2,  /* precondition violated by the caller */
  QPROOF_ERR_PROTOCOL = 3,  /* the peer broke the protocol */
  QPROOF_ERR_TRANSPORT = 4, /* socket failure or timeout */
  QPROOF_ERR_IO = 5,        /* file system */
  QPROOF_ERR_DECODE = 6,    /* malformed frame */
  QPROOF_ERR_INTERNAL = 7
} qproof_status;

typedef enum qproof_protocol { QPROOF_PROTOCOL_POQ = 0, QPROOF_PROTOCOL_RSP = 1 } qproof_protocol;

/* How an honest quantum prover simulates its register. Escrow reads the
 * trapdoor; enumerate brute-forces the domain (n <= 20). */
typedef enum qproof_mode { QPROOF_MODE_ESCROW = 0, QPROOF_MODE_ENUMERATE = 1 } qproof_mode;

/* A public key, optionally with its trapdoor. */
typedef struct qproof_keypair qproof_keypair;
typedef struct qproof_summary qproof_summary;
typedef struct qproof_gl_report qproof_gl_report;

QPROOF_API const char* qproof_version(void);
QPROOF_API const char* qproof_last_error(void);
QPROOF_API const char* qproof_status_name(qproof_status status);
QPROOF_API void qproof_string_free(char* s);

/* ---- keys ---------------------------------------------------------------- */

/* Random permutation table on n bits (1 <= n <= 20); identity table if
 * `identity` is nonzero. */
QPROOF_API qproof_status qproof_keygen_mock(uint32_t n, int identity, uint64_t seed,
                                            qproof_keypair** out);
/* RSA-style modular permutation with a fresh modulus of `modulus_bits` bits
 * (8..4096). The domain size is modulus_bits - 1. */
QPROOF_API qproof_status qproof_keygen_modular(uint32_t modulus_bits, uint64_t seed,
                                               qproof_keypair** out);
/* Modular permutation over a caller-chosen small squarefree modulus, given
 * in decimal. */
QPROOF_API qproof_status qproof_keygen_explicit(const char* modulus, const char* exponent,
                                                qproof_keypair** out);

/* Either path may be NULL, but not both. */
QPROOF_API qproof_status qproof_keypair_load(const char* public_path, const char* trapdoor_path,
                                             qproof_keypair** out);
QPROOF_API qproof_status qproof_keypair_save(const qproof_keypair* kp, const char* public_path,
                                             const char* trapdoor_path);
QPROOF_API void qproof_keypair_free(qproof_keypair* kp);

/* Domain size n in bits. */
QPROOF_API size_t qproof_keypair_n(const qproof_keypair* kp);
QPROOF_API int qproof_keypair_has_key(const qproof_keypair* kp);
QPROOF_API int qproof_keypair_has_trapdoor(const qproof_keypair* kp);
/* Canonical JSON of the public key; never includes the trapdoor. */
QPROOF_API qproof_status qproof_keypair_public_json(const qproof_keypair* kp, char** out);

/* ---- sessions ------------------------------------------------------------ */

/* status: 0 complete, 1 void. verdict: 1 accept, 0 reject, -1 none. */
typedef void (*qproof_session_callback)(void* user, uint64_t index, int status, int verdict,
                                        const char* detail);

typedef struct qproof_run_options {
  qproof_protocol protocol;
  /* quantum, classical-optimal, classical-baseline, classical-random, leaky */
  const char* strategy;
  qproof_mode mode;
  uint64_t seed;
  uint64_t trials;
  uint32_t threads;
  uint32_t timeout_ms;
  qproof_session_callback on_session; /* may be NULL */
  void* user;
} qproof_run_options;

QPROOF_API void qproof_run_options_init(qproof_run_options* options);

/* Both parties in-process. `kp` needs key and trapdoor. */
QPROOF_API qproof_status qproof_run_local(const qproof_keypair* kp,
                                          const qproof_run_options* options,
                                          qproof_summary** out);
/* Verifier over TCP, one connection per session. `address` is host:port. */
QPROOF_API qproof_status qproof_run_verifier(const qproof_keypair* kp, const char* address,
                                             int listen, const qproof_run_options* options,
                                             qproof_summary** out);
/* Prover over TCP. `trapdoor` (may be NULL) is the escrowed or leaked
 * trapdoor. */
QPROOF_API qproof_status qproof_run_prover(const qproof_keypair* trapdoor, const char* address,
                                           int listen, const qproof_run_options* options,
                                           qproof_summary** out);

typedef struct qproof_acceptance {
  uint64_t trials;
  uint64_t void_sessions;
  uint64_t accepted;
  double p0, p1, p10, p11, overall;
  double overall_lo, overall_hi; /* 95% Wilson interval */
} qproof_acceptance;

QPROOF_API qproof_status qproof_summary_acceptance(const qproof_summary* s,
                                                   qproof_acceptance* out);
QPROOF_API qproof_status qproof_summary_json(const qproof_summary* s, char** out);
QPROOF_API qproof_status qproof_summary_table(const qproof_summary* s, char** out);
QPROOF_API void qproof_summary_free(qproof_summary* s);

/* ---- extraction demo ----------------------------------------------------- */

QPROOF_API qproof_status qproof_gl_demo(uint32_t n, int leaky, uint64_t seed,
                                        qproof_gl_report** out);
QPROOF_API int qproof_gl_report_success(const qproof_gl_report* r);
QPROOF_API qproof_status qproof_gl_report_json(const qproof_gl_report* r, char** out);
QPROOF_API void qproof_gl_report_free(qproof_gl_report* r);

/* ---- self test ----------------------------------------------------------- */

typedef void (*qproof_selftest_callback)(void* user, const char* name, int passed,
                                         const char* detail);

/* Runs the built-in checks; `failures` receives the number that failed. */
QPROOF_API qproof_status qproof_selftest(uint64_t seed, qproof_selftest_callback cb, void* user,
                                         uint32_t* failures);

#ifdef __cplusplus
}
#endif

#endif /* QPROOF_QPROOF_H */
