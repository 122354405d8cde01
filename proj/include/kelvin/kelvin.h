/*
 * kelvin: exact Kelvin-Planck / Clausius-Duhem decision engine.
 *
 * C interface over the C++ core. Objects are opaque handles released with
 * the matching *_free function. Every fallible call returns a kv_status;
 * on failure the calling thread's kv_last_error() holds a diagnostic.
 * Strings returned through char** are heap-allocated JSON documents owned
 * by the caller and released with kv_string_free.
 *
 * All numbers cross the boundary as exact rational strings ("p" or "p/q").
 * Handles are immutable after creation and may be shared across threads.
 */
#ifndef KELVIN_KELVIN_H_
#define KELVIN_KELVIN_H_

#include <stddef.h>

#if defined(_WIN32)
#  if defined(KELVIN_BUILDING_LIBRARY)
#    define KELVIN_API __declspec(dllexport)
#  else
#    define KELVIN_API __declspec(dllimport)
#  endif
#else
#  define KELVIN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kv_status {
  KV_OK = 0,
  KV_ERR_NULL_ARGUMENT = 1,
  KV_ERR_PARSE = 2,
  KV_ERR_UNKNOWN_LABEL = 3,
  KV_ERR_SPACE_MISMATCH = 4,
  KV_ERR_MASS_NOT_CONSERVED = 5,
  KV_ERR_INVALID_ARGUMENT = 6,
  KV_ERR_NOT_KELVIN_PLANCK = 7,
  KV_ERR_DURATION_MISMATCH = 8,
  KV_ERR_OFF_GRID = 9,
  KV_ERR_INTERNAL = 99
} kv_status;

typedef enum kv_example {
  KV_EXAMPLE_A = 0, /* (0, n d_1 - d_0), n = 1..N */
  KV_EXAMPLE_B = 1  /* (d_{1/n} - d_0, n d_{1/2}), n = 1..N */
} kv_example;

typedef struct kv_theory kv_theory;
typedef struct kv_verdict kv_verdict;
typedef struct kv_history kv_history;

KELVIN_API const char* kv_version(void);
KELVIN_API const char* kv_status_name(kv_status status);
/* Diagnostic for the most recent failure on this thread; "" if none. */
KELVIN_API const char* kv_last_error(void);
KELVIN_API void kv_string_free(char* text);

/* Decimal rendering of a rational string, for display only. */
KELVIN_API kv_status kv_rational_approx(const char* rational, int digits, char** out);

/* ---- theories --------------------------------------------------------- */

KELVIN_API kv_status kv_theory_parse(const char* json, kv_theory** out);
KELVIN_API kv_status kv_theory_generate(kv_example example, int n, kv_theory** out);
/* Appends a process document ({"id","delta_m","q"}) as a new generator. */
KELVIN_API kv_status kv_theory_add_process(const kv_theory* theory, const char* process_json,
                                           kv_theory** out);
KELVIN_API kv_status kv_theory_to_json(const kv_theory* theory, char** out);
KELVIN_API size_t kv_theory_state_count(const kv_theory* theory);
KELVIN_API size_t kv_theory_process_count(const kv_theory* theory);
KELVIN_API void kv_theory_free(kv_theory* theory);

/* ---- Kelvin-Planck decision ------------------------------------------- */

KELVIN_API kv_status kv_check(const kv_theory* theory, kv_verdict** out);
/* 1 when compliant, 0 when violated. */
KELVIN_API int kv_verdict_is_compliant(const kv_verdict* verdict);
/* {"verdict": "compliant", "pair", "margin_report"} or
 * {"verdict": "violated", "certificate"}. */
KELVIN_API kv_status kv_verdict_to_json(const kv_verdict* verdict, char** out);
KELVIN_API void kv_verdict_free(kv_verdict* verdict);

/* Clausius-Duhem pair with eta zero at gauge_state (NULL: first state).
 * Returns KV_ERR_NOT_KELVIN_PLANCK when none exists; *out then holds the
 * violation certificate instead of a pair. */
KELVIN_API kv_status kv_synthesize(const kv_theory* theory, const char* gauge_state, char** out);

/* Verifies a pair document, a certificate document, or a report carrying
 * either under "result". *passed is 1 or 0; *out receives the per-process
 * margin report or the individual certificate checks. */
KELVIN_API kv_status kv_verify(const kv_theory* theory, const char* payload_json, int* passed,
                               char** out);

/* Direction analysis of the theory's processes taken as an ordered family. */
KELVIN_API kv_status kv_analyze(const kv_theory* family, char** out);

/* ---- body records ------------------------------------------------------ */

/* Pushforward of a body-process record onto the states of space_json.
 * Emits a process document, or a history document when as_history != 0. */
KELVIN_API kv_status kv_ingest(const char* record_json, const char* space_json, int as_history,
                               char** out);

/* ---- process histories ------------------------------------------------- */

KELVIN_API kv_status kv_history_parse(const char* json, kv_history** out);
KELVIN_API kv_status kv_history_to_json(const kv_history* history, char** out);
KELVIN_API kv_status kv_history_endpoint(const kv_history* history, char** out);
/* Process of the sub-interval [from, to]; both must be grid points. */
KELVIN_API kv_status kv_history_restrict(const kv_history* history, const char* from,
                                         const char* to, char** out);
KELVIN_API kv_status kv_history_compose(const kv_history* first, const kv_history* second,
                                        kv_history** out);
KELVIN_API kv_status kv_history_subdivide(const kv_history* history, unsigned long n,
                                          kv_history** out);
KELVIN_API kv_status kv_history_rational_sum(const kv_history* first, const kv_history* second,
                                             kv_history** out);
/* coefficients[i] are positive rational strings. *info (optional, may be
 * NULL) receives {"common_denominator", "replicas"}. */
KELVIN_API kv_status kv_history_conic(const kv_history* const* histories,
                                      const char* const* coefficients, size_t count,
                                      kv_history** out, char** info);
KELVIN_API void kv_history_free(kv_history* history);

#ifdef __cplusplus
}
#endif

#endif /* KELVIN_KELVIN_H_ */
