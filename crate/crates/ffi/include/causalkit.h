#ifndef CAUSALKIT_H
#define CAUSALKIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CkStatus {
  CK_OK = 0,
  CK_NULL_POINTER = 1,
  CK_INVALID_UTF8 = 2,
  CK_PARSE = 3,
  CK_INVALID = 4,
  CK_DIMENSION = 5,
  CK_TOO_LARGE = 6,
  CK_INCONSISTENT = 7,
  CK_PROMISE_VIOLATION = 8,
  CK_UNKNOWN = 9,
  CK_PANIC = 10,
} CkStatus;

typedef struct CkGame CkGame;

typedef struct CkMatrix CkMatrix;

typedef struct CkProcess CkProcess;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after success.
const char *ck_last_error(void);

// Library version as a static string.
const char *ck_version(void);

// # Safety
// `s` must come from this library or be null.
void ck_string_free(char *s);

// Parses a classical process in the text format.
//
// # Safety
// `text` must be a nul-terminated string; `out` must be writable.
enum CkStatus ck_process_from_text(const char *text, struct CkProcess **out);

// # Safety
// `name` must be a nul-terminated string; `out` must be writable.
enum CkStatus ck_process_preset(const char *name, struct CkProcess **out);

// # Safety
// `p` must come from this library or be null, and not be used afterwards.
void ck_process_free(struct CkProcess *p);

// # Safety
// `p` must be a live handle; `out` must be writable.
enum CkStatus ck_process_is_consistent(const struct CkProcess *p, uint64_t cap, bool *out);

// Writes true for a causal process, false for a non-causal one.
//
// # Safety
// `p` must be a live handle; `out` must be writable.
enum CkStatus ck_process_classify(const struct CkProcess *p, uint64_t cap, bool *out_causal);

// # Safety
// `name` must be a nul-terminated string; `out` must be writable.
enum CkStatus ck_game_preset(const char *name, struct CkGame **out);

// # Safety
// `text` must be a nul-terminated string; `out` must be writable.
enum CkStatus ck_game_from_text(const char *text, struct CkGame **out);

// # Safety
// `g` must come from this library or be null, and not be used afterwards.
void ck_game_free(struct CkGame *g);

// Causal bound as an exact `p/q` string.
//
// # Safety
// `g` must be a live handle; `out` must be writable.
enum CkStatus ck_game_bound(const struct CkGame *g, uint64_t cap, char **out);

// Success probability of a named strategy preset on a process, as `p/q`.
//
// # Safety
// Handles must be live; `strategy` nul-terminated; `out` writable.
enum CkStatus ck_game_play(const struct CkGame *g,
                           const struct CkProcess *p,
                           const char *strategy,
                           char **out);

// # Safety
// `name` must be a nul-terminated string; `out` must be writable.
enum CkStatus ck_matrix_preset(const char *name, struct CkMatrix **out);

// # Safety
// `text` must be a nul-terminated string; `out` must be writable.
enum CkStatus ck_matrix_from_text(const char *text, struct CkMatrix **out);

// # Safety
// `w` must come from this library or be null, and not be used afterwards.
void ck_matrix_free(struct CkMatrix *w);

// # Safety
// `w` must be a live handle; `out` must be writable.
enum CkStatus ck_matrix_validate(const struct CkMatrix *w, double epsilon, bool *out);

// # Safety
// `out` must be writable.
enum CkStatus ck_ocb_value(double epsilon, double *out);

// Commute (0) or anticommute (1) test with one use of each unitary. Each
// unitary is 8 doubles: row-major entries as (re, im) pairs.
//
// # Safety
// `b` and `c` must point to 8 doubles; `out` must be writable.
enum CkStatus ck_commute_test(const double *b, const double *c, double epsilon, uint32_t *out);

// Fixed point of the box `i -> table[i]` with one query.
//
// # Safety
// `table` must point to `n` values; outputs must be writable.
enum CkStatus ck_fixed_point_search(const size_t *table,
                                    size_t n,
                                    uint64_t cap,
                                    size_t *out_value,
                                    uint64_t *out_queries);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CAUSALKIT_H */
