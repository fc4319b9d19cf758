#ifndef COMMITTEE_POWER_H
#define COMMITTEE_POWER_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum CpStatus {
  CP_STATUS_OK = 0,
  CP_STATUS_NULL_POINTER = 1,
  CP_STATUS_PARSE = 2,
  CP_STATUS_INVALID = 3,
  CP_STATUS_SHAPE = 4,
  CP_STATUS_SIZE_LIMIT = 5,
  CP_STATUS_OUT_OF_RANGE = 6,
  CP_STATUS_CONTRACT = 7,
  CP_STATUS_NOT_FOUND = 8,
  CP_STATUS_DEPENDENCY = 9,
  CP_STATUS_IO = 10,
  CP_STATUS_ENCODING = 11,
  CP_STATUS_BUFFER_TOO_SMALL = 12,
  CP_STATUS_PANIC = 13,
} CpStatus;

// Opaque committee handle.
typedef struct CpCommittee CpCommittee;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Committee with weights `weight_num[i] / weight_den[i]` under the scoring
// vector `(1, s_num / s_den, 0)`.
//
// # Safety
// The weight arrays hold `n` entries; `out` is writable.
enum CpStatus cp_committee_new(const int64_t *weight_num,
                               const int64_t *weight_den,
                               size_t n,
                               int64_t s_num,
                               int64_t s_den,
                               struct CpCommittee **out);

// Committee with an arbitrary scoring vector of length `m`.
//
// # Safety
// The weight arrays hold `n` entries, the score arrays `m`; `out` is writable.
enum CpStatus cp_committee_new_scores(const int64_t *weight_num,
                                      const int64_t *weight_den,
                                      size_t n,
                                      const int64_t *score_num,
                                      const int64_t *score_den,
                                      size_t m,
                                      struct CpCommittee **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `c` is null or a live handle not used afterwards.
void cp_committee_free(struct CpCommittee *c);

// Number of players, or 0 for a null handle.
//
// # Safety
// `c` is null or a live handle.
size_t cp_committee_players(const struct CpCommittee *c);

// Number of alternatives, or 0 for a null handle.
//
// # Safety
// `c` is null or a live handle.
size_t cp_committee_alternatives(const struct CpCommittee *c);

// Winner for a profile given as `n * m` alternative indices, one ranking
// per player from most to least preferred.
//
// # Safety
// `rankings` holds `len` entries; `winner_out` is writable.
enum CpStatus cp_winner(const struct CpCommittee *c,
                        const uint32_t *rankings,
                        size_t len,
                        size_t *winner_out);

// Swing counts per player and their common denominator. The power of
// player `i` is `swings_out[i] / *denominator_out`.
//
// # Safety
// `swings_out` has room for `capacity` values; `denominator_out` is writable.
enum CpStatus cp_power(const struct CpCommittee *c,
                       uint64_t *swings_out,
                       size_t capacity,
                       uint64_t *denominator_out);

// Number of structural classes of three-player weights under `(1, s, 0)`.
//
// # Safety
// `count_out` is writable.
enum CpStatus cp_class_count(int64_t s_num,
                             int64_t s_den,
                             uint32_t grid_denominator,
                             size_t *count_out);

// Renders the simplex map for `(1, s, 0)` to a PNG at `path`. A zero
// `enlarge_radius` disables widening of thin classes.
//
// # Safety
// `path` is a NUL-terminated UTF-8 string.
enum CpStatus cp_render(int64_t s_num,
                        int64_t s_den,
                        uint32_t grid_denominator,
                        uint32_t size,
                        uint32_t enlarge_radius,
                        const char *path);

// Message for the last failed call on this thread, or null. Valid until the
// next call into this library on the same thread.
const char *cp_last_error(void);

// Library version as a static NUL-terminated string.
const char *cp_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COMMITTEE_POWER_H */
