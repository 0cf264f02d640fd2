#ifndef TORUS_TANGENCY_H
#define TORUS_TANGENCY_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status returned by every fallible call.
 */
typedef enum TtStatus {
  TT_STATUS_OK = 0,
  TT_STATUS_INTERNAL = 1,
  TT_STATUS_INVALID_INPUT = 2,
  TT_STATUS_TRANSLATE_OF_SUBTORUS = 3,
  TT_STATUS_UNCERTIFIED = 4,
  TT_STATUS_PRECISION_EXHAUSTED = 5,
  TT_STATUS_NULL_POINTER = 6,
} TtStatus;

/*
 Scan target selector for `tt_curve_scan`.
 */
typedef enum TtTarget {
  TT_TARGET_UNIT = 0,
  TT_TARGET_TORSION_UP_TO = 1,
  TT_TARGET_ANY_TRANSLATE = 2,
} TtTarget;

/*
 Opaque curve handle.
 */
typedef struct TtCurve TtCurve;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Parses a polynomial in x and y. On success `*out` owns a new handle.

 # Safety
 `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum TtStatus tt_curve_parse(const char *text, struct TtCurve **out);

/*
 Releases a handle from `tt_curve_parse`. Null is ignored.

 # Safety
 `c` must be null or a handle not yet freed.
 */
void tt_curve_free(struct TtCurve *c);

/*
 Total, x and y degrees of the curve.

 # Safety
 All pointers must be valid.
 */
enum TtStatus tt_curve_degree(const struct TtCurve *c, uint32_t *total, uint32_t *dx, uint32_t *dy);

/*
 Degrees, height and bounds as JSON.

 # Safety
 `c` must be a live handle and `out` a valid pointer.
 */
enum TtStatus tt_curve_analyze(const struct TtCurve *c, char **out);

/*
 Singular intersections for all slopes with max(|p|,|q|) <= `radius`.
 `order` is read only for `TorsionUpTo`.

 # Safety
 `c` must be a live handle and `out` a valid pointer.
 */
enum TtStatus tt_curve_scan(const struct TtCurve *c,
                            int64_t radius,
                            enum TtTarget target,
                            uint64_t order,
                            bool parallel,
                            char **out);

/*
 Slope exclusion report. Returns `Uncertified` with the report still
 written when an audit fails.

 # Safety
 `c` must be a live handle and `out` a valid pointer.
 */
enum TtStatus tt_curve_report(const struct TtCurve *c,
                              int64_t radius,
                              uint64_t order,
                              bool parallel,
                              char **out);

/*
 Singular points of the curve in the torus with their branch tangents.

 # Safety
 `c` must be a live handle and `out` a valid pointer.
 */
enum TtStatus tt_curve_singular(const struct TtCurve *c, char **out);

/*
 Frees a string returned through an `out` parameter. Null is ignored.

 # Safety
 `s` must be null or a string from this library not yet freed.
 */
void tt_string_free(char *s);

/*
 Message for the last failed call on this thread, or null. The pointer
 stays valid until the next call on the same thread.
 */
const char *tt_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TORUS_TANGENCY_H */
