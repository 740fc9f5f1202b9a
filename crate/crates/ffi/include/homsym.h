/* C interface for the homsym isometry-analysis toolkit. */

#ifndef HOMSYM_H
#define HOMSYM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible entry point.
typedef enum HsStatus {
  HS_STATUS_OK = 0,
  HS_STATUS_VERIFICATION_FAILED = 1,
  HS_STATUS_INVALID_INPUT = 2,
  HS_STATUS_INTERNAL_ERROR = 3,
} HsStatus;

// Opaque analysis result.
typedef struct HsAnalysis HsAnalysis;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Analyze a catalog type on its pattern-generic metric.
//
// `type_name` is one of `I..IX`; `q` is an optional rational string (may
// be null) required exactly for types VI and VII.
//
// # Safety
// `type_name` must be a valid NUL-terminated string, `q` null or the
// same, and `out` a valid location for one pointer.
enum HsStatus hs_analyze_type(const char *type_name,
                              const char *q,
                              bool symbolic,
                              uint64_t seed,
                              struct HsAnalysis **out);

// Analyze custom structure constants given in the JSON file format
// (`{"n": ..., "entries": [{"A":..,"B":..,"C":..,"value":".."}]}`), on
// the fully generic symmetric metric.
//
// # Safety
// `constants_json` must be a valid NUL-terminated string and `out` a
// valid location for one pointer.
enum HsStatus hs_analyze_constants_json(const char *constants_json,
                                        bool symbolic,
                                        uint64_t seed,
                                        struct HsAnalysis **out);

// Borrowed pointer to the full JSON report; valid until the handle is
// freed. Null if the handle is null.
//
// # Safety
// `a` must be null or a live handle from an `hs_analyze_*` call.
const char *hs_analysis_json(const struct HsAnalysis *a);

// Total isometry-algebra dimension, or -1 on a null handle.
//
// # Safety
// `a` must be null or a live handle.
int32_t hs_analysis_d_total(const struct HsAnalysis *a);

// Count of induced Killing fields beyond homogeneity, or -1 on null.
//
// # Safety
// `a` must be null or a live handle.
int32_t hs_analysis_extra_count(const struct HsAnalysis *a);

// Rank of the inner gauge action on the metric, or -1 on null.
//
// # Safety
// `a` must be null or a live handle.
int32_t hs_analysis_gauge_rank(const struct HsAnalysis *a);

// Dimension of the inner automorphism algebra, or -1 on null.
//
// # Safety
// `a` must be null or a live handle.
int32_t hs_analysis_inner_dim(const struct HsAnalysis *a);

// Release a handle. Null is a no-op.
//
// # Safety
// `a` must be null or a live handle; it must not be used afterwards.
void hs_analysis_free(struct HsAnalysis *a);

// Crate version as a static string.
const char *hs_version(void);

// Static description of a status code.
const char *hs_status_message(enum HsStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HOMSYM_H */
