#ifndef GL2ORBITS_H
#define GL2ORBITS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Groups with a closed-form construction.
 */
typedef enum Gl2NamedGroup {
  GL2_NAMED_GROUP_BOREL = 0,
  GL2_NAMED_GROUP_SPLIT_CARTAN = 1,
  GL2_NAMED_GROUP_NONSPLIT_CARTAN = 2,
  GL2_NAMED_GROUP_SCALARS = 3,
  GL2_NAMED_GROUP_UNIPOTENT = 4,
  GL2_NAMED_GROUP_TRIVIAL = 5,
} Gl2NamedGroup;

/**
 * Result codes.
 */
typedef enum Gl2Status {
  GL2_STATUS_OK = 0,
  GL2_STATUS_NULL_POINTER = 1,
  GL2_STATUS_INVALID_PRIME = 2,
  GL2_STATUS_INVALID_ARGUMENT = 3,
  GL2_STATUS_SINGULAR = 4,
  GL2_STATUS_NOT_UPPER_TRIANGULAR = 5,
  GL2_STATUS_NOT_SUBGROUP = 6,
  GL2_STATUS_INVALID_SCENARIO = 7,
  GL2_STATUS_CONFIG = 8,
  GL2_STATUS_VERIFICATION_FAILED = 9,
  GL2_STATUS_INTERNAL = 10,
} Gl2Status;

/**
 * Which branch of the upper-triangular trichotomy applies.
 */
typedef enum Gl2TrichotomyCase {
  GL2_TRICHOTOMY_CASE_REPEATED_EIGENVALUE = 1,
  GL2_TRICHOTOMY_CASE_NON_COMMUTATIVE = 2,
  GL2_TRICHOTOMY_CASE_DIAGONALIZABLE = 3,
} Gl2TrichotomyCase;

/**
 * Opaque handle to a finite subgroup of GL2(F_ell).
 */
typedef struct Gl2Group Gl2Group;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until
 * the next call into the library from the same thread.
 */
const char *gl2_last_error_message(void);

/**
 * Builds a named group at `ell`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
enum Gl2Status gl2_group_named(uint64_t ell, enum Gl2NamedGroup kind, struct Gl2Group **out);

/**
 * Closure of `count` generators given as row-major quadruples `a, b, c, d`.
 *
 * # Safety
 * `entries` must point to `4 * count` readable values (or be NULL when
 * `count` is 0); `out` must be writable.
 */
enum Gl2Status gl2_group_generate(uint64_t ell,
                                  const int64_t *entries,
                                  size_t count,
                                  struct Gl2Group **out);

/**
 * Releases a handle. NULL is ignored.
 *
 * # Safety
 * `group` must come from this library and not be used afterwards.
 */
void gl2_group_free(struct Gl2Group *group);

/**
 * # Safety
 * `group` must be a live handle and `out` writable.
 */
enum Gl2Status gl2_group_order(const struct Gl2Group *group, uint64_t *out);

/**
 * # Safety
 * `group` must be a live handle and `out` writable.
 */
enum Gl2Status gl2_group_contains(const struct Gl2Group *group,
                                  int64_t a,
                                  int64_t b,
                                  int64_t c,
                                  int64_t d,
                                  bool *out);

/**
 * Number of orbits of the group on the nonzero vectors.
 *
 * # Safety
 * `group` must be a live handle and `out` writable.
 */
enum Gl2Status gl2_group_orbit_count(const struct Gl2Group *group, uint64_t *out);

/**
 * Size of the orbit of the column vector `(x, y)`.
 *
 * # Safety
 * `group` must be a live handle and `out` writable.
 */
enum Gl2Status gl2_group_orbit_size(const struct Gl2Group *group,
                                    int64_t x,
                                    int64_t y,
                                    uint64_t *out);

/**
 * Group of diagonal parts of an upper-triangular group.
 *
 * # Safety
 * `group` must be a live handle and `out` writable.
 */
enum Gl2Status gl2_group_semisimplification(const struct Gl2Group *group, struct Gl2Group **out);

/**
 * Classifies an upper-triangular group; `contained` reports whether its
 * semisimplification is a subgroup of it.
 *
 * # Safety
 * `group` must be a live handle; `case_out` and `contained` writable.
 */
enum Gl2Status gl2_group_trichotomy(const struct Gl2Group *group,
                                    enum Gl2TrichotomyCase *case_out,
                                    bool *contained);

/**
 * Verifies the split-CM divisibility chain for `G` with CM image `G'`.
 * `passed` is set when every orbit size times `864·d` is divisible by
 * `ell − 1` and each intermediate step holds.
 *
 * # Safety
 * Both handles must be live; `passed` writable.
 */
enum Gl2Status gl2_verify_split_cm(const struct Gl2Group *g,
                                   const struct Gl2Group *gp,
                                   uint64_t d,
                                   bool *passed);

/**
 * Verifies the chain for a group whose semisimplification has scalar
 * sixth powers.
 *
 * # Safety
 * `g` must be live; `passed` writable.
 */
enum Gl2Status gl2_verify_scalar_sixth_powers(const struct Gl2Group *g, uint64_t d, bool *passed);

/**
 * Sets `holds` to whether `ell + 1 | 12·w·f`.
 *
 * # Safety
 * `holds` must be writable.
 */
enum Gl2Status gl2_inert_bound_check(uint64_t ell,
                                     uint64_t w,
                                     uint64_t f,
                                     uint64_t rho_order,
                                     bool *holds);

/**
 * Checks that the non-split Cartan acts simply transitively on nonzero vectors.
 *
 * # Safety
 * `holds` must be writable.
 */
enum Gl2Status gl2_nonsplit_orbit_check(uint64_t ell, bool *holds);

/**
 * Runs a sweep described by a JSON configuration and returns the JSON
 * report through `report_out` (free with `gl2_string_free`). Missing
 * fields take their defaults. Returns `VerificationFailed` when the sweep
 * completes with failures; the report is still written.
 *
 * # Safety
 * `config_json` must be a NUL-terminated string; `report_out` writable.
 */
enum Gl2Status gl2_sweep_run_json(const char *config_json, char **report_out);

/**
 * Releases a string returned by the library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void gl2_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GL2ORBITS_H */
