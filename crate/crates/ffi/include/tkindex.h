#ifndef TKINDEX_H
#define TKINDEX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Output formats for [`tk_run_problem`].
 */
typedef enum TkFormat {
  TK_FORMAT_JSON = 0,
  TK_FORMAT_TEXT = 1,
  TK_FORMAT_PRETTY = 2,
} TkFormat;

/**
 * Status codes returned by every fallible call.
 */
typedef enum TkStatus {
  TK_STATUS_OK = 0,
  TK_STATUS_NULL_POINTER = 1,
  TK_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed input (bad JSON, unknown names, out-of-range values).
   */
  TK_STATUS_PARSE = 3,
  /**
   * A computation was not possible (not summable, not periodic, ...).
   */
  TK_STATUS_COMPUTE = 4,
  /**
   * The engine panicked; this is a bug.
   */
  TK_STATUS_PANIC = 5,
} TkStatus;

/**
 * Membership verdicts.
 */
typedef enum TkVerdict {
  TK_VERDICT_PROVED_IN = 0,
  TK_VERDICT_PROVED_OUT = 1,
  TK_VERDICT_UNKNOWN = 2,
} TkVerdict;

typedef struct TkGenChar TkGenChar;

typedef struct TkGroup TkGroup;

typedef struct TkModule TkModule;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failing call on this thread, or NULL. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *tk_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *tk_version(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void tk_string_free(char *s);

/**
 * `ℤ^rank ⊕ ⊕ ℤ/torsion[i]`.
 *
 * # Safety
 * `torsion` must point to `n_torsion` values (or be NULL when zero) and
 * `out` must be writable.
 */
enum TkStatus tk_group_new(size_t rank,
                           const int64_t *torsion,
                           size_t n_torsion,
                           struct TkGroup **out);

/**
 * # Safety
 * `g` must be NULL or a live handle from [`tk_group_new`].
 */
void tk_group_free(struct TkGroup *g);

/**
 * A module with `n_weights` weights. `free` holds `n_weights × rank`
 * integers row by row and `torsion` holds `n_weights × (number of cyclic
 * factors)` residues (NULL when the group has none).
 *
 * # Safety
 * Pointers must be valid for the stated lengths; `out` must be writable.
 */
enum TkStatus tk_module_new(const struct TkGroup *group,
                            const int64_t *free,
                            const int64_t *torsion,
                            size_t n_weights,
                            size_t trivial_real_dim,
                            struct TkModule **out);

/**
 * # Safety
 * `m` must be NULL or a live module handle.
 */
void tk_module_free(struct TkModule *m);

/**
 * Index of the Thom class pushed by `β = num[i]/den[i]`.
 *
 * # Safety
 * `num` and `den` must hold `rank` values; `out` must be writable.
 */
enum TkStatus tk_index_thom(const struct TkModule *module,
                            const int64_t *num,
                            const int64_t *den,
                            struct TkGenChar **out);

/**
 * Index of the `k`-th enumerated flag generator.
 *
 * # Safety
 * `module` must be a live handle; `out` must be writable.
 */
enum TkStatus tk_index_flag(const struct TkModule *module, size_t k, struct TkGenChar **out);

/**
 * # Safety
 * `c` must be NULL or a live handle.
 */
void tk_genchar_free(struct TkGenChar *c);

/**
 * Exact coefficient at the weight `(free, torsion)`.
 *
 * # Safety
 * `free` must hold `rank` values and `torsion` one residue per cyclic
 * factor; `out` must be writable.
 */
enum TkStatus tk_genchar_coefficient(const struct TkGenChar *c,
                                     const int64_t *free,
                                     const int64_t *torsion,
                                     int64_t *out);

/**
 * The symbolic form as a JSON `literal` expression.
 *
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum TkStatus tk_genchar_to_json(const struct TkGenChar *c, char **out);

/**
 * Truncation to the box `[lo[i], hi[i]]` rendered as text
 * (`c * x^[..] + ...`).
 *
 * # Safety
 * `lo` and `hi` must hold `rank` values; `out` must be writable.
 */
enum TkStatus tk_genchar_truncate(const struct TkGenChar *c,
                                  const int64_t *lo,
                                  const int64_t *hi,
                                  char **out);

/**
 * Membership of `c` in the Dahmen–Micchelli module of `module`.
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum TkStatus tk_check_dm(const struct TkModule *module,
                          const struct TkGenChar *c,
                          enum TkVerdict *out);

/**
 * Membership of `c` in `𝓕_G(module)`.
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum TkStatus tk_check_f(const struct TkModule *module,
                         const struct TkGenChar *c,
                         enum TkVerdict *out);

/**
 * Runs every query of a problem document and returns the rendered output.
 * `exit_code_out` receives the code the command-line tool would exit with.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` and `exit_code_out` must be
 * writable.
 */
enum TkStatus tk_run_problem(const char *json,
                             enum TkFormat format,
                             char **out,
                             int32_t *exit_code_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TKINDEX_H */
