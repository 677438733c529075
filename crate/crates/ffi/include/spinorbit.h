#ifndef SPINORBIT_H
#define SPINORBIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every exported function.
typedef enum SpinorbitStatus {
  SPINORBIT_STATUS_OK = 0,
  SPINORBIT_STATUS_NULL_POINTER = 1,
  SPINORBIT_STATUS_INVALID_UTF8 = 2,
  SPINORBIT_STATUS_PARSE = 3,
  SPINORBIT_STATUS_DIMENSION_MISMATCH = 4,
  SPINORBIT_STATUS_UNKNOWN_KEY = 5,
  SPINORBIT_STATUS_MISSING_PARAMETER = 6,
  SPINORBIT_STATUS_DOMAIN = 7,
  SPINORBIT_STATUS_UNKNOWN_SUITE = 8,
  SPINORBIT_STATUS_INTERNAL = 9,
} SpinorbitStatus;

// Spin-orbit branch: `j = l + ½` or `j = l − ½`.
typedef enum SpinorbitBranch {
  SPINORBIT_BRANCH_PLUS = 0,
  SPINORBIT_BRANCH_MINUS = 1,
} SpinorbitBranch;

// Opaque operator handle.
typedef struct SpinorbitElement SpinorbitElement;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or NULL. Valid until the
// next failing call on the same thread; do not free.
const char *spinorbit_last_error(void);

// Parse the multi-line or one-line text form of an element.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
enum SpinorbitStatus spinorbit_element_parse(const char *text, struct SpinorbitElement **out);

// Multi-line text form; free with `spinorbit_string_free`.
//
// # Safety
// `e` must be a live handle; `out` must be writable.
enum SpinorbitStatus spinorbit_element_to_string(const struct SpinorbitElement *e, char **out);

// Release a handle; NULL is ignored.
//
// # Safety
// `e` must come from this library and not be used afterwards.
void spinorbit_element_free(struct SpinorbitElement *e);

// Release a string returned by this library; NULL is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void spinorbit_string_free(char *s);

// Normally ordered product `a · b`.
//
// # Safety
// `a`, `b` must be live handles; `out` must be writable.
enum SpinorbitStatus spinorbit_element_mul(const struct SpinorbitElement *a,
                                           const struct SpinorbitElement *b,
                                           struct SpinorbitElement **out);

// `[a, b] = ab − ba`
//
// # Safety
// `a`, `b` must be live handles; `out` must be writable.
enum SpinorbitStatus spinorbit_element_commutator(const struct SpinorbitElement *a,
                                                  const struct SpinorbitElement *b,
                                                  struct SpinorbitElement **out);

// Formal adjoint.
//
// # Safety
// `a` must be a live handle; `out` must be writable.
enum SpinorbitStatus spinorbit_element_adjoint(const struct SpinorbitElement *a,
                                               struct SpinorbitElement **out);

// Writes 1 if `a` is the zero operator, else 0.
//
// # Safety
// `a` must be a live handle; `out` must be writable.
enum SpinorbitStatus spinorbit_element_is_zero(const struct SpinorbitElement *a, int32_t *out);

// Substitute rational parameters given as `"hbar=1/2,gamma=3"`.
//
// # Safety
// `a` must be a live handle, `bindings` NUL-terminated, `out` writable.
enum SpinorbitStatus spinorbit_element_substitute(const struct SpinorbitElement *a,
                                                  const char *bindings,
                                                  struct SpinorbitElement **out);

// Build a catalog operator from a key such as `"X_1"` or
// `"A2M_RAW[hbar=1,gamma=1/2,m=0]"`.
//
// # Safety
// `key` must be NUL-terminated; `out` must be writable.
enum SpinorbitStatus spinorbit_catalog_build(const char *key, struct SpinorbitElement **out);

// Run one suite; writes the JSON report (free with
// `spinorbit_string_free`) and 1 or 0 to `pass_out`.
//
// # Safety
// `suite` must be NUL-terminated; `json_out`, `pass_out` writable.
enum SpinorbitStatus spinorbit_verify_suite(const char *suite, char **json_out, int32_t *pass_out);

// Closed-form bound energy `−α²/(2ħ²N²)` of level `(n, 2j, branch)`.
//
// # Safety
// `out` must be writable.
enum SpinorbitStatus spinorbit_closed_form_energy(uint32_t n,
                                                  uint32_t two_j,
                                                  enum SpinorbitBranch branch,
                                                  double hbar,
                                                  double alpha,
                                                  double gamma,
                                                  double *out);

// Richardson-extrapolated finite-difference energy of level `n` in the
// `(branch, l)` sector on `points` and `2·points` cells.
//
// # Safety
// `out` must be writable.
enum SpinorbitStatus spinorbit_fd_level(enum SpinorbitBranch branch,
                                        uint32_t l,
                                        uint32_t n,
                                        double hbar,
                                        double alpha,
                                        double gamma,
                                        size_t points,
                                        double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPINORBIT_H */
