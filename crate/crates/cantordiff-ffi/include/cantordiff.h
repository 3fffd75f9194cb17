#ifndef CANTORDIFF_H
#define CANTORDIFF_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum CdStatus {
  CdStatus_Ok = 0,
  /**
   * Input text failed to parse or violated an invariant.
   */
  CdStatus_InvalidInput = 1,
  /**
   * A resource bound (cell depth, cap) was hit.
   */
  CdStatus_ResourceLimit = 2,
  /**
   * A required pointer argument was NULL.
   */
  CdStatus_NullArgument = 3,
  /**
   * Argument text was not valid UTF-8.
   */
  CdStatus_InvalidUtf8 = 4,
} CdStatus;

/**
 * Opaque element handle.
 */
typedef struct CdElement CdElement;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. The pointer is
 * valid until the next cantordiff call on the same thread.
 */
const char *cd_last_error(void);

/**
 * Parse an element from its textual grammar, e.g.
 * `n=2; 0->00, 10->01, 11->1`. The handle must be released with
 * `cd_element_free`.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string; `out` must be a valid
 * pointer.
 */
enum CdStatus cd_element_parse(const char *text, struct CdElement **out);

/**
 * Canonical text of an element; free the result with `cd_string_free`.
 *
 * # Safety
 * `element` must be a live handle from this library.
 */
enum CdStatus cd_element_format(const struct CdElement *element, char **out);

/**
 * # Safety
 * Both operands must be live handles.
 */
enum CdStatus cd_element_compose(const struct CdElement *g,
                                 const struct CdElement *f,
                                 uintptr_t max_cell_depth,
                                 struct CdElement **out);

/**
 * # Safety
 * `g` must be a live handle.
 */
enum CdStatus cd_element_inverse(const struct CdElement *g, struct CdElement **out);

/**
 * Apply an element to an address such as `0(1)`; returns the image
 * address.
 *
 * # Safety
 * `g` must be a live handle, `address` a valid string.
 */
enum CdStatus cd_element_apply(const struct CdElement *g, const char *address, char **out);

/**
 * Exact derivative at an address, rendered as `p/q`.
 *
 * # Safety
 * `g` must be a live handle, `address` a valid string.
 */
enum CdStatus cd_element_derivative(const struct CdElement *g, const char *address, char **out);

/**
 * Fixed-point set as a JSON string:
 * `{"clopen": "...", "isolated": [["0(1)", "1/3"], ...]}`.
 *
 * # Safety
 * `g` must be a live handle.
 */
enum CdStatus cd_element_fixed_points(const struct CdElement *g, char **out);

/**
 * Order of an element as a JSON string. `rounds` bounds the periodic
 * set stabilization; returns ResourceLimit when the order stays
 * unknown.
 *
 * # Safety
 * `g` must be a live handle.
 */
enum CdStatus cd_element_order(const struct CdElement *g,
                               uint32_t rounds,
                               uintptr_t max_cell_depth,
                               char **out);

/**
 * Verify a positive ping-pong certificate on clopen sets written in the
 * `{00, 01}` grammar; writes 1 (verified) or 0 to `out`.
 *
 * # Safety
 * Handles must be live, set texts valid strings.
 */
enum CdStatus cd_pingpong_verify(const struct CdElement *h1,
                                 const struct CdElement *h2,
                                 const char *set_a,
                                 const char *set_b,
                                 int32_t *out);

/**
 * Release an element handle. NULL is accepted.
 *
 * # Safety
 * `element` must be NULL or a handle from this library, not yet freed.
 */
void cd_element_free(struct CdElement *element);

/**
 * Release a string returned by this library. NULL is accepted.
 *
 * # Safety
 * `s` must be NULL or a string from this library, not yet freed.
 */
void cd_string_free(char *s);

/**
 * Stable check that the library is loaded; returns the crate version.
 */
const char *cd_version(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* CANTORDIFF_H */
