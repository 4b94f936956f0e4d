#ifndef KWALG_H
#define KWALG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Which identities `kw_verify` checks.
typedef enum KwCheck {
  KW_CHECK_COURANT = 0,
  KW_CHECK_CLOSURE = 1,
  KW_CHECK_FILIPPOV = 2,
} KwCheck;

// Result of every call.
typedef enum KwStatus {
  KW_STATUS_OK = 0,
  // A verification ran and found a failing case.
  KW_STATUS_VERIFICATION_FAILED = 1,
  KW_STATUS_NULL_POINTER = 2,
  KW_STATUS_INVALID_UTF8 = 3,
  KW_STATUS_SYNTAX_ERROR = 4,
  KW_STATUS_INDEX_OUT_OF_RANGE = 5,
  KW_STATUS_INVALID_BUNDLE = 6,
  // Operands on different bundles.
  KW_STATUS_BUNDLE_MISMATCH = 7,
  // Wrong degree, arity or argument kind.
  KW_STATUS_INVALID_ARGUMENT = 8,
  KW_STATUS_PANIC = 9,
} KwStatus;

// A vector bundle with its metric.
typedef struct KwBundle KwBundle;

// An element of the graded Poisson algebra.
typedef struct KwElement KwElement;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread; empty after a success.
// Valid until the next call on the same thread.
const char *kw_last_error(void);

// Identity metric on a bundle of rank `r` over `d` base coordinates.
enum KwStatus kw_bundle_identity(size_t d, size_t r, struct KwBundle **out);

// Split metric of rank `2d` over `d` base coordinates.
enum KwStatus kw_bundle_split(size_t d, struct KwBundle **out);

// Parses a bundle file (`d = ..`, `r = ..`, `g = [..]`).
enum KwStatus kw_bundle_parse(const char *text, struct KwBundle **out);

void kw_bundle_free(struct KwBundle *bundle);

// Parses an expression such as `-1/2*x1*xi1*xi2 + p1` on `bundle`.
enum KwStatus kw_element_parse(const struct KwBundle *bundle,
                               const char *text,
                               struct KwElement **out);

void kw_element_free(struct KwElement *element);

// Canonical text of an element; release with `kw_string_free`.
enum KwStatus kw_element_render(const struct KwElement *element, char **out);

// 1 when the elements are equal, 0 otherwise or on null handles.
int32_t kw_element_equal(const struct KwElement *a, const struct KwElement *b);

void kw_string_free(char *s);

// The Poisson bracket `{a, b}`.
enum KwStatus kw_pbracket(const struct KwElement *a,
                          const struct KwElement *b,
                          struct KwElement **out);

// Generator of the bracket of the brackets generated by `a` and `b`.
enum KwStatus kw_bracket(const struct KwElement *a,
                         const struct KwElement *b,
                         struct KwElement **out);

// Generator of the wedge product of the brackets generated by `a` and `b`.
enum KwStatus kw_wedge(const struct KwElement *a,
                       const struct KwElement *b,
                       struct KwElement **out);

// The bracket generated by `theta` of degree `n` on `n - 1` sections.
enum KwStatus kw_eval(const struct KwElement *theta,
                      const struct KwElement *const *args,
                      size_t nargs,
                      struct KwElement **out);

// Checks `which` for the bracket generated by `theta` on tuples of total
// x-degree at most `degree_bound`. Returns `KW_STATUS_OK` when every check
// passes and `KW_STATUS_VERIFICATION_FAILED` otherwise; in both cases
// `report` receives one `CHECK ..` line per check (release with
// `kw_string_free`). `report` may be null.
enum KwStatus kw_verify(const struct KwElement *theta,
                        enum KwCheck which,
                        uint32_t degree_bound,
                        char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KWALG_H */
