#ifndef TATE_H
#define TATE_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TateStatus {
  TATE_STATUS_OK = 0,
  TATE_STATUS_INVALID_INPUT = 1,
  TATE_STATUS_PRECISION = 2,
  TATE_STATUS_NULL_POINTER = 3,
  TATE_STATUS_PANIC = 4,
} TateStatus;

/**
 * Opaque lattice handle.
 */
typedef struct TateLattice TateLattice;

/**
 * Message for the last failed call on this thread, or NULL. Valid until the next call.
 */
const char *tate_last_error_message(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library.
 */
void tate_string_free(char *s);

/**
 * Parses a lattice from its JSON matrix over `F_q`; `prec` fills in entries without one.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` writable.
 */
enum TateStatus tate_lattice_from_json(uint64_t q,
                                       const char *json,
                                       int64_t prec,
                                       struct TateLattice **out);

/**
 * `t^shift k[[t]]^n` over `F_q`.
 *
 * # Safety
 * `out` must be writable.
 */
enum TateStatus tate_lattice_standard(uint64_t q,
                                      size_t n,
                                      int64_t shift,
                                      struct TateLattice **out);

/**
 * # Safety
 * `l` must be NULL or a handle from this library that is not used afterwards.
 */
void tate_lattice_free(struct TateLattice *l);

/**
 * # Safety
 * `a`, `b` must be valid handles and `out` writable.
 */
enum TateStatus tate_lattice_join(const struct TateLattice *a,
                                  const struct TateLattice *b,
                                  struct TateLattice **out);

/**
 * # Safety
 * `a`, `b` must be valid handles and `out` writable.
 */
enum TateStatus tate_lattice_meet(const struct TateLattice *a,
                                  const struct TateLattice *b,
                                  struct TateLattice **out);

/**
 * # Safety
 * `a`, `b` must be valid handles and `out` writable.
 */
enum TateStatus tate_lattice_leq(const struct TateLattice *a,
                                 const struct TateLattice *b,
                                 bool *out);

/**
 * Dimensions of `a/(a meet b)` and `b/(a meet b)`, and their difference.
 *
 * # Safety
 * `a`, `b` must be valid handles and the out-parameters writable.
 */
enum TateStatus tate_lattice_index(const struct TateLattice *a,
                                   const struct TateLattice *b,
                                   uint64_t *pos,
                                   uint64_t *neg,
                                   int64_t *net);

/**
 * # Safety
 * `l` must be a valid handle and `out` writable.
 */
enum TateStatus tate_lattice_to_json(const struct TateLattice *l, char **out);

/**
 * `h^0` and `h^1` of `O(d)` on the projective line over `F_q`.
 *
 * # Safety
 * `h0` and `h1` must be writable.
 */
enum TateStatus tate_adele_cohomology(uint64_t q,
                                      int64_t d,
                                      size_t max_degree,
                                      size_t window,
                                      size_t *h0,
                                      size_t *h1);

/**
 * Residues of `(num/den) d(g_num/g_den)` as the JSON document printed by `tate residue-sum`.
 *
 * # Safety
 * The polynomial arguments must be nul-terminated strings and `out` writable.
 */
enum TateStatus tate_residue_sum(uint64_t q,
                                 const char *num,
                                 const char *den,
                                 const char *g_num,
                                 const char *g_den,
                                 char **out);

#endif  /* TATE_H */
