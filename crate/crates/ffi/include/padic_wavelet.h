#ifndef PADIC_WAVELET_H
#define PADIC_WAVELET_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Hadamard gate choice for [`pw_qudit_hadamard`].
 */
typedef enum PwHadamard {
  /**
   * Phases `ω^(xy)`; unitary for every p.
   */
  PW_HADAMARD_FOURIER = 0,
  /**
   * Signs `(-1)^(xy mod p)`; unitary only for p = 2.
   */
  PW_HADAMARD_SIGN = 1,
} PwHadamard;

/**
 * Result code of every fallible call.
 */
typedef enum PwStatus {
  PW_STATUS_OK = 0,
  PW_STATUS_NULL_POINTER = 1,
  PW_STATUS_INVALID_ARGUMENT = 2,
  /**
   * A numeric precondition failed: unnormalized state, exhausted precision
   * or insufficient resolution.
   */
  PW_STATUS_NUMERIC = 3,
  PW_STATUS_BUFFER_TOO_SMALL = 4,
  PW_STATUS_PANIC = 5,
} PwStatus;

/**
 * A p-adic number at fixed precision.
 */
typedef struct PwPadic PwPadic;

/**
 * A register of qudits. Amplitudes are indexed big-endian.
 */
typedef struct PwQudit PwQudit;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer stays
 * valid until the next call into this library on the same thread.
 */
const char *pw_last_error(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void pw_string_free(char *s);

/**
 * `numerator / denominator` in Q_p with `precision` significant digits.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum PwStatus pw_padic_from_rational(int64_t numerator,
                                     int64_t denominator,
                                     uint32_t p,
                                     size_t precision,
                                     struct PwPadic **out);

/**
 * Parses the display form, e.g. `…2 1 . 0 (base 3, val -1)`.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a valid pointer.
 */
enum PwStatus pw_padic_parse(const char *text, struct PwPadic **out);

/**
 * Releases a p-adic handle. NULL is ignored.
 *
 * # Safety
 * `x` must come from this library and not have been freed.
 */
void pw_padic_free(struct PwPadic *x);

/**
 * `a + b` with precision `min(P(a), P(b))`.
 *
 * # Safety
 * All pointers must be valid.
 */
enum PwStatus pw_padic_add(const struct PwPadic *a, const struct PwPadic *b, struct PwPadic **out);

/**
 * `a - b`.
 *
 * # Safety
 * All pointers must be valid.
 */
enum PwStatus pw_padic_sub(const struct PwPadic *a, const struct PwPadic *b, struct PwPadic **out);

/**
 * `a · b`.
 *
 * # Safety
 * All pointers must be valid.
 */
enum PwStatus pw_padic_mul(const struct PwPadic *a, const struct PwPadic *b, struct PwPadic **out);

/**
 * Valuation `ord_p(x)`; `INT64_MAX` for zero.
 *
 * # Safety
 * All pointers must be valid.
 */
enum PwStatus pw_padic_valuation(const struct PwPadic *x, int64_t *out);

/**
 * Absolute precision: the number is known modulo `p^out`.
 *
 * # Safety
 * All pointers must be valid.
 */
enum PwStatus pw_padic_absolute_precision(const struct PwPadic *x, int64_t *out);

/**
 * Norm `|x|_p` as a double.
 *
 * # Safety
 * All pointers must be valid.
 */
enum PwStatus pw_padic_norm(const struct PwPadic *x, double *out);

/**
 * Additive character `exp(2πi {x}_p)`.
 *
 * # Safety
 * All pointers must be valid.
 */
enum PwStatus pw_padic_character(const struct PwPadic *x, double *re, double *im);

/**
 * Display form of `x`. Release with [`pw_string_free`].
 *
 * # Safety
 * All pointers must be valid.
 */
enum PwStatus pw_padic_to_string(const struct PwPadic *x, char **out);

/**
 * Real Haar pyramid of `len` samples over `depth` levels. `out` receives `len`
 * values: the coarse level, then the detail levels finest first.
 *
 * # Safety
 * `signal` and `out` must point to `len` doubles.
 */
enum PwStatus pw_haar_forward(const double *signal, size_t len, size_t depth, double *out);

/**
 * Inverse of [`pw_haar_forward`] with the same layout.
 *
 * # Safety
 * `coefficients` and `out` must point to `len` doubles.
 */
enum PwStatus pw_haar_inverse(const double *coefficients, size_t len, size_t depth, double *out);

/**
 * Relative residual `max |D^α ψ - p^α ψ| / max |ψ|` of the Kozyrev wavelet on
 * the window of support exponent `support` and resolution `resolution`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum PwStatus pw_kozyrev_residual(uint32_t p,
                                  double alpha,
                                  int32_t support,
                                  int32_t resolution,
                                  double *out);

/**
 * Basis register `|digits⟩` of `n` qudits with `p` levels, most significant
 * digit first. `digits` may be NULL for `|0…0⟩`.
 *
 * # Safety
 * `digits` must be NULL or point to `n` values; `out` must be valid.
 */
enum PwStatus pw_qudit_new(uint32_t p, size_t n, const uint32_t *digits, struct PwQudit **out);

/**
 * Releases a register handle. NULL is ignored.
 *
 * # Safety
 * `reg` must come from this library and not have been freed.
 */
void pw_qudit_free(struct PwQudit *reg);

/**
 * Number of amplitudes `p^n`, or 0 for NULL.
 *
 * # Safety
 * `reg` must be NULL or valid.
 */
size_t pw_qudit_len(const struct PwQudit *reg);

/**
 * Squared norm of the register.
 *
 * # Safety
 * All pointers must be valid.
 */
enum PwStatus pw_qudit_squared_norm(const struct PwQudit *reg, double *out);

/**
 * Applies a Hadamard gate to qudit `pos` in place.
 *
 * # Safety
 * `reg` must be valid.
 */
enum PwStatus pw_qudit_hadamard(struct PwQudit *reg, size_t pos, enum PwHadamard variant);

/**
 * `|x⟩|s⟩ ↦ |x⟩|s + f(x)⟩` on qudits `xpos` and `spos`, with `f` given by a
 * table of `p` values.
 *
 * # Safety
 * `reg` must be valid and `table` must point to `table_len` values.
 */
enum PwStatus pw_qudit_uf(struct PwQudit *reg,
                          size_t xpos,
                          size_t spos,
                          const uint32_t *table,
                          size_t table_len);

/**
 * Quantum Fourier transform on the whole register, in place.
 *
 * # Safety
 * `reg` must be valid.
 */
enum PwStatus pw_qudit_qft(struct PwQudit *reg);

/**
 * Copies the amplitudes into `re` and `im`, each of capacity `len`.
 *
 * # Safety
 * `re` and `im` must point to `len` doubles.
 */
enum PwStatus pw_qudit_amplitudes(const struct PwQudit *reg, double *re, double *im, size_t len);

/**
 * Samples `shots` computational-basis outcomes with a seeded generator and
 * writes the count of each basis index into `counts` (capacity `len`). The
 * register is left unchanged.
 *
 * # Safety
 * `counts` must point to `len` values.
 */
enum PwStatus pw_qudit_measure(const struct PwQudit *reg,
                               uint64_t shots,
                               uint64_t seed,
                               uint64_t *counts,
                               size_t len);

/**
 * SVG of the depth-`depth` partition for `branching`, optionally highlighting
 * the cell with the given address. Release with [`pw_string_free`].
 *
 * # Safety
 * `highlight` must be NULL or point to `highlight_len` values; `out` must be valid.
 */
enum PwStatus pw_simplex_svg(uint32_t branching,
                             size_t depth,
                             const uint32_t *highlight,
                             size_t highlight_len,
                             char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PADIC_WAVELET_H */
