#ifndef RENA_H
#define RENA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Expression class selector.
 */
typedef enum {
  /**
   * All expressions.
   */
  RENA_CLASS_RE = 0,
  /**
   * Expressions avoiding the absorbing pattern inside unions.
   */
  RENA_CLASS_RENA = 1,
} RenaClass;

/**
 * Result of every fallible call.
 */
typedef enum {
  /**
   * Success.
   */
  RENA_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  RENA_STATUS_NULL_ARGUMENT = 1,
  /**
   * An argument was out of range for the operation.
   */
  RENA_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The expression text did not parse.
   */
  RENA_STATUS_PARSE_ERROR = 3,
  /**
   * Numeric analysis failed to converge or was queried out of domain.
   */
  RENA_STATUS_NUMERIC_ERROR = 4,
  /**
   * The caller-provided buffer is too small (see the `written` hint).
   */
  RENA_STATUS_BUFFER_TOO_SMALL = 5,
  /**
   * Text was not valid UTF-8.
   */
  RENA_STATUS_INVALID_UTF8 = 6,
  /**
   * A panic was caught at the boundary; state is unchanged.
   */
  RENA_STATUS_INTERNAL_ERROR = 7,
} RenaStatus;

/**
 * Exact coefficient tables for one alphabet size (opaque).
 */
typedef struct RenaCoeffTable RenaCoeffTable;

/**
 * Exact-uniform expression sampler (opaque).
 */
typedef struct RenaSampler RenaSampler;

/**
 * Size measures and class predicates of one expression.
 */
typedef struct {
  /**
   * Number of symbols, parentheses disregarded.
   */
  uint64_t tree_size;
  /**
   * Number of letter occurrences.
   */
  uint64_t alphabetic_size;
  /**
   * 1 when the empty word is in the language.
   */
  uint8_t nullable;
  /**
   * 1 when no union operand is a full-alphabet starred union.
   */
  uint8_t in_restricted_class;
} RenaExprInfo;

/**
 * The counting functions of one expression.
 */
typedef struct {
  /**
   * |First|
   */
  uint64_t first;
  /**
   * |Last|
   */
  uint64_t last;
  /**
   * |Follow|
   */
  uint64_t follow;
  /**
   * |Follow ∪ Last×First|
   */
  uint64_t star_follow;
  /**
   * Glushkov transition count, first + follow.
   */
  uint64_t transitions;
} RenaCountFunctions;

/**
 * One row of the singularity analysis.
 */
typedef struct {
  uint32_t k;
  /**
   * Singularity of the unrestricted class, 1/(1+√(8+8k)).
   */
  double rho;
  /**
   * Dominant singularity of the restricted class.
   */
  double eta;
  /**
   * −η Δ'(η).
   */
  double psi;
  /**
   * g(η) of the letters closed form.
   */
  double g;
  /**
   * Asymptotic letters-per-size ratio.
   */
  double letters_ratio;
  /**
   * Asymptotic transitions-per-size slope.
   */
  double lambda;
  /**
   * Scaled residual |Δ(η)| of the root refinement.
   */
  double residual;
} RenaTheoryRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Version of the library as a static string; do not free.
 */
const char *rena_version(void);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must have been returned by a rena function and not freed before.
 */
void rena_string_free(char *s);

/**
 * Build every counting series to order `n_max` for a `k`-letter alphabet.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
RenaStatus rena_coeff_table_new(uint32_t k, size_t n_max, RenaCoeffTable **out);

/**
 * # Safety
 * `t` must come from [`rena_coeff_table_new`] and not be freed twice.
 */
void rena_coeff_table_free(RenaCoeffTable *t);

/**
 * Write the decimal digits of one coefficient into `buf`.
 *
 * `series` is one of `B`, `R`, `R_P`, `R_eps`, `R_eps_bar`, `L`, `P`, `F`,
 * `F_P`, `S`, `E`, `E_star`, `E_P`, `E_star_P`, `T`. On success `written`
 * receives the length excluding the NUL terminator; on
 * `RenaStatus::BufferTooSmall` it receives the required buffer size.
 *
 * # Safety
 * `t`, `series`, `buf` and `written` must be valid; `buf` must have room
 * for `buf_len` bytes.
 */
RenaStatus rena_coeff_decimal(const RenaCoeffTable *t,
                              const char *series,
                              size_t n,
                              char *buf,
                              size_t buf_len,
                              size_t *written);

/**
 * The whole table as the JSON document (decimal-string coefficients).
 *
 * # Safety
 * `t` and `out` must be valid; free the string with [`rena_string_free`].
 */
RenaStatus rena_coeff_table_json(const RenaCoeffTable *t, char **out);

/**
 * Parse an expression and report its measures and class membership.
 *
 * # Safety
 * `text` and `out` must be valid pointers.
 */
RenaStatus rena_expr_info(const char *text, uint32_t k, RenaExprInfo *out);

/**
 * Counting functions of a parsed expression (never builds the sets).
 *
 * # Safety
 * `text` and `out` must be valid pointers.
 */
RenaStatus rena_count_functions(const char *text, uint32_t k, RenaCountFunctions *out);

/**
 * Position automaton of an expression as a JSON document
 * `{states, transitions: [[src, letter, dst]], finals, counts}`.
 *
 * # Safety
 * `text` and `out` must be valid; free the string with [`rena_string_free`].
 */
RenaStatus rena_glushkov_json(const char *text, uint32_t k, char **out);

/**
 * Create an exact-uniform sampler for `(k, n, class)`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
RenaStatus rena_sampler_new(uint32_t k, size_t n, RenaClass class_, RenaSampler **out);

/**
 * # Safety
 * `s` must come from [`rena_sampler_new`] and not be freed twice.
 */
void rena_sampler_free(RenaSampler *s);

/**
 * Draw item `index` of the batch identified by `seed`, as canonical text.
 * Deterministic in `(seed, index)` regardless of call order.
 *
 * # Safety
 * `s` and `out` must be valid; free the string with [`rena_string_free`].
 */
RenaStatus rena_sample_text(const RenaSampler *s, uint64_t seed, uint64_t index, char **out);

/**
 * Solve the singularity analysis for one alphabet size.
 * `precision_digits = 0` selects the default working precision.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
RenaStatus rena_theory_row(uint32_t k, size_t precision_digits, RenaTheoryRow *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RENA_H */
