#ifndef SCHUBERT_H
#define SCHUBERT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every call.
 */
typedef enum {
  SCHUBERT_ERROR_CODE_OK = 0,
  SCHUBERT_ERROR_CODE_NULL_POINTER = 1,
  SCHUBERT_ERROR_CODE_INVALID_UTF8 = 2,
  SCHUBERT_ERROR_CODE_INVALID_INPUT = 3,
  SCHUBERT_ERROR_CODE_OVERFLOW = 4,
  SCHUBERT_ERROR_CODE_BUFFER_TOO_SMALL = 5,
  SCHUBERT_ERROR_CODE_INTERNAL = 6,
  SCHUBERT_ERROR_CODE_PANIC = 7,
} SchubertErrorCode;

/**
 * Criterion outcome.
 */
typedef enum {
  /**
   * Galois group at least alternating.
   */
  SCHUBERT_VERDICT_PASS = 0,
  /**
   * Pass, relying on asserted subproblems.
   */
  SCHUBERT_VERDICT_PASS_CONDITIONAL = 1,
  /**
   * The criterion does not apply.
   */
  SCHUBERT_VERDICT_FAIL = 2,
} SchubertVerdict;

/**
 * A parsed zero-dimensional Schubert problem.
 */
typedef struct SchubertProblemHandle SchubertProblemHandle;

/**
 * A choice tree built from a problem.
 */
typedef struct SchubertTreeHandle SchubertTreeHandle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses `conditions` such as `"(2,1)^2 (1)^3"` on `shape` such as `"G(3,6)"`.
 *
 * # Safety
 * `shape` and `conditions` must be NUL-terminated strings; `out` must be
 * writable.
 */
SchubertErrorCode schubert_problem_parse(const char *shape,
                                         const char *conditions,
                                         SchubertProblemHandle **out_problem);

/**
 * Releases a problem. Null is ignored.
 *
 * # Safety
 * `problem` must come from [`schubert_problem_parse`] and not be used again.
 */
void schubert_problem_free(SchubertProblemHandle *problem);

/**
 * Writes the canonical text form of a problem.
 *
 * # Safety
 * `buf` must hold `len` bytes; `needed` may be null.
 */
SchubertErrorCode schubert_problem_text(const SchubertProblemHandle *problem,
                                        char *buf,
                                        size_t len,
                                        size_t *needed);

/**
 * Number of solutions; `Overflow` if it exceeds 64 bits.
 *
 * # Safety
 * `problem` must be a live handle; `degree` must be writable.
 */
SchubertErrorCode schubert_problem_degree(const SchubertProblemHandle *problem, uint64_t *degree);

/**
 * Number of solutions in decimal, without size limit.
 *
 * # Safety
 * `buf` must hold `len` bytes; `needed` may be null.
 */
SchubertErrorCode schubert_problem_degree_text(const SchubertProblemHandle *problem,
                                               char *buf,
                                               size_t len,
                                               size_t *needed);

/**
 * Runs the criterion with the adaptive tree policy and no assertions.
 *
 * # Safety
 * `problem` must be a live handle; `verdict` must be writable.
 */
SchubertErrorCode schubert_problem_criterion(const SchubertProblemHandle *problem,
                                             SchubertVerdict *verdict);

/**
 * Littlewood-Richardson coefficient `c^gamma_{alpha,beta}` on `shape`.
 *
 * # Safety
 * All strings must be NUL-terminated; `coefficient` must be writable.
 */
SchubertErrorCode schubert_lr_coefficient(const char *shape,
                                          const char *alpha,
                                          const char *beta,
                                          const char *gamma,
                                          uint64_t *coefficient);

/**
 * Builds the choice tree of a problem with the default vertex budget.
 *
 * # Safety
 * `problem` must be a live handle; `out_tree` must be writable.
 */
SchubertErrorCode schubert_tree_build(const SchubertProblemHandle *problem,
                                      SchubertTreeHandle **out_tree);

/**
 * Releases a tree. Null is ignored.
 *
 * # Safety
 * `tree` must come from [`schubert_tree_build`] and not be used again.
 */
void schubert_tree_free(SchubertTreeHandle *tree);

/**
 * Leaf and vertex counts of a tree.
 *
 * # Safety
 * `tree` must be a live handle; either output may be null.
 */
SchubertErrorCode schubert_tree_counts(const SchubertTreeHandle *tree,
                                       uint64_t *leaves,
                                       uint64_t *vertices);

/**
 * Copies the last error message of this thread; empty after a success.
 * Returns the length including the NUL, whether or not it fit.
 *
 * # Safety
 * `buf` must hold `len` bytes or be null.
 */
size_t schubert_last_error_message(char *buf, size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SCHUBERT_H */
