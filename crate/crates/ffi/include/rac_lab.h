#ifndef RAC_LAB_H
#define RAC_LAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result code of every fallible call.
 */
typedef enum RacStatus {
  RAC_STATUS_OK = 0,
  RAC_STATUS_NULL_POINTER = 1,
  RAC_STATUS_INVALID_ARGUMENT = 2,
  RAC_STATUS_INVALID_STATE = 3,
  RAC_STATUS_NULL_EVENT = 4,
  RAC_STATUS_DEGENERATE_STATE = 5,
  RAC_STATUS_CONFIG = 6,
  RAC_STATUS_JSON = 7,
  RAC_STATUS_IO = 8,
  RAC_STATUS_UTF8 = 9,
  RAC_STATUS_PANIC = 10,
} RacStatus;

/**
 * Restriction on the shared distribution in classical optimizations.
 */
typedef enum RacConstraint {
  RAC_CONSTRAINT_NONE = 0,
  /**
   * Bob's shared bit is uniformly distributed.
   */
  RAC_CONSTRAINT_BOB_MIXED = 1,
} RacConstraint;

/**
 * Success table of a code.
 */
typedef struct RacEvaluation RacEvaluation;

/**
 * Quantum code: Alice's and Bob's measurement directions.
 */
typedef struct RacProtocol RacProtocol;

/**
 * Shared two-qubit state.
 */
typedef struct RacState RacState;

/**
 * Deterministic classical code using one shared bit per party.
 */
typedef struct RacStrategy RacStrategy;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *rac_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *rac_version(void);

/**
 * State from local Bloch vectors `a0[3]`, `b0[3]` and row-major correlations `e[9]`.
 * Positivity is not checked here; see `rac_state_is_valid`.
 */
enum RacStatus rac_state_new(const double *a0,
                             const double *b0,
                             const double *e,
                             struct RacState **out);

/**
 * Bell-diagonal state with correlations `(e1, e2, e3)`; fails outside the
 * positivity tetrahedron.
 */
enum RacStatus rac_state_bell_diagonal(double e1, double e2, double e3, struct RacState **out);

/**
 * Werner state with visibility `q` in [0, 1].
 */
enum RacStatus rac_state_werner(double q, struct RacState **out);

/**
 * State from JSON: `{"a0", "b0", "E"}`, `{"werner": q}` or `{"bell_diagonal": [..]}`.
 */
enum RacStatus rac_state_from_json(const char *json, struct RacState **out);

void rac_state_free(struct RacState *state);

enum RacStatus rac_state_is_valid(const struct RacState *state, bool *out);

/**
 * PPT verdict; fails with `InvalidState` for an invalid state.
 */
enum RacStatus rac_state_is_separable(const struct RacState *state, bool *out);

/**
 * Geometric discord of the Bell-diagonal state `(e1, e2, e3)`.
 */
enum RacStatus rac_bell_diagonal_discord(double e1, double e2, double e3, double *out);

/**
 * Canonical n→1 code (n = 2 or 3) for diagonal correlations `(e1, e2, e3)`.
 */
enum RacStatus rac_protocol_canonical(size_t n,
                                      double e1,
                                      double e2,
                                      double e3,
                                      struct RacProtocol **out);

/**
 * Protocol from JSON `{"n", "alice": {"00": [..], ..}, "bob": {"1": [..], ..}}`.
 */
enum RacStatus rac_protocol_from_json(const char *json, struct RacProtocol **out);

void rac_protocol_free(struct RacProtocol *protocol);

/**
 * Exact success table of `protocol` on `state`.
 */
enum RacStatus rac_evaluate(const struct RacProtocol *protocol,
                            const struct RacState *state,
                            struct RacEvaluation **out);

enum RacStatus rac_evaluation_n(const struct RacEvaluation *eval, size_t *out);

enum RacStatus rac_evaluation_p_min(const struct RacEvaluation *eval, double *out);

/**
 * Success probability for input `x` (bit 1 most significant) and 1-based index `i`.
 */
enum RacStatus rac_evaluation_success(const struct RacEvaluation *eval,
                                      size_t x,
                                      size_t i,
                                      double *out);

void rac_evaluation_free(struct RacEvaluation *eval);

/**
 * Worst-case success of the canonical n→1 code on Bell-diagonal `(e1, e2, e3)`.
 */
enum RacStatus rac_pmin_formula(size_t n, double e1, double e2, double e3, double *out);

/**
 * `m`-level concatenated 2→1 codes on states of discord `d`.
 */
enum RacStatus rac_concatenated_pmin(double d, uint32_t m, double *out);

/**
 * Prepare-and-measure 2→1 code with qubits of Bloch length `q`.
 */
enum RacStatus rac_prepare_measure_pmin(double q, double *out);

/**
 * The optimal classical 2→1 code.
 */
enum RacStatus rac_strategy_optimal_2to1(struct RacStrategy **out);

/**
 * Strategy from packed indices: two bits per input for the encoding function
 * (0 = zero, 1 = one, 2 = identity, 3 = negation; input 0 lowest) and four bits
 * per index for Bob's table (entry `[c][r_b]` at bit `2c + r_b`, index 1 lowest).
 */
enum RacStatus rac_strategy_from_indices(size_t n,
                                         uint64_t encoding_index,
                                         uint64_t decoding_index,
                                         struct RacStrategy **out);

enum RacStatus rac_strategy_from_json(const char *json, struct RacStrategy **out);

void rac_strategy_free(struct RacStrategy *strategy);

/**
 * Success table under shared distribution `p[4] = (p00, p01, p10, p11)`.
 */
enum RacStatus rac_strategy_evaluate(const struct RacStrategy *strategy,
                                     const double *p,
                                     struct RacEvaluation **out);

/**
 * Best shared distribution for `strategy`, written to `p_out[4]`, and its worst-case success.
 */
enum RacStatus rac_strategy_optimal_distribution(const struct RacStrategy *strategy,
                                                 enum RacConstraint constraint,
                                                 double *p_out,
                                                 double *p_min_out);

/**
 * Exhaustive search over every 2→1 strategy. `best_out` and `p_out[4]` may be
 * null; `workers = 0` uses all cores.
 */
enum RacStatus rac_exhaustive_search_2to1(enum RacConstraint constraint,
                                          size_t workers,
                                          double *best_p_min,
                                          struct RacStrategy **best_out,
                                          double *p_out);

/**
 * Releases a string returned by this library.
 */
void rac_string_free(char *s);

/**
 * JSON form of a strategy; release with `rac_string_free`.
 */
enum RacStatus rac_strategy_to_json(const struct RacStrategy *strategy, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RAC_LAB_H */
