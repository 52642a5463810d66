#ifndef LTLQM_H
#define LTLQM_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum LtlqmConj {
  LTLQM_CONJ_PRODUCT = 0,
  LTLQM_CONJ_MIN = 1,
} LtlqmConj;

typedef enum LtlqmDisj {
  LTLQM_DISJ_MEAN = 0,
  LTLQM_DISJ_MAX = 1,
} LtlqmDisj;

/*
 Result code of every fallible call.
 */
typedef enum LtlqmStatus {
  LTLQM_STATUS_OK = 0,
  /*
   Null pointer, bad UTF-8, or an out-of-range argument.
   */
  LTLQM_STATUS_INVALID_ARGUMENT = 1,
  /*
   Formula, pattern or trace text did not parse.
   */
  LTLQM_STATUS_PARSE = 2,
  /*
   No formula satisfies the constraints.
   */
  LTLQM_STATUS_UNSAT = 3,
  LTLQM_STATUS_TIMEOUT = 4,
  /*
   The SMT solver could not be found, crashed, or returned garbage.
   */
  LTLQM_STATUS_SOLVER = 5,
  /*
   A search limit was hit.
   */
  LTLQM_STATUS_LIMIT = 6,
  /*
   A panic was caught at the boundary.
   */
  LTLQM_STATUS_INTERNAL = 7,
} LtlqmStatus;

typedef struct LtlqmFormula LtlqmFormula;

/*
 Valuation parameters: discount, penalty, schemes and priorities.
 */
typedef struct LtlqmParams LtlqmParams;

/*
 Ranked output of the enumerative miner.
 */
typedef struct LtlqmRanking LtlqmRanking;

/*
 Parsed positive and negative traces.
 */
typedef struct LtlqmSample LtlqmSample;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or null. Owned by the
 library and valid until the next call on the same thread.
 */
const char *ltlqm_last_error(void);

/*
 # Safety
 `s` must be null or a string returned by this library.
 */
void ltlqm_string_free(char *s);

/*
 Parses trace text; `neg` may be null.

 # Safety
 `pos` and `neg` must be null or nul-terminated; `out` must be writable.
 */
enum LtlqmStatus ltlqm_sample_from_text(const char *pos, const char *neg, struct LtlqmSample **out);

/*
 # Safety
 `s` must be a live sample handle.
 */
enum LtlqmStatus ltlqm_sample_counts(const struct LtlqmSample *s,
                                     uintptr_t *n_pos,
                                     uintptr_t *n_neg);

/*
 # Safety
 `s` must be null or a sample handle not yet freed.
 */
void ltlqm_sample_free(struct LtlqmSample *s);

/*
 Parses a formula in the text syntax used by the CLI.

 # Safety
 `src` must be nul-terminated; `out` must be writable.
 */
enum LtlqmStatus ltlqm_formula_parse(const char *src, struct LtlqmFormula **out);

/*
 Rewrites into negation normal form over `&`, `|`, `G`, `F`.

 # Safety
 `f` must be a live formula handle; `out` must be writable.
 */
enum LtlqmStatus ltlqm_formula_nnf(const struct LtlqmFormula *f, struct LtlqmFormula **out);

/*
 Canonical text; release with [`ltlqm_string_free`]. Null if `f` is null.

 # Safety
 `f` must be null or a live formula handle.
 */
char *ltlqm_formula_to_string(const struct LtlqmFormula *f);

/*
 Edge depth of the syntax tree; literals have depth 0.

 # Safety
 `f` must be a live formula handle.
 */
enum LtlqmStatus ltlqm_formula_depth(const struct LtlqmFormula *f, uintptr_t *out);

/*
 # Safety
 `f` must be null or a formula handle not yet freed.
 */
void ltlqm_formula_free(struct LtlqmFormula *f);

/*
 Default parameters.
 */
struct LtlqmParams *ltlqm_params_default(void);

/*
 Parameters from decimal or `a/b` strings for `r` and `delta`, both in (0, 1).

 # Safety
 Both strings must be nul-terminated; `out` must be writable.
 */
enum LtlqmStatus ltlqm_params_new(const char *r, const char *delta, struct LtlqmParams **out);

/*
 # Safety
 `p` must be a live params handle.
 */
enum LtlqmStatus ltlqm_params_set_schemes(struct LtlqmParams *p,
                                          enum LtlqmConj conj,
                                          enum LtlqmDisj disj);

/*
 Sets the leaf weight of proposition `name`; `weight` is a positive
 decimal or `a/b` string.

 # Safety
 `p` must be a live params handle; strings must be nul-terminated.
 */
enum LtlqmStatus ltlqm_params_set_priority(struct LtlqmParams *p,
                                           const char *name,
                                           const char *weight);

/*
 # Safety
 `p` must be null or a params handle not yet freed.
 */
void ltlqm_params_free(struct LtlqmParams *p);

/*
 Summed value of an NNF `G`/`F` formula over the positive traces.

 # Safety
 Handles must be live; `out` must be writable.
 */
enum LtlqmStatus ltlqm_value(const struct LtlqmFormula *f,
                             const struct LtlqmSample *s,
                             const struct LtlqmParams *p,
                             double *out);

/*
 Value of `f` on one trace at position 1. `negative` selects the
 negative traces; `index` is 0-based.

 # Safety
 Handles must be live; `out` must be writable.
 */
enum LtlqmStatus ltlqm_value_trace(const struct LtlqmFormula *f,
                                   const struct LtlqmSample *s,
                                   bool negative,
                                   uintptr_t index,
                                   const struct LtlqmParams *p,
                                   double *out);

/*
 Boolean satisfaction at 1-based position `t` of one trace.

 # Safety
 Handles must be live; `out` must be writable.
 */
enum LtlqmStatus ltlqm_holds(const struct LtlqmFormula *f,
                             const struct LtlqmSample *s,
                             bool negative,
                             uintptr_t index,
                             uintptr_t t,
                             bool *out);

/*
 True iff `f` holds on every positive and no negative trace.

 # Safety
 Handles must be live; `out` must be writable.
 */
enum LtlqmStatus ltlqm_consistent(const struct LtlqmFormula *f,
                                  const struct LtlqmSample *s,
                                  bool *out);

/*
 Enumerative mining up to `depth` rounds.

 # Safety
 Handles must be live; `out` must be writable.
 */
enum LtlqmStatus ltlqm_mine(const struct LtlqmSample *s,
                            const struct LtlqmParams *p,
                            uintptr_t depth,
                            struct LtlqmRanking **out);

/*
 Number of ranked formulas; 0 for a null handle.

 # Safety
 `r` must be null or a live ranking handle.
 */
uintptr_t ltlqm_ranking_len(const struct LtlqmRanking *r);

/*
 Copies out entry `i` (best first). The formula is a new handle.

 # Safety
 `r` must be a live ranking handle; outputs must be writable.
 */
enum LtlqmStatus ltlqm_ranking_get(const struct LtlqmRanking *r,
                                   uintptr_t i,
                                   struct LtlqmFormula **formula,
                                   double *score);

/*
 # Safety
 `r` must be null or a ranking handle not yet freed.
 */
void ltlqm_ranking_free(struct LtlqmRanking *r);

/*
 SMT synthesis of the best formula of skeleton depth `depth`. `solver`
 may be null to use the default lookup; `min_score` may be null.

 # Safety
 Handles must be live; `formula` must be writable.
 */
enum LtlqmStatus ltlqm_synth(const struct LtlqmSample *s,
                             const struct LtlqmParams *p,
                             uintptr_t depth,
                             const char *solver,
                             uint64_t timeout_ms,
                             struct LtlqmFormula **formula,
                             double *min_score);

/*
 Best instance of `pattern` (holes `?x`, templates `phi(n)`).

 # Safety
 Handles must be live; strings nul-terminated; `formula` writable.
 */
enum LtlqmStatus ltlqm_match(const struct LtlqmSample *s,
                             const struct LtlqmParams *p,
                             const char *pattern,
                             const char *solver,
                             uint64_t timeout_ms,
                             struct LtlqmFormula **formula,
                             double *min_score);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LTLQM_H */
