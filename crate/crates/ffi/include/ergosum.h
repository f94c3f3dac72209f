#ifndef ERGOSUM_H
#define ERGOSUM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible function.
typedef enum ErgosumStatus {
  ERGOSUM_STATUS_OK = 0,
  ERGOSUM_STATUS_NULL_POINTER = 1,
  ERGOSUM_STATUS_INVALID_INPUT = 2,
  ERGOSUM_STATUS_PRECISION = 3,
  ERGOSUM_STATUS_RESOURCE = 4,
  ERGOSUM_STATUS_NO_CONVERGENCE = 5,
  ERGOSUM_STATUS_ZERO_VARIANCE = 6,
  ERGOSUM_STATUS_BUFFER_TOO_SMALL = 7,
  ERGOSUM_STATUS_PANIC = 8,
} ErgosumStatus;

// Parry measure of the digit subshift of a quadratic irrational.
typedef struct ErgosumMeasure ErgosumMeasure;

// Ergodic sums of one step function over one rotation.
typedef struct ErgosumSums ErgosumSums;

// Continued-fraction data of a rotation number.
typedef struct ErgosumTable ErgosumTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or NULL. The pointer stays
// valid until the next failing call on the same thread.
const char *ergosum_last_error(void);

// Library version as a static NUL-terminated string.
const char *ergosum_version(void);

// Builds the first `count` convergents of `spec` (e.g. "golden", "sqrt2").
//
// # Safety
// `spec` must be a NUL-terminated string and `table` a writable pointer.
enum ErgosumStatus ergosum_table_new(const char *spec, size_t count, struct ErgosumTable **table);

// # Safety
// `table` must come from [`ergosum_table_new`] and not be used afterwards.
void ergosum_table_free(struct ErgosumTable *table);

// Number of convergents held by `table`.
//
// # Safety
// `table` must be a live handle or NULL (which gives 0).
size_t ergosum_table_len(const struct ErgosumTable *table);

// Partial quotient `a_n`, `n >= 1`.
//
// # Safety
// `table` must be a live handle and `a` writable.
enum ErgosumStatus ergosum_table_quotient(const struct ErgosumTable *table, size_t n, uint64_t *a);

// Convergent denominator `q_n`; fails with `Resource` above 2^64.
//
// # Safety
// `table` must be a live handle and `q` writable.
enum ErgosumStatus ergosum_table_denominator(const struct ErgosumTable *table,
                                             size_t n,
                                             uint64_t *q);

// `‖q_n α‖`, certified at the table's precision.
//
// # Safety
// `table` must be a live handle and `norm` writable.
enum ErgosumStatus ergosum_table_norm(const struct ErgosumTable *table, size_t n, double *norm);

// Ostrowski digits of `n`, lowest first. `len` receives the digit count;
// with a short buffer the call fails with `BufferTooSmall` and still
// reports the length needed.
//
// # Safety
// `digits` must have room for `capacity` values (or be NULL when
// `capacity` is 0); `table` must be live and `len` writable.
enum ErgosumStatus ergosum_ostrowski_expand(const struct ErgosumTable *table,
                                            uint64_t n,
                                            uint64_t *digits,
                                            size_t capacity,
                                            size_t *len);

// Sums of the preset `phi` (e.g. "phi0", "psi_half") over `table`'s rotation.
//
// # Safety
// `table` must be live, `phi` NUL-terminated and `sums` writable.
enum ErgosumStatus ergosum_sums_new(const struct ErgosumTable *table,
                                    const char *phi,
                                    struct ErgosumSums **sums);

// # Safety
// `sums` must come from [`ergosum_sums_new`] and not be used afterwards.
void ergosum_sums_free(struct ErgosumSums *sums);

// `‖φ_n‖₂²`, integrated exactly over the profile of `φ_n`.
//
// # Safety
// `sums` must be live and `variance` writable.
enum ErgosumStatus ergosum_sums_variance(const struct ErgosumSums *sums,
                                         uint64_t n,
                                         double *variance);

// Writes `‖φ_n‖₂²` for `0 <= n <= n_max` into `values`, which must hold
// `n_max + 1` entries.
//
// # Safety
// `sums` must be live and `values` must have room for `capacity` doubles.
enum ErgosumStatus ergosum_sums_variance_scan(const struct ErgosumSums *sums,
                                              uint64_t n_max,
                                              double *values,
                                              size_t capacity);

// Exact Kolmogorov distance between `φ_n / ‖φ_n‖₂` and the standard normal.
//
// # Safety
// `sums` must be live and `distance` writable.
enum ErgosumStatus ergosum_sums_kolmogorov(const struct ErgosumSums *sums,
                                           uint64_t n,
                                           double *distance);

// Digit subshift and Parry measure of a quadratic irrational `spec`.
//
// # Safety
// `spec` must be NUL-terminated and `measure` writable.
enum ErgosumStatus ergosum_measure_new(const char *spec, struct ErgosumMeasure **measure);

// # Safety
// `measure` must come from [`ergosum_measure_new`] and not be used afterwards.
void ergosum_measure_free(struct ErgosumMeasure *measure);

// Alphabet size of the subshift; 0 for NULL.
//
// # Safety
// `measure` must be a live handle or NULL.
size_t ergosum_measure_letters(const struct ErgosumMeasure *measure);

// Perron root `λ` of the transition matrix.
//
// # Safety
// `measure` must be live and `lambda` writable.
enum ErgosumStatus ergosum_measure_lambda(const struct ErgosumMeasure *measure, double *lambda);

// Entropy of the Parry measure, `log λ` up to rounding.
//
// # Safety
// `measure` must be live and `entropy` writable.
enum ErgosumStatus ergosum_measure_entropy(const struct ErgosumMeasure *measure, double *entropy);

// Measure of the cylinder spelled by `word` (letter indices); 0 for
// inadmissible words.
//
// # Safety
// `word` must point to `len >= 1` readable indices; `measure` must be live
// and `mass` writable.
enum ErgosumStatus ergosum_measure_cylinder(const struct ErgosumMeasure *measure,
                                            const size_t *word,
                                            size_t len,
                                            double *mass);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ERGOSUM_H */
