#ifndef ENTCERT_H
#define ENTCERT_H

/* Generated by cbindgen from the entcert-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible function.
typedef enum EcStatus {
  EC_STATUS_OK = 0,
  // A required pointer argument was NULL.
  EC_STATUS_NULL_POINTER = 1,
  // A string argument was not valid UTF-8.
  EC_STATUS_INVALID_UTF8 = 2,
  // Dimension outside the supported range or mismatched.
  EC_STATUS_DIMENSION = 3,
  // Malformed matrix or table shape.
  EC_STATUS_SHAPE = 4,
  // Parameter outside its admissible range.
  EC_STATUS_PARAM = 5,
  // A basis construction failed validation.
  EC_STATUS_CONSTRUCTION = 6,
  // A numerical consistency check failed.
  EC_STATUS_NUMERICAL = 7,
  // The requested quantity is undefined on the data.
  EC_STATUS_DEGENERATE = 8,
  // No data (e.g. zero total counts).
  EC_STATUS_EMPTY_DATA = 9,
  // The library panicked; state may be inconsistent.
  EC_STATUS_PANIC = 10,
} EcStatus;

// Certification verdict; matches the library's one-sided semantics.
typedef enum EcVerdict {
  EC_VERDICT_INCONCLUSIVE = 0,
  EC_VERDICT_ENTANGLED = 1,
  EC_VERDICT_MAXIMALLY_ENTANGLED_CONSISTENT = 2,
} EcVerdict;

// Opaque state handle: a constructed density matrix plus the family
// parameters it was built from.
typedef struct EcState EcState;

// Result of a two-pair certification run.
typedef struct EcCertification {
  // Correlation of the first pair (bits for MI, coefficient for Pearson).
  double first_pair;
  // Correlation of the second pair.
  double second_pair;
  double sum;
  // 1σ uncertainty of the sum (0 in exact mode).
  double sigma;
  // Entanglement threshold (log₂d for MI, 1 for Pearson).
  double threshold_ent;
  // Maximal-correlation value (2log₂d for MI, 2 for Pearson).
  double threshold_max;
  enum EcVerdict verdict;
} EcCertification;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the calling thread's most recent failure. The
// pointer stays valid until the next failing call on the same thread;
// copy it if you need to keep it.
const char *ec_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *ec_version(void);

// Build a state of `family` ("max", "classical", "rho_c", "rho_w",
// "rho_a", "rho_b", "rho_s") with local dimension `d` and mixing
// parameter `p`, writing an owned handle to `out`.
//
// # Safety
// `family` must be a valid NUL-terminated string and `out` a valid
// pointer. The returned handle must be released with [`ec_state_free`].
enum EcStatus ec_state_new(const char *family, uint32_t d, double p, struct EcState **out);

// Release a handle created by [`ec_state_new`]. NULL is a no-op.
//
// # Safety
// `state` must be NULL or a pointer previously returned by
// [`ec_state_new`] that has not been freed.
void ec_state_free(struct EcState *state);

// Local dimension d of the state behind the handle (0 for NULL).
//
// # Safety
// `state` must be NULL or a live handle.
uint32_t ec_state_local_dim(const struct EcState *state);

// Mutual-information certification of the state. `pairs` selects the
// complementary pair set ("default" or empty picks comp,sx / comp,fourier
// by dimension). With `exact` nonzero the sums come from exact tables
// (σ = 0); otherwise one Poissonian counts table of budget `n_total` is
// simulated per pair with the given seed.
//
// # Safety
// `state`, `pairs` and `out` must be valid pointers as described above.
enum EcStatus ec_certify_mi(const struct EcState *state,
                            const char *pairs,
                            int32_t exact,
                            uint64_t n_total,
                            uint64_t seed,
                            struct EcCertification *out);

// Pearson-coefficient certification (conjectured entanglement
// threshold). In sampled mode σ is the spread over `trials` simulated
// runs.
//
// # Safety
// Same pointer contract as [`ec_certify_mi`].
enum EcStatus ec_certify_pearson(const struct EcState *state,
                                 const char *pairs,
                                 int32_t exact,
                                 uint64_t n_total,
                                 uint32_t trials,
                                 uint64_t seed,
                                 struct EcCertification *out);

// Exact per-pair mutual informations of the state under a pair set.
// Writes at most `capacity` values to `per_pair`, the actual pair count
// to `len`, and the total to `sum`. Fails with [`EcStatus::Shape`] when
// the buffer is too small.
//
// # Safety
// All pointers must be valid; `per_pair` must have room for `capacity`
// doubles.
enum EcStatus ec_mi_sum(const struct EcState *state,
                        const char *pairs,
                        double *per_pair,
                        size_t capacity,
                        size_t *len,
                        double *sum);

// Expectation value of the d = 2 comparison witness
// W = I − σz⊗σz − σx⊗σx; negative certifies entanglement.
//
// # Safety
// `state` must be a live handle and `out` a valid pointer.
enum EcStatus ec_witness_expectation(const struct EcState *state, double *out);

// Closed-form mutual-information sum for the computational-correlation
// mixture family at (d, p).
//
// # Safety
// `out` must be a valid pointer.
enum EcStatus ec_analytic_mi_sum_rho_c(uint32_t d, double p, double *out);

// Closed-form mutual-information sum for the Werner family at (d, p).
//
// # Safety
// `out` must be a valid pointer.
enum EcStatus ec_analytic_mi_sum_werner(uint32_t d, double p, double *out);

// The p where the Werner mutual-information sum crosses the log₂d
// entanglement threshold (≈0.78 for d = 2), to 1e-6.
//
// # Safety
// `out` must be a valid pointer.
enum EcStatus ec_werner_threshold_crossing(uint32_t d, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ENTCERT_H */
