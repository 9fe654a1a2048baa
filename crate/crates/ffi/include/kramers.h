#ifndef KRAMERS_H
#define KRAMERS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum KrStatus {
  KR_STATUS_OK = 0,
  KR_STATUS_NULL_POINTER = 1,
  /**
   * Malformed input: non-finite entries, bad sizes, bad tolerance,
   * non-normalized states.
   */
  KR_STATUS_INVALID_INPUT = 2,
  /**
   * Defective or ill-conditioned matrix, failed convergence or
   * verification.
   */
  KR_STATUS_NUMERIC = 3,
  /**
   * Model parameters at a degenerate point or outside the regime.
   */
  KR_STATUS_MODEL = 4,
  /**
   * Output buffer too short.
   */
  KR_STATUS_BUFFER_TOO_SMALL = 5,
  KR_STATUS_PANIC = 6,
} KrStatus;

/**
 * Result of the Kramers test.
 */
typedef struct KrKramersReport KrKramersReport;

/**
 * Diagonalized matrix: biorthonormal eigensystem plus the source matrix.
 */
typedef struct KrSystem KrSystem;

/**
 * Two-level model parameters.
 */
typedef struct KrModelParams {
  double energy;
  double mu_b;
  double omega2;
  double k1;
  double k2;
} KrModelParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *kr_version(void);

/**
 * Copies the last error message of this thread into `buf` (truncated,
 * always NUL-terminated when `len > 0`). Returns the full message length
 * including the terminator, or 0 when there is no message.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
size_t kr_last_error_message(char *buf, size_t len);

/**
 * Diagonalizes the `n x n` matrix `data` into a new handle.
 *
 * # Safety
 * `data` must hold `2 * n * n` doubles; `out` must be a valid pointer.
 */
enum KrStatus kr_system_new(const double *data, size_t n, double tol, struct KrSystem **out);

/**
 * # Safety
 * `sys` must be null or a handle from [`kr_system_new`] not yet freed.
 */
void kr_system_free(struct KrSystem *sys);

/**
 * Dimension of the system, 0 for a null handle.
 *
 * # Safety
 * `sys` must be null or a live handle.
 */
size_t kr_system_dim(const struct KrSystem *sys);

/**
 * Writes the eigenvalue of each eigenvector column (`2 * n` doubles).
 *
 * # Safety
 * `sys` must be a live handle; `out` must be valid for `len` doubles.
 */
enum KrStatus kr_system_eigenvalues(const struct KrSystem *sys, double *out, size_t len);

/**
 * Writes the right eigenvectors (`psi`) or the dual vectors (`phi`) as a
 * matrix whose columns are the vectors.
 *
 * # Safety
 * `sys` must be a live handle; `out` must be valid for `len` doubles.
 */
enum KrStatus kr_system_vectors(const struct KrSystem *sys, bool dual, double *out, size_t len);

/**
 * Writes `U(t)` (`2 * n * n` doubles).
 *
 * # Safety
 * `sys` must be a live handle; `out` must be valid for `len` doubles.
 */
enum KrStatus kr_system_evolution(const struct KrSystem *sys, double t, double *out, size_t len);

/**
 * `|<target| U(t) |initial>|^2` for unit vectors of `2 * n` doubles.
 *
 * # Safety
 * `sys` must be a live handle; both vectors must hold `2 * n` doubles;
 * `out` must be a valid pointer.
 */
enum KrStatus kr_system_transition_probability(const struct KrSystem *sys,
                                               const double *initial,
                                               const double *target,
                                               double t,
                                               double *out);

/**
 * Writes a metric operator `eta` with `eta H eta^-1 = H^dagger` and its
 * relative residual. Fails with [`KrStatus::Numeric`] when the spectrum
 * is not closed under conjugation.
 *
 * # Safety
 * `sys` must be a live handle; `out` must be valid for `len` doubles;
 * `residual` must be null or valid.
 */
enum KrStatus kr_system_eta(const struct KrSystem *sys, double *out, size_t len, double *residual);

/**
 * Runs the Kramers test on a diagonalized system.
 *
 * # Safety
 * `sys` must be a live handle; `out` must be a valid pointer.
 */
enum KrStatus kr_kramers_test(const struct KrSystem *sys, struct KrKramersReport **out);

/**
 * # Safety
 * `rep` must be null or a handle from [`kr_kramers_test`] not yet freed.
 */
void kr_report_free(struct KrKramersReport *rep);

/**
 * # Safety
 * `rep` must be null or a live handle.
 */
bool kr_report_pseudohermitian(const struct KrKramersReport *rep);

/**
 * True when every real eigenvalue has even degeneracy.
 *
 * # Safety
 * `rep` must be null or a live handle.
 */
bool kr_report_all_even(const struct KrKramersReport *rep);

/**
 * # Safety
 * `rep` must be null or a live handle.
 */
bool kr_report_has_witness(const struct KrKramersReport *rep);

/**
 * Copies the witness matrix `A` (acting as `v -> A conj(v)`).
 * Fails with [`KrStatus::Numeric`] when there is none.
 *
 * # Safety
 * `rep` must be a live handle; `out` must be valid for `len` doubles.
 */
enum KrStatus kr_report_witness(const struct KrKramersReport *rep, double *out, size_t len);

/**
 * Witness residuals `||H A - A conj(H)||_F / max(1, ||H||_F)` and
 * `||A conj(A) + 1||_F`.
 *
 * # Safety
 * `rep` must be a live handle; `commutator` and `square` valid pointers.
 */
enum KrStatus kr_report_residuals(const struct KrKramersReport *rep,
                                  double *commutator,
                                  double *square);

/**
 * Number of distinct real eigenvalues reported.
 *
 * # Safety
 * `rep` must be null or a live handle.
 */
size_t kr_report_real_count(const struct KrKramersReport *rep);

/**
 * Value and degeneracy of the `k`-th real eigenvalue.
 *
 * # Safety
 * `rep` must be a live handle; `value` and `degeneracy` valid pointers.
 */
enum KrStatus kr_report_real_degeneracy(const struct KrKramersReport *rep,
                                        size_t k,
                                        double *value,
                                        size_t *degeneracy);

/**
 * Writes the model matrix (`8` doubles).
 *
 * # Safety
 * `out` must be valid for `len` doubles.
 */
enum KrStatus kr_model_heff(struct KrModelParams p, double *out, size_t len);

/**
 * `(k1 w2/2 - muB)(k2 w2/2 - muB) > 0`.
 */
bool kr_model_condition9(struct KrModelParams p);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum KrStatus kr_model_chi(struct KrModelParams p, double *out);

/**
 * Spin-flip probability from the closed form.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum KrStatus kr_model_spin_flip(struct KrModelParams p, double t, double *out);

/**
 * Probe transition probability from the closed form.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum KrStatus kr_model_phi_probability(struct KrModelParams p, double t, double *out);

/**
 * `P(t) - P(-t)` of the probe transition from the closed form.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum KrStatus kr_model_asymmetry(struct KrModelParams p, double t, double *out);

/**
 * Writes `diag(1/chi, 1)`; requires the real-spectrum regime.
 *
 * # Safety
 * `out` must be valid for `len` doubles.
 */
enum KrStatus kr_model_eta(struct KrModelParams p, double *out, size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KRAMERS_H */
