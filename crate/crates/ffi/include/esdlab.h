#ifndef ESDLAB_H
#define ESDLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum EsdlabStatus {
  ESDLAB_STATUS_OK = 0,
  ESDLAB_STATUS_NULL_POINTER = 1,
  ESDLAB_STATUS_INVALID_ARGUMENT = 2,
  ESDLAB_STATUS_BUFFER_TOO_SMALL = 3,
  ESDLAB_STATUS_CONFIG = 4,
  ESDLAB_STATUS_DEGENERATE_OPERATOR = 5,
  ESDLAB_STATUS_DEGENERATE_INPUT = 6,
  ESDLAB_STATUS_NUMERICAL_FAILURE = 7,
  ESDLAB_STATUS_SINGULARITY = 8,
  ESDLAB_STATUS_SOLVER_FAILURE = 9,
  ESDLAB_STATUS_BRANCH = 10,
  ESDLAB_STATUS_IO = 11,
  ESDLAB_STATUS_PANIC = 12,
} EsdlabStatus;

/**
 * A Dozier–Silverstein problem `(H, c)` with default solver settings.
 */
typedef struct EsdlabDsProblem EsdlabDsProblem;

/**
 * A dense complex matrix, row-major.
 */
typedef struct EsdlabMatrix EsdlabMatrix;

/**
 * A seeded random stream.
 */
typedef struct EsdlabRng EsdlabRng;

/**
 * The in-memory result of one experiment run.
 */
typedef struct EsdlabRun EsdlabRun;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *esdlab_version(void);

/**
 * Copies the calling thread's last error message into `buf` (truncated and
 * always NUL-terminated when `len > 0`). Returns the full message length
 * excluding the terminator.
 *
 * # Safety
 * `buf` must be NULL or valid for `len` bytes.
 */
uintptr_t esdlab_last_error(char *buf, uintptr_t len);

/**
 * # Safety
 * `out` must be valid for one pointer write.
 */
enum EsdlabStatus esdlab_rng_new(uint64_t master_seed,
                                 uint64_t stream_index,
                                 struct EsdlabRng **out);

/**
 * # Safety
 * `rng` must be a live handle and `out` valid for one write.
 */
enum EsdlabStatus esdlab_rng_next_u64(struct EsdlabRng *rng, uint64_t *out);

/**
 * # Safety
 * `rng` must be NULL or a handle not yet freed.
 */
void esdlab_rng_free(struct EsdlabRng *rng);

/**
 * Builds a `rows × cols` matrix from row-major real and imaginary parts.
 * `im` may be NULL for a real matrix.
 *
 * # Safety
 * `re` (and `im` when non-NULL) must be valid for `rows·cols` reads.
 */
enum EsdlabStatus esdlab_matrix_new(uintptr_t rows,
                                    uintptr_t cols,
                                    const double *re,
                                    const double *im,
                                    struct EsdlabMatrix **out);

/**
 * Draws an `n × n` iid matrix. `distribution_json` is a distribution spec
 * such as `{"kind":"bernoulli"}`; the draw advances `rng`.
 *
 * # Safety
 * `distribution_json` must be a NUL-terminated string, `rng` a live handle.
 */
enum EsdlabStatus esdlab_matrix_iid(uintptr_t n,
                                    const char *distribution_json,
                                    struct EsdlabRng *rng,
                                    struct EsdlabMatrix **out);

/**
 * # Safety
 * `m` must be a live handle; `rows` and `cols` may be NULL.
 */
enum EsdlabStatus esdlab_matrix_shape(const struct EsdlabMatrix *m,
                                      uintptr_t *rows,
                                      uintptr_t *cols);

/**
 * Reads entry `(i, j)`.
 *
 * # Safety
 * `m` must be a live handle; `re` and `im` valid for one write each.
 */
enum EsdlabStatus esdlab_matrix_get(const struct EsdlabMatrix *m,
                                    uintptr_t i,
                                    uintptr_t j,
                                    double *re,
                                    double *im);

/**
 * # Safety
 * `m` must be NULL or a handle not yet freed.
 */
void esdlab_matrix_free(struct EsdlabMatrix *m);

/**
 * Writes the `n` eigenvalues of a square matrix into `re[0..n]`, `im[0..n]`.
 * Fails with `ESDLAB_STATUS_BUFFER_TOO_SMALL` when `capacity < n`.
 *
 * # Safety
 * `re` and `im` must be valid for `capacity` writes.
 */
enum EsdlabStatus esdlab_eigenvalues(const struct EsdlabMatrix *m,
                                     double *re,
                                     double *im,
                                     uintptr_t capacity);

/**
 * Writes the `min(rows, cols)` singular values, non-increasing, into `out`.
 *
 * # Safety
 * `out` must be valid for `capacity` writes.
 */
enum EsdlabStatus esdlab_singular_values(const struct EsdlabMatrix *m,
                                         double *out,
                                         uintptr_t capacity);

/**
 * `log|det A|` from singular values; `-INFINITY` for an exactly singular
 * matrix.
 *
 * # Safety
 * `m` must be a live handle and `out` valid for one write.
 */
enum EsdlabStatus esdlab_log_abs_det(const struct EsdlabMatrix *m, double *out);

/**
 * Log-potential of the uniform law on the unit disk at `re + i·im`.
 */
double esdlab_circular_log_potential(double re, double im);

/**
 * `H = Σ weights[k]·δ_{atoms[k]}` (weights must sum to 1) with aspect
 * ratio `c`.
 *
 * # Safety
 * `atoms` and `weights` must be valid for `len` reads.
 */
enum EsdlabStatus esdlab_ds_problem_new(const double *atoms,
                                        const double *weights,
                                        uintptr_t len,
                                        double c,
                                        struct EsdlabDsProblem **out);

/**
 * Solves for the Stieltjes transform `m(w)`, `Im w > 0`.
 *
 * # Safety
 * `problem` must be a live handle; `m_re` and `m_im` valid for one write.
 */
enum EsdlabStatus esdlab_ds_solve(const struct EsdlabDsProblem *problem,
                                  double w_re,
                                  double w_im,
                                  double *m_re,
                                  double *m_im);

/**
 * # Safety
 * `problem` must be NULL or a handle not yet freed.
 */
void esdlab_ds_problem_free(struct EsdlabDsProblem *problem);

/**
 * Runs the experiment described by `config_json`. When `output_dir` is
 * non-NULL the CSV, SVG and manifest artifacts are written there.
 *
 * # Safety
 * `config_json` and `output_dir` must be NUL-terminated strings (or NULL
 * for `output_dir`); `out` valid for one pointer write.
 */
enum EsdlabStatus esdlab_run_experiment(const char *config_json,
                                        const char *output_dir,
                                        struct EsdlabRun **out);

/**
 * Process exit code the CLI would use: 0 all assertions pass, 1 some
 * assertion fails, 3 some trial errored. Returns -1 for NULL.
 *
 * # Safety
 * `run` must be NULL or a live handle.
 */
int32_t esdlab_run_exit_code(const struct EsdlabRun *run);

/**
 * Number of assertions evaluated, and how many passed.
 *
 * # Safety
 * `run` must be a live handle; `total` and `passed` may be NULL.
 */
enum EsdlabStatus esdlab_run_assertions(const struct EsdlabRun *run,
                                        uintptr_t *total,
                                        uintptr_t *passed);

/**
 * # Safety
 * `run` must be NULL or a handle not yet freed.
 */
void esdlab_run_free(struct EsdlabRun *run);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ESDLAB_H */
