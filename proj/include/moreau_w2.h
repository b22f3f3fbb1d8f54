/*
 * moreau_w2 — C API for the shared library.
 *
 * Exact quadratic-cost optimal transport on discrete measures and the
 * sup-convolution (Moreau/Lasry-Lions) envelope of mu -> W2^2(mu, nu) at
 * particle level, with optimality certificates, Wasserstein gradients, and
 * Gaussian closed forms.
 *
 * Conventions:
 *  - Every fallible function returns an mw2_status; MW2_OK is 0.
 *  - Objects are opaque handles created by mw2_*_create/... and released by
 *    the matching mw2_*_destroy. Destroy functions accept NULL.
 *  - Point buffers are row-major double arrays: point i occupies
 *    [i*d, (i+1)*d).
 *  - On failure, out-parameters are left untouched and a thread-local
 *    message is available via mw2_last_error_message().
 */

#ifndef MOREAU_W2_H
#define MOREAU_W2_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MW2_API __declspec(dllexport)
#else
#define MW2_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mw2_status {
  MW2_OK = 0,
  MW2_ERR_EMPTY_INPUT = 1,
  MW2_ERR_NON_FINITE = 2,
  MW2_ERR_DIMENSION_MISMATCH = 3,
  MW2_ERR_SIZE_MISMATCH = 4,
  MW2_ERR_BAD_DELTA = 5,
  MW2_ERR_NON_SPD = 6,
  MW2_ERR_TOO_LARGE = 7,
  MW2_ERR_NO_CONVERGENCE = 8,
  MW2_ERR_DEGENERATE = 9,
  MW2_ERR_SOLVER_STALL = 10,
  MW2_ERR_NON_MONOTONE_MAP = 11,
  MW2_ERR_GRID_OUT_OF_BAND = 12,
  MW2_ERR_IO = 13,
  MW2_ERR_INVALID_ARGUMENT = 14,
  MW2_ERR_INTERNAL = 15
} mw2_status;

/* Static name of a status code, e.g. "non_spd". */
MW2_API const char* mw2_status_name(mw2_status status);

/* Thread-local detail message of the most recent failure. */
MW2_API const char* mw2_last_error_message(void);

/* Library version as "major.minor.patch". */
MW2_API const char* mw2_version(void);

/* ------------------------------------------------------------------ */
/* Clouds: n points in R^d with implicit uniform weights.             */

typedef struct mw2_cloud mw2_cloud;

MW2_API mw2_status mw2_cloud_create(const double* points, size_t n, size_t d,
                                    mw2_cloud** out);
MW2_API void mw2_cloud_destroy(mw2_cloud* cloud);
MW2_API size_t mw2_cloud_size(const mw2_cloud* cloud);
MW2_API size_t mw2_cloud_dim(const mw2_cloud* cloud);
/* Copies all n*d coordinates into `out`. */
MW2_API mw2_status mw2_cloud_points(const mw2_cloud* cloud, double* out);
MW2_API mw2_status mw2_cloud_read_csv(const char* path, mw2_cloud** out);
MW2_API mw2_status mw2_cloud_write_csv(const mw2_cloud* cloud,
                                       const char* path);
MW2_API mw2_status mw2_cloud_second_moment(const mw2_cloud* cloud,
                                           double* out);
/* x_i + h * (matrix x_i + shift); matrix is d*d row-major. */
MW2_API mw2_status mw2_cloud_push_forward(const mw2_cloud* cloud,
                                          const double* matrix,
                                          const double* shift, double h,
                                          mw2_cloud** out);

/* ------------------------------------------------------------------ */
/* Weighted measures: points plus nonnegative weights summing to 1.   */

typedef struct mw2_weighted mw2_weighted;

MW2_API mw2_status mw2_weighted_create(const double* points,
                                       const double* weights, size_t m,
                                       size_t d, mw2_weighted** out);
MW2_API void mw2_weighted_destroy(mw2_weighted* measure);
MW2_API size_t mw2_weighted_size(const mw2_weighted* measure);
MW2_API size_t mw2_weighted_dim(const mw2_weighted* measure);
MW2_API mw2_status mw2_weighted_read_csv(const char* path, mw2_weighted** out);
MW2_API mw2_status mw2_weighted_from_cloud(const mw2_cloud* cloud,
                                           mw2_weighted** out);
MW2_API mw2_status mw2_weighted_second_moment(const mw2_weighted* measure,
                                              double* out);
/* True (1) if the CSV header at `path` has the trailing "w" column. */
MW2_API mw2_status mw2_csv_has_weights(const char* path, int* out);

/* ------------------------------------------------------------------ */
/* Gaussian parameter sets.                                           */

typedef struct mw2_gaussian mw2_gaussian;

/* cov is d*d row-major, symmetric positive definite. */
MW2_API mw2_status mw2_gaussian_create(const double* mean, const double* cov,
                                       size_t d, mw2_gaussian** out);
MW2_API void mw2_gaussian_destroy(mw2_gaussian* g);
MW2_API size_t mw2_gaussian_dim(const mw2_gaussian* g);
MW2_API mw2_status mw2_gaussian_read_json(const char* path,
                                          mw2_gaussian** out);
MW2_API mw2_status mw2_sample_gaussian(const mw2_gaussian* g, size_t n,
                                       uint64_t seed, mw2_cloud** out);
MW2_API mw2_status mw2_gaussian_w2(const mw2_gaussian* g1,
                                   const mw2_gaussian* g2, double* out);
/* Optimal map x -> matrix (x - m1) + m2 flattened to matrix/shift form:
   fills matrix (d*d row-major) and shift (d). */
MW2_API mw2_status mw2_gaussian_map(const mw2_gaussian* g1,
                                    const mw2_gaussian* g2, double* matrix,
                                    double* shift);
/* Eigenvalue range of a symmetric PSD map matrix (d*d row-major). */
MW2_API mw2_status mw2_map_eigen_range(const double* matrix, size_t d,
                                       double* sigma_minus,
                                       double* sigma_plus);
MW2_API mw2_status mw2_gaussian_entropy(const mw2_gaussian* g, double* out);
MW2_API mw2_status mw2_gaussian_fisher(const mw2_gaussian* g, double* out);
MW2_API mw2_status mw2_equality_threshold(const mw2_gaussian* g_mu,
                                          const mw2_gaussian* g_nu,
                                          double* out);

/* ------------------------------------------------------------------ */
/* Transport plans.                                                   */

typedef struct mw2_plan mw2_plan;

typedef enum mw2_plan_kind {
  MW2_PLAN_PERMUTATION = 0,
  MW2_PLAN_COUPLING = 1
} mw2_plan_kind;

MW2_API mw2_status mw2_w2_assignment(const mw2_cloud* a, const mw2_cloud* b,
                                     mw2_plan** out);
MW2_API mw2_status mw2_w2_general(const mw2_weighted* a, const mw2_weighted* b,
                                  mw2_plan** out);
MW2_API mw2_status mw2_w2_bruteforce(const mw2_cloud* a, const mw2_cloud* b,
                                     double* out);
MW2_API void mw2_plan_destroy(mw2_plan* plan);
MW2_API mw2_status mw2_plan_cost(const mw2_plan* plan, double* out);
MW2_API mw2_status mw2_plan_kind_of(const mw2_plan* plan, mw2_plan_kind* out);
/* Permutation plans: fills n target indices. */
MW2_API mw2_status mw2_plan_permutation(const mw2_plan* plan, size_t* out);
/* Coupling plans: entry count, then (i, j, mass) triples. */
MW2_API mw2_status mw2_plan_entry_count(const mw2_plan* plan, size_t* out);
MW2_API mw2_status mw2_plan_entries(const mw2_plan* plan, size_t* rows,
                                    size_t* cols, double* masses);
MW2_API mw2_status mw2_plan_max_dual_violation(const mw2_plan* plan,
                                               double* out);

/* ------------------------------------------------------------------ */
/* Envelope.                                                          */

typedef struct mw2_envelope_result mw2_envelope_result;

/* tol <= 0 picks the default 1e-8 * (1 + W2^2); max_iter <= 0 picks
   10n + 100. Returns MW2_ERR_NO_CONVERGENCE when the iteration cap is hit;
   the partial result is still stored in *out in that case. */
MW2_API mw2_status mw2_envelope(const mw2_cloud* x, const mw2_cloud* nu,
                                double delta, double tol, int max_iter,
                                mw2_envelope_result** out);
MW2_API void mw2_envelope_result_destroy(mw2_envelope_result* result);
MW2_API mw2_status mw2_envelope_value(const mw2_envelope_result* r,
                                      double* out);
MW2_API mw2_status mw2_envelope_gap(const mw2_envelope_result* r, double* out);
MW2_API mw2_status mw2_envelope_iterations(const mw2_envelope_result* r,
                                           int* out);
MW2_API mw2_status mw2_envelope_converged(const mw2_envelope_result* r,
                                          int* out);
MW2_API mw2_status mw2_envelope_w2sq(const mw2_envelope_result* r,
                                     double* out);
/* Fills n*d coordinates of the maximizer / gradient. */
MW2_API mw2_status mw2_envelope_maximizer(const mw2_envelope_result* r,
                                          double* out);
MW2_API mw2_status mw2_envelope_gradient(const mw2_envelope_result* r,
                                         double* out);
MW2_API mw2_status mw2_envelope_plan(const mw2_envelope_result* r,
                                     mw2_plan** out);
MW2_API mw2_status mw2_envelope_bruteforce(const mw2_cloud* x,
                                           const mw2_cloud* nu, double delta,
                                           double grid_halfwidth,
                                           double grid_step, double* out);

/* ------------------------------------------------------------------ */
/* Gradient fields.                                                   */

/* Fills n*d gradient vectors; *assignment_gap receives the optimal-vs-
   second-best cost gap (+inf for n == 1) and *degenerate is set to 1 when
   the gap is below 1e-12 (flagged, not an error). */
MW2_API mw2_status mw2_w2_gradient(const mw2_cloud* mu, const mw2_cloud* nu,
                                   double* vectors, double* assignment_gap,
                                   int* degenerate);
MW2_API mw2_status mw2_norm_identity_check(const mw2_cloud* mu,
                                           const mw2_cloud* nu, double* lhs,
                                           double* rhs, double* rel_err);

/* ------------------------------------------------------------------ */
/* Experiment tables.                                                 */

typedef struct mw2_table mw2_table;

MW2_API void mw2_table_destroy(mw2_table* table);
MW2_API size_t mw2_table_rows(const mw2_table* table);
MW2_API size_t mw2_table_cols(const mw2_table* table);
MW2_API const char* mw2_table_col_name(const mw2_table* table, size_t col);
MW2_API mw2_status mw2_table_get(const mw2_table* table, size_t row,
                                 size_t col, double* out);

/* Columns: delta, value, equality_bound, rel_deviation, gap.
   Scalar outputs (any may be NULL): particle-level W2^2, closed-form W2^2,
   discretization error, equality threshold. */
MW2_API mw2_status mw2_equality_sweep(const mw2_gaussian* g_mu,
                                      const mw2_gaussian* g_nu, size_t n,
                                      uint64_t seed, const double* deltas,
                                      size_t n_deltas, double tol,
                                      mw2_table** out, double* w2sq_cloud,
                                      double* w2sq_gaussian,
                                      double* discretization_rel_err,
                                      double* threshold);

/* Columns: delta, x_dist, grad_err, gap, grad_norm, norm_bound,
   norm_bound_ok. Perturbation radius is delta^2 per row, seeded. */
MW2_API mw2_status mw2_grad_converge(const mw2_cloud* x0, const mw2_cloud* nu,
                                     const double* deltas, size_t n_deltas,
                                     uint64_t seed, double tol,
                                     mw2_table** out, double* limit_norm,
                                     double* assignment_gap);

/* Columns: h, entropy. *convex is 1 when every interior second difference
   is >= -1e-9. matrix is d*d row-major, shift length d. */
MW2_API mw2_status mw2_displacement_convexity(const mw2_gaussian* g,
                                              const double* matrix,
                                              const double* shift,
                                              const double* h_grid,
                                              size_t n_grid, mw2_table** out,
                                              int* convex);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MOREAU_W2_H */
