// extern "C" surface over the C++ core: opaque handles, status codes, and a
// thread-local error message.

#include "moreau_w2.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <utility>

#include "moreauw2/differentials.hpp"
#include "moreauw2/envelope.hpp"
#include "moreauw2/error.hpp"
#include "moreauw2/functionals.hpp"
#include "moreauw2/io.hpp"
#include "moreauw2/measures.hpp"
#include "moreauw2/ot.hpp"

struct mw2_cloud {
  mw2::EmpiricalCloud value;
};
struct mw2_weighted {
  mw2::WeightedMeasure value;
};
struct mw2_gaussian {
  mw2::GaussianSpec value;
};
struct mw2_plan {
  mw2::TransportPlan value;
};
struct mw2_envelope_result {
  mw2::EnvelopeResult value;
};
struct mw2_table {
  mw2::Table value;
};

namespace {

thread_local std::string g_last_error;

mw2_status status_of(mw2::ErrorCode code) {
  return static_cast<mw2_status>(static_cast<int>(code));
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
mw2_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const mw2::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return MW2_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MW2_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return MW2_ERR_INTERNAL;
  }
}

mw2_status require(bool ok, const char* message) {
  if (ok) return MW2_OK;
  g_last_error = message;
  return MW2_ERR_INVALID_ARGUMENT;
}

mw2::Matrix matrix_from_row_major(const double* data, size_t rows,
                                  size_t cols) {
  mw2::Matrix m = mw2::Matrix::Zero(mw2::Index(rows), mw2::Index(cols));
  for (size_t i = 0; i < rows; ++i)
    for (size_t j = 0; j < cols; ++j)
      m(mw2::Index(i), mw2::Index(j)) = data[i * cols + j];
  return m;
}

void matrix_to_row_major(const mw2::Matrix& m, double* out) {
  for (mw2::Index i = 0; i < m.rows(); ++i)
    for (mw2::Index j = 0; j < m.cols(); ++j)
      out[size_t(i) * size_t(m.cols()) + size_t(j)] = m(i, j);
}

mw2_table* table_from(mw2::Table t) { return new mw2_table{std::move(t)}; }

}  // namespace

extern "C" {

const char* mw2_status_name(mw2_status status) {
  return mw2::error_code_name(static_cast<mw2::ErrorCode>(status));
}

const char* mw2_last_error_message(void) { return g_last_error.c_str(); }

const char* mw2_version(void) { return "0.1.0"; }

/* ---- clouds ---- */

mw2_status mw2_cloud_create(const double* points, size_t n, size_t d,
                            mw2_cloud** out) {
  if (auto s = require(points && out, "null pointer argument")) return s;
  if (auto s = require(n > 0 && d > 0, "n and d must be positive")) return s;
  return guarded([&] {
    *out = new mw2_cloud{mw2::EmpiricalCloud(matrix_from_row_major(points, n, d))};
    return MW2_OK;
  });
}

void mw2_cloud_destroy(mw2_cloud* cloud) { delete cloud; }

size_t mw2_cloud_size(const mw2_cloud* cloud) {
  return cloud ? size_t(cloud->value.size()) : 0;
}

size_t mw2_cloud_dim(const mw2_cloud* cloud) {
  return cloud ? size_t(cloud->value.dim()) : 0;
}

mw2_status mw2_cloud_points(const mw2_cloud* cloud, double* out) {
  if (auto s = require(cloud && out, "null pointer argument")) return s;
  matrix_to_row_major(cloud->value.points(), out);
  return MW2_OK;
}

mw2_status mw2_cloud_read_csv(const char* path, mw2_cloud** out) {
  if (auto s = require(path && out, "null pointer argument")) return s;
  return guarded([&] {
    *out = new mw2_cloud{mw2::read_cloud_csv(path)};
    return MW2_OK;
  });
}

mw2_status mw2_cloud_write_csv(const mw2_cloud* cloud, const char* path) {
  if (auto s = require(cloud && path, "null pointer argument")) return s;
  return guarded([&] {
    mw2::write_cloud_csv(cloud->value, path);
    return MW2_OK;
  });
}

mw2_status mw2_cloud_second_moment(const mw2_cloud* cloud, double* out) {
  if (auto s = require(cloud && out, "null pointer argument")) return s;
  *out = mw2::second_moment(cloud->value);
  return MW2_OK;
}

mw2_status mw2_cloud_push_forward(const mw2_cloud* cloud, const double* matrix,
                                  const double* shift, double h,
                                  mw2_cloud** out) {
  if (auto s = require(cloud && matrix && shift && out, "null pointer argument"))
    return s;
  return guarded([&] {
    const size_t d = size_t(cloud->value.dim());
    mw2::Vector sh = mw2::Vector::Zero(mw2::Index(d));
    for (size_t i = 0; i < d; ++i) sh(mw2::Index(i)) = shift[i];
    mw2::AffineMap map(matrix_from_row_major(matrix, d, d), std::move(sh));
    *out = new mw2_cloud{mw2::push_forward(cloud->value, map, h)};
    return MW2_OK;
  });
}

/* ---- weighted measures ---- */

mw2_status mw2_weighted_create(const double* points, const double* weights,
                               size_t m, size_t d, mw2_weighted** out) {
  if (auto s = require(points && weights && out, "null pointer argument"))
    return s;
  if (auto s = require(m > 0 && d > 0, "m and d must be positive")) return s;
  return guarded([&] {
    mw2::Vector w = mw2::Vector::Zero(mw2::Index(m));
    for (size_t i = 0; i < m; ++i) w(mw2::Index(i)) = weights[i];
    *out = new mw2_weighted{
        mw2::WeightedMeasure(matrix_from_row_major(points, m, d), std::move(w))};
    return MW2_OK;
  });
}

void mw2_weighted_destroy(mw2_weighted* measure) { delete measure; }

size_t mw2_weighted_size(const mw2_weighted* measure) {
  return measure ? size_t(measure->value.size()) : 0;
}

size_t mw2_weighted_dim(const mw2_weighted* measure) {
  return measure ? size_t(measure->value.dim()) : 0;
}

mw2_status mw2_weighted_read_csv(const char* path, mw2_weighted** out) {
  if (auto s = require(path && out, "null pointer argument")) return s;
  return guarded([&] {
    *out = new mw2_weighted{mw2::read_weighted_csv(path)};
    return MW2_OK;
  });
}

mw2_status mw2_weighted_from_cloud(const mw2_cloud* cloud, mw2_weighted** out) {
  if (auto s = require(cloud && out, "null pointer argument")) return s;
  return guarded([&] {
    *out = new mw2_weighted{mw2::WeightedMeasure::from_cloud(cloud->value)};
    return MW2_OK;
  });
}

mw2_status mw2_weighted_second_moment(const mw2_weighted* measure,
                                      double* out) {
  if (auto s = require(measure && out, "null pointer argument")) return s;
  *out = mw2::second_moment(measure->value);
  return MW2_OK;
}

mw2_status mw2_csv_has_weights(const char* path, int* out) {
  if (auto s = require(path && out, "null pointer argument")) return s;
  return guarded([&] {
    *out = mw2::csv_has_weights(path) ? 1 : 0;
    return MW2_OK;
  });
}

/* ---- Gaussians ---- */

mw2_status mw2_gaussian_create(const double* mean, const double* cov, size_t d,
                               mw2_gaussian** out) {
  if (auto s = require(mean && cov && out, "null pointer argument")) return s;
  if (auto s = require(d > 0, "d must be positive")) return s;
  return guarded([&] {
    mw2::Vector m = mw2::Vector::Zero(mw2::Index(d));
    for (size_t i = 0; i < d; ++i) m(mw2::Index(i)) = mean[i];
    *out = new mw2_gaussian{
        mw2::GaussianSpec(std::move(m), matrix_from_row_major(cov, d, d))};
    return MW2_OK;
  });
}

void mw2_gaussian_destroy(mw2_gaussian* g) { delete g; }

size_t mw2_gaussian_dim(const mw2_gaussian* g) {
  return g ? size_t(g->value.dim()) : 0;
}

mw2_status mw2_gaussian_read_json(const char* path, mw2_gaussian** out) {
  if (auto s = require(path && out, "null pointer argument")) return s;
  return guarded([&] {
    *out = new mw2_gaussian{mw2::read_gaussian_json(path)};
    return MW2_OK;
  });
}

mw2_status mw2_sample_gaussian(const mw2_gaussian* g, size_t n, uint64_t seed,
                               mw2_cloud** out) {
  if (auto s = require(g && out, "null pointer argument")) return s;
  return guarded([&] {
    *out = new mw2_cloud{mw2::sample_gaussian(g->value, mw2::Index(n), seed)};
    return MW2_OK;
  });
}

mw2_status mw2_gaussian_w2(const mw2_gaussian* g1, const mw2_gaussian* g2,
                           double* out) {
  if (auto s = require(g1 && g2 && out, "null pointer argument")) return s;
  return guarded([&] {
    *out = mw2::gaussian_w2(g1->value, g2->value);
    return MW2_OK;
  });
}

mw2_status mw2_gaussian_map(const mw2_gaussian* g1, const mw2_gaussian* g2,
                            double* matrix, double* shift) {
  if (auto s = require(g1 && g2 && matrix && shift, "null pointer argument"))
    return s;
  return guarded([&] {
    const mw2::AffineMap map = mw2::gaussian_map(g1->value, g2->value);
    matrix_to_row_major(map.matrix, matrix);
    for (mw2::Index i = 0; i < map.shift.size(); ++i)
      shift[size_t(i)] = map.shift(i);
    return MW2_OK;
  });
}

mw2_status mw2_map_eigen_range(const double* matrix, size_t d,
                               double* sigma_minus, double* sigma_plus) {
  if (auto s = require(matrix && sigma_minus && sigma_plus && d > 0,
                       "null pointer or empty matrix"))
    return s;
  return guarded([&] {
    mw2::AffineMap map(matrix_from_row_major(matrix, d, d),
                       mw2::Vector::Zero(mw2::Index(d)));
    const mw2::EigenRange r = mw2::map_eigen_range(map);
    *sigma_minus = r.sigma_minus;
    *sigma_plus = r.sigma_plus;
    return MW2_OK;
  });
}

mw2_status mw2_gaussian_entropy(const mw2_gaussian* g, double* out) {
  if (auto s = require(g && out, "null pointer argument")) return s;
  return guarded([&] {
    *out = mw2::gaussian_entropy(g->value);
    return MW2_OK;
  });
}

mw2_status mw2_gaussian_fisher(const mw2_gaussian* g, double* out) {
  if (auto s = require(g && out, "null pointer argument")) return s;
  return guarded([&] {
    *out = mw2::gaussian_fisher(g->value);
    return MW2_OK;
  });
}

mw2_status mw2_equality_threshold(const mw2_gaussian* g_mu,
                                  const mw2_gaussian* g_nu, double* out) {
  if (auto s = require(g_mu && g_nu && out, "null pointer argument")) return s;
  return guarded([&] {
    *out = mw2::equality_threshold(g_mu->value, g_nu->value);
    return MW2_OK;
  });
}

/* ---- plans ---- */

mw2_status mw2_w2_assignment(const mw2_cloud* a, const mw2_cloud* b,
                             mw2_plan** out) {
  if (auto s = require(a && b && out, "null pointer argument")) return s;
  return guarded([&] {
    *out = new mw2_plan{mw2::w2_assignment(a->value, b->value)};
    return MW2_OK;
  });
}

mw2_status mw2_w2_general(const mw2_weighted* a, const mw2_weighted* b,
                          mw2_plan** out) {
  if (auto s = require(a && b && out, "null pointer argument")) return s;
  return guarded([&] {
    *out = new mw2_plan{mw2::w2_general(a->value, b->value)};
    return MW2_OK;
  });
}

mw2_status mw2_w2_bruteforce(const mw2_cloud* a, const mw2_cloud* b,
                             double* out) {
  if (auto s = require(a && b && out, "null pointer argument")) return s;
  return guarded([&] {
    *out = mw2::w2_bruteforce(a->value, b->value);
    return MW2_OK;
  });
}

void mw2_plan_destroy(mw2_plan* plan) { delete plan; }

mw2_status mw2_plan_cost(const mw2_plan* plan, double* out) {
  if (auto s = require(plan && out, "null pointer argument")) return s;
  *out = plan->value.cost;
  return MW2_OK;
}

mw2_status mw2_plan_kind_of(const mw2_plan* plan, mw2_plan_kind* out) {
  if (auto s = require(plan && out, "null pointer argument")) return s;
  *out = plan->value.kind == mw2::TransportPlan::Kind::permutation
             ? MW2_PLAN_PERMUTATION
             : MW2_PLAN_COUPLING;
  return MW2_OK;
}

mw2_status mw2_plan_permutation(const mw2_plan* plan, size_t* out) {
  if (auto s = require(plan && out, "null pointer argument")) return s;
  if (plan->value.kind != mw2::TransportPlan::Kind::permutation) {
    g_last_error = "plan is not a permutation";
    return MW2_ERR_INVALID_ARGUMENT;
  }
  for (size_t i = 0; i < plan->value.permutation.size(); ++i)
    out[i] = size_t(plan->value.permutation[i]);
  return MW2_OK;
}

mw2_status mw2_plan_entry_count(const mw2_plan* plan, size_t* out) {
  if (auto s = require(plan && out, "null pointer argument")) return s;
  if (plan->value.kind == mw2::TransportPlan::Kind::permutation)
    *out = plan->value.permutation.size();
  else
    *out = plan->value.coupling.size();
  return MW2_OK;
}

mw2_status mw2_plan_entries(const mw2_plan* plan, size_t* rows, size_t* cols,
                            double* masses) {
  if (auto s = require(plan && rows && cols && masses, "null pointer argument"))
    return s;
  if (plan->value.kind == mw2::TransportPlan::Kind::permutation) {
    const double mass = 1.0 / double(plan->value.permutation.size());
    for (size_t i = 0; i < plan->value.permutation.size(); ++i) {
      rows[i] = i;
      cols[i] = size_t(plan->value.permutation[i]);
      masses[i] = mass;
    }
    return MW2_OK;
  }
  for (size_t k = 0; k < plan->value.coupling.size(); ++k) {
    rows[k] = size_t(plan->value.coupling[k].i);
    cols[k] = size_t(plan->value.coupling[k].j);
    masses[k] = plan->value.coupling[k].mass;
  }
  return MW2_OK;
}

mw2_status mw2_plan_max_dual_violation(const mw2_plan* plan, double* out) {
  if (auto s = require(plan && out, "null pointer argument")) return s;
  *out = plan->value.max_dual_violation;
  return MW2_OK;
}

/* ---- envelope ---- */

mw2_status mw2_envelope(const mw2_cloud* x, const mw2_cloud* nu, double delta,
                        double tol, int max_iter, mw2_envelope_result** out) {
  if (auto s = require(x && nu && out, "null pointer argument")) return s;
  return guarded([&]() -> mw2_status {
    mw2::EnvelopeResult r =
        mw2::envelope_value(x->value, nu->value, delta, tol, max_iter);
    const bool converged = r.converged;
    *out = new mw2_envelope_result{std::move(r)};
    if (!converged) {
      g_last_error = "envelope: iteration cap reached; partial result stored";
      return MW2_ERR_NO_CONVERGENCE;
    }
    return MW2_OK;
  });
}

void mw2_envelope_result_destroy(mw2_envelope_result* result) {
  delete result;
}

mw2_status mw2_envelope_value(const mw2_envelope_result* r, double* out) {
  if (auto s = require(r && out, "null pointer argument")) return s;
  *out = r->value.value;
  return MW2_OK;
}

mw2_status mw2_envelope_gap(const mw2_envelope_result* r, double* out) {
  if (auto s = require(r && out, "null pointer argument")) return s;
  *out = r->value.gap;
  return MW2_OK;
}

mw2_status mw2_envelope_iterations(const mw2_envelope_result* r, int* out) {
  if (auto s = require(r && out, "null pointer argument")) return s;
  *out = r->value.iterations;
  return MW2_OK;
}

mw2_status mw2_envelope_converged(const mw2_envelope_result* r, int* out) {
  if (auto s = require(r && out, "null pointer argument")) return s;
  *out = r->value.converged ? 1 : 0;
  return MW2_OK;
}

mw2_status mw2_envelope_w2sq(const mw2_envelope_result* r, double* out) {
  if (auto s = require(r && out, "null pointer argument")) return s;
  *out = r->value.w2sq;
  return MW2_OK;
}

mw2_status mw2_envelope_maximizer(const mw2_envelope_result* r, double* out) {
  if (auto s = require(r && out, "null pointer argument")) return s;
  matrix_to_row_major(r->value.maximizer.points(), out);
  return MW2_OK;
}

mw2_status mw2_envelope_gradient(const mw2_envelope_result* r, double* out) {
  if (auto s = require(r && out, "null pointer argument")) return s;
  matrix_to_row_major(r->value.gradient, out);
  return MW2_OK;
}

mw2_status mw2_envelope_plan(const mw2_envelope_result* r, mw2_plan** out) {
  if (auto s = require(r && out, "null pointer argument")) return s;
  *out = new mw2_plan{r->value.plan_at_opt};
  return MW2_OK;
}

mw2_status mw2_envelope_bruteforce(const mw2_cloud* x, const mw2_cloud* nu,
                                   double delta, double grid_halfwidth,
                                   double grid_step, double* out) {
  if (auto s = require(x && nu && out, "null pointer argument")) return s;
  return guarded([&] {
    *out = mw2::envelope_bruteforce(x->value, nu->value, delta, grid_halfwidth,
                                    grid_step);
    return MW2_OK;
  });
}

/* ---- gradient fields ---- */

mw2_status mw2_w2_gradient(const mw2_cloud* mu, const mw2_cloud* nu,
                           double* vectors, double* assignment_gap,
                           int* degenerate) {
  if (auto s = require(mu && nu && vectors && assignment_gap && degenerate,
                       "null pointer argument"))
    return s;
  return guarded([&] {
    const mw2::GradientField f = mw2::w2_gradient(mu->value, nu->value);
    matrix_to_row_major(f.vectors, vectors);
    *assignment_gap = f.assignment_gap;
    *degenerate = f.degenerate ? 1 : 0;
    return MW2_OK;
  });
}

mw2_status mw2_norm_identity_check(const mw2_cloud* mu, const mw2_cloud* nu,
                                   double* lhs, double* rhs, double* rel_err) {
  if (auto s = require(mu && nu && lhs && rhs && rel_err,
                       "null pointer argument"))
    return s;
  return guarded([&] {
    const mw2::NormIdentityReport r =
        mw2::norm_identity_check(mu->value, nu->value);
    *lhs = r.lhs;
    *rhs = r.rhs;
    *rel_err = r.rel_err;
    return MW2_OK;
  });
}

/* ---- tables ---- */

void mw2_table_destroy(mw2_table* table) { delete table; }

size_t mw2_table_rows(const mw2_table* table) {
  return table ? table->value.rows.size() : 0;
}

size_t mw2_table_cols(const mw2_table* table) {
  return table ? table->value.columns.size() : 0;
}

const char* mw2_table_col_name(const mw2_table* table, size_t col) {
  if (!table || col >= table->value.columns.size()) return "";
  return table->value.columns[col].c_str();
}

mw2_status mw2_table_get(const mw2_table* table, size_t row, size_t col,
                         double* out) {
  if (auto s = require(table && out, "null pointer argument")) return s;
  if (row >= table->value.rows.size() || col >= table->value.rows[row].size()) {
    g_last_error = "table index out of range";
    return MW2_ERR_INVALID_ARGUMENT;
  }
  *out = table->value.rows[row][col];
  return MW2_OK;
}

mw2_status mw2_equality_sweep(const mw2_gaussian* g_mu,
                              const mw2_gaussian* g_nu, size_t n, uint64_t seed,
                              const double* deltas, size_t n_deltas, double tol,
                              mw2_table** out, double* w2sq_cloud,
                              double* w2sq_gaussian,
                              double* discretization_rel_err,
                              double* threshold) {
  if (auto s = require(g_mu && g_nu && deltas && out && n_deltas > 0,
                       "null pointer or empty delta list"))
    return s;
  return guarded([&] {
    const mw2::EqualitySweep sweep = mw2::equality_sweep(
        g_mu->value, g_nu->value, mw2::Index(n), seed,
        std::vector<double>(deltas, deltas + n_deltas), tol);
    mw2::Table t;
    t.columns = {"delta", "value", "equality_bound", "rel_deviation", "gap"};
    for (const auto& r : sweep.rows)
      t.rows.push_back(
          {r.delta, r.value, r.equality_bound, r.rel_deviation, r.gap});
    *out = table_from(std::move(t));
    if (w2sq_cloud) *w2sq_cloud = sweep.w2sq_cloud;
    if (w2sq_gaussian) *w2sq_gaussian = sweep.w2sq_gaussian;
    if (discretization_rel_err)
      *discretization_rel_err = sweep.discretization_rel_err;
    if (threshold) *threshold = sweep.threshold;
    return MW2_OK;
  });
}

mw2_status mw2_grad_converge(const mw2_cloud* x0, const mw2_cloud* nu,
                             const double* deltas, size_t n_deltas,
                             uint64_t seed, double tol, mw2_table** out,
                             double* limit_norm, double* assignment_gap) {
  if (auto s = require(x0 && nu && deltas && out && n_deltas > 0,
                       "null pointer or empty delta list"))
    return s;
  return guarded([&] {
    mw2::PerturbScheme scheme;
    scheme.seed = seed;
    const mw2::ConvergenceTable table = mw2::gradient_convergence_experiment(
        x0->value, nu->value, std::vector<double>(deltas, deltas + n_deltas),
        scheme, tol);
    mw2::Table t;
    t.columns = {"delta",     "x_dist",     "grad_err",     "gap",
                 "grad_norm", "norm_bound", "norm_bound_ok"};
    for (const auto& r : table.rows)
      t.rows.push_back({r.delta, r.x_dist, r.grad_err, r.gap, r.grad_norm,
                        r.norm_bound, r.norm_bound_ok ? 1.0 : 0.0});
    *out = table_from(std::move(t));
    if (limit_norm) *limit_norm = table.limit_norm;
    if (assignment_gap) *assignment_gap = table.assignment_gap;
    return MW2_OK;
  });
}

mw2_status mw2_displacement_convexity(const mw2_gaussian* g,
                                      const double* matrix, const double* shift,
                                      const double* h_grid, size_t n_grid,
                                      mw2_table** out, int* convex) {
  if (auto s = require(g && matrix && shift && h_grid && out && convex &&
                           n_grid > 0,
                       "null pointer or empty grid"))
    return s;
  return guarded([&] {
    const size_t d = size_t(g->value.dim());
    mw2::Vector sh = mw2::Vector::Zero(mw2::Index(d));
    for (size_t i = 0; i < d; ++i) sh(mw2::Index(i)) = shift[i];
    mw2::AffineMap map(matrix_from_row_major(matrix, d, d), std::move(sh));
    const mw2::DisplacementReport report = mw2::displacement_convexity_check(
        g->value, map, std::vector<double>(h_grid, h_grid + n_grid));
    mw2::Table t;
    t.columns = {"h", "entropy"};
    for (const auto& r : report.rows) t.rows.push_back({r.h, r.entropy});
    *out = table_from(std::move(t));
    *convex = report.convex ? 1 : 0;
    return MW2_OK;
  });
}

} /* extern "C" */
