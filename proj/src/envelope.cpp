// Certified maximization of the sup-convolution objective
//   g(X') = W2^2(X', nu) - (1/delta) msq(X - X')
// over n-point configurations. g is concave: it is a minimum over
// permutations pi of the concave quadratics
//   f_pi(X') = (1/n) sum_i |X'_i - nu_{pi(i)}|^2 - (1/delta) msq(X - X'),
// and each f_pi upper-bounds g, so the frozen-assignment maximum
//   f_pi(C_pi),  C_pi = (X - delta * nu o pi) / (1 - delta)
// is a certified upper bound on sup g. The solver alternates assignment
// solves with exact concave line searches toward C_pi and terminates when
// the certificate gap closes.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "moreauw2/envelope.hpp"
#include "moreauw2/error.hpp"
#include "moreauw2/measures.hpp"
#include "moreauw2/parallel.hpp"
#include "moreauw2/rng.hpp"

namespace mw2 {

namespace {

double msq(const Matrix& m) { return m.squaredNorm() / double(m.rows()); }

void check_delta(double delta) {
  if (!(delta >= tol::delta_band && delta <= 1.0 - tol::delta_band))
    fail(ErrorCode::bad_delta,
         "delta = " + std::to_string(delta) + " outside [1e-6, 1 - 1e-6]");
}

// Average cost of a frozen assignment evaluated at the anchor cloud.
double frozen_cost(const Matrix& pts, const Matrix& nu,
                   const std::vector<Index>& perm) {
  double total = 0.0;
  for (Index i = 0; i < pts.rows(); ++i)
    total += (pts.row(i) - nu.row(perm[i])).squaredNorm();
  return total / double(pts.rows());
}

Matrix permuted_rows(const Matrix& nu, const std::vector<Index>& perm) {
  Matrix out(nu.rows(), nu.cols());
  for (Index i = 0; i < nu.rows(); ++i) out.row(i) = nu.row(perm[i]);
  return out;
}

}  // namespace

EnvelopeResult envelope_value(const EmpiricalCloud& x,
                              const EmpiricalCloud& nu, double delta,
                              double tol, int max_iter) {
  check_delta(delta);
  if (x.size() != nu.size())
    fail(ErrorCode::size_mismatch,
         "envelope_value: clouds have " + std::to_string(x.size()) + " and " +
             std::to_string(nu.size()) + " points");
  if (x.dim() != nu.dim())
    fail(ErrorCode::dimension_mismatch,
         "envelope_value: cloud dimensions differ");

  const Index n = x.size();
  const Matrix& anchor = x.points();
  const Matrix& target = nu.points();

  auto objective = [&](const Matrix& xp, std::vector<Index>* perm) {
    const double transport = detail::assignment_cost(xp, target, perm);
    return transport - msq(anchor - xp) / delta;
  };

  // Start at X itself: g(X) = W2^2(X, nu), the sandwich lower bound.
  Matrix current = anchor;
  std::vector<Index> perm;
  double g_cur = objective(current, &perm);
  const double w2sq = g_cur;

  if (tol <= 0.0) tol = 1e-8 * (1.0 + w2sq);
  if (max_iter <= 0) max_iter = 10 * int(n) + 100;

  EnvelopeResult res{.value = 0.0,
                     .maximizer = x,
                     .gradient = Matrix::Zero(n, x.dim()),
                     .iterations = 0,
                     .gap = 0.0,
                     .plan_at_opt = {},
                     .converged = true,
                     .w2sq = w2sq,
                     .trace = {}};

  double gap = 0.0;
  while (true) {
    // Certified upper bound from the current assignment, frozen at X.
    const double upper = frozen_cost(anchor, target, perm) / (1.0 - delta);
    gap = std::max(0.0, upper - g_cur);
    res.trace.push_back({g_cur, upper, gap});
    if (gap <= tol) {
      res.converged = true;
      break;
    }
    if (res.iterations >= max_iter) {
      res.converged = false;  // partial result, flagged
      break;
    }
    ++res.iterations;

    // Closed-form maximizer of the frozen quadratic.
    const Matrix candidate =
        (anchor - delta * permuted_rows(target, perm)) / (1.0 - delta);
    const Matrix dir = candidate - current;
    if (msq(dir) == 0.0) {
      res.converged = false;
      break;
    }

    // Exact concave line search on the segment [current, candidate].
    std::vector<Index> best_perm;
    double best_t = 1.0;
    double best_g = objective(candidate, &best_perm);
    {
      constexpr double inv_golden = 0.6180339887498949;
      double lo = 0.0, hi = 1.0;
      double t1 = hi - inv_golden * (hi - lo);
      double t2 = lo + inv_golden * (hi - lo);
      std::vector<Index> p1, p2;
      double g1 = objective(current + t1 * dir, &p1);
      double g2 = objective(current + t2 * dir, &p2);
      while (hi - lo > 1e-10) {
        if (g1 < g2) {
          lo = t1;
          t1 = t2;
          g1 = g2;
          p1 = p2;
          t2 = lo + inv_golden * (hi - lo);
          g2 = objective(current + t2 * dir, &p2);
        } else {
          hi = t2;
          t2 = t1;
          g2 = g1;
          p2 = p1;
          t1 = hi - inv_golden * (hi - lo);
          g1 = objective(current + t1 * dir, &p1);
        }
      }
      // Prefer the exact endpoint when it matches the interior maximum, so
      // fixed points of the assignment iteration are hit exactly.
      const double g_in = std::max(g1, g2);
      if (g_in > best_g) {
        best_t = (g1 >= g2) ? t1 : t2;
        best_g = g_in;
        best_perm = (g1 >= g2) ? p1 : p2;
      }
    }

    if (!(best_g > g_cur)) {
      // No ascent along the certified direction: numerically stalled.
      res.converged = false;
      break;
    }
    current = (best_t == 1.0) ? candidate : Matrix(current + best_t * dir);
    g_cur = best_g;
    perm = std::move(best_perm);
  }

  res.maximizer = EmpiricalCloud(current);
  res.plan_at_opt = w2_assignment(res.maximizer, nu);
  res.value = res.plan_at_opt.cost - msq(anchor - current) / delta;
  res.gradient = (2.0 / delta) * (current - anchor);
  // Tie the reported gap to the reported value via the canonical plan.
  const double upper_final =
      frozen_cost(anchor, target, res.plan_at_opt.permutation) / (1.0 - delta);
  res.gap = std::max(0.0, upper_final - res.value);
  if (res.gap > tol && res.converged && !res.trace.empty() &&
      res.trace.back().gap <= tol) {
    // Keep the tighter of the two equivalent certificates.
    res.gap = res.trace.back().gap;
  }
  return res;
}

double envelope_bruteforce(const EmpiricalCloud& x, const EmpiricalCloud& nu,
                           double delta, double grid_halfwidth,
                           double grid_step) {
  check_delta(delta);
  if (x.size() != nu.size())
    fail(ErrorCode::size_mismatch, "envelope_bruteforce: cloud sizes differ");
  if (x.dim() != nu.dim())
    fail(ErrorCode::dimension_mismatch,
         "envelope_bruteforce: cloud dimensions differ");
  const Index n = x.size();
  const Index d = x.dim();
  const Index dims = n * d;
  if (dims > 4)
    fail(ErrorCode::too_large,
         "envelope_bruteforce: n*d = " + std::to_string(dims) +
             " exceeds the cap of 4");
  if (!(grid_step > 0.0) || !(grid_halfwidth > 0.0))
    fail(ErrorCode::invalid_argument,
         "envelope_bruteforce: halfwidth and step must be positive");

  // All permutations of the target atoms.
  std::vector<std::vector<Index>> perms;
  {
    std::vector<Index> idx(n);
    for (Index i = 0; i < n; ++i) idx[i] = i;
    do {
      perms.push_back(idx);
    } while (std::next_permutation(idx.begin(), idx.end()));
  }

  // The grid must cover every closed-form candidate (x - delta nu o pi)/(1-d).
  for (const auto& p : perms) {
    const Matrix cand =
        (x.points() - delta * permuted_rows(nu.points(), p)) / (1.0 - delta);
    const double spread = (cand - x.points()).cwiseAbs().maxCoeff();
    if (spread > grid_halfwidth + 1e-12)
      fail(ErrorCode::invalid_argument,
           "envelope_bruteforce: halfwidth " + std::to_string(grid_halfwidth) +
               " does not cover a closed-form candidate at distance " +
               std::to_string(spread));
  }

  const Index steps = Index(std::floor(2.0 * grid_halfwidth / grid_step + 1e-9)) + 1;
  double total_points = 1.0;
  for (Index k = 0; k < dims; ++k) total_points *= double(steps);
  if (total_points > 4e9)
    fail(ErrorCode::too_large,
         "envelope_bruteforce: grid has too many points");

  const std::size_t n_dims = std::size_t(dims);
  std::vector<double> flat(n_dims, 0.0);
  std::vector<Index> odo(n_dims, 0);

  // Row-major flat coordinates: dim k = (atom k/d, coordinate k%d).
  std::vector<double> base(n_dims, 0.0);
  for (Index i = 0; i < n; ++i)
    for (Index c = 0; c < d; ++c)
      base[std::size_t(i * d + c)] = x.points()(i, c);

  const Matrix& tgt = nu.points();
  double best = -std::numeric_limits<double>::infinity();
  const double inv_delta = 1.0 / delta;
  const double inv_n = 1.0 / double(n);

  while (true) {
    for (Index k = 0; k < dims; ++k)
      flat[std::size_t(k)] =
          base[std::size_t(k)] - grid_halfwidth + double(odo[std::size_t(k)]) * grid_step;

    double transport = std::numeric_limits<double>::infinity();
    for (const auto& p : perms) {
      double s = 0.0;
      for (Index i = 0; i < n; ++i) {
        for (Index c = 0; c < d; ++c) {
          const double diff = flat[std::size_t(i * d + c)] - tgt(p[i], c);
          s += diff * diff;
        }
      }
      transport = std::min(transport, s);
    }
    double penalty = 0.0;
    for (Index k = 0; k < dims; ++k) {
      const double diff = flat[std::size_t(k)] - base[std::size_t(k)];
      penalty += diff * diff;
    }
    best = std::max(best, inv_n * (transport - inv_delta * penalty));

    Index k = 0;
    while (k < dims && ++odo[std::size_t(k)] == steps) {
      odo[std::size_t(k)] = 0;
      ++k;
    }
    if (k == dims) break;
  }
  return best;
}

double equality_threshold(const GaussianSpec& g_mu, const GaussianSpec& g_nu) {
  const AffineMap fwd = gaussian_map(g_mu, g_nu);
  const AffineMap bwd = gaussian_map(g_nu, g_mu);
  const EigenRange fwd_range = map_eigen_range(fwd);
  const EigenRange bwd_range = map_eigen_range(bwd);
  const double from_fwd = 1.0 / fwd_range.sigma_plus;
  const double from_bwd = bwd_range.sigma_minus;
  if (std::abs(from_fwd - from_bwd) > 1e-8)
    fail(ErrorCode::internal,
         "equality_threshold: sigma-(T') and 1/sigma+(T) disagree by " +
             std::to_string(std::abs(from_fwd - from_bwd)));
  return std::max(from_fwd, from_bwd);
}

EqualitySweep equality_sweep(const GaussianSpec& g_mu, const GaussianSpec& g_nu,
                             Index n, std::uint64_t seed,
                             const std::vector<double>& deltas, double tol) {
  if (deltas.empty())
    fail(ErrorCode::invalid_argument, "equality_sweep: empty delta list");
  for (double d : deltas) check_delta(d);

  // Identical specs reuse the same sample stream so the sweep degenerates to
  // exact zeros, matching the mu == nu limit.
  const bool same_spec =
      g_mu.dim() == g_nu.dim() &&
      (g_mu.mean().array() == g_nu.mean().array()).all() &&
      (g_mu.covariance().array() == g_nu.covariance().array()).all();
  const EmpiricalCloud cloud_mu = sample_gaussian(g_mu, n, child_seed(seed, 0));
  const EmpiricalCloud cloud_nu =
      sample_gaussian(g_nu, n, child_seed(seed, same_spec ? 0 : 1));

  EqualitySweep sweep;
  sweep.threshold = equality_threshold(g_mu, g_nu);
  sweep.w2sq_gaussian = gaussian_w2(g_mu, g_nu);
  sweep.w2sq_cloud = w2_assignment(cloud_mu, cloud_nu).cost;
  sweep.discretization_rel_err =
      std::abs(sweep.w2sq_cloud - sweep.w2sq_gaussian) /
      (1.0 + sweep.w2sq_gaussian);

  std::vector<double> sorted = deltas;
  std::sort(sorted.begin(), sorted.end());
  sweep.rows.resize(sorted.size());
  parallel_for(sorted.size(), [&](std::size_t k) {
    const double delta = sorted[k];
    const EnvelopeResult env = envelope_value(cloud_mu, cloud_nu, delta, tol);
    const double bound = sweep.w2sq_cloud / (1.0 - delta);
    const double dev = std::abs(env.value - bound);
    sweep.rows[k] = {delta, env.value, bound,
                     bound > 0.0 ? dev / bound : (dev > 1e-15 ? dev : 0.0),
                     env.gap};
  });
  return sweep;
}

}  // namespace mw2
