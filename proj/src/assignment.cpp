// Exact linear assignment for the quadratic ground cost: dense
// shortest-augmenting-path solver with dual potentials, a monotone fast path
// in one dimension, lexicographic canonicalization among cost-tied optima,
// and the factorial brute-force oracle.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "moreauw2/error.hpp"
#include "moreauw2/measures.hpp"
#include "moreauw2/ot.hpp"

namespace mw2 {

namespace {

using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kForbidden = 1e30;  // sentinel cost for excluded pairs
constexpr Index kDenseCap = 4096;    // dense cost matrices above this refuse

RowMajorMatrix pairwise_sq_dists(const Matrix& a, const Matrix& b) {
  const Index n = a.rows();
  RowMajorMatrix c(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      c(i, j) = (a.row(i) - b.row(j)).squaredNorm();
  return c;
}

// Shortest-augmenting-path assignment (Kuhn-Munkres with potentials).
// On return perm[i] is the column of row i and u, v are dual potentials with
// u[i] + v[j] <= c(i, j) up to roundoff, tight on matched pairs.
void solve_dense_lap(const RowMajorMatrix& c, std::vector<Index>& perm,
                     std::vector<double>& u, std::vector<double>& v) {
  const Index n = c.rows();
  u.assign(n + 1, 0.0);
  v.assign(n + 1, 0.0);
  std::vector<Index> col_row(n + 1, -1);  // column -> matched row; n is virtual
  std::vector<Index> way(n + 1, 0);
  std::vector<double> minv(n + 1);
  std::vector<char> used(n + 1);

  for (Index i = 0; i < n; ++i) {
    col_row[n] = i;
    Index j0 = n;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), char(0));
    do {
      used[j0] = 1;
      const Index i0 = col_row[j0];
      Index j1 = -1;
      double delta = kInf;
      for (Index j = 0; j < n; ++j) {
        if (used[j]) continue;
        const double cur = c(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (Index j = 0; j <= n; ++j) {
        if (used[j]) {
          u[col_row[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (col_row[j0] != -1);
    // Augment along the recorded path back to the virtual column.
    do {
      const Index j1 = way[j0];
      col_row[j0] = col_row[j1];
      j0 = j1;
    } while (j0 != n);
  }

  perm.assign(n, -1);
  for (Index j = 0; j < n; ++j) perm[col_row[j]] = j;
  u.resize(n);
  v.resize(n);
}

struct Sorted1D {
  std::vector<Index> order;  // original indices sorted by coordinate
};

Sorted1D sort_1d(const Matrix& pts) {
  Sorted1D s;
  s.order.resize(pts.rows());
  std::iota(s.order.begin(), s.order.end(), Index(0));
  std::sort(s.order.begin(), s.order.end(), [&](Index l, Index r) {
    if (pts(l, 0) != pts(r, 0)) return pts(l, 0) < pts(r, 0);
    return l < r;  // stable under duplicates
  });
  return s;
}

bool has_duplicates_1d(const Matrix& pts, const Sorted1D& s) {
  for (std::size_t k = 1; k < s.order.size(); ++k)
    if (pts(s.order[k], 0) == pts(s.order[k - 1], 0)) return true;
  return false;
}

// Monotone matching (optimal for the quadratic cost in 1D). Fills perm when
// requested; returns the raw (unnormalized) total cost.
double monotone_cost_1d(const Matrix& a, const Matrix& b,
                        std::vector<Index>* perm) {
  const Sorted1D sa = sort_1d(a);
  const Sorted1D sb = sort_1d(b);
  double total = 0.0;
  if (perm) perm->assign(a.rows(), -1);
  for (Index k = 0; k < a.rows(); ++k) {
    const double diff = a(sa.order[k], 0) - b(sb.order[k], 0);
    total += diff * diff;
    if (perm) (*perm)[sa.order[k]] = sb.order[k];
  }
  return total;
}

// North-west dual construction for the sorted 1D problem; valid because the
// quadratic cost is a Monge matrix on sorted points.
void duals_1d(const Matrix& a, const Matrix& b, const Sorted1D& sa,
              const Sorted1D& sb, std::vector<double>& u,
              std::vector<double>& v) {
  const Index n = a.rows();
  std::vector<double> us(n), vs(n);
  auto cost = [&](Index k, Index l) {
    const double diff = a(sa.order[k], 0) - b(sb.order[l], 0);
    return diff * diff;
  };
  vs[0] = 0.0;
  for (Index l = 1; l < n; ++l)
    vs[l] = vs[l - 1] + cost(l - 1, l) - cost(l - 1, l - 1);
  for (Index k = 0; k < n; ++k) us[k] = cost(k, k) - vs[k];
  u.assign(n, 0.0);
  v.assign(n, 0.0);
  for (Index k = 0; k < n; ++k) u[sa.order[k]] = us[k];
  for (Index l = 0; l < n; ++l) v[sb.order[l]] = vs[l];
}

// Kuhn augmenting search on the tight graph; rows below `first_row` and
// columns marked fixed are off limits.
bool kuhn_augment(Index row, const std::vector<std::vector<Index>>& tight,
                  const std::vector<char>& col_fixed, std::vector<Index>& match,
                  std::vector<Index>& row_of_col, std::vector<char>& visited,
                  Index first_row) {
  for (Index j : tight[row]) {
    if (col_fixed[j] || visited[j]) continue;
    visited[j] = 1;
    const Index owner = row_of_col[j];
    if (owner == -1 || (owner >= first_row &&
                        kuhn_augment(owner, tight, col_fixed, match,
                                     row_of_col, visited, first_row))) {
      match[row] = j;
      row_of_col[j] = row;
      return true;
    }
  }
  return false;
}

// Lexicographically smallest perfect matching on the tight-edge graph,
// starting from a known perfect matching.
std::vector<Index> lex_min_tight_matching(
    const std::vector<std::vector<Index>>& tight, std::vector<Index> match) {
  const Index n = Index(tight.size());
  std::vector<Index> row_of_col(n, -1);
  for (Index i = 0; i < n; ++i) row_of_col[match[i]] = i;
  std::vector<char> col_fixed(n, 0);
  std::vector<char> visited(n);

  for (Index r = 0; r < n; ++r) {
    for (Index j : tight[r]) {
      if (col_fixed[j]) continue;
      if (j == match[r]) break;  // already the smallest feasible choice
      if (j > match[r]) break;   // tight lists are ascending
      // Try to steal column j from its owner and reroute the owner.
      const Index owner = row_of_col[j];
      const Index old = match[r];
      match[r] = j;
      row_of_col[j] = r;
      match[owner] = -1;
      row_of_col[old] = -1;
      std::fill(visited.begin(), visited.end(), char(0));
      visited[j] = 1;
      if (kuhn_augment(owner, tight, col_fixed, match, row_of_col, visited,
                       r + 1)) {
        break;  // r -> j fixed; owner rerouted
      }
      // Revert.
      match[owner] = j;
      row_of_col[j] = owner;
      match[r] = old;
      row_of_col[old] = r;
    }
    col_fixed[match[r]] = 1;
  }
  return match;
}

double max_dual_violation_dense(const RowMajorMatrix& c,
                                const std::vector<Index>& perm,
                                const std::vector<double>& u,
                                const std::vector<double>& v) {
  const Index n = c.rows();
  double worst = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double slack = u[i] + v[j] - c(i, j);
      if (slack > worst) worst = slack;  // dual feasibility breach
    }
    worst = std::max(worst, std::abs(u[i] + v[perm[i]] - c(i, perm[i])));
  }
  return worst;
}

}  // namespace

double TransportPlan::recompute_cost(const Matrix& source,
                                     const Matrix& target) const {
  if (kind == Kind::permutation) {
    double total = 0.0;
    for (Index i = 0; i < Index(permutation.size()); ++i)
      total += (source.row(i) - target.row(permutation[i])).squaredNorm();
    return total / double(permutation.size());
  }
  double total = 0.0;
  for (const auto& e : coupling)
    total += e.mass * (source.row(e.i) - target.row(e.j)).squaredNorm();
  return total;
}

namespace detail {

// Returns the average (probability-normalized) cost, i.e. W2^2.
double assignment_cost(const Matrix& a, const Matrix& b,
                       std::vector<Index>* perm) {
  const Index n = a.rows();
  if (n == 1) {
    if (perm) perm->assign(1, 0);
    return (a.row(0) - b.row(0)).squaredNorm();
  }
  if (a.cols() == 1) return monotone_cost_1d(a, b, perm) / double(n);
  if (n > kDenseCap)
    fail(ErrorCode::too_large,
         "assignment: n exceeds the dense solver cap of " +
             std::to_string(kDenseCap));
  const RowMajorMatrix c = pairwise_sq_dists(a, b);
  std::vector<Index> p;
  std::vector<double> u, v;
  solve_dense_lap(c, p, u, v);
  double total = 0.0;
  for (Index i = 0; i < n; ++i) total += c(i, p[i]);
  if (perm) *perm = std::move(p);
  return total / double(n);
}

double assignment_cost_excluding(const Matrix& a, const Matrix& b, Index row,
                                 Index col) {
  const Index n = a.rows();
  if (n == 1) return kInf;
  if (n > kDenseCap)
    fail(ErrorCode::too_large,
         "assignment: n exceeds the dense solver cap of " +
             std::to_string(kDenseCap));
  RowMajorMatrix c = pairwise_sq_dists(a, b);
  c(row, col) = kForbidden;
  std::vector<Index> p;
  std::vector<double> u, v;
  solve_dense_lap(c, p, u, v);
  double total = 0.0;
  for (Index i = 0; i < n; ++i) total += c(i, p[i]);
  if (total >= kForbidden / 2) return kInf;
  return total / double(n);
}

}  // namespace detail

TransportPlan w2_assignment(const EmpiricalCloud& a, const EmpiricalCloud& b) {
  if (a.size() != b.size())
    fail(ErrorCode::size_mismatch,
         "w2_assignment: clouds have " + std::to_string(a.size()) + " and " +
             std::to_string(b.size()) + " points");
  if (a.dim() != b.dim())
    fail(ErrorCode::dimension_mismatch,
         "w2_assignment: clouds have dimensions " + std::to_string(a.dim()) +
             " and " + std::to_string(b.dim()));

  const Index n = a.size();
  TransportPlan plan;
  plan.kind = TransportPlan::Kind::permutation;

  if (a.dim() == 1) {
    const Sorted1D sa = sort_1d(a.points());
    const Sorted1D sb = sort_1d(b.points());
    if (!has_duplicates_1d(a.points(), sa) &&
        !has_duplicates_1d(b.points(), sb)) {
      // Distinct coordinates: the monotone matching is the unique optimum.
      plan.permutation.assign(n, -1);
      double total = 0.0;
      for (Index k = 0; k < n; ++k) {
        plan.permutation[sa.order[k]] = sb.order[k];
        const double diff = a.points()(sa.order[k], 0) -
                            b.points()(sb.order[k], 0);
        total += diff * diff;
      }
      plan.cost = total / double(n);
      duals_1d(a.points(), b.points(), sa, sb, plan.dual_source,
               plan.dual_target);
      double worst = 0.0;
      for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
          const double diff = a.points()(i, 0) - b.points()(j, 0);
          const double slack =
              plan.dual_source[i] + plan.dual_target[j] - diff * diff;
          if (slack > worst) worst = slack;
        }
      }
      plan.max_dual_violation = worst;
      return plan;
    }
    // Duplicates: fall through to the dense path for canonical tie-breaking.
  }

  if (n > kDenseCap)
    fail(ErrorCode::too_large,
         "w2_assignment: n exceeds the dense solver cap of " +
             std::to_string(kDenseCap));

  const RowMajorMatrix c = pairwise_sq_dists(a.points(), b.points());
  std::vector<Index> perm;
  std::vector<double> u, v;
  solve_dense_lap(c, perm, u, v);

  // Canonicalize ties: lexicographically smallest optimal permutation on the
  // tight-edge graph (reduced cost within the tie window).
  const double cmax = n > 0 ? c.maxCoeff() : 1.0;
  const double edge_tol = tol::tie_break * std::max(1.0, cmax);
  bool ties = false;
  std::vector<std::vector<Index>> tight(n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (c(i, j) - u[i] - v[j] <= edge_tol || j == perm[i])
        tight[i].push_back(j);
    }
    if (tight[i].size() > 1) ties = true;
  }
  if (ties) perm = lex_min_tight_matching(tight, std::move(perm));

  plan.permutation = perm;
  double total = 0.0;
  for (Index i = 0; i < n; ++i) total += c(i, perm[i]);
  plan.cost = total / double(n);
  plan.dual_source = u;
  plan.dual_target = v;
  plan.max_dual_violation = max_dual_violation_dense(c, perm, u, v);
  return plan;
}

double w2_bruteforce(const EmpiricalCloud& a, const EmpiricalCloud& b) {
  if (a.size() != b.size())
    fail(ErrorCode::size_mismatch, "w2_bruteforce: cloud sizes differ");
  if (a.dim() != b.dim())
    fail(ErrorCode::dimension_mismatch, "w2_bruteforce: dimensions differ");
  const Index n = a.size();
  if (n > 8)
    fail(ErrorCode::too_large,
         "w2_bruteforce: n = " + std::to_string(n) + " exceeds the cap of 8");

  const RowMajorMatrix c = pairwise_sq_dists(a.points(), b.points());
  std::vector<Index> idx(n);
  std::iota(idx.begin(), idx.end(), Index(0));
  double best = kInf;
  do {
    double total = 0.0;
    for (Index i = 0; i < n; ++i) total += c(i, idx[i]);
    best = std::min(best, total);
  } while (std::next_permutation(idx.begin(), idx.end()));
  return best / double(n);
}

}  // namespace mw2
