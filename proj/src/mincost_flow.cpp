// Optimal transport between weighted discrete measures as a min-cost flow on
// the complete bipartite graph, solved by successive shortest augmenting
// paths with node potentials (Dijkstra on reduced costs). The potentials
// certify optimality: u_i + v_j <= c_ij everywhere, tight on the support.

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "moreauw2/error.hpp"
#include "moreauw2/ot.hpp"

namespace mw2 {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMassEps = 1e-15;

struct FlowState {
  Index m, n;
  Matrix flow;                                  // m x n, mostly zero
  std::vector<std::vector<Index>> sink_support; // sinks -> sources with flow
};

}  // namespace

TransportPlan w2_general(const WeightedMeasure& a, const WeightedMeasure& b) {
  if (a.dim() != b.dim())
    fail(ErrorCode::dimension_mismatch,
         "w2_general: measures have dimensions " + std::to_string(a.dim()) +
             " and " + std::to_string(b.dim()));

  const Index m = a.size();
  const Index n = b.size();
  const Matrix& xs = a.points();
  const Matrix& ys = b.points();

  // Row-major cost matrix of squared distances.
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> c(m,
                                                                           n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j)
      c(i, j) = (xs.row(i) - ys.row(j)).squaredNorm();

  std::vector<double> supply(a.weights().data(), a.weights().data() + m);
  std::vector<double> demand(b.weights().data(), b.weights().data() + n);

  FlowState st{m, n, Matrix::Zero(m, n),
               std::vector<std::vector<Index>>(std::size_t(n))};
  std::vector<double> pot_s(m, 0.0), pot_t(n, 0.0);

  std::vector<double> dist_s(m), dist_t(n);
  std::vector<char> done_s(m), done_t(n);
  std::vector<Index> pred_t(n);  // sink j reached from source pred_t[j]
  std::vector<Index> pred_s(m);  // source i reached via backward edge from sink

  const int max_rounds = 8 * int(m + n) + 64;
  int rounds = 0;

  for (Index start = 0; start < m;) {
    if (supply[start] <= kMassEps) {
      ++start;
      continue;
    }
    if (++rounds > max_rounds)
      fail(ErrorCode::solver_stall,
           "w2_general: augmentation cap hit without certified optimality");

    // Dijkstra from `start` over reduced costs; early exit at the nearest
    // sink with residual demand.
    std::fill(dist_s.begin(), dist_s.end(), kInf);
    std::fill(dist_t.begin(), dist_t.end(), kInf);
    std::fill(done_s.begin(), done_s.end(), char(0));
    std::fill(done_t.begin(), done_t.end(), char(0));
    dist_s[start] = 0.0;

    using HeapItem = std::pair<double, Index>;  // (dist, node); node >= m is a sink
    std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<>> heap;
    heap.push({0.0, start});
    Index found_sink = -1;
    double found_dist = kInf;

    while (!heap.empty()) {
      const auto [d, node] = heap.top();
      heap.pop();
      if (node < m) {
        const Index i = node;
        if (done_s[i] || d > dist_s[i]) continue;
        done_s[i] = 1;
        for (Index j = 0; j < n; ++j) {
          const double rc = std::max(0.0, c(i, j) + pot_s[i] - pot_t[j]);
          const double nd = d + rc;
          if (nd < dist_t[j]) {
            dist_t[j] = nd;
            pred_t[j] = i;
            heap.push({nd, m + j});
          }
        }
      } else {
        const Index j = node - m;
        if (done_t[j] || d > dist_t[j]) continue;
        done_t[j] = 1;
        if (demand[j] > kMassEps) {
          found_sink = j;
          found_dist = d;
          break;
        }
        for (Index i : st.sink_support[std::size_t(j)]) {
          if (st.flow(i, j) <= 0.0) continue;
          const double rc = std::max(0.0, -c(i, j) - pot_s[i] + pot_t[j]);
          const double nd = d + rc;
          if (nd < dist_s[i]) {
            dist_s[i] = nd;
            pred_s[i] = j;
            heap.push({nd, i});
          }
        }
      }
    }

    if (found_sink < 0)
      fail(ErrorCode::solver_stall,
           "w2_general: no augmenting path found (unbalanced input?)");

    // Potential update keeps all reduced costs nonnegative and makes the
    // shortest path tight.
    for (Index i = 0; i < m; ++i) pot_s[i] += std::min(dist_s[i], found_dist);
    for (Index j = 0; j < n; ++j) pot_t[j] += std::min(dist_t[j], found_dist);

    // Bottleneck along the path.
    double q = std::min(supply[start], demand[found_sink]);
    {
      Index j = found_sink;
      while (true) {
        const Index i = pred_t[j];
        if (i == start) break;
        j = pred_s[i];
        q = std::min(q, st.flow(i, j));
      }
    }

    // Push.
    {
      Index j = found_sink;
      while (true) {
        const Index i = pred_t[j];
        if (st.flow(i, j) == 0.0 && q > 0.0)
          st.sink_support[std::size_t(j)].push_back(i);
        st.flow(i, j) += q;
        if (i == start) break;
        const Index j2 = pred_s[i];
        st.flow(i, j2) -= q;
        j = j2;
      }
    }
    supply[start] -= q;
    demand[found_sink] -= q;
  }

  for (Index j = 0; j < n; ++j)
    if (demand[j] > 1e-12)
      fail(ErrorCode::solver_stall,
           "w2_general: residual demand left after augmentation");

  TransportPlan plan;
  plan.kind = TransportPlan::Kind::coupling;
  double total = 0.0;
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double f = st.flow(i, j);
      if (f > 0.0) {
        plan.coupling.push_back({i, j, f});
        total += f * c(i, j);
      }
    }
  }
  plan.cost = total;

  // Duals: u_i + v_j <= c_ij with equality on the support.
  plan.dual_source.resize(m);
  plan.dual_target.resize(n);
  for (Index i = 0; i < m; ++i) plan.dual_source[i] = -pot_s[i];
  for (Index j = 0; j < n; ++j) plan.dual_target[j] = pot_t[j];
  double worst = 0.0;
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) {
      const double slack = plan.dual_source[i] + plan.dual_target[j] - c(i, j);
      if (slack > worst) worst = slack;
    }
  for (const auto& e : plan.coupling)
    worst = std::max(worst, std::abs(plan.dual_source[e.i] +
                                     plan.dual_target[e.j] - c(e.i, e.j)));
  plan.max_dual_violation = worst;
  return plan;
}

}  // namespace mw2
