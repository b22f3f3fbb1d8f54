// Exact quadratic-cost optimal transport between discrete measures:
// an assignment solver for equal-size uniform clouds, a min-cost-flow solver
// for weighted measures, a factorial brute-force oracle, and closed forms on
// Gaussians. Costs are probability-normalized (average squared displacement),
// so the reported cost is W2^2.

#ifndef MOREAUW2_OT_HPP
#define MOREAUW2_OT_HPP

#include <optional>
#include <vector>

#include "moreauw2/types.hpp"

namespace mw2 {

struct CouplingEntry {
  Index i;
  Index j;
  double mass;
};

// Either a permutation (Monge map between equal-size uniform clouds, mass 1/n
// per matched pair) or a sparse coupling with explicit masses. Dual
// potentials certify optimality: max_dual_violation is the largest breach of
// dual feasibility u_i + v_j <= c_ij or of complementary slackness on the
// support.
struct TransportPlan {
  enum class Kind { permutation, coupling };

  Kind kind;
  std::vector<Index> permutation;       // kind == permutation
  std::vector<CouplingEntry> coupling;  // kind == coupling
  double cost = 0.0;                    // W2^2 (average per unit mass)

  std::vector<double> dual_source;
  std::vector<double> dual_target;
  double max_dual_violation = 0.0;

  // Recomputes cost from the stored matching/coupling and the given points.
  double recompute_cost(const Matrix& source, const Matrix& target) const;
};

// Minimum average squared displacement over permutations. Among optimal
// permutations (cost ties within tol::tie_break) the lexicographically
// smallest is returned. Shortest-augmenting-path solver with dual potentials.
TransportPlan w2_assignment(const EmpiricalCloud& a, const EmpiricalCloud& b);

// Optimal coupling between weighted measures (min-cost flow with potentials;
// successive shortest augmenting paths, so optimality is certified by the
// recovered duals).
TransportPlan w2_general(const WeightedMeasure& a, const WeightedMeasure& b);

// Exact minimum over all n! permutations; testing oracle, n <= 8.
double w2_bruteforce(const EmpiricalCloud& a, const EmpiricalCloud& b);

// |m1-m2|^2 + tr(S1 + S2 - 2 (S1^{1/2} S2 S1^{1/2})^{1/2}).
double gaussian_w2(const GaussianSpec& g1, const GaussianSpec& g2);

// The optimal map T(x) = A (x - m1) + m2 with
// A = S1^{-1/2} (S1^{1/2} S2 S1^{1/2})^{1/2} S1^{-1/2} (symmetric PD).
AffineMap gaussian_map(const GaussianSpec& g1, const GaussianSpec& g2);

// Smallest and largest eigenvalue of a monotone affine map's matrix.
// The matrix must be symmetric PSD within tol::symmetry.
struct EigenRange {
  double sigma_minus;
  double sigma_plus;
};
EigenRange map_eigen_range(const AffineMap& t);

namespace detail {

// Cost-and-permutation solve without tie canonicalization; used in inner
// loops. d == 1 uses the monotone (sorted) matching, which is optimal for
// the quadratic cost; otherwise the dense augmenting-path solver runs.
// Returns the cost; fills `perm` when non-null.
double assignment_cost(const Matrix& a, const Matrix& b,
                       std::vector<Index>* perm = nullptr);

// Optimal cost when pair (row, col) is forbidden. Building block of the
// second-best assignment solve. Returns +inf if no finite completion exists.
double assignment_cost_excluding(const Matrix& a, const Matrix& b, Index row,
                                 Index col);

// Symmetric PSD square root via eigendecomposition. Eigenvalues below
// tol::spd_floor (after symmetrization) raise non_spd when require_pd.
Matrix spd_sqrt(const Matrix& s, bool require_pd);

}  // namespace detail

}  // namespace mw2

#endif
