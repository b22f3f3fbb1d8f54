// Wasserstein differential of mu -> W2^2(mu, nu) on particle clouds,
// the norm identity msq(D) = 4 * W2^2, and the envelope-gradient
// convergence experiment.

#ifndef MOREAUW2_DIFFERENTIALS_HPP
#define MOREAUW2_DIFFERENTIALS_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "moreauw2/envelope.hpp"
#include "moreauw2/types.hpp"

namespace mw2 {

// D(x_i) = 2 (x_i - T(x_i)) on the atoms of mu, with T the optimal
// assignment map. assignment_gap is the cost of the second-best permutation
// minus the optimal cost; gap below tol::degenerate_gap flags a
// non-differentiability point (degenerate == true) instead of throwing.
struct GradientField {
  EmpiricalCloud base;
  Matrix vectors;
  double assignment_gap = 0.0;
  bool degenerate = false;
  double w2sq = 0.0;
};

GradientField w2_gradient(const EmpiricalCloud& mu, const EmpiricalCloud& nu);

struct NormIdentityReport {
  double lhs;      // (1/n) sum |D(x_i)|^2
  double rhs;      // 4 * W2^2(mu, nu)
  double rel_err;  // |lhs - rhs| / (1 + rhs)
};

// Requires a positive assignment gap; propagates the degenerate flag as an
// error since the identity needs a unique transport map.
NormIdentityReport norm_identity_check(const EmpiricalCloud& mu,
                                       const EmpiricalCloud& nu);

struct ConvergenceRow {
  double delta;
  double x_dist;         // lifted distance ||X_delta - X_0||
  double grad_err;       // lifted ||grad U_delta(X_delta) - grad U(X_0)||
  double gap;            // envelope certificate gap
  double grad_norm;      // lifted ||grad U_delta(X_delta)||
  double norm_bound;     // 2 W2(L(X*), nu) + gap slack
  bool norm_bound_ok;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;  // sorted by delta, descending
  Matrix limit_field;                // 2 (x - T(x)) at X_0
  double limit_norm = 0.0;           // lifted norm of the limit field
  double assignment_gap = 0.0;
};

// Perturbation scheme: atom noise of lifted radius `radius(delta)`, drawn
// from the given seed and rescaled (halved as needed) so the identity pairing
// between X_0 and the perturbed cloud stays optimal.
struct PerturbScheme {
  std::function<double(double)> radius = [](double d) { return d * d; };
  std::uint64_t seed = 0;
};

// For each delta builds X_delta = X_0 + perturbation, evaluates the envelope
// at (X_delta, nu, delta) and compares its gradient with the Wasserstein
// gradient field at X_0 under the identity coupling of atoms. Requires X_0 to
// have a positive assignment gap. Rows run concurrently (MOREAU_W2_THREADS).
ConvergenceTable gradient_convergence_experiment(
    const EmpiricalCloud& x0, const EmpiricalCloud& nu,
    const std::vector<double>& deltas, const PerturbScheme& perturb,
    double tol = -1.0);

}  // namespace mw2

#endif
