// Sup-convolution envelope of the squared Wasserstein distance at particle
// level: for a fixed target cloud nu and delta in (0,1),
//
//   value = max over n-point configurations X' of
//           W2^2(X', nu) - (1/delta) * msq(X - X')
//
// where msq is the lifted mean-square norm (1/n) sum |.|^2. The solver
// alternates assignment solves with closed-form per-assignment maximizers and
// certifies the result with a duality-style gap.

#ifndef MOREAUW2_ENVELOPE_HPP
#define MOREAUW2_ENVELOPE_HPP

#include <cstdint>
#include <vector>

#include "moreauw2/ot.hpp"
#include "moreauw2/types.hpp"

namespace mw2 {

struct EnvelopeTracePoint {
  double objective;    // g(X'_k), nondecreasing in k
  double upper_bound;  // f_{pi_k}(C_k) >= sup g
  double gap;          // upper_bound - objective, clamped at 0
};

struct EnvelopeResult {
  double value = 0.0;            // certified envelope value (recomputed from plan_at_opt)
  EmpiricalCloud maximizer;      // X*
  Matrix gradient;               // (2/delta) * (X* - X), per particle
  int iterations = 0;
  double gap = 0.0;              // final certificate gap
  TransportPlan plan_at_opt;     // optimal matching of X* to nu
  bool converged = true;         // false when max_iter hit with gap > tol
  double w2sq = 0.0;             // W2^2(X, nu), the sandwich lower bound
  std::vector<EnvelopeTracePoint> trace;
};

// tol <= 0 selects the default 1e-8 * (1 + W2^2(x, nu)); max_iter <= 0
// selects 10*n + 100. delta must lie in [1e-6, 1 - 1e-6].
EnvelopeResult envelope_value(const EmpiricalCloud& x,
                              const EmpiricalCloud& nu, double delta,
                              double tol = -1.0, int max_iter = 0);

// Grid-enumeration lower bound on the envelope; testing oracle for
// n * d <= 4. The Cartesian grid is centered at x and must cover every
// closed-form candidate (x - delta * nu_pi) / (1 - delta).
double envelope_bruteforce(const EmpiricalCloud& x, const EmpiricalCloud& nu,
                           double delta, double grid_halfwidth,
                           double grid_step);

// max(sigma_minus(T'), 1 / sigma_plus(T)) for the Gaussian transport maps
// T: mu -> nu and T': nu -> mu. Below this threshold the envelope equals
// W2^2 / (1 - delta). The two terms agree for Gaussians; checked to 1e-8.
double equality_threshold(const GaussianSpec& g_mu, const GaussianSpec& g_nu);

struct EqualitySweepRow {
  double delta;
  double value;           // envelope value on the sampled clouds
  double equality_bound;  // W2^2(cloud) / (1 - delta)
  double rel_deviation;   // |value - bound| / bound (0 when bound == 0)
  double gap;             // solver certificate gap
};

struct EqualitySweep {
  std::vector<EqualitySweepRow> rows;
  double w2sq_cloud = 0.0;        // particle-level W2^2 of the two samples
  double w2sq_gaussian = 0.0;     // closed-form W2^2 of the two Gaussians
  double discretization_rel_err = 0.0;  // |cloud - gaussian| / (1 + gaussian)
  double threshold = 0.0;         // equality_threshold of the pair
};

// Samples n points from each Gaussian (independent child streams of `seed`),
// runs the envelope per delta, and reports the deviation from the equality
// prediction. Rows are evaluated concurrently (MOREAU_W2_THREADS caps the
// worker count) and returned sorted by delta.
EqualitySweep equality_sweep(const GaussianSpec& g_mu, const GaussianSpec& g_nu,
                             Index n, std::uint64_t seed,
                             const std::vector<double>& deltas,
                             double tol = -1.0);

}  // namespace mw2

#endif
