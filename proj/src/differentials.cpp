// Wasserstein gradient field of mu -> W2^2(mu, nu) on clouds, the norm
// identity, and the envelope-gradient convergence experiment.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "moreauw2/differentials.hpp"
#include "moreauw2/error.hpp"
#include "moreauw2/measures.hpp"
#include "moreauw2/parallel.hpp"
#include "moreauw2/rng.hpp"

namespace mw2 {

namespace {

double msq(const Matrix& m) { return m.squaredNorm() / double(m.rows()); }

}  // namespace

GradientField w2_gradient(const EmpiricalCloud& mu, const EmpiricalCloud& nu) {
  const TransportPlan plan = w2_assignment(mu, nu);
  const Index n = mu.size();

  Matrix vectors(n, mu.dim());
  for (Index i = 0; i < n; ++i)
    vectors.row(i) =
        2.0 * (mu.points().row(i) - nu.points().row(plan.permutation[i]));

  // Second-best permutation: best completion with one optimal edge forbidden,
  // minimized over the forbidden edge. A single atom has no second matching.
  double gap = std::numeric_limits<double>::infinity();
  if (n > 1) {
    double second = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < n; ++i)
      second = std::min(second,
                        detail::assignment_cost_excluding(
                            mu.points(), nu.points(), i, plan.permutation[i]));
    gap = std::max(0.0, second - plan.cost);
  }

  return GradientField{mu, std::move(vectors), gap,
                       gap < tol::degenerate_gap, plan.cost};
}

NormIdentityReport norm_identity_check(const EmpiricalCloud& mu,
                                       const EmpiricalCloud& nu) {
  const GradientField field = w2_gradient(mu, nu);
  if (field.degenerate)
    fail(ErrorCode::degenerate,
         "norm_identity_check: assignment gap " +
             std::to_string(field.assignment_gap) +
             " is below the uniqueness threshold");
  const double lhs = msq(field.vectors);
  const double rhs = 4.0 * field.w2sq;
  return NormIdentityReport{lhs, rhs, std::abs(lhs - rhs) / (1.0 + rhs)};
}

ConvergenceTable gradient_convergence_experiment(
    const EmpiricalCloud& x0, const EmpiricalCloud& nu,
    const std::vector<double>& deltas, const PerturbScheme& perturb,
    double tol) {
  if (deltas.empty())
    fail(ErrorCode::invalid_argument,
         "gradient_convergence_experiment: empty delta list");
  for (std::size_t k = 1; k < deltas.size(); ++k)
    if (!(deltas[k] < deltas[k - 1]))
      fail(ErrorCode::invalid_argument,
           "gradient_convergence_experiment: deltas must be strictly "
           "decreasing");

  const GradientField field = w2_gradient(x0, nu);
  if (field.degenerate)
    fail(ErrorCode::degenerate,
         "gradient_convergence_experiment: x0 is not a differentiability "
         "point (assignment gap " +
             std::to_string(field.assignment_gap) + ")");

  const Index n = x0.size();
  const Index d = x0.dim();

  ConvergenceTable table;
  table.limit_field = field.vectors;
  table.limit_norm = std::sqrt(msq(field.vectors));
  table.assignment_gap = field.assignment_gap;
  table.rows.resize(deltas.size());

  parallel_for(deltas.size(), [&](std::size_t k) {
    const double delta = deltas[k];
    const double radius = perturb.radius(delta);

    // Seeded atom noise rescaled to the requested lifted radius, then halved
    // until the identity pairing between X0 and the perturbed cloud is
    // optimal (so the atom coupling realizes the lifted distance).
    Matrix noise = Matrix::Zero(n, d);
    if (radius > 0.0) {
      const std::uint64_t row_seed = child_seed(perturb.seed, k);
      for (Index i = 0; i < n; ++i)
        for (Index c = 0; c < d; ++c)
          noise(i, c) = standard_normal(
              row_seed, std::uint64_t(i) * std::uint64_t(d) + std::uint64_t(c));
      const double scale = std::sqrt(msq(noise));
      noise *= (scale > 0.0) ? radius / scale : 0.0;
      for (int halving = 0; halving < 60; ++halving) {
        const double identity_cost = msq(noise);
        const double optimal_cost =
            detail::assignment_cost(x0.points(), x0.points() + noise, nullptr);
        if (identity_cost <= optimal_cost * (1.0 + 1e-12) + 1e-300) break;
        noise *= 0.5;
        if (halving == 59) noise.setZero();
      }
    }

    const EmpiricalCloud x_delta(x0.points() + noise);
    const EnvelopeResult env = envelope_value(x_delta, nu, delta, tol);

    const double grad_err =
        std::sqrt(msq(env.gradient - field.vectors));
    const double grad_norm = std::sqrt(msq(env.gradient));
    // ||grad U_delta|| <= 2 W2(L(X*), nu) up to gap slack: the exact
    // maximizer satisfies it, and strong concavity of the objective bounds
    // how far the certified iterate can sit from it.
    const double displacement =
        std::sqrt(std::max(0.0, env.gap) * delta / (1.0 - delta));
    const double slack = 2.0 * (1.0 + 1.0 / delta) * displacement + 1e-12;
    const double norm_bound = 2.0 * std::sqrt(env.plan_at_opt.cost) + slack;

    table.rows[k] = {delta,
                     std::sqrt(msq(noise)),
                     grad_err,
                     env.gap,
                     grad_norm,
                     norm_bound,
                     grad_norm <= norm_bound};
  });
  return table;
}

}  // namespace mw2
