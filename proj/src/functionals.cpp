// Gaussian closed forms of the entropy E(mu) = integral of log(mu) d mu and
// the Fisher information, plus the displacement-convexity check of E along
// affine push-forwards.

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "moreauw2/error.hpp"
#include "moreauw2/functionals.hpp"

namespace mw2 {

double gaussian_entropy(const GaussianSpec& g) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(g.covariance(),
                                           Eigen::EigenvaluesOnly);
  const double log_det = es.eigenvalues().array().log().sum();
  const double d = double(g.dim());
  return -0.5 * (d * std::log(2.0 * std::numbers::pi * std::numbers::e) +
                 log_det);
}

double gaussian_fisher(const GaussianSpec& g) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(g.covariance(),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues().array().inverse().sum();
}

FunctionalReport gaussian_functionals(const GaussianSpec& g) {
  return FunctionalReport{gaussian_entropy(g), gaussian_fisher(g)};
}

DisplacementReport displacement_convexity_check(const GaussianSpec& g,
                                                const AffineMap& f,
                                                std::vector<double> h_grid) {
  if (f.dim() != g.dim())
    fail(ErrorCode::dimension_mismatch,
         "displacement_convexity_check: map and Gaussian dimensions differ");
  if (h_grid.empty())
    fail(ErrorCode::invalid_argument,
         "displacement_convexity_check: empty h grid");
  std::sort(h_grid.begin(), h_grid.end());

  // Admissible band |h| * ||A||_op < 1/2 keeps Id + h f a monotone bijection.
  const double op_norm = f.matrix.jacobiSvd().singularValues()(0);
  for (double h : h_grid) {
    if (!(std::abs(h) * op_norm < 0.5))
      fail(ErrorCode::grid_out_of_band,
           "displacement_convexity_check: |h|*||A|| = " +
               std::to_string(std::abs(h) * op_norm) + " not below 1/2");
  }

  const Index d = g.dim();
  DisplacementReport report;
  report.rows.reserve(h_grid.size());
  for (double h : h_grid) {
    const Matrix scale = Matrix::Identity(d, d) + h * f.matrix;
    Matrix cov = scale * g.covariance() * scale.transpose();
    cov = 0.5 * (cov + cov.transpose());
    const Vector mean = scale * g.mean() + h * f.shift;
    report.rows.push_back({h, gaussian_entropy(GaussianSpec(mean, cov))});
  }

  report.convex = true;
  report.min_second_difference = 0.0;
  if (report.rows.size() >= 3) {
    // Uniform grids use the plain second difference.
    double spacing = report.rows[1].h - report.rows[0].h;
    for (std::size_t k = 2; k < report.rows.size(); ++k) {
      const double step = report.rows[k].h - report.rows[k - 1].h;
      if (std::abs(step - spacing) > 1e-9 * std::max(1.0, std::abs(spacing)))
        fail(ErrorCode::invalid_argument,
             "displacement_convexity_check: h grid must be uniform");
    }
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k + 1 < report.rows.size(); ++k) {
      const double second = report.rows[k + 1].entropy +
                            report.rows[k - 1].entropy -
                            2.0 * report.rows[k].entropy;
      worst = std::min(worst, second);
    }
    report.min_second_difference = worst;
    report.convex = worst >= -1e-9;
  }
  return report;
}

}  // namespace mw2
