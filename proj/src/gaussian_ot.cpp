// Closed-form quadratic-cost transport between Gaussians
// (Bures-Wasserstein): distance, optimal affine map, and eigenvalue ranges
// of monotone map matrices.

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "moreauw2/error.hpp"
#include "moreauw2/ot.hpp"

namespace mw2 {

namespace detail {

Matrix spd_sqrt(const Matrix& s, bool require_pd) {
  const Matrix sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success)
    fail(ErrorCode::non_spd, "spd_sqrt: eigendecomposition failed");
  Vector evals = es.eigenvalues();
  for (Index i = 0; i < evals.size(); ++i) {
    if (evals(i) < tol::spd_floor) {
      if (require_pd)
        fail(ErrorCode::non_spd,
             "spd_sqrt: eigenvalue " + std::to_string(evals(i)) +
                 " below the SPD floor");
      evals(i) = 0.0;
    }
  }
  return es.eigenvectors() * evals.cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

}  // namespace detail

namespace {

void require_same_dim(const GaussianSpec& g1, const GaussianSpec& g2,
                      const char* what) {
  if (g1.dim() != g2.dim())
    fail(ErrorCode::dimension_mismatch,
         std::string(what) + ": Gaussians have different dimensions");
}

}  // namespace

double gaussian_w2(const GaussianSpec& g1, const GaussianSpec& g2) {
  require_same_dim(g1, g2, "gaussian_w2");
  const Matrix root1 = detail::spd_sqrt(g1.covariance(), true);
  // Cross term (S1^{1/2} S2 S1^{1/2})^{1/2}; inner product of SPD matrices is
  // PSD but may graze zero numerically, so the PD requirement is relaxed.
  const Matrix cross = detail::spd_sqrt(root1 * g2.covariance() * root1, false);
  const double mean_part = (g1.mean() - g2.mean()).squaredNorm();
  const double trace_part =
      (g1.covariance() + g2.covariance()).trace() - 2.0 * cross.trace();
  // The trace part is nonnegative analytically; clear roundoff dust.
  return mean_part + std::max(0.0, trace_part);
}

AffineMap gaussian_map(const GaussianSpec& g1, const GaussianSpec& g2) {
  require_same_dim(g1, g2, "gaussian_map");
  const Matrix root1 = detail::spd_sqrt(g1.covariance(), true);
  Eigen::SelfAdjointEigenSolver<Matrix> es(root1);
  const Matrix root1_inv = es.eigenvectors() *
                           es.eigenvalues().cwiseInverse().asDiagonal() *
                           es.eigenvectors().transpose();
  const Matrix cross = detail::spd_sqrt(root1 * g2.covariance() * root1, true);
  Matrix a = root1_inv * cross * root1_inv;
  a = 0.5 * (a + a.transpose());
  return AffineMap(a, g2.mean() - a * g1.mean());
}

EigenRange map_eigen_range(const AffineMap& t) {
  const Matrix& m = t.matrix;
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol::symmetry)
    fail(ErrorCode::non_monotone_map,
         "map_eigen_range: matrix asymmetric by " + std::to_string(asym));
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()),
                                           Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (lo < -tol::symmetry)
    fail(ErrorCode::non_monotone_map,
         "map_eigen_range: smallest eigenvalue " + std::to_string(lo) +
             " is negative");
  return EigenRange{lo, hi};
}

}  // namespace mw2
