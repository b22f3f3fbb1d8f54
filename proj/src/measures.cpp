#include "moreauw2/measures.hpp"

#include <Eigen/Cholesky>

#include "moreauw2/error.hpp"
#include "moreauw2/rng.hpp"

namespace mw2 {

EmpiricalCloud validate_cloud(const Matrix& raw) { return EmpiricalCloud(raw); }

double second_moment(const EmpiricalCloud& cloud) {
  return cloud.points().squaredNorm() / double(cloud.size());
}

double second_moment(const WeightedMeasure& measure) {
  return measure.points().rowwise().squaredNorm().dot(measure.weights());
}

EmpiricalCloud sample_gaussian(const GaussianSpec& g, Index n,
                               std::uint64_t seed) {
  if (n < 1) fail(ErrorCode::invalid_argument, "sample_gaussian: n must be >= 1");
  const Index d = g.dim();

  // Cholesky factor (deterministic); SPD is guaranteed by GaussianSpec.
  Eigen::LLT<Matrix> llt(g.covariance());
  if (llt.info() != Eigen::Success)
    fail(ErrorCode::non_spd, "sample_gaussian: Cholesky factorization failed");
  const Matrix chol = llt.matrixL();

  // Point i draws its d standard normals from counters i*d .. i*d + d - 1.
  Matrix z(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < d; ++j)
      z(i, j) = standard_normal(seed, std::uint64_t(i) * std::uint64_t(d) +
                                          std::uint64_t(j));

  Matrix points = z * chol.transpose();
  points.rowwise() += g.mean().transpose();
  return EmpiricalCloud(std::move(points));
}

EmpiricalCloud push_forward(const EmpiricalCloud& cloud, const AffineMap& f,
                            double h) {
  if (f.dim() != cloud.dim())
    fail(ErrorCode::dimension_mismatch,
         "push_forward: map dimension does not match cloud dimension");
  Matrix points = cloud.points() + h * (cloud.points() * f.matrix.transpose() +
                                        Matrix::Constant(cloud.size(), 1, 1.0) *
                                            f.shift.transpose());
  return EmpiricalCloud(std::move(points));
}

}  // namespace mw2
