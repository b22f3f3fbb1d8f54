// Core measure and map types: particle clouds, weighted discrete measures,
// Gaussian parameter sets, and affine maps. All types validate their
// invariants at construction and are immutable afterwards.

#ifndef MOREAUW2_TYPES_HPP
#define MOREAUW2_TYPES_HPP

#include <Eigen/Dense>
#include <cstdint>

#include "moreauw2/error.hpp"

namespace mw2 {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

namespace tol {
// Default absolute tolerance for validation comparisons. Runtime-settable.
double default_abs();
void set_default_abs(double value);

inline constexpr double weight_sum = 1e-12;
inline constexpr double symmetry = 1e-12;
inline constexpr double spd_floor = 1e-12;
inline constexpr double tie_break = 1e-12;
inline constexpr double degenerate_gap = 1e-12;
inline constexpr double delta_band = 1e-6;
}  // namespace tol

// n points in R^d with implicit uniform weight 1/n per atom. Also serves as
// the lifted random variable on an n-atom uniform probability space.
class EmpiricalCloud {
 public:
  // Validates: non-empty, all coordinates finite.
  explicit EmpiricalCloud(Matrix points);

  Index size() const { return points_.rows(); }
  Index dim() const { return points_.cols(); }
  const Matrix& points() const { return points_; }
  Eigen::RowVectorXd point(Index i) const { return points_.row(i); }

  // Mean of atom coordinates.
  Vector mean() const { return points_.colwise().mean(); }

 private:
  Matrix points_;
};

// m points with nonnegative weights summing to one.
class WeightedMeasure {
 public:
  WeightedMeasure(Matrix points, Vector weights);

  // Uniform 1/n weights on a cloud's atoms.
  static WeightedMeasure from_cloud(const EmpiricalCloud& cloud);

  Index size() const { return points_.rows(); }
  Index dim() const { return points_.cols(); }
  const Matrix& points() const { return points_; }
  const Vector& weights() const { return weights_; }

 private:
  Matrix points_;
  Vector weights_;
};

// Mean vector and SPD covariance; source of closed-form transport oracles.
class GaussianSpec {
 public:
  GaussianSpec(Vector mean, Matrix covariance);

  Index dim() const { return mean_.size(); }
  const Vector& mean() const { return mean_; }
  const Matrix& covariance() const { return covariance_; }

 private:
  Vector mean_;
  Matrix covariance_;
};

// x -> matrix * x + shift. Candidate transport maps and perturbation fields.
struct AffineMap {
  Matrix matrix;
  Vector shift;

  AffineMap(Matrix m, Vector s);
  static AffineMap identity(Index d);

  Index dim() const { return shift.size(); }
  Vector operator()(const Vector& x) const { return matrix * x + shift; }
};

}  // namespace mw2

#endif
