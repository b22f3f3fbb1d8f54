#include "moreauw2/types.hpp"

#include <atomic>
#include <cmath>
#include <string>

#include "moreauw2/error.hpp"

namespace mw2 {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ok: return "ok";
    case ErrorCode::empty_input: return "empty_input";
    case ErrorCode::non_finite_entry: return "non_finite_entry";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::size_mismatch: return "size_mismatch";
    case ErrorCode::bad_delta: return "bad_delta";
    case ErrorCode::non_spd: return "non_spd";
    case ErrorCode::too_large: return "too_large";
    case ErrorCode::no_convergence: return "no_convergence";
    case ErrorCode::degenerate: return "degenerate";
    case ErrorCode::solver_stall: return "solver_stall";
    case ErrorCode::non_monotone_map: return "non_monotone_map";
    case ErrorCode::grid_out_of_band: return "grid_out_of_band";
    case ErrorCode::io_error: return "io_error";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

namespace tol {

namespace {
std::atomic<double> g_default_abs{1e-9};
}

double default_abs() { return g_default_abs.load(std::memory_order_relaxed); }

void set_default_abs(double value) {
  if (!(value > 0.0)) fail(ErrorCode::invalid_argument, "tolerance must be positive");
  g_default_abs.store(value, std::memory_order_relaxed);
}

}  // namespace tol

namespace {

// Throws non_finite_entry naming the first offending entry.
void require_finite(const Matrix& m, const char* what) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (!std::isfinite(m(i, j))) {
        fail(ErrorCode::non_finite_entry,
             std::string(what) + ": non-finite entry at row " +
                 std::to_string(i) + ", col " + std::to_string(j));
      }
    }
  }
}

}  // namespace

EmpiricalCloud::EmpiricalCloud(Matrix points) : points_(std::move(points)) {
  if (points_.rows() == 0 || points_.cols() == 0)
    fail(ErrorCode::empty_input, "cloud: empty point matrix");
  require_finite(points_, "cloud");
}

WeightedMeasure::WeightedMeasure(Matrix points, Vector weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.rows() == 0 || points_.cols() == 0)
    fail(ErrorCode::empty_input, "weighted measure: empty point matrix");
  if (weights_.size() != points_.rows())
    fail(ErrorCode::size_mismatch,
         "weighted measure: weight count does not match point count");
  require_finite(points_, "weighted measure");
  require_finite(weights_, "weights");
  for (Index i = 0; i < weights_.size(); ++i) {
    if (weights_(i) < 0.0)
      fail(ErrorCode::invalid_argument,
           "weighted measure: negative weight at row " + std::to_string(i));
  }
  double sum = weights_.sum();
  if (std::abs(sum - 1.0) > tol::weight_sum)
    fail(ErrorCode::invalid_argument,
         "weighted measure: weights sum to " + std::to_string(sum) +
             ", expected 1");
}

WeightedMeasure WeightedMeasure::from_cloud(const EmpiricalCloud& cloud) {
  Vector w = Vector::Constant(cloud.size(), 1.0 / double(cloud.size()));
  // Force an exact unit sum so the invariant holds for every n.
  w(cloud.size() - 1) += 1.0 - w.sum();
  return WeightedMeasure(cloud.points(), std::move(w));
}

GaussianSpec::GaussianSpec(Vector mean, Matrix covariance)
    : mean_(std::move(mean)), covariance_(std::move(covariance)) {
  if (mean_.size() == 0) fail(ErrorCode::empty_input, "gaussian: empty mean");
  if (covariance_.rows() != mean_.size() || covariance_.cols() != mean_.size())
    fail(ErrorCode::dimension_mismatch,
         "gaussian: covariance shape does not match mean dimension");
  require_finite(mean_, "gaussian mean");
  require_finite(covariance_, "gaussian covariance");
  double asym = (covariance_ - covariance_.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol::symmetry)
    fail(ErrorCode::non_spd, "gaussian: covariance asymmetric by " +
                                 std::to_string(asym));
  Eigen::SelfAdjointEigenSolver<Matrix> es(covariance_,
                                           Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= 0.0)
    fail(ErrorCode::non_spd,
         "gaussian: covariance not positive definite (min eigenvalue " +
             std::to_string(es.eigenvalues().minCoeff()) + ")");
}

AffineMap::AffineMap(Matrix m, Vector s)
    : matrix(std::move(m)), shift(std::move(s)) {
  if (matrix.rows() != matrix.cols() || matrix.rows() != shift.size())
    fail(ErrorCode::dimension_mismatch,
         "affine map: matrix must be d x d with a d-vector shift");
  require_finite(matrix, "affine map matrix");
  require_finite(shift, "affine map shift");
}

AffineMap AffineMap::identity(Index d) {
  return AffineMap(Matrix::Identity(d, d), Vector::Zero(d));
}

}  // namespace mw2
