// Construction, validation, sampling and push-forward of discrete measures.

#ifndef MOREAUW2_MEASURES_HPP
#define MOREAUW2_MEASURES_HPP

#include <cstdint>

#include "moreauw2/types.hpp"

namespace mw2 {

// Validating constructor wrapper. Rejects empty input and non-finite entries
// (offending row/column reported in the error message).
EmpiricalCloud validate_cloud(const Matrix& raw);

// Second moment M2 = integral of |x|^2: (1/n) sum |x_i|^2 for clouds,
// sum w_i |x_i|^2 for weighted measures.
double second_moment(const EmpiricalCloud& cloud);
double second_moment(const WeightedMeasure& measure);

// n i.i.d. draws from the Gaussian, deterministic in (spec, n, seed).
EmpiricalCloud sample_gaussian(const GaussianSpec& g, Index n,
                               std::uint64_t seed);

// Each point x is replaced by x + h * (f.matrix * x + f.shift),
// i.e. the push-forward under Id + h*f.
EmpiricalCloud push_forward(const EmpiricalCloud& cloud, const AffineMap& f,
                            double h);

}  // namespace mw2

#endif
