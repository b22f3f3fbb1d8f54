// Entropy and Fisher information in the Gaussian closed forms, and the
// displacement-convexity check of the entropy along Id + h*f push-forwards.

#ifndef MOREAUW2_FUNCTIONALS_HPP
#define MOREAUW2_FUNCTIONALS_HPP

#include <vector>

#include "moreauw2/types.hpp"

namespace mw2 {

struct FunctionalReport {
  double entropy;
  double fisher;
};

// E(mu) = integral of log(mu) d mu = -(1/2) log((2 pi e)^d det S).
double gaussian_entropy(const GaussianSpec& g);

// I(mu) = integral of |grad log mu|^2 d mu = trace(S^{-1}).
double gaussian_fisher(const GaussianSpec& g);

FunctionalReport gaussian_functionals(const GaussianSpec& g);

struct DisplacementRow {
  double h;
  double entropy;  // E((Id + h f)_# mu)
};

struct DisplacementReport {
  std::vector<DisplacementRow> rows;     // sorted by h
  bool convex = false;                   // all interior second differences >= -1e-9
  double min_second_difference = 0.0;
};

// Push-forward covariance (I + hA) S (I + hA)^T, entropy via the closed
// form. Every grid h must satisfy |h| * ||A||_op < 1/2 (admissible band),
// else grid_out_of_band.
DisplacementReport displacement_convexity_check(const GaussianSpec& g,
                                                const AffineMap& f,
                                                std::vector<double> h_grid);

}  // namespace mw2

#endif
