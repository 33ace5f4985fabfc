#pragma once

#include <Eigen/Core>

#include "hypnat/errors.hpp"

namespace hypnat {

/// Tabulated radial profile m(r): the gradient magnitude at distance r of
/// y -> integral of B(y, theta) against the visual measure seen from a point.
/// m(0) = 0, m is nondecreasing and approaches 1; interpolation is monotone
/// cubic (Fritsch-Carlson), with the antiderivative G (G' = m, G(0) = 0)
/// available for objective values.
class VisualKernelProfile {
 public:
  VisualKernelProfile(int dim_n, Eigen::VectorXd grid, Eigen::VectorXd values);

  int dim() const { return dim_n_; }
  const Eigen::VectorXd& grid() const { return grid_; }
  const Eigen::VectorXd& values() const { return values_; }

  double value(double r) const;           // m(r); constant beyond the grid
  double antiderivative(double r) const;  // G(r); linear beyond the grid

 private:
  int dim_n_;
  Eigen::VectorXd grid_;
  Eigen::VectorXd values_;
  Eigen::VectorXd slope_;    // PCHIP endpoint slopes
  Eigen::VectorXd cum_;      // integral of the interpolant up to each knot
};

/// Tabulates the profile by quadrature over the visual sphere. samples is
/// the node budget per radius; the integrand's boundary-cap feature (angular
/// width ~ e^{-r}) gets a dedicated refined segment, so the default grid is
/// accurate to ~1e-6 throughout.
VisualKernelProfile build_profile(int dim_n, int samples, double grid_step = 0.05,
                                  double r_max = 25.0);

}  // namespace hypnat
