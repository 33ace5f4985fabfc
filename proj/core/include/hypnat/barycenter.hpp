#pragma once

#include <optional>

#include "hypnat/kernel_profile.hpp"
#include "hypnat/measures.hpp"

namespace hypnat {

struct BarycenterOptions {
  double tol = 1e-9;          // gradient norm at convergence
  int max_iter = 500;
  double escape_radius = 40.0;
  double escape_grad_floor = 0.1;
  double armijo_shrink = 0.5;
  double armijo_slope = 1e-4;
  double initial_step = 1.0;
};

struct BarycenterReport {
  std::optional<HPoint> point;
  double grad_norm = 0.0;
  int iterations = 0;
  bool escaped = false;
  std::optional<IdealPoint> escape_direction;
  bool degenerate = false;
  bool monotone = true;       // objective decreased across accepted steps
  bool convexity_ok = true;   // gradient sign flips across the minimum
  double objective = 0.0;
};

/// Gradient at y of the Busemann average of beta. Boundary atoms contribute
/// their Busemann gradients; interior atoms act through the radial kernel:
/// m(d(y,p)) times the unit tangent at y pointing away from p.
Vec busemann_average_grad(const AtomicMeasure& beta, const HPoint& y,
                          const VisualKernelProfile& profile);

/// The objective the gradient above differentiates: boundary atoms add
/// B(y, theta), interior atoms add G(d(y, p)) with G' = m, G(0) = 0.
double busemann_average_value(const AtomicMeasure& beta, const HPoint& y,
                              const VisualKernelProfile& profile);

/// Riemannian gradient descent with Armijo backtracking for the barycenter.
/// Iterates passing escape_radius with a live gradient are reported as
/// escaped toward their radial projection. A measure of exactly two equal
/// boundary atoms throws DegenerateTwoDeltas.
BarycenterReport solve_barycenter(const AtomicMeasure& beta,
                                  const VisualKernelProfile& profile,
                                  const BarycenterOptions& opts = {});

namespace detail {

/// Column-matrix form of a barycenter problem; the hot path for natural-map
/// evaluations, which reuse one target matrix across many weight vectors.
struct BarycenterProblem {
  const VisualKernelProfile* profile = nullptr;
  const Mat* interior = nullptr;       // (n+1) x Ni hyperboloid columns
  const Vec* interior_w = nullptr;
  const Mat* boundary = nullptr;       // (n+1) x Nb normalized rays
  const Vec* boundary_w = nullptr;
  int dim = 0;
};

Vec problem_grad(const BarycenterProblem& p, const Vec& y);
double problem_value(const BarycenterProblem& p, const Vec& y);
BarycenterReport solve_problem(const BarycenterProblem& p, const HPoint& init,
                               const BarycenterOptions& opts);
HPoint default_init(const BarycenterProblem& p);

}  // namespace detail

}  // namespace hypnat
