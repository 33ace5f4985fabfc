#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Core>

#include "hypnat/errors.hpp"
#include "hypnat/rng.hpp"

namespace hypnat {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Minkowski form of signature (-,+,...,+), time coordinate first.
inline double minkowski(const Vec& a, const Vec& b) {
  return a.tail(a.size() - 1).dot(b.tail(b.size() - 1)) - a[0] * b[0];
}

/// Point of H^d in the hyperboloid model: <x,x> = -1, x0 >= 1.
/// Every constructor renormalizes, so long isometry products do not drift
/// off the sheet.
class HPoint {
 public:
  explicit HPoint(Vec coords);
  static HPoint origin(int dim);
  /// Inverse of to_ball: |v| < 1 required.
  static HPoint from_ball(const Vec& v);

  const Vec& coords() const { return c_; }
  int dim() const { return static_cast<int>(c_.size()) - 1; }

 private:
  HPoint() = default;
  Vec c_;
  friend HPoint hpoint_unchecked(Vec c);
};

HPoint hpoint_unchecked(Vec c);

/// Boundary point of H^d as a future-pointing lightlike ray, normalized so
/// that <O, ray> = -1, i.e. ray = (1, u) with |u| = 1.
class IdealPoint {
 public:
  explicit IdealPoint(Vec ray);
  static IdealPoint from_ball(const Vec& u);

  const Vec& ray() const { return r_; }
  int dim() const { return static_cast<int>(r_.size()) - 1; }

 private:
  Vec r_;
};

/// Time-orientation-preserving Lorentz matrix acting on H^d.
class Isometry {
 public:
  explicit Isometry(Mat matrix, double tol = 1e-9);
  static Isometry identity(int dim);

  const Mat& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()) - 1; }

  HPoint apply(const HPoint& x) const;
  IdealPoint apply(const IdealPoint& t) const;
  /// Pushes a tangent vector at x to one at apply(x).
  Vec apply_tangent(const Vec& v) const { return m_ * v; }

  Isometry compose(const Isometry& other) const;  // this after other
  Isometry inverse() const;                       // J G^T J, exact Lorentz inverse

  double frobenius_distance(const Isometry& other) const {
    return (m_ - other.m_).norm();
  }

 private:
  struct unchecked_tag {};
  Isometry(Mat matrix, unchecked_tag) : m_(std::move(matrix)) {}
  Mat m_;
};

/// Orthonormal p-frame of tangent vectors at a base point.
class Frame {
 public:
  /// Gram-Schmidt (in the restricted positive-definite metric) of the seed
  /// columns projected to the tangent space at base.
  Frame(const HPoint& base, const Mat& seeds);
  /// Deterministic frame spanned from the ambient coordinate axes.
  static Frame coordinate(const HPoint& base, int p);
  static Frame random(const HPoint& base, int p, Rng& rng);

  const HPoint& base() const { return base_; }
  const Mat& vectors() const { return v_; }  // (d+1) x p, columns tangent
  int count() const { return static_cast<int>(v_.cols()); }

 private:
  HPoint base_;
  Mat v_;
};

/// Hyperbolic distance; the acosh argument is clamped to [1, inf) and the
/// short-distance branch uses 2*asinh(|x-y|_J/2) to avoid cancellation.
double dist(const HPoint& x, const HPoint& y);

/// Distance from the clamped inner product c = -<x,y>. Orbit radii and
/// Patterson-Sullivan weights both go through this one expression so that
/// equal inputs give bitwise-equal distances.
inline double dist_from_cosh(double c) {
  if (c < 1.5)
    return 2.0 * std::asinh(0.5 * std::sqrt(std::max(0.0, 2.0 * (c - 1.0))));
  return std::acosh(c);
}

/// Busemann function normalized at the origin: B(x,t) = log(-<x, t.ray>).
double busemann(const HPoint& x, const IdealPoint& t);

/// Riemannian gradient of x -> busemann(x, t); unit tangent vector at x.
Vec busemann_grad(const HPoint& x, const IdealPoint& t);

/// Projection of an ambient vector to the tangent space at x.
inline Vec project_tangent(const HPoint& x, const Vec& v) {
  return v + minkowski(x.coords(), v) * x.coords();
}

HPoint exp_map(const HPoint& x, const Vec& v);
Vec log_map(const HPoint& x, const HPoint& y);

/// Parallel transport of tangent v along the geodesic from x to y.
Vec parallel_transport(const HPoint& x, const HPoint& y, const Vec& v);

/// Unit-speed geodesic ray from the origin toward t, evaluated at time s.
HPoint ray_point(const IdealPoint& t, double s);

/// Poincare ball coordinates (the I/O projection): x -> spatial/(1+x0).
Vec to_ball(const HPoint& x);
Vec to_ball(const IdealPoint& t);

/// Euclidean distance of ball-model images; the chordal metric used for all
/// boundary convergence reports.
double chordal(const IdealPoint& a, const IdealPoint& b);

/// Radial projection of an interior point to the boundary.
IdealPoint radial_ideal(const HPoint& x);

/// Upper half-space coordinates (x', x_d) from ball coordinates, mapping the
/// ball origin to (0,...,0,1). Boundary vectors (|v|=1, v != -e_d) land on
/// x_d = 0. The map is an involution, so it also reads half-space
/// coordinates back into the ball.
Vec ball_to_half_space(const Vec& v);

/// Point of H^2 at z = x + iy of the upper half-plane, in the chart under
/// which lift_sl2 of a real matrix acts as the Moebius map z -> (az+b)/(cz+d).
HPoint uhp_point(double x, double y);

/// Lift of a real 2x2 matrix of determinant 1 to Isom(H^2), acting on the
/// hyperboloid of unit-determinant symmetric forms. lift(-m) = lift(m).
Isometry lift_sl2(const Eigen::Matrix2d& m);

/// Lift of a complex 2x2 matrix of determinant 1 to Isom(H^3) via the
/// Hermitian-form action X -> A X A*.
Isometry lift_sl2(const Eigen::Matrix2cd& m);

/// Fixed ideal points of g (lightlike eigenvectors with real eigenvalue).
std::vector<IdealPoint> fixed_ideal_points(const Isometry& g, double tol = 1e-8);

/// Hyperbolic translation of the given length whose axis passes through the
/// origin with the given (spatial) direction.
Isometry boost_along(const Vec& unit_tangent_at_origin, double length);

/// Random interior point: uniform direction, radius uniform on [0, r_max].
HPoint random_point(Rng& rng, int dim, double r_max);

/// Random unit tangent vector at x.
Vec random_unit_tangent(Rng& rng, const HPoint& x);

/// Random isometry built from a boost of length <= shift and a rotation;
/// used by equivariance property tests.
Isometry random_isometry(Rng& rng, int dim, double shift);

}  // namespace hypnat
