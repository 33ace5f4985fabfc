#include "hypnat/geometry.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace hypnat {

namespace {

Vec apply_form(const Vec& v) {  // J v with J = diag(-1, 1, ..., 1)
  Vec w = v;
  w[0] = -w[0];
  return w;
}

Mat form_matrix(int n) {
  Vec d = Vec::Ones(n);
  d[0] = -1.0;
  return d.asDiagonal();
}

}  // namespace

HPoint::HPoint(Vec coords) : c_(std::move(coords)) {
  if (c_.size() < 3) throw Error(ErrorCode::ValidationError, "HPoint needs dim >= 2");
  const double q = -minkowski(c_, c_);
  if (!(q > 0.0) || c_[0] <= 0.0)
    throw Error(ErrorCode::ValidationError, "vector is not on the upper sheet");
  c_ /= std::sqrt(q);
}

HPoint hpoint_unchecked(Vec c) {
  HPoint p;
  const double q = -minkowski(c, c);
  p.c_ = c / std::sqrt(q);
  return p;
}

HPoint HPoint::origin(int dim) {
  Vec c = Vec::Zero(dim + 1);
  c[0] = 1.0;
  return hpoint_unchecked(std::move(c));
}

HPoint HPoint::from_ball(const Vec& v) {
  const double n2 = v.squaredNorm();
  if (n2 >= 1.0)
    throw Error(ErrorCode::ValidationError, "ball coordinates must satisfy |v| < 1");
  Vec c(v.size() + 1);
  c[0] = (1.0 + n2) / (1.0 - n2);
  c.tail(v.size()) = 2.0 / (1.0 - n2) * v;
  return hpoint_unchecked(std::move(c));
}

IdealPoint::IdealPoint(Vec ray) : r_(std::move(ray)) {
  if (r_.size() < 3) throw Error(ErrorCode::ValidationError, "IdealPoint needs dim >= 2");
  if (r_[0] <= 0.0)
    throw Error(ErrorCode::ValidationError, "ray must be future-pointing");
  const double defect = minkowski(r_, r_) / r_.squaredNorm();
  if (std::abs(defect) > 1e-10)
    throw Error(ErrorCode::ValidationError, "ray is not lightlike");
  // Canonical form (1, u), |u| = 1: projects the lightlike defect out.
  r_ /= r_[0];
  r_.tail(r_.size() - 1).normalize();
  r_[0] = 1.0;
}

IdealPoint IdealPoint::from_ball(const Vec& u) {
  Vec r(u.size() + 1);
  r[0] = 1.0;
  r.tail(u.size()) = u.normalized();
  return IdealPoint(std::move(r));
}

Isometry::Isometry(Mat matrix, double tol) : m_(std::move(matrix)) {
  if (m_.rows() != m_.cols() || m_.rows() < 3)
    throw Error(ErrorCode::ValidationError, "isometry matrix must be square, dim >= 2");
  const int n = static_cast<int>(m_.rows());
  const Mat J = form_matrix(n);
  // The form defect of a product of L exact isometries grows like
  // eps * L * |G|^2, so the tolerance is taken relative to the matrix scale;
  // at scale 1 (user-supplied generators) it is the plain Frobenius bound.
  const double scale = std::max(1.0, m_.squaredNorm() * 1e-4);
  const double defect = (m_.transpose() * J * m_ - J).norm();
  if (defect > tol * scale)
    throw Error(ErrorCode::ValidationError,
                "matrix does not preserve the Lorentz form (defect " +
                    std::to_string(defect) + ")");
  if (m_(0, 0) <= 0.0)
    throw Error(ErrorCode::ValidationError, "matrix swaps the hyperboloid sheets");
}

Isometry Isometry::identity(int dim) {
  return Isometry(Mat::Identity(dim + 1, dim + 1), unchecked_tag{});
}

HPoint Isometry::apply(const HPoint& x) const { return hpoint_unchecked(m_ * x.coords()); }

IdealPoint Isometry::apply(const IdealPoint& t) const { return IdealPoint(m_ * t.ray()); }

Isometry Isometry::compose(const Isometry& other) const {
  return Isometry(m_ * other.m_, unchecked_tag{});
}

Isometry Isometry::inverse() const {
  const int n = static_cast<int>(m_.rows());
  Mat inv = m_.transpose();
  inv.row(0) *= -1.0;
  inv.col(0) *= -1.0;
  (void)n;
  return Isometry(std::move(inv), unchecked_tag{});
}

Frame::Frame(const HPoint& base, const Mat& seeds) : base_(base), v_(seeds) {
  const int n = static_cast<int>(base.coords().size());
  if (v_.rows() != n)
    throw Error(ErrorCode::ValidationError, "frame seeds have wrong ambient dimension");
  int kept = 0;
  for (int j = 0; j < v_.cols(); ++j) {
    Vec w = project_tangent(base_, v_.col(j));
    for (int i = 0; i < kept; ++i)
      w -= minkowski(v_.col(i), w) * v_.col(i);
    const double nrm2 = minkowski(w, w);
    if (nrm2 < 1e-20) continue;  // dependent seed, skip
    v_.col(kept) = w / std::sqrt(nrm2);
    ++kept;
  }
  v_.conservativeResize(Eigen::NoChange, kept);
}

Frame Frame::coordinate(const HPoint& base, int p) {
  const int n = static_cast<int>(base.coords().size());
  Mat seeds = Mat::Identity(n, n).rightCols(n - 1).leftCols(p);
  return Frame(base, seeds);
}

Frame Frame::random(const HPoint& base, int p, Rng& rng) {
  const int n = static_cast<int>(base.coords().size());
  Mat seeds(n, p);
  for (int j = 0; j < p; ++j) {
    seeds(0, j) = 0.0;
    for (int i = 1; i < n; ++i) seeds(i, j) = rng.gaussian();
  }
  return Frame(base, seeds);
}

double dist(const HPoint& x, const HPoint& y) {
  const double c = -minkowski(x.coords(), y.coords());
  if (c < 1.5) {
    // 4 sinh^2(d/2) = <x-y, x-y>; exact at short range where acosh cancels.
    const Vec diff = x.coords() - y.coords();
    const double q = minkowski(diff, diff);
    return 2.0 * std::asinh(0.5 * std::sqrt(std::max(0.0, q)));
  }
  return std::acosh(c);
}

double busemann(const HPoint& x, const IdealPoint& t) {
  return std::log(-minkowski(x.coords(), t.ray()));
}

Vec busemann_grad(const HPoint& x, const IdealPoint& t) {
  const double ip = minkowski(x.coords(), t.ray());
  return project_tangent(x, t.ray()) / ip;
}

HPoint exp_map(const HPoint& x, const Vec& v) {
  const double n2 = minkowski(v, v);
  const double n = std::sqrt(std::max(0.0, n2));
  if (n < 1e-9) {
    Vec c = x.coords() + v + 0.5 * n2 * x.coords();
    return hpoint_unchecked(std::move(c));
  }
  return hpoint_unchecked(std::cosh(n) * x.coords() + (std::sinh(n) / n) * v);
}

Vec log_map(const HPoint& x, const HPoint& y) {
  const double d = dist(x, y);
  if (d < 1e-14) return Vec::Zero(x.coords().size());
  Vec w = project_tangent(x, y.coords());  // = sinh(d) * unit direction
  const double wn = std::sqrt(std::max(minkowski(w, w), 0.0));
  if (wn == 0.0) return Vec::Zero(x.coords().size());
  return (d / wn) * w;
}

Vec parallel_transport(const HPoint& x, const HPoint& y, const Vec& v) {
  const double c = -minkowski(x.coords(), y.coords());
  const double a = minkowski(y.coords(), v) / (1.0 + c);
  return v + a * (x.coords() + y.coords());
}

HPoint ray_point(const IdealPoint& t, double s) {
  const int n = static_cast<int>(t.ray().size());
  Vec o = Vec::Zero(n);
  o[0] = 1.0;
  // ray - O is the unit tangent of the geodesic from O toward t.
  return hpoint_unchecked(std::cosh(s) * o + std::sinh(s) * (t.ray() - o));
}

Vec to_ball(const HPoint& x) {
  return x.coords().tail(x.dim()) / (1.0 + x.coords()[0]);
}

Vec to_ball(const IdealPoint& t) { return t.ray().tail(t.dim()); }

double chordal(const IdealPoint& a, const IdealPoint& b) {
  return (to_ball(a) - to_ball(b)).norm();
}

IdealPoint radial_ideal(const HPoint& x) {
  Vec r = x.coords();
  const double sn = r.tail(x.dim()).norm();
  if (sn < 1e-300)
    throw Error(ErrorCode::ValidationError, "radial projection undefined at the origin");
  r[0] = sn;
  return IdealPoint(std::move(r));
}

HPoint uhp_point(double x, double y) {
  if (!(y > 0.0)) throw Error(ErrorCode::ValidationError, "uhp point needs y > 0");
  Vec c(3);
  c[0] = (x * x + y * y + 1.0) / (2.0 * y);
  c[1] = (x * x + y * y - 1.0) / (2.0 * y);
  c[2] = x / y;
  return HPoint(std::move(c));
}

Vec ball_to_half_space(const Vec& v) {
  const int d = static_cast<int>(v.size());
  Vec w = v;
  w[d - 1] += 1.0;  // v + e_d
  const double n2 = w.squaredNorm();
  if (n2 < 1e-300)
    throw Error(ErrorCode::ValidationError, "half-space chart undefined at -e_d");
  Vec h = 2.0 / n2 * w;
  h[d - 1] -= 1.0;
  return h;
}

namespace {

// Coordinates of a Hermitian matrix [[x0+x1, x2+i x3], [x2-i x3, x0-x1]]
// whose determinant is the Lorentz quadratic form x0^2-x1^2-x2^2-x3^2.
Eigen::Matrix2cd hermitian_of(const Eigen::Vector4d& x) {
  using std::complex;
  Eigen::Matrix2cd h;
  h(0, 0) = complex<double>(x[0] + x[1], 0.0);
  h(1, 1) = complex<double>(x[0] - x[1], 0.0);
  h(0, 1) = complex<double>(x[2], x[3]);
  h(1, 0) = complex<double>(x[2], -x[3]);
  return h;
}

Eigen::Vector4d coords_of(const Eigen::Matrix2cd& h) {
  Eigen::Vector4d x;
  x[0] = 0.5 * (h(0, 0).real() + h(1, 1).real());
  x[1] = 0.5 * (h(0, 0).real() - h(1, 1).real());
  x[2] = h(0, 1).real();
  x[3] = h(0, 1).imag();
  return x;
}

}  // namespace

Isometry lift_sl2(const Eigen::Matrix2d& m) {
  const double det = m.determinant();
  if (std::abs(det - 1.0) >= 1e-9)
    throw Error(ErrorCode::NonUnitDeterminant,
                "2x2 generator has det " + std::to_string(det));
  // Real matrices act on the symmetric forms: the x3 slot is invariant, so
  // the H^3 lift restricts to a 3x3 Lorentz block on (x0, x1, x2).
  Eigen::Matrix2cd mc = m.cast<std::complex<double>>();
  Mat g4(4, 4);
  for (int j = 0; j < 4; ++j) {
    Eigen::Vector4d e = Eigen::Vector4d::Zero();
    e[j] = 1.0;
    g4.col(j) = coords_of(mc * hermitian_of(e) * mc.adjoint());
  }
  return Isometry(g4.topLeftCorner(3, 3));
}

Isometry lift_sl2(const Eigen::Matrix2cd& m) {
  const std::complex<double> det = m.determinant();
  if (std::abs(det - std::complex<double>(1.0, 0.0)) >= 1e-9)
    throw Error(ErrorCode::NonUnitDeterminant, "2x2 complex generator has det off 1");
  Mat g(4, 4);
  for (int j = 0; j < 4; ++j) {
    Eigen::Vector4d e = Eigen::Vector4d::Zero();
    e[j] = 1.0;
    g.col(j) = coords_of(m * hermitian_of(e) * m.adjoint());
  }
  return Isometry(std::move(g));
}

std::vector<IdealPoint> fixed_ideal_points(const Isometry& g, double tol) {
  // Fixed boundary points are lightlike kernel vectors of g - lambda I for a
  // real positive eigenvalue lambda. Eigenvalue estimates of defective
  // (parabolic) matrices are fuzzy, so each candidate is resolved through an
  // SVD kernel rather than the raw eigenvectors.
  const int n = static_cast<int>(g.matrix().rows());
  Eigen::EigenSolver<Mat> solver(g.matrix());
  std::vector<double> candidates{1.0};
  for (int i = 0; i < n; ++i) {
    const auto ev = solver.eigenvalues()[i];
    if (std::abs(ev.imag()) > 1e-6 || ev.real() <= 0.0) continue;
    bool dup = false;
    for (double c : candidates)
      if (std::abs(c - ev.real()) < 1e-8 * std::max(1.0, std::abs(c))) dup = true;
    if (!dup) candidates.push_back(ev.real());
  }
  std::vector<IdealPoint> fixed;
  for (double lambda : candidates) {
    Eigen::JacobiSVD<Mat> svd(g.matrix() - lambda * Mat::Identity(n, n),
                              Eigen::ComputeFullV);
    const double scale = std::max(1.0, svd.singularValues()[0]);
    for (int i = 0; i < n; ++i) {
      if (svd.singularValues()[i] > tol * scale) continue;
      Vec v = svd.matrixV().col(i);
      if (std::abs(v[0]) < 1e-8) continue;  // spacelike direction
      if (v[0] < 0.0) v = -v;
      v /= v[0];
      if (std::abs(minkowski(v, v)) > 1e-5) continue;  // not lightlike
      Vec r = v;
      r.tail(r.size() - 1).normalize();
      r[0] = 1.0;
      bool dup = false;
      for (const auto& f : fixed)
        if ((f.ray() - r).norm() < 1e-5) dup = true;
      if (!dup) fixed.emplace_back(r);
    }
  }
  return fixed;
}

HPoint random_point(Rng& rng, int dim, double r_max) {
  const double r = rng.uniform(0.0, r_max);
  Vec u = rng.sphere(dim);
  Vec c(dim + 1);
  c[0] = std::cosh(r);
  c.tail(dim) = std::sinh(r) * u;
  return hpoint_unchecked(std::move(c));
}

Vec random_unit_tangent(Rng& rng, const HPoint& x) {
  const int n = static_cast<int>(x.coords().size());
  Vec v(n);
  for (;;) {
    v[0] = 0.0;
    for (int i = 1; i < n; ++i) v[i] = rng.gaussian();
    v = project_tangent(x, v);
    const double n2 = minkowski(v, v);
    if (n2 > 1e-12) return v / std::sqrt(n2);
  }
}

Isometry boost_along(const Vec& unit_tangent_at_origin, double length) {
  const int n = static_cast<int>(unit_tangent_at_origin.size());
  Vec u = unit_tangent_at_origin;
  u[0] = 0.0;
  u.normalize();
  Vec e0 = Vec::Zero(n);
  e0[0] = 1.0;
  // cosh/sinh on the (e0, u) plane, identity orthogonal to it.
  Mat boost = Mat::Identity(n, n) +
              (std::cosh(length) - 1.0) * (e0 * e0.transpose() + u * u.transpose()) +
              std::sinh(length) * (u * e0.transpose() + e0 * u.transpose());
  return Isometry(std::move(boost));
}

Isometry random_isometry(Rng& rng, int dim, double shift) {
  const double len = rng.uniform(0.0, shift);
  Vec u(dim + 1);
  u[0] = 0.0;
  u.tail(dim) = rng.sphere(dim);
  const Isometry boost = boost_along(u, len);
  // Random rotation about O: orthogonal on the spatial block.
  Mat spatial(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) spatial(i, j) = rng.gaussian();
  Eigen::HouseholderQR<Mat> qr(spatial);
  Mat q = qr.householderQ();
  if (q.determinant() < 0.0) q.col(0) *= -1.0;
  Mat rot = Mat::Identity(dim + 1, dim + 1);
  rot.bottomRightCorner(dim, dim) = q;
  return boost.compose(Isometry(std::move(rot)));
}

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonUnitDeterminant: return "NonUnitDeterminant";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::RExceedsBall: return "RExceedsBall";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::EmptyBall: return "EmptyBall";
    case ErrorCode::SigmaNotProbability: return "SigmaNotProbability";
    case ErrorCode::RepresentationIncomplete: return "RepresentationIncomplete";
    case ErrorCode::RuleUndefinedAtAtom: return "RuleUndefinedAtAtom";
    case ErrorCode::ZeroMass: return "ZeroMass";
    case ErrorCode::DegenerateTwoDeltas: return "DegenerateTwoDeltas";
    case ErrorCode::MaxIterExceeded: return "MaxIterExceeded";
    case ErrorCode::EvaluationFailed: return "EvaluationFailed";
    case ErrorCode::ElementaryImageSuspected: return "ElementaryImageSuspected";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::TaskError: return "TaskError";
  }
  return "UnknownError";
}

}  // namespace hypnat
