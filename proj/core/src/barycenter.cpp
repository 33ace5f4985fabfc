#include "hypnat/barycenter.hpp"

#include <cmath>

namespace hypnat {

namespace detail {

namespace {

// inner[i] = -<y, col_i> for all columns at once.
Vec minus_inner(const Mat& cols, const Vec& y) {
  Vec jy = y;
  jy[0] = -jy[0];
  return -(jy.transpose() * cols).transpose();
}

}  // namespace

Vec problem_grad(const BarycenterProblem& p, const Vec& y) {
  Vec g = Vec::Zero(y.size());
  if (p.interior && p.interior->cols() > 0) {
    const Mat& pts = *p.interior;
    const Vec c = minus_inner(pts, y);
    Vec alpha(c.size());
    double beta_acc = 0.0;
    for (Eigen::Index i = 0; i < c.size(); ++i) {
      const double ci = std::max(1.0, c[i]);
      const double sh = std::sqrt(std::max(ci * ci - 1.0, 0.0));
      if (sh < 1e-12) {
        alpha[i] = 0.0;  // atom at y: m(0) = 0, no contribution
        continue;
      }
      const double r = dist_from_cosh(ci);
      alpha[i] = (*p.interior_w)[i] * p.profile->value(r) / sh;
      beta_acc += alpha[i] * ci;
    }
    // sum_i alpha_i (c_i y - p_i), assembled as two GEMV-scale operations
    g.noalias() -= pts * alpha;
    g.noalias() += beta_acc * y;
  }
  if (p.boundary && p.boundary->cols() > 0) {
    const Mat& rays = *p.boundary;
    const Vec c = minus_inner(rays, y);  // -<y, ray> = e^{B(y,theta)} > 0
    Vec alpha(c.size());
    double beta_acc = 0.0;
    for (Eigen::Index i = 0; i < c.size(); ++i) {
      // grad B = P_y(ray)/<y,ray> = (ray + <y,ray> y)/<y,ray> = y - ray/c
      alpha[i] = (*p.boundary_w)[i] / c[i];
      beta_acc += (*p.boundary_w)[i];
    }
    g.noalias() -= rays * alpha;
    g.noalias() += beta_acc * y;
  }
  // Exact tangency against drift.
  g += minkowski(y, g) * y;
  return g;
}

double problem_value(const BarycenterProblem& p, const Vec& y) {
  double v = 0.0;
  if (p.interior && p.interior->cols() > 0) {
    const Vec c = minus_inner(*p.interior, y);
    for (Eigen::Index i = 0; i < c.size(); ++i)
      v += (*p.interior_w)[i] *
           p.profile->antiderivative(dist_from_cosh(std::max(1.0, c[i])));
  }
  if (p.boundary && p.boundary->cols() > 0) {
    const Vec c = minus_inner(*p.boundary, y);
    for (Eigen::Index i = 0; i < c.size(); ++i)
      v += (*p.boundary_w)[i] * std::log(c[i]);
  }
  return v;
}

HPoint default_init(const BarycenterProblem& p) {
  // Lorentz-weighted average of atom coordinates (rays for boundary atoms),
  // rescaled back to the hyperboloid. Symmetric measures start solved.
  Vec v = Vec::Zero(p.dim + 1);
  if (p.interior) v += *p.interior * *p.interior_w;
  if (p.boundary) v += *p.boundary * *p.boundary_w;
  if (-minkowski(v, v) < 1e-14 || v[0] <= 0.0) return HPoint::origin(p.dim);
  return hpoint_unchecked(std::move(v));
}

BarycenterReport solve_problem(const BarycenterProblem& p, const HPoint& init,
                               const BarycenterOptions& opts) {
  BarycenterReport rep;
  const HPoint origin = HPoint::origin(p.dim);
  Vec y = init.coords();
  double value = problem_value(p, y);

  for (int iter = 0; iter < opts.max_iter; ++iter) {
    rep.iterations = iter;
    const Vec g = problem_grad(p, y);
    const double gn2 = std::max(0.0, minkowski(g, g));
    const double gn = std::sqrt(gn2);
    rep.grad_norm = gn;
    const HPoint yp = hpoint_unchecked(y);

    if (gn <= opts.tol) {
      rep.point = yp;
      rep.objective = value;
      // Convexity spot check: the gradient component along a fixed tangent
      // direction must change sign across the minimum.
      const Frame frame = Frame::coordinate(yp, 1);
      if (frame.count() > 0) {
        const Vec u = frame.vectors().col(0);
        const double tau = 0.05;
        const HPoint plus = exp_map(yp, tau * u);
        const HPoint minus = exp_map(yp, -tau * u);
        const double dplus =
            minkowski(problem_grad(p, plus.coords()), parallel_transport(yp, plus, u));
        const double dminus =
            minkowski(problem_grad(p, minus.coords()), parallel_transport(yp, minus, u));
        rep.convexity_ok = dplus > 0.0 && dminus < 0.0;
      }
      return rep;
    }

    if (dist(origin, yp) > opts.escape_radius && gn > opts.escape_grad_floor) {
      rep.escaped = true;
      rep.escape_direction = radial_ideal(yp);
      rep.objective = value;
      return rep;
    }

    double step = opts.initial_step;
    Vec y_next;
    double value_next = 0.0;
    bool accepted = false;
    for (int back = 0; back < 60; ++back) {
      y_next = exp_map(hpoint_unchecked(y), -step * g).coords();
      value_next = problem_value(p, y_next);
      if (value_next <= value - opts.armijo_slope * step * gn2) {
        accepted = true;
        break;
      }
      step *= opts.armijo_shrink;
    }
    if (!accepted)
      throw Error(ErrorCode::MaxIterExceeded, "line search stalled");
    if (value_next >= value) rep.monotone = false;
    y = std::move(y_next);
    value = value_next;
  }
  throw Error(ErrorCode::MaxIterExceeded, "barycenter did not converge");
}

}  // namespace detail

Vec busemann_average_grad(const AtomicMeasure& beta, const HPoint& y,
                          const VisualKernelProfile& profile) {
  if (!(beta.mass() > 0.0)) throw Error(ErrorCode::ZeroMass, "measure has no mass");
  Vec g = Vec::Zero(y.coords().size());
  for (const auto& a : beta.atoms()) {
    if (location_is_boundary(a.location)) {
      g += a.weight * busemann_grad(y, std::get<IdealPoint>(a.location));
    } else {
      const HPoint& pt = std::get<HPoint>(a.location);
      const double d = dist(y, pt);
      if (d < 1e-12) continue;
      const Vec toward = log_map(y, pt) / d;
      g -= a.weight * profile.value(d) * toward;
    }
  }
  return project_tangent(y, g);
}

double busemann_average_value(const AtomicMeasure& beta, const HPoint& y,
                              const VisualKernelProfile& profile) {
  double v = 0.0;
  for (const auto& a : beta.atoms()) {
    if (location_is_boundary(a.location))
      v += a.weight * busemann(y, std::get<IdealPoint>(a.location));
    else
      v += a.weight * profile.antiderivative(dist(y, std::get<HPoint>(a.location)));
  }
  return v;
}

namespace {

struct PackedMeasure {
  Mat interior;
  Vec interior_w;
  Mat boundary;
  Vec boundary_w;
};

PackedMeasure pack(const AtomicMeasure& beta) {
  PackedMeasure p;
  std::size_t ni = 0, nb = 0;
  for (const auto& a : beta.atoms()) (location_is_boundary(a.location) ? nb : ni)++;
  p.interior.resize(beta.dim() + 1, static_cast<Eigen::Index>(ni));
  p.interior_w.resize(static_cast<Eigen::Index>(ni));
  p.boundary.resize(beta.dim() + 1, static_cast<Eigen::Index>(nb));
  p.boundary_w.resize(static_cast<Eigen::Index>(nb));
  Eigen::Index ii = 0, ib = 0;
  for (const auto& a : beta.atoms()) {
    if (location_is_boundary(a.location)) {
      p.boundary.col(ib) = std::get<IdealPoint>(a.location).ray();
      p.boundary_w[ib++] = a.weight;
    } else {
      p.interior.col(ii) = std::get<HPoint>(a.location).coords();
      p.interior_w[ii++] = a.weight;
    }
  }
  return p;
}

}  // namespace

BarycenterReport solve_barycenter(const AtomicMeasure& beta,
                                  const VisualKernelProfile& profile,
                                  const BarycenterOptions& opts) {
  if (!(beta.mass() > 0.0)) throw Error(ErrorCode::ZeroMass, "measure has no mass");
  if (beta.dim() != profile.dim())
    throw Error(ErrorCode::ValidationError, "profile dimension mismatch");

  // The excluded case: exactly two boundary atoms of equal weight. Atoms at
  // coinciding locations are merged before the test.
  {
    std::vector<std::pair<Vec, double>> groups;
    bool interior_mass = false;
    for (const auto& a : beta.atoms()) {
      if (a.weight <= 0.0) continue;
      if (!location_is_boundary(a.location)) {
        interior_mass = true;
        break;
      }
      const Vec b = location_ball_coords(a.location);
      bool merged = false;
      for (auto& [loc, w] : groups)
        if ((loc - b).norm() <= 1e-12) {
          w += a.weight;
          merged = true;
          break;
        }
      if (!merged) groups.emplace_back(b, a.weight);
    }
    if (!interior_mass && groups.size() == 2 &&
        std::abs(groups[0].second - groups[1].second) <= 1e-12 * beta.mass())
      throw Error(ErrorCode::DegenerateTwoDeltas,
                  "two boundary atoms of equal weight have no barycenter");
  }

  const PackedMeasure packed = pack(beta);
  detail::BarycenterProblem prob;
  prob.profile = &profile;
  prob.interior = &packed.interior;
  prob.interior_w = &packed.interior_w;
  prob.boundary = &packed.boundary;
  prob.boundary_w = &packed.boundary_w;
  prob.dim = beta.dim();
  return detail::solve_problem(prob, detail::default_init(prob), opts);
}

}  // namespace hypnat
