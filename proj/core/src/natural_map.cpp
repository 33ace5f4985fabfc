#include "hypnat/natural_map.hpp"

#include <cmath>

#include <Eigen/SVD>

#include "hypnat/parallel.hpp"

namespace hypnat {

AtomicMeasure target_measure(const GroupBall& ball, const Representation& rho,
                             const HPoint& x, double s) {
  if (!(s > 0.0)) throw Error(ErrorCode::ValidationError, "s must be positive");
  auto [w, mass] = detail::ps_weight_vector(ball, x, s);
  const std::vector<Isometry> images = rho.evaluate(ball);
  std::vector<Atom> atoms;
  const auto& sigma = rho.sigma();
  atoms.reserve(ball.size() * std::max<std::size_t>(1, sigma.size()));
  double total = 0.0;
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const double wi = w[static_cast<Eigen::Index>(i)];
    if (sigma.empty()) {
      atoms.push_back({AtomLocation{images[i].apply(rho.d0())}, wi});
      total += wi;
    } else {
      for (const auto& t : sigma) {
        atoms.push_back({AtomLocation{images[i].apply(t.target)}, wi * t.weight});
        total += wi * t.weight;
      }
    }
  }
  (void)mass;
  AtomicMeasure m(rho.dim_target(), std::move(atoms), total);
  MeasureMeta meta;
  meta.s = s;
  meta.r_max = ball.r_max();
  meta.basepoint = to_ball(x);
  m.set_meta(meta);
  return m;
}

NaturalMap::NaturalMap(const GroupBall& ball, Representation rho,
                       const VisualKernelProfile& profile, double delta_hat)
    : ball_(ball), rho_(std::move(rho)), profile_(profile), delta_hat_(delta_hat) {
  if (profile_.dim() != rho_.dim_target())
    throw Error(ErrorCode::ValidationError, "profile dimension mismatch");
  if (!(delta_hat_ > 0.0))
    throw Error(ErrorCode::ValidationError, "delta_hat must be positive");
  const std::vector<Isometry> images = rho_.evaluate(ball_);
  const auto& sigma = rho_.sigma();
  const std::size_t q = std::max<std::size_t>(1, sigma.size());
  targets_.resize(rho_.dim_target() + 1,
                  static_cast<Eigen::Index>(ball_.size() * q));
  sigma_w_.resize(static_cast<Eigen::Index>(q));
  if (sigma.empty())
    sigma_w_[0] = 1.0;
  else
    for (std::size_t j = 0; j < q; ++j) sigma_w_[static_cast<Eigen::Index>(j)] = sigma[j].weight;
  for (std::size_t i = 0; i < ball_.size(); ++i) {
    if (sigma.empty()) {
      targets_.col(static_cast<Eigen::Index>(i)) = images[i].apply(rho_.d0()).coords();
    } else {
      for (std::size_t j = 0; j < q; ++j)
        targets_.col(static_cast<Eigen::Index>(i * q + j)) =
            images[i].apply(sigma[j].target).coords();
    }
  }
}

NaturalMapEval NaturalMap::eval(const HPoint& x, double eps,
                                const BarycenterOptions& opts) const {
  if (!(eps > 0.0)) throw Error(ErrorCode::ValidationError, "epsilon must be positive");
  const double s = (1.0 + eps) * delta_hat_;
  NaturalMapEval out;
  out.x = x;
  out.s = s;
  out.epsilon = eps;
  out.r_max = ball_.r_max();

  auto [psw, mass] = detail::ps_weight_vector(ball_, x, s);
  const Eigen::Index q = sigma_w_.size();
  Vec w(targets_.cols());
  if (q == 1) {
    w = psw * sigma_w_[0];
  } else {
    for (Eigen::Index i = 0; i < psw.size(); ++i)
      w.segment(i * q, q) = psw[i] * sigma_w_;
  }
  out.target_mass = mass;

  detail::BarycenterProblem prob;
  prob.profile = &profile_;
  prob.interior = &targets_;
  prob.interior_w = &w;
  prob.dim = rho_.dim_target();
  try {
    out.report = detail::solve_problem(prob, detail::default_init(prob), opts);
    out.value = out.report.point;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::DegenerateTwoDeltas) {
      out.report.degenerate = true;
    } else {
      throw;
    }
  }
  return out;
}

HPoint NaturalMap::value(const HPoint& x, double eps,
                         const BarycenterOptions& opts) const {
  NaturalMapEval e = eval(x, eps, opts);
  if (!e.value)
    throw Error(ErrorCode::EvaluationFailed,
                e.report.escaped ? "barycenter escaped to the boundary"
                                 : "barycenter undefined");
  return *e.value;
}

std::vector<NaturalMapEval> NaturalMap::eval_many(const std::vector<HPoint>& xs,
                                                  double eps,
                                                  const BarycenterOptions& opts) const {
  std::vector<NaturalMapEval> out(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) { out[i] = eval(xs[i], eps, opts); });
  return out;
}

NaturalMapEval natural_map_eval(const HPoint& x, const GroupBall& ball,
                                const Representation& rho, double eps,
                                const VisualKernelProfile& profile,
                                double delta_hat) {
  return NaturalMap(ball, rho, profile, delta_hat).eval(x, eps);
}

Differential differential(const MapHandle& f, const HPoint& x, double h) {
  return differential(f, x, h, Frame::coordinate(x, x.dim()));
}

Differential differential(const MapHandle& f, const HPoint& x, double h,
                          const Frame& domain_frame) {
  if (!(h >= 1e-5 && h <= 1e-2))
    throw Error(ErrorCode::ValidationError, "finite-difference step outside [1e-5, 1e-2]");
  const HPoint fx = f(x);
  const Frame image_frame = Frame::coordinate(fx, fx.dim());
  const int k = domain_frame.count();
  const int n = image_frame.count();
  Mat df(n, k);
  for (int j = 0; j < k; ++j) {
    const Vec u = domain_frame.vectors().col(j);
    const HPoint fp = f(exp_map(x, h * u));
    const HPoint fm = f(exp_map(x, -h * u));
    const Vec diff = (log_map(fx, fp) - log_map(fx, fm)) / (2.0 * h);
    for (int i = 0; i < n; ++i)
      df(i, j) = minkowski(image_frame.vectors().col(i), diff);
  }
  Differential out{std::move(df), domain_frame, image_frame, Vec{}};
  Eigen::JacobiSVD<Mat> svd(out.matrix);
  out.singular_values = svd.singularValues();
  return out;
}

double jac_p(const Mat& df, int p) {
  if (p < 1 || p > std::min(df.rows(), df.cols()))
    throw Error(ErrorCode::ValidationError, "p out of range for the differential");
  Eigen::JacobiSVD<Mat> svd(df);
  double prod = 1.0;
  for (int i = 0; i < p; ++i) prod *= svd.singularValues()[i];
  return prod;
}

double jac_p(const Differential& df, int p) {
  if (p < 1 || p > df.singular_values.size())
    throw Error(ErrorCode::ValidationError, "p out of range for the differential");
  double prod = 1.0;
  for (int i = 0; i < p; ++i) prod *= df.singular_values[i];
  return prod;
}

double volume_estimate(const MapHandle& f, int dim_source,
                       const std::vector<std::pair<HPoint, double>>& sampler,
                       double h) {
  if (sampler.empty()) throw Error(ErrorCode::ValidationError, "empty domain sampler");
  std::vector<double> jac(sampler.size());
  parallel_for(sampler.size(), [&](std::size_t i) {
    const Differential df = differential(f, sampler[i].first, h);
    if (df.matrix.rows() == dim_source && df.matrix.cols() == dim_source) {
      jac[i] = df.matrix.determinant();  // signed k-form pullback
    } else {
      jac[i] = jac_p(df, dim_source);    // unsigned k-Jacobian
    }
  });
  double v = 0.0;
  for (std::size_t i = 0; i < sampler.size(); ++i) v += sampler[i].second * jac[i];
  return v;
}

EpsilonSweep epsilon_sweep(const HPoint& x, const NaturalMap& map,
                           const std::vector<double>& eps_list) {
  if (eps_list.empty())
    throw Error(ErrorCode::ValidationError, "empty epsilon list");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0))
      throw Error(ErrorCode::ValidationError, "epsilon must be positive");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
      throw Error(ErrorCode::ValidationError, "epsilon list must strictly decrease");
  }
  EpsilonSweep sweep;
  for (const double eps : eps_list) sweep.evals.push_back(map.eval(x, eps));
  for (std::size_t i = 0; i + 1 < sweep.evals.size(); ++i) {
    const auto& a = sweep.evals[i].value;
    const auto& b = sweep.evals[i + 1].value;
    sweep.successive_dist.push_back(a && b ? dist(*a, *b)
                                           : std::numeric_limits<double>::quiet_NaN());
  }
  const double s_min = (1.0 + eps_list.back()) * map.delta_hat();
  sweep.truncation_dominates =
      std::exp(-(s_min - map.delta_hat()) * map.ball().r_max()) > 0.1;
  return sweep;
}

}  // namespace hypnat
