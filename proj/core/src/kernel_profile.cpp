#include "hypnat/kernel_profile.hpp"

#include <cmath>

namespace hypnat {

namespace {

// Radial component at angle phi (seen from the base point) of the Busemann
// gradient, for the observer at distance r along the axis.
inline double radial_component(double u, double ch, double sh) {
  return (u * ch - sh) / (u * sh - ch);
}

// Composite Simpson of f over [a, b] with n subintervals (n rounded up to even).
template <typename F>
double simpson(const F& f, double a, double b, int n) {
  if (n % 2) ++n;
  if (n < 2) n = 2;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

double sphere_density_normalizer(int dim_n) {
  // integral of sin^{n-2} over [0, pi]
  return std::sqrt(M_PI) * std::tgamma(0.5 * (dim_n - 1)) /
         std::tgamma(0.5 * dim_n);
}

double m_of_r(int dim_n, double r, int samples) {
  if (r <= 0.0) return 0.0;
  const double ch = std::cosh(r), sh = std::sinh(r);
  const int p = dim_n - 2;
  const auto f = [&](double phi) {
    const double s = std::sin(phi);
    double dens = 1.0;
    for (int i = 0; i < p; ++i) dens *= s;
    return radial_component(std::cos(phi), ch, sh) * dens;
  };
  // The integrand flips sign across a cap of angular width ~ e^{-r} at
  // phi = 0; give that cap its own refined segment.
  const double cap = std::min(0.5, std::max(1e-8, 20.0 * std::exp(-r)));
  const int n_cap = samples / 2, n_rest = samples - n_cap;
  const double integral =
      simpson(f, 0.0, cap, n_cap) + simpson(f, cap, M_PI, n_rest);
  return integral / sphere_density_normalizer(dim_n);
}

}  // namespace

VisualKernelProfile::VisualKernelProfile(int dim_n, Eigen::VectorXd grid,
                                         Eigen::VectorXd values)
    : dim_n_(dim_n), grid_(std::move(grid)), values_(std::move(values)) {
  const Eigen::Index m = grid_.size();
  if (m < 3 || values_.size() != m)
    throw Error(ErrorCode::ValidationError, "profile needs >= 3 knots");
  if (grid_[0] != 0.0)
    throw Error(ErrorCode::ValidationError, "profile grid must start at r = 0");
  for (Eigen::Index i = 1; i < m; ++i) {
    if (grid_[i] <= grid_[i - 1])
      throw Error(ErrorCode::ValidationError, "profile grid must increase");
    if (values_[i] < values_[i - 1])
      throw Error(ErrorCode::ValidationError, "profile values must be nondecreasing");
  }
  if (values_[0] != 0.0)
    throw Error(ErrorCode::ValidationError, "profile must have m(0) = 0");
  if (values_[m - 1] >= 1.0)
    throw Error(ErrorCode::ValidationError, "profile values must stay below 1");

  // Fritsch-Carlson slopes: monotone data gives a monotone interpolant.
  slope_.resize(m);
  Eigen::VectorXd d(m - 1);
  for (Eigen::Index i = 0; i + 1 < m; ++i)
    d[i] = (values_[i + 1] - values_[i]) / (grid_[i + 1] - grid_[i]);
  slope_[0] = d[0];
  slope_[m - 1] = d[m - 2];
  for (Eigen::Index i = 1; i + 1 < m; ++i) {
    if (d[i - 1] * d[i] <= 0.0) {
      slope_[i] = 0.0;
    } else {
      const double h0 = grid_[i] - grid_[i - 1], h1 = grid_[i + 1] - grid_[i];
      const double w0 = 2.0 * h1 + h0, w1 = h1 + 2.0 * h0;
      slope_[i] = (w0 + w1) / (w0 / d[i - 1] + w1 / d[i]);
    }
  }
  for (Eigen::Index i = 0; i + 1 < m; ++i) {
    if (d[i] == 0.0) {
      slope_[i] = slope_[i + 1] = 0.0;
      continue;
    }
    const double a = slope_[i] / d[i], b = slope_[i + 1] / d[i];
    const double q = a * a + b * b;
    if (q > 9.0) {
      const double t = 3.0 / std::sqrt(q);
      slope_[i] = t * a * d[i];
      slope_[i + 1] = t * b * d[i];
    }
  }

  // Exact integrals of the cubic pieces, accumulated from 0.
  cum_.resize(m);
  cum_[0] = 0.0;
  for (Eigen::Index i = 0; i + 1 < m; ++i) {
    const double h = grid_[i + 1] - grid_[i];
    cum_[i + 1] = cum_[i] + h * (0.5 * (values_[i] + values_[i + 1]) +
                                 h * (slope_[i] - slope_[i + 1]) / 12.0);
  }
}

double VisualKernelProfile::value(double r) const {
  if (r <= 0.0) return 0.0;
  const Eigen::Index m = grid_.size();
  if (r >= grid_[m - 1]) return values_[m - 1];
  Eigen::Index lo = 0, hi = m - 1;
  while (hi - lo > 1) {
    const Eigen::Index mid = (lo + hi) / 2;
    (grid_[mid] <= r ? lo : hi) = mid;
  }
  const double h = grid_[lo + 1] - grid_[lo];
  const double t = (r - grid_[lo]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * values_[lo] + (t3 - 2 * t2 + t) * h * slope_[lo] +
         (-2 * t3 + 3 * t2) * values_[lo + 1] + (t3 - t2) * h * slope_[lo + 1];
}

double VisualKernelProfile::antiderivative(double r) const {
  if (r <= 0.0) return 0.0;
  const Eigen::Index m = grid_.size();
  if (r >= grid_[m - 1])
    return cum_[m - 1] + (r - grid_[m - 1]) * values_[m - 1];
  Eigen::Index lo = 0, hi = m - 1;
  while (hi - lo > 1) {
    const Eigen::Index mid = (lo + hi) / 2;
    (grid_[mid] <= r ? lo : hi) = mid;
  }
  const double h = grid_[lo + 1] - grid_[lo];
  const double t = (r - grid_[lo]) / h;
  const double t2 = t * t, t3 = t2 * t, t4 = t2 * t2;
  // Integrated Hermite basis on [0, t], scaled by h.
  const double H00 = 0.5 * t4 - t3 + t;
  const double H10 = 0.25 * t4 - (2.0 / 3.0) * t3 + 0.5 * t2;
  const double H01 = -0.5 * t4 + t3;
  const double H11 = 0.25 * t4 - t3 / 3.0;
  return cum_[lo] + h * (H00 * values_[lo] + H10 * h * slope_[lo] +
                         H01 * values_[lo + 1] + H11 * h * slope_[lo + 1]);
}

VisualKernelProfile build_profile(int dim_n, int samples, double grid_step,
                                  double r_max) {
  if (dim_n < 2) throw Error(ErrorCode::ValidationError, "profile needs dim >= 2");
  if (samples < 100) throw Error(ErrorCode::ValidationError, "too few samples");
  const int knots = static_cast<int>(std::floor(r_max / grid_step + 0.5)) + 1;
  Eigen::VectorXd grid(knots), values(knots);
  for (int i = 0; i < knots; ++i) {
    grid[i] = i * grid_step;
    values[i] = m_of_r(dim_n, grid[i], samples);
  }
  values[0] = 0.0;
  for (int i = 1; i < knots; ++i) {
    values[i] = std::max(values[i], values[i - 1]);       // quadrature jitter
    values[i] = std::min(values[i], 1.0 - 1e-12);
  }
  return VisualKernelProfile(dim_n, std::move(grid), std::move(values));
}

}  // namespace hypnat
