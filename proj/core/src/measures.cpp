#include "hypnat/measures.hpp"

#include <cmath>

#include "hypnat/natural_map.hpp"

namespace hypnat {

Vec location_ball_coords(const AtomLocation& loc) {
  if (std::holds_alternative<HPoint>(loc)) return to_ball(std::get<HPoint>(loc));
  return to_ball(std::get<IdealPoint>(loc));
}

bool location_is_boundary(const AtomLocation& loc) {
  return std::holds_alternative<IdealPoint>(loc);
}

namespace {

double sum_weights(const std::vector<Atom>& atoms) {
  double s = 0.0;
  for (const auto& a : atoms) s += a.weight;
  return s;
}

void check_weights(const std::vector<Atom>& atoms) {
  for (const auto& a : atoms)
    if (!(a.weight >= 0.0) || !std::isfinite(a.weight))
      throw Error(ErrorCode::ValidationError, "atom weights must be finite and >= 0");
}

}  // namespace

AtomicMeasure::AtomicMeasure(int dim, std::vector<Atom> atoms)
    : dim_(dim), atoms_(std::move(atoms)), mass_(0.0) {
  check_weights(atoms_);
  mass_ = sum_weights(atoms_);
}

AtomicMeasure::AtomicMeasure(int dim, std::vector<Atom> atoms, double mass)
    : dim_(dim), atoms_(std::move(atoms)), mass_(mass) {
  check_weights(atoms_);
}

AtomicMeasure AtomicMeasure::dirac(const AtomLocation& loc, double weight) {
  const int dim = std::holds_alternative<HPoint>(loc)
                      ? std::get<HPoint>(loc).dim()
                      : std::get<IdealPoint>(loc).dim();
  return AtomicMeasure(dim, {Atom{loc, weight}});
}

AtomicMeasure ProductAtoms::source_marginal() const {
  std::vector<Atom> atoms;
  atoms.reserve(this->atoms.size());
  for (const auto& a : this->atoms) atoms.push_back({AtomLocation{a.source}, a.weight});
  AtomicMeasure m(dim_source, std::move(atoms));
  m.set_meta(meta);
  return m;
}

double ProductAtoms::mass() const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.weight;
  return s;
}

namespace detail {

// Normalized weights e^{-s d(x, gO)} / c(s) plus the exactly reduced mass.
// The x = O case reproduces the Poincare summands bit for bit, so the mass
// comes out as c/c = 1.0 exactly.
std::pair<Vec, double> ps_weight_vector(const GroupBall& ball, const HPoint& x,
                                        double s) {
  if (ball.size() == 0) throw Error(ErrorCode::EmptyBall, "empty group ball");
  const Mat& orbit = ball.orbit_matrix();
  const Eigen::Index n = orbit.cols();
  Vec jx = x.coords();
  jx[0] = -jx[0];
  const Vec inner = -(jx.transpose() * orbit).transpose();  // -<x, gO> per atom
  Vec w(n);
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    w[i] = std::exp(-s * dist_from_cosh(inner[i]));
    total += w[i];
  }
  double c = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) c += std::exp(-s * ball.radii()[i]);
  w /= c;
  return {std::move(w), total / c};
}

}  // namespace detail

namespace {

using detail::ps_weight_vector;

MeasureMeta meta_for(const GroupBall& ball, const HPoint& x, double s) {
  MeasureMeta meta;
  meta.s = s;
  meta.r_max = ball.r_max();
  meta.basepoint = to_ball(x);
  return meta;
}

}  // namespace

AtomicMeasure ps_measure(const GroupBall& ball, const HPoint& x, double s) {
  auto [w, mass] = ps_weight_vector(ball, x, s);
  std::vector<Atom> atoms;
  atoms.reserve(ball.size());
  for (std::size_t i = 0; i < ball.size(); ++i)
    atoms.push_back({AtomLocation{ball.elements()[i].orbit}, w[static_cast<Eigen::Index>(i)]});
  AtomicMeasure m(ball.dim(), std::move(atoms), mass);
  m.set_meta(meta_for(ball, x, s));
  return m;
}

AtomicMeasure ms_measure(const GroupBall& ball, const HPoint& x, double s,
                         const AtomicMeasure& sigma) {
  if (std::abs(sigma.mass() - 1.0) > 1e-12)
    throw Error(ErrorCode::SigmaNotProbability,
                "sigma has mass " + std::to_string(sigma.mass()));
  auto [w, mass] = ps_weight_vector(ball, x, s);
  std::vector<Atom> atoms;
  atoms.reserve(ball.size() * sigma.size());
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const Isometry& g = ball.elements()[i].g;
    const double wg = w[static_cast<Eigen::Index>(i)];
    for (const auto& sa : sigma.atoms()) {
      AtomLocation moved = std::holds_alternative<HPoint>(sa.location)
                               ? AtomLocation{g.apply(std::get<HPoint>(sa.location))}
                               : AtomLocation{g.apply(std::get<IdealPoint>(sa.location))};
      atoms.push_back({std::move(moved), wg * sa.weight});
    }
  }
  AtomicMeasure m(ball.dim(), std::move(atoms));
  m.set_meta(meta_for(ball, x, s));
  return m;
}

ProductAtoms graphic_measure(const GroupBall& ball, const HPoint& x, double s,
                             const Representation& rho, const HPoint& d0) {
  auto [w, mass] = ps_weight_vector(ball, x, s);
  const std::vector<Isometry> images = rho.evaluate(ball);
  ProductAtoms out;
  out.dim_source = ball.dim();
  out.dim_target = rho.dim_target();
  out.meta = meta_for(ball, x, s);
  out.atoms.reserve(ball.size());
  for (std::size_t i = 0; i < ball.size(); ++i)
    out.atoms.push_back({ball.elements()[i].orbit,
                         AtomLocation{images[i].apply(d0)},
                         w[static_cast<Eigen::Index>(i)]});
  return out;
}

AtomicMeasure convolve(
    const AtomicMeasure& mu,
    const std::function<std::optional<AtomicMeasure>(const AtomLocation&)>& rule) {
  std::vector<Atom> atoms;
  int dim = mu.dim();
  for (const auto& a : mu.atoms()) {
    const auto piece = rule(a.location);
    if (!piece)
      throw Error(ErrorCode::RuleUndefinedAtAtom,
                  "convolution rule undefined at an atom of mu");
    dim = piece->dim();
    for (const auto& pa : piece->atoms())
      atoms.push_back({pa.location, a.weight * pa.weight});
  }
  return AtomicMeasure(dim, std::move(atoms));
}

double test_integral(const AtomicMeasure& mu,
                     const std::function<double(const Vec&)>& f) {
  double s = 0.0;
  for (const auto& a : mu.atoms()) s += a.weight * f(location_ball_coords(a.location));
  return s;
}

TruncationDiagnostics truncation_diagnostics(const GroupBall& ball, double s,
                                             double delta_hat) {
  TruncationDiagnostics d;
  d.s_minus_delta = s - delta_hat;
  d.r_max = ball.r_max();
  d.truncation_dominates = std::exp(-(s - delta_hat) * ball.r_max()) > 0.1;
  double total = 0.0, tail = 0.0;
  const double cut = 0.9 * ball.r_max();
  for (Eigen::Index i = 0; i < ball.radii().size(); ++i) {
    const double w = std::exp(-s * ball.radii()[i]);
    total += w;
    if (ball.radii()[i] > cut) tail += w;
  }
  d.tail_mass_fraction = total > 0.0 ? tail / total : 0.0;
  return d;
}

}  // namespace hypnat
