#pragma once

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "hypnat/geometry.hpp"
#include "hypnat/group.hpp"

namespace hypnat {

using AtomLocation = std::variant<HPoint, IdealPoint>;

Vec location_ball_coords(const AtomLocation& loc);
bool location_is_boundary(const AtomLocation& loc);

struct Atom {
  AtomLocation location;
  double weight = 0.0;
};

/// Construction parameters attached to measures that came from a group ball.
struct MeasureMeta {
  double s = 0.0;
  double r_max = 0.0;
  Vec basepoint;  // ball coordinates of x
};

/// Finitely many weighted atoms in the closed ball H^d u dH^d; the carrier
/// for every measure approximant in the library. Mass is fixed at
/// construction with a defined summation order, so re-runs are bit-stable.
class AtomicMeasure {
 public:
  AtomicMeasure(int dim, std::vector<Atom> atoms);
  /// Variant with a separately computed total (used where an exactly
  /// normalized mass is part of the contract).
  AtomicMeasure(int dim, std::vector<Atom> atoms, double mass);

  int dim() const { return dim_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  double mass() const { return mass_; }

  const std::optional<MeasureMeta>& meta() const { return meta_; }
  void set_meta(MeasureMeta m) { meta_ = std::move(m); }

  static AtomicMeasure dirac(const AtomLocation& loc, double weight = 1.0);

 private:
  int dim_;
  std::vector<Atom> atoms_;
  double mass_;
  std::optional<MeasureMeta> meta_;
};

/// Product atoms (source in H^k, target in closed H^n) of a graphic measure.
struct ProductAtom {
  HPoint source;
  AtomLocation target;
  double weight = 0.0;
};

struct ProductAtoms {
  int dim_source = 0;
  int dim_target = 0;
  std::vector<ProductAtom> atoms;
  MeasureMeta meta;

  AtomicMeasure source_marginal() const;
  double mass() const;
};

/// Patterson-Sullivan approximant mu_x^s: weight e^{-s d(x, gO)} / c(s) on
/// each orbit point, c(s) the partial Poincare sum over the same ball in the
/// same order. At x = O the stored mass is exactly 1.
AtomicMeasure ps_measure(const GroupBall& ball, const HPoint& x, double s);

/// Smeared variant m_x^s: sigma (a probability measure, usually supported in
/// a fundamental region) pushed along every group element. With sigma = a
/// Dirac at O this reduces to ps_measure atom for atom.
AtomicMeasure ms_measure(const GroupBall& ball, const HPoint& x, double s,
                         const AtomicMeasure& sigma);

class Representation;  // natural_map.hpp

/// Graphic measure: each weighted orbit atom gO paired with rho(g) D0.
ProductAtoms graphic_measure(const GroupBall& ball, const HPoint& x, double s,
                             const Representation& rho, const HPoint& d0);

/// Convolution mu * {rule}: replaces every atom z by the measure rule(z)
/// scaled by the atom weight. rule returning nullopt raises
/// RuleUndefinedAtAtom.
AtomicMeasure convolve(
    const AtomicMeasure& mu,
    const std::function<std::optional<AtomicMeasure>(const AtomLocation&)>& rule);

/// Integral of a test function (given in ball coordinates) against mu.
double test_integral(const AtomicMeasure& mu,
                     const std::function<double(const Vec&)>& f);

struct TruncationDiagnostics {
  double s_minus_delta = 0.0;
  double r_max = 0.0;
  double tail_mass_fraction = 0.0;  // mass share of atoms with r > 0.9 R_max
  bool truncation_dominates = false;  // e^{-(s-delta) R_max} > 0.1
};

TruncationDiagnostics truncation_diagnostics(const GroupBall& ball, double s,
                                             double delta_hat);

namespace detail {
/// Normalized Patterson-Sullivan weights over the ball atoms and the reduced
/// total mass (exactly 1.0 at x = O).
std::pair<Vec, double> ps_weight_vector(const GroupBall& ball, const HPoint& x,
                                        double s);
}  // namespace detail

}  // namespace hypnat
