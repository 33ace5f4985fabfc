#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "hypnat/barycenter.hpp"
#include "hypnat/representation.hpp"

namespace hypnat {

struct NaturalMapEval {
  HPoint x;
  std::optional<HPoint> value;
  BarycenterReport report;
  double s = 0.0;
  double epsilon = 0.0;
  double r_max = 0.0;
  double target_mass = 0.0;
};

/// Target measure of the map construction at x: atoms rho(g) D(q) for every
/// ball element g and sigma sample q, weighted by the Patterson-Sullivan
/// weight of g times the sigma weight. The visual smearing of each atom is
/// carried by the kernel profile at barycenter time, not by extra atoms.
AtomicMeasure target_measure(const GroupBall& ball, const Representation& rho,
                             const HPoint& x, double s);

/// Evaluator for F_eps(x) = bar(b_x^s), s = (1 + eps) delta_hat. The target
/// atom positions are fixed by (ball, rho); only weights depend on x, so one
/// instance amortizes the setup across any number of evaluations. Evaluations
/// at distinct points are independent and safe to run concurrently.
class NaturalMap {
 public:
  NaturalMap(const GroupBall& ball, Representation rho,
             const VisualKernelProfile& profile, double delta_hat);

  NaturalMapEval eval(const HPoint& x, double eps,
                      const BarycenterOptions& opts = {}) const;
  /// Value or throw EvaluationFailed (escaped / degenerate barycenter).
  HPoint value(const HPoint& x, double eps,
               const BarycenterOptions& opts = {}) const;
  std::vector<NaturalMapEval> eval_many(const std::vector<HPoint>& xs, double eps,
                                        const BarycenterOptions& opts = {}) const;

  const GroupBall& ball() const { return ball_; }
  const Representation& representation() const { return rho_; }
  double delta_hat() const { return delta_hat_; }
  int dim_source() const { return ball_.dim(); }
  int dim_target() const { return rho_.dim_target(); }

 private:
  const GroupBall& ball_;
  Representation rho_;
  const VisualKernelProfile& profile_;
  double delta_hat_;
  Mat targets_;     // (n+1) x (ball size * sigma count)
  Vec sigma_w_;
};

/// One-shot form of the evaluator.
NaturalMapEval natural_map_eval(const HPoint& x, const GroupBall& ball,
                                const Representation& rho, double eps,
                                const VisualKernelProfile& profile,
                                double delta_hat);

using MapHandle = std::function<HPoint(const HPoint&)>;

struct Differential {
  Mat matrix;              // n x k in the orthonormal frames below
  Frame domain_frame;
  Frame image_frame;
  Vec singular_values;
};

/// Central-difference differential of F at x in coordinate frames.
Differential differential(const MapHandle& f, const HPoint& x, double h);
Differential differential(const MapHandle& f, const HPoint& x, double h,
                          const Frame& domain_frame);

/// p-Jacobian: the supremum over orthonormal p-frames of the wedge norm,
/// equal to the product of the p largest singular values.
double jac_p(const Mat& df, int p);
double jac_p(const Differential& df, int p);

/// Weighted sum over the sampler of the Jacobian of f: the signed k-form
/// pullback when dim matches (k = n), the unsigned k-Jacobian otherwise.
double volume_estimate(const MapHandle& f, int dim_source,
                       const std::vector<std::pair<HPoint, double>>& sampler,
                       double h);

struct EpsilonSweep {
  std::vector<NaturalMapEval> evals;
  std::vector<double> successive_dist;  // d(F_{eps_{i+1}}(x), F_{eps_i}(x))
  bool truncation_dominates = false;    // for the smallest eps
};

/// Evaluates F_eps(x) along a strictly decreasing positive eps list.
EpsilonSweep epsilon_sweep(const HPoint& x, const NaturalMap& map,
                           const std::vector<double>& eps_list);

}  // namespace hypnat
