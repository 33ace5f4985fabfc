#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hypnat/natural_map.hpp"

namespace hypnat {

/// Evaluation schedule along the geodesic ray toward omega.
struct RaySchedule {
  IdealPoint omega;
  std::vector<double> times;  // positive increasing; default 1..12
  double stop_tol = 1e-3;     // chordal increment threshold on the image side

  static std::vector<double> default_times() {
    std::vector<double> t;
    for (int i = 1; i <= 12; ++i) t.push_back(i);
    return t;
  }
};

struct CTEval {
  IdealPoint omega;
  std::optional<IdealPoint> image;
  std::vector<std::pair<double, Vec>> trace;  // (t, ball coords of F value)
  std::vector<double> increments;             // chordal steps between trace rows
  bool converged = false;
};

/// Approximate Cannon-Thurston value at omega: F_eps along the ray, declared
/// converged when the last three chordal increments sit below stop_tol; the
/// image is the radial projection of the final value.
CTEval ct_eval(const RaySchedule& schedule, const NaturalMap& map, double eps);
CTEval ct_eval(const RaySchedule& schedule, const GroupBall& ball,
               const Representation& rho, double eps,
               const VisualKernelProfile& profile, double delta_hat);

/// Errors |integral of f against mu_{x_t}^s - f(omega)| along the ray.
std::vector<std::pair<double, double>> ps_average_cone_test(
    const std::function<double(const Vec&)>& f, const RaySchedule& schedule,
    const GroupBall& ball, double s);

enum class ElementaryKind { nonelementary, elementary_suspected, inconclusive };

struct ElementaryVerdict {
  ElementaryKind kind = ElementaryKind::inconclusive;
  std::vector<IdealPoint> fixed_data;  // common point or invariant pair
  std::string detail;
};

/// Eigen-structure heuristic: a common lightlike eigenvector of the
/// generator images flags a fixed boundary point, a preserved pair flags an
/// invariant geodesic. A check, not a certificate.
ElementaryVerdict nonelementary_check(const Representation& rho);

struct ConvergenceRow {
  std::size_t member = 0;
  bool rejected = false;          // elementary image suspected
  std::vector<double> errors;     // chordal d(f_i(omega), f(omega)) per sample
  double mean = 0.0;
  double max = 0.0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  std::vector<IdealPoint> samples;
  std::vector<std::optional<IdealPoint>> limit_images;
};

/// Convergence experiment: Cannon-Thurston values of each family member
/// against those of the limit representation, sampled over the given limit
/// points. Family members with elementary-suspected images are rejected.
ConvergenceTable ct_converge_experiment(const std::vector<Representation>& family,
                                        const Representation& limit,
                                        const std::vector<IdealPoint>& samples,
                                        double eps, const GroupBall& ball,
                                        const VisualKernelProfile& profile,
                                        double delta_hat,
                                        const RaySchedule* proto = nullptr);

/// rho conjugated by boosts of the given lengths along a fixed axis
/// direction in the target; lengths tending to zero give a family tending to
/// rho itself.
std::vector<Representation> conjugation_family(const Representation& rho,
                                               const Vec& axis_direction,
                                               const std::vector<double>& lengths);

/// Sample points on the limit set: attracting fixed points of long random
/// words (hyperbolic elements), deterministic in the seed.
std::vector<IdealPoint> limit_set_samples(const GroupBall& ball, std::size_t count,
                                          Rng rng, int word_length = 24);

}  // namespace hypnat
