#include "hypnat/boundary.hpp"

#include <cmath>

#include "hypnat/measures.hpp"

namespace hypnat {

CTEval ct_eval(const RaySchedule& schedule, const NaturalMap& map, double eps) {
  if (schedule.times.empty())
    throw Error(ErrorCode::ValidationError, "ray schedule has no times");
  for (std::size_t i = 0; i < schedule.times.size(); ++i) {
    if (!(schedule.times[i] > 0.0) ||
        (i > 0 && !(schedule.times[i] > schedule.times[i - 1])))
      throw Error(ErrorCode::ValidationError, "ray times must be positive increasing");
  }
  CTEval out{schedule.omega, std::nullopt, {}, {}, false};
  for (const double t : schedule.times) {
    const NaturalMapEval e = map.eval(ray_point(schedule.omega, t), eps);
    if (!e.value)
      throw Error(ErrorCode::EvaluationFailed,
                  "natural map failed along the ray at t = " + std::to_string(t));
    const Vec b = to_ball(*e.value);
    if (!out.trace.empty())
      out.increments.push_back((b - out.trace.back().second).norm());
    out.trace.emplace_back(t, b);
  }
  const std::size_t m = out.increments.size();
  if (m >= 3 && out.increments[m - 1] < schedule.stop_tol &&
      out.increments[m - 2] < schedule.stop_tol &&
      out.increments[m - 3] < schedule.stop_tol) {
    out.converged = true;
    const Vec& last = out.trace.back().second;
    if (last.norm() > 1e-12) out.image = IdealPoint::from_ball(last);
  }
  return out;
}

CTEval ct_eval(const RaySchedule& schedule, const GroupBall& ball,
               const Representation& rho, double eps,
               const VisualKernelProfile& profile, double delta_hat) {
  return ct_eval(schedule, NaturalMap(ball, rho, profile, delta_hat), eps);
}

std::vector<std::pair<double, double>> ps_average_cone_test(
    const std::function<double(const Vec&)>& f, const RaySchedule& schedule,
    const GroupBall& ball, double s) {
  const double f_omega = f(to_ball(schedule.omega));
  std::vector<std::pair<double, double>> out;
  for (const double t : schedule.times) {
    const AtomicMeasure mu = ps_measure(ball, ray_point(schedule.omega, t), s);
    out.emplace_back(t, std::abs(test_integral(mu, f) - f_omega));
  }
  return out;
}

namespace {

bool fixes_point(const Isometry& g, const IdealPoint& p, double tol) {
  return chordal(g.apply(p), p) < tol;
}

}  // namespace

ElementaryVerdict nonelementary_check(const Representation& rho) {
  constexpr double tol = 1e-6;
  const GroupSpec& spec = rho.source();
  std::vector<const Isometry*> images;
  for (int i = 0; i < spec.generator_count(); i += 2) images.push_back(&rho.image(i));

  bool all_identity = true;
  for (const auto* g : images)
    if (g->frobenius_distance(Isometry::identity(g->dim())) > tol) all_identity = false;
  if (all_identity)
    return {ElementaryKind::elementary_suspected, {}, "all images are the identity"};

  // Common fixed boundary point across every generator image.
  std::vector<std::vector<IdealPoint>> fixed;
  for (const auto* g : images) fixed.push_back(fixed_ideal_points(*g));
  std::vector<IdealPoint> common;
  bool some_empty = fixed.empty();
  for (const auto& f : fixed)
    if (f.empty()) some_empty = true;
  if (!some_empty) {
    for (const auto& cand : fixed[0]) {
      bool everywhere = true;
      for (std::size_t i = 1; i < fixed.size(); ++i) {
        bool found = false;
        for (const auto& p : fixed[i])
          if (chordal(cand, p) < 1e-5) found = true;
        if (!found) everywhere = false;
      }
      if (everywhere) common.push_back(cand);
    }
  }
  if (!common.empty())
    return {ElementaryKind::elementary_suspected, common,
            "common fixed boundary point of all generator images"};

  // Invariant two-point set (each image fixes or swaps the pair).
  if (!some_empty && fixed[0].size() >= 2) {
    for (std::size_t a = 0; a < fixed[0].size(); ++a) {
      for (std::size_t b = a + 1; b < fixed[0].size(); ++b) {
        const IdealPoint& p = fixed[0][a];
        const IdealPoint& q = fixed[0][b];
        bool invariant = true;
        for (const auto* g : images) {
          const bool keeps = fixes_point(*g, p, 1e-5) && fixes_point(*g, q, 1e-5);
          const bool swaps = chordal(g->apply(p), q) < 1e-5 &&
                             chordal(g->apply(q), p) < 1e-5;
          if (!keeps && !swaps) invariant = false;
        }
        if (invariant)
          return {ElementaryKind::elementary_suspected,
                  {p, q},
                  "invariant boundary pair (invariant geodesic)"};
      }
    }
  }

  if (some_empty)
    return {ElementaryKind::inconclusive, {},
            "some generator image has no fixed boundary point (elliptic)"};
  return {ElementaryKind::nonelementary, {}, "no common eigenvector found"};
}

ConvergenceTable ct_converge_experiment(const std::vector<Representation>& family,
                                        const Representation& limit,
                                        const std::vector<IdealPoint>& samples,
                                        double eps, const GroupBall& ball,
                                        const VisualKernelProfile& profile,
                                        double delta_hat,
                                        const RaySchedule* proto) {
  if (samples.empty())
    throw Error(ErrorCode::ValidationError, "no sample limit points");
  if (nonelementary_check(limit).kind == ElementaryKind::elementary_suspected)
    throw Error(ErrorCode::ElementaryImageSuspected,
                "limit representation has elementary-suspected image");

  RaySchedule base{samples[0], RaySchedule::default_times(), 1e-3};
  if (proto) base = *proto;

  ConvergenceTable table;
  table.samples = samples;

  const NaturalMap limit_map(ball, limit, profile, delta_hat);
  for (const auto& omega : samples) {
    RaySchedule sched = base;
    sched.omega = omega;
    const CTEval e = ct_eval(sched, limit_map, eps);
    table.limit_images.push_back(e.image);
  }

  for (std::size_t i = 0; i < family.size(); ++i) {
    ConvergenceRow row;
    row.member = i;
    if (nonelementary_check(family[i]).kind == ElementaryKind::elementary_suspected) {
      row.rejected = true;
      table.rows.push_back(std::move(row));
      continue;
    }
    const NaturalMap member_map(ball, family[i], profile, delta_hat);
    double sum = 0.0, mx = 0.0;
    std::size_t counted = 0;
    for (std::size_t j = 0; j < samples.size(); ++j) {
      RaySchedule sched = base;
      sched.omega = samples[j];
      const CTEval e = ct_eval(sched, member_map, eps);
      double err = std::numeric_limits<double>::quiet_NaN();
      if (e.image && table.limit_images[j]) {
        err = chordal(*e.image, *table.limit_images[j]);
        sum += err;
        mx = std::max(mx, err);
        ++counted;
      }
      row.errors.push_back(err);
    }
    row.mean = counted ? sum / counted : std::numeric_limits<double>::quiet_NaN();
    row.max = mx;
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<Representation> conjugation_family(const Representation& rho,
                                               const Vec& axis_direction,
                                               const std::vector<double>& lengths) {
  std::vector<Representation> family;
  for (const double len : lengths)
    family.push_back(rho.conjugated(boost_along(axis_direction, len)));
  return family;
}

std::vector<IdealPoint> limit_set_samples(const GroupBall& ball, std::size_t count,
                                          Rng rng, int word_length) {
  const GroupSpec& spec = ball.spec();
  std::vector<IdealPoint> out;
  int guard = 0;
  while (out.size() < count && guard < 200) {
    ++guard;
    Isometry g = Isometry::identity(spec.dim());
    int last = -1;
    for (int i = 0; i < word_length; ++i) {
      int j;
      do {
        j = static_cast<int>(rng.next_u64() % spec.generator_count());
      } while (last >= 0 && (j ^ 1) == last);  // no immediate backtracking
      g = g.compose(spec.generators()[j]);
      last = j;
    }
    // Attracting fixed point: the radial limit of g^m O, read off from the
    // dominant column behaviour; iterate a few squarings for robustness.
    Isometry p = g.compose(g).compose(g.compose(g));
    const HPoint image = p.apply(HPoint::origin(spec.dim()));
    if (dist(HPoint::origin(spec.dim()), image) < 2.0) continue;  // not loxodromic enough
    IdealPoint cand = radial_ideal(image);
    bool dup = false;
    for (const auto& o : out)
      if (chordal(o, cand) < 1e-3) dup = true;
    if (!dup) out.push_back(std::move(cand));
  }
  if (out.size() < count)
    throw Error(ErrorCode::EvaluationFailed,
                "could not find enough distinct limit points");
  return out;
}

}  // namespace hypnat
