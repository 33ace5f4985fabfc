#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hypnat/geometry.hpp"

namespace hypnat {

/// Generating set of a discrete group of Isom(H^k). Inverses are added
/// automatically; generator i has inverse at index i ^ 1.
class GroupSpec {
 public:
  GroupSpec(int dim_k, std::vector<std::pair<std::string, Isometry>> generators);

  int dim() const { return dim_; }
  /// All generators including inverses, in the fixed expansion order.
  const std::vector<Isometry>& generators() const { return gens_; }
  const std::vector<std::string>& labels() const { return labels_; }
  int generator_count() const { return static_cast<int>(gens_.size()); }
  /// Index of the base (non-inverse) generator that label i refers to.
  bool is_inverse(int i) const { return (i & 1) != 0; }
  std::string base_label(int i) const { return labels_[i & ~1]; }

 private:
  int dim_;
  std::vector<Isometry> gens_;
  std::vector<std::string> labels_;
};

struct BallElement {
  std::string word;   // dot-joined labels, inverses with ' suffix; "" = identity
  Isometry g;
  HPoint orbit;       // g * O
  double radius;      // d(O, g O)
  std::vector<std::uint16_t> letters;  // generator indices of the word
};

struct BallDiagnostics {
  std::size_t expanded = 0;           // frontier states processed
  std::size_t slack_zone = 0;         // states kept only for expansion
  int near_collisions = 0;            // pairs at Frobenius distance in (tol, 10 tol)
  bool non_discrete_suspected = false;
  bool incomplete = false;            // cap hit; ball is partial
};

/// Deduplicated enumeration of {g : d(gO, O) <= R_max}, sorted by radius.
class GroupBall {
 public:
  const GroupSpec& spec() const { return *spec_; }
  int dim() const { return spec_->dim(); }
  double r_max() const { return r_max_; }
  double dedup_tolerance() const { return dedup_tol_; }
  const std::vector<BallElement>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  const BallDiagnostics& diagnostics() const { return diag_; }

  /// Orbit points as columns (ambient coordinates), aligned with elements().
  const Mat& orbit_matrix() const { return orbit_; }
  const Vec& radii() const { return radii_; }

  /// Index of the element equal to m (within dedup tolerance), if stored.
  std::optional<std::size_t> find(const Isometry& m) const;

 private:
  GroupBall() = default;
  std::shared_ptr<const GroupSpec> spec_;
  double r_max_ = 0.0;
  double dedup_tol_ = 0.0;
  std::vector<BallElement> elements_;
  Mat orbit_;
  Vec radii_;
  struct Lookup;
  std::shared_ptr<Lookup> lookup_;
  friend class BallBuilder;
};

struct EnumerateOptions {
  double slack = 2.0;        // prefix radius allowance beyond R_max
  double dedup_tol = 1e-6;   // Frobenius distance identifying two elements
  std::size_t cap = 50'000'000;  // hard bound on stored states
};

/// Breadth-first word search, deduplicated on the Lorentz matrices. Prefixes
/// are allowed to overshoot R_max by opts.slack. On cap overflow the partial
/// ball is returned with diagnostics().incomplete set.
GroupBall enumerate_ball(std::shared_ptr<const GroupSpec> spec, double r_max,
                         const EnumerateOptions& opts = {});

/// N(R) = #{g : d(gO, O) < R}. Throws RExceedsBall for R > R_max.
std::size_t counting_function(const GroupBall& ball, double r);

struct ExponentEstimate {
  double delta_hat = 0.0;
  double slope_stderr = 0.0;
  std::pair<double, double> window;
  std::vector<std::pair<double, std::size_t>> counts;       // (R, N(R))
  std::vector<std::pair<double, double>> divergence_diag;   // (s, partial sum)
};

/// Least-squares slope of log N(R) against R over the window; the counting
/// form of the critical exponent at finite truncation.
ExponentEstimate estimate_exponent(const GroupBall& ball,
                                   std::pair<double, double> window,
                                   double grid_step = 0.25);

/// Partial Poincare sum c(s) = sum over the ball of e^{-s d(O, gO)}.
double poincare_partial(const GroupBall& ball, double s);

}  // namespace hypnat
