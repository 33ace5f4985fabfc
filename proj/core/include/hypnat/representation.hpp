#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hypnat/group.hpp"

namespace hypnat {

/// Weighted source/target sample for the smearing measure sigma: a point q in
/// a fundamental region together with its image under the equivariant map.
struct SigmaTarget {
  HPoint source;
  HPoint target;
  double weight = 1.0;
};

/// A representation of the group into Isom(H^n), given by generator images,
/// plus the pseudo-developing data: D0 = D(O) and optional sigma samples.
class Representation {
 public:
  Representation(std::shared_ptr<const GroupSpec> source,
                 std::map<std::string, Isometry> images, HPoint d0);
  Representation(std::shared_ptr<const GroupSpec> source,
                 std::map<std::string, Isometry> images, HPoint d0,
                 std::vector<SigmaTarget> sigma);

  const GroupSpec& source() const { return *source_; }
  int dim_target() const { return d0_.dim(); }
  const HPoint& d0() const { return d0_; }
  const std::vector<SigmaTarget>& sigma() const { return sigma_; }

  /// Image of generator index i (the GroupSpec expansion order).
  const Isometry& image(int generator_index) const { return images_[generator_index]; }

  /// Image of a word given as generator indices, right-to-left fold.
  Isometry evaluate_word(const std::vector<std::uint16_t>& letters) const;

  /// Images of every ball element, aligned with ball.elements(). Words are
  /// walked through a shared-prefix stack, so the cost is one product per
  /// distinct prefix.
  std::vector<Isometry> evaluate(const GroupBall& ball) const;

  /// Representation conjugated by a fixed isometry of the target, with D0
  /// moved along: g -> a g a^{-1}, D0 -> a D0.
  Representation conjugated(const Isometry& a) const;

 private:
  std::shared_ptr<const GroupSpec> source_;
  std::vector<Isometry> images_;  // aligned with source().generators()
  HPoint d0_;
  std::vector<SigmaTarget> sigma_;
};

}  // namespace hypnat
