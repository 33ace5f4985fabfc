#include "hypnat/representation.hpp"

#include <algorithm>
#include <numeric>

namespace hypnat {

namespace {

std::vector<Isometry> resolve_images(const GroupSpec& spec,
                                     const std::map<std::string, Isometry>& named) {
  std::vector<Isometry> images;
  int dim = -1;
  for (int i = 0; i < spec.generator_count(); i += 2) {
    const auto it = named.find(spec.labels()[i]);
    if (it == named.end())
      throw Error(ErrorCode::RepresentationIncomplete,
                  "no image for generator " + spec.labels()[i]);
    if (dim < 0) dim = it->second.dim();
    if (it->second.dim() != dim)
      throw Error(ErrorCode::ValidationError, "image dimensions disagree");
    images.push_back(it->second);
    images.push_back(it->second.inverse());
  }
  return images;
}

}  // namespace

Representation::Representation(std::shared_ptr<const GroupSpec> source,
                               std::map<std::string, Isometry> images, HPoint d0)
    : Representation(std::move(source), std::move(images), std::move(d0), {}) {}

Representation::Representation(std::shared_ptr<const GroupSpec> source,
                               std::map<std::string, Isometry> images, HPoint d0,
                               std::vector<SigmaTarget> sigma)
    : source_(std::move(source)),
      images_(resolve_images(*source_, images)),
      d0_(std::move(d0)),
      sigma_(std::move(sigma)) {
  if (!images_.empty() && images_[0].dim() != d0_.dim())
    throw Error(ErrorCode::ValidationError, "D0 dimension does not match images");
  if (!sigma_.empty()) {
    double mass = 0.0;
    for (const auto& t : sigma_) {
      if (t.weight < 0.0)
        throw Error(ErrorCode::SigmaNotProbability, "negative sigma weight");
      mass += t.weight;
    }
    if (std::abs(mass - 1.0) > 1e-12)
      throw Error(ErrorCode::SigmaNotProbability,
                  "sigma weights sum to " + std::to_string(mass));
  }
}

Isometry Representation::evaluate_word(const std::vector<std::uint16_t>& letters) const {
  Isometry g = Isometry::identity(dim_target());
  for (auto it = letters.rbegin(); it != letters.rend(); ++it)
    g = images_[*it].compose(g);
  return g;
}

std::vector<Isometry> Representation::evaluate(const GroupBall& ball) const {
  const std::size_t n = ball.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return ball.elements()[a].letters < ball.elements()[b].letters;
  });

  std::vector<Isometry> out(n, Isometry::identity(dim_target()));
  std::vector<Isometry> stack{Isometry::identity(dim_target())};
  std::vector<std::uint16_t> prefix;
  for (const std::size_t idx : order) {
    const auto& word = ball.elements()[idx].letters;
    std::size_t common = 0;
    while (common < prefix.size() && common < word.size() &&
           prefix[common] == word[common])
      ++common;
    prefix.resize(common);
    stack.resize(common + 1);
    for (std::size_t pos = common; pos < word.size(); ++pos) {
      stack.push_back(stack.back().compose(images_[word[pos]]));
      prefix.push_back(word[pos]);
    }
    out[idx] = stack.back();
  }
  return out;
}

Representation Representation::conjugated(const Isometry& a) const {
  Representation copy = *this;
  const Isometry a_inv = a.inverse();
  for (auto& g : copy.images_) g = a.compose(g).compose(a_inv);
  copy.d0_ = a.apply(copy.d0_);
  for (auto& t : copy.sigma_) t.target = a.apply(t.target);
  return copy;
}

}  // namespace hypnat
