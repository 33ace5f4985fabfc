#include "hypnat/group.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include <absl/container/flat_hash_map.h>

namespace hypnat {

namespace {

constexpr std::uint32_t kNil = 0xffffffffu;

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Quantized-entry hash of a matrix. offset shifts the grid by half a cell so
// that a pair straddling a cell boundary in one grid agrees in the other.
std::uint64_t grid_key(const double* m, int n2, double inv_grid, double offset) {
  std::uint64_t h = 0x2545f4914f6cdd1dULL;
  for (int i = 0; i < n2; ++i) {
    const auto q = static_cast<std::int64_t>(std::llround(m[i] * inv_grid + offset));
    h = mix64(h ^ static_cast<std::uint64_t>(q));
  }
  return h;
}

double frobenius2(const double* a, const double* b, int n2) {
  double s = 0.0;
  for (int i = 0; i < n2; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// Radius of the orbit point given as the first matrix column, stable at 0.
double radius_of_column(const double* col, int n) {
  const double c = col[0];
  if (c < 1.5) {
    double q = (c - 1.0) * (c - 1.0);
    for (int i = 1; i < n; ++i) q += col[i] * col[i];
    return 2.0 * std::asinh(0.5 * std::sqrt(std::max(0.0, q)));
  }
  return std::acosh(c);
}

}  // namespace

GroupSpec::GroupSpec(int dim_k,
                     std::vector<std::pair<std::string, Isometry>> generators)
    : dim_(dim_k) {
  if (generators.empty())
    throw Error(ErrorCode::ValidationError, "group needs at least one generator");
  for (auto& [label, g] : generators) {
    if (g.dim() != dim_)
      throw Error(ErrorCode::ValidationError,
                  "generator " + label + " has wrong dimension");
    for (const auto& existing : labels_)
      if (existing == label || existing == label + "'")
        throw Error(ErrorCode::ValidationError, "duplicate generator label " + label);
    Isometry inv = g.inverse();
    const double consistency =
        g.compose(inv).frobenius_distance(Isometry::identity(dim_));
    if (consistency > 1e-9)
      throw Error(ErrorCode::ValidationError,
                  "generator " + label + " inverse inconsistent");
    gens_.push_back(std::move(g));
    labels_.push_back(label);
    gens_.push_back(std::move(inv));
    labels_.push_back(label + "'");
  }
}

struct GroupBall::Lookup {
  double inv_grid = 0.0;
  absl::flat_hash_map<std::uint64_t, std::uint32_t> head[2];
  std::vector<std::uint32_t> next[2];
};

std::optional<std::size_t> GroupBall::find(const Isometry& m) const {
  if (!lookup_) return std::nullopt;
  const int n = m.dim() + 1;
  const int n2 = n * n;
  const double* data = m.matrix().data();
  for (int k = 0; k < 2; ++k) {
    const std::uint64_t key =
        grid_key(data, n2, lookup_->inv_grid, k == 0 ? 0.0 : 0.5);
    auto it = lookup_->head[k].find(key);
    std::uint32_t i = (it == lookup_->head[k].end()) ? kNil : it->second;
    while (i != kNil) {
      if (frobenius2(data, elements_[i].g.matrix().data(), n2) <
          dedup_tol_ * dedup_tol_)
        return i;
      i = lookup_->next[k][i];
    }
  }
  return std::nullopt;
}

class BallBuilder {
 public:
  static GroupBall run(std::shared_ptr<const GroupSpec> spec, double r_max,
                       const EnumerateOptions& opts);
};

GroupBall BallBuilder::run(std::shared_ptr<const GroupSpec> spec, double r_max,
                           const EnumerateOptions& opts) {
  if (!(r_max > 0.0)) throw Error(ErrorCode::ValidationError, "R_max must be > 0");
  const int n = spec->dim() + 1;
  const int n2 = n * n;
  const int g_count = spec->generator_count();
  const double expand_limit = r_max + opts.slack;
  const double tol2 = opts.dedup_tol * opts.dedup_tol;
  const double warn2 = 100.0 * tol2;  // (10 tol)^2
  const double fine_inv = 10.0 / opts.dedup_tol;    // cell = tol / 10
  const double coarse_inv = 0.1 / opts.dedup_tol;   // cell = 10 tol

  std::vector<Mat> gens;
  gens.reserve(g_count);
  for (const auto& g : spec->generators()) gens.push_back(g.matrix());

  std::vector<double> pool;           // n2 doubles per state
  std::vector<double> radius;
  std::vector<std::uint32_t> parent;
  std::vector<std::uint16_t> gen_of;
  std::vector<std::uint16_t> depth;
  // Chains for the four dedup grids: fine/coarse x two half-cell offsets.
  std::vector<std::uint32_t> next[4];
  absl::flat_hash_map<std::uint64_t, std::uint32_t> head[4];

  BallDiagnostics diag;

  const auto keys_of = [&](const double* m, std::uint64_t out[4]) {
    out[0] = grid_key(m, n2, fine_inv, 0.0);
    out[1] = grid_key(m, n2, fine_inv, 0.5);
    out[2] = grid_key(m, n2, coarse_inv, 0.0);
    out[3] = grid_key(m, n2, coarse_inv, 0.5);
  };

  // Returns true if m duplicates a stored state.
  const auto is_duplicate = [&](const double* m, const std::uint64_t keys[4]) {
    for (int k = 0; k < 4; ++k) {
      auto it = head[k].find(keys[k]);
      std::uint32_t i = (it == head[k].end()) ? kNil : it->second;
      while (i != kNil) {
        const double d2 = frobenius2(m, pool.data() + std::size_t(i) * n2, n2);
        if (d2 < tol2) return true;
        if (d2 < warn2) {
          ++diag.near_collisions;
          diag.non_discrete_suspected = true;
          return true;  // keep the larger tolerance: merge
        }
        i = next[k][i];
      }
    }
    return false;
  };

  const auto store = [&](const double* m, double r, std::uint32_t par,
                         std::uint16_t g, std::uint16_t dep,
                         const std::uint64_t keys[4]) {
    const auto idx = static_cast<std::uint32_t>(radius.size());
    pool.insert(pool.end(), m, m + n2);
    radius.push_back(r);
    parent.push_back(par);
    gen_of.push_back(g);
    depth.push_back(dep);
    for (int k = 0; k < 4; ++k) {
      auto [it, fresh] = head[k].try_emplace(keys[k], idx);
      next[k].push_back(fresh ? kNil : it->second);
      it->second = idx;
    }
    return idx;
  };

  {
    Mat id = Mat::Identity(n, n);
    std::uint64_t keys[4];
    keys_of(id.data(), keys);
    store(id.data(), 0.0, kNil, 0, 0, keys);
  }

  std::vector<double> child(n2);
  Eigen::Map<Mat> child_map(child.data(), n, n);
  for (std::size_t i = 0; i < radius.size(); ++i) {
    if (radius[i] > expand_limit) continue;
    if (radius.size() >= opts.cap) {
      diag.incomplete = true;
      break;
    }
    ++diag.expanded;
    const Eigen::Map<const Mat> m(pool.data() + i * n2, n, n);
    const Mat parent_copy = m;  // pool may reallocate during store()
    for (int j = 0; j < g_count; ++j) {
      // The inverse of the last letter only backtracks to the parent.
      if (i != 0 && (gen_of[i] ^ 1) == j) continue;
      child_map.noalias() = parent_copy * gens[j];
      const double r = radius_of_column(child.data(), n);
      if (r > expand_limit) continue;
      std::uint64_t keys[4];
      keys_of(child.data(), keys);
      if (is_duplicate(child.data(), keys)) continue;
      store(child.data(), r, static_cast<std::uint32_t>(i),
            static_cast<std::uint16_t>(j),
            static_cast<std::uint16_t>(depth[i] + 1), keys);
    }
  }

  // Keep the ball proper; the slack zone existed only to route words.
  // Membership, radii and sort order all use the radius recomputed from the
  // renormalized orbit point, the same expression later Poincare sums use.
  std::vector<std::uint32_t> members;
  std::vector<double> final_radius;
  for (std::uint32_t i = 0; i < radius.size(); ++i) {
    Eigen::Map<const Mat> m(pool.data() + std::size_t(i) * n2, n, n);
    const Vec col = m.col(0) / std::sqrt(-minkowski(m.col(0), m.col(0)));
    const double r = dist_from_cosh(col[0]);
    if (r <= r_max) {
      members.push_back(i);
      final_radius.push_back(r);
    }
  }
  diag.slack_zone = radius.size() - members.size();

  std::vector<std::vector<std::uint16_t>> letters(members.size());
  for (std::size_t k = 0; k < members.size(); ++k) {
    std::uint32_t i = members[k];
    auto& w = letters[k];
    w.resize(depth[i]);
    for (int pos = depth[i] - 1; pos >= 0; --pos) {
      w[pos] = gen_of[i];
      i = parent[i];
    }
  }

  std::vector<std::size_t> order(members.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (final_radius[a] != final_radius[b]) return final_radius[a] < final_radius[b];
    if (letters[a].size() != letters[b].size())
      return letters[a].size() < letters[b].size();
    return letters[a] < letters[b];
  });

  GroupBall ball;
  ball.spec_ = spec;
  ball.r_max_ = r_max;
  ball.dedup_tol_ = opts.dedup_tol;
  ball.diag_ = diag;
  ball.elements_.reserve(members.size());
  ball.orbit_.resize(n, static_cast<Eigen::Index>(members.size()));
  ball.radii_.resize(static_cast<Eigen::Index>(members.size()));

  auto lookup = std::make_shared<GroupBall::Lookup>();
  lookup->inv_grid = fine_inv;
  lookup->next[0].assign(members.size(), kNil);
  lookup->next[1].assign(members.size(), kNil);

  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    const std::size_t k = order[rank];
    const std::uint32_t i = members[k];
    BallElement e;
    e.letters = letters[k];
    std::string word;
    for (std::size_t pos = 0; pos < e.letters.size(); ++pos) {
      if (pos) word += '.';
      word += spec->labels()[e.letters[pos]];
    }
    e.word = std::move(word);
    Mat m = Eigen::Map<const Mat>(pool.data() + std::size_t(i) * n2, n, n);
    e.radius = final_radius[k];
    e.orbit = hpoint_unchecked(m.col(0));
    ball.orbit_.col(static_cast<Eigen::Index>(rank)) = e.orbit.coords();
    ball.radii_[static_cast<Eigen::Index>(rank)] = final_radius[k];
    e.g = Isometry(std::move(m));
    for (int kk = 0; kk < 2; ++kk) {
      const std::uint64_t key = grid_key(e.g.matrix().data(), n2, fine_inv,
                                         kk == 0 ? 0.0 : 0.5);
      auto [it, fresh] =
          lookup->head[kk].try_emplace(key, static_cast<std::uint32_t>(rank));
      if (!fresh) {
        lookup->next[kk][rank] = it->second;
        it->second = static_cast<std::uint32_t>(rank);
      }
    }
    ball.elements_.push_back(std::move(e));
  }
  ball.lookup_ = std::move(lookup);
  return ball;
}

GroupBall enumerate_ball(std::shared_ptr<const GroupSpec> spec, double r_max,
                         const EnumerateOptions& opts) {
  return BallBuilder::run(std::move(spec), r_max, opts);
}

std::size_t counting_function(const GroupBall& ball, double r) {
  if (r > ball.r_max() + 1e-12)
    throw Error(ErrorCode::RExceedsBall,
                "counting radius exceeds the enumerated ball");
  const auto& radii = ball.radii();
  // radii are sorted nondecreasing; count entries strictly below r.
  std::size_t lo = 0, hi = radii.size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (radii[static_cast<Eigen::Index>(mid)] < r)
      lo = mid + 1;
    else
      hi = mid;
  }
  return lo;
}

ExponentEstimate estimate_exponent(const GroupBall& ball,
                                   std::pair<double, double> window,
                                   double grid_step) {
  if (window.second > ball.r_max() + 1e-12)
    throw Error(ErrorCode::RExceedsBall, "window exceeds the enumerated ball");
  if (window.first < 0.0 || window.first >= window.second)
    throw Error(ErrorCode::ValidationError, "bad exponent window");

  std::size_t distinct = 0;
  double last = -1.0;
  for (Eigen::Index i = 0; i < ball.radii().size(); ++i) {
    const double r = ball.radii()[i];
    if (r < window.first || r > window.second) continue;
    if (r != last) {
      ++distinct;
      last = r;
    }
  }
  if (distinct < 5)
    throw Error(ErrorCode::InsufficientData,
                "window holds fewer than 5 distinct radii");

  ExponentEstimate est;
  est.window = window;
  for (double r = window.first; r <= window.second + 1e-12; r += grid_step) {
    const double rc = std::min(r, ball.r_max());
    est.counts.emplace_back(rc, counting_function(ball, rc));
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (const auto& [r, cnt] : est.counts) {
    if (cnt == 0) continue;
    const double y = std::log(static_cast<double>(cnt));
    sx += r;
    sy += y;
    sxx += r * r;
    sxy += r * y;
    ++m;
  }
  if (m < 2) throw Error(ErrorCode::InsufficientData, "not enough counting points");
  const double denom = m * sxx - sx * sx;
  est.delta_hat = (m * sxy - sx * sy) / denom;
  const double intercept = (sy - est.delta_hat * sx) / m;
  double ss = 0.0;
  for (const auto& [r, cnt] : est.counts) {
    if (cnt == 0) continue;
    const double resid =
        std::log(static_cast<double>(cnt)) - (intercept + est.delta_hat * r);
    ss += resid * resid;
  }
  if (m > 2)
    est.slope_stderr = std::sqrt(ss / (m - 2) / (sxx - sx * sx / m));

  for (int j = 0; j <= 5; ++j) {
    const double s = est.delta_hat * (1.0 + j / 10.0);
    if (s > 0.0) est.divergence_diag.emplace_back(s, poincare_partial(ball, s));
  }
  return est;
}

double poincare_partial(const GroupBall& ball, double s) {
  if (!(s > 0.0)) throw Error(ErrorCode::ValidationError, "s must be positive");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < ball.radii().size(); ++i)
    sum += std::exp(-s * ball.radii()[i]);
  return sum;
}

}  // namespace hypnat
