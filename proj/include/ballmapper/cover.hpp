#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ballmapper/errors.hpp"
#include "ballmapper/metric.hpp"
#include "ballmapper/parallel.hpp"
#include "ballmapper/random.hpp"

namespace ballmapper {

// B(X, eps): for each point, the centers whose closed eps-ball contains it.
// Cover lists hold center *point indices*, sorted ascending, in CSR layout.
struct CoverVector {
  double epsilon = 0.0;
  std::vector<std::size_t> centers;  // selection order
  std::vector<std::size_t> offsets;  // size() + 1 entries
  std::vector<std::size_t> members;

  std::size_t size() const noexcept { return offsets.empty() ? 0 : offsets.size() - 1; }

  std::span<const std::size_t> covers(std::size_t point) const {
    return {members.data() + offsets[point], offsets[point + 1] - offsets[point]};
  }

  friend bool operator==(const CoverVector&, const CoverVector&) = default;
};

enum class NetAlgorithm { greedy, maxmin, kmeans };

inline std::string_view to_string(NetAlgorithm a) {
  switch (a) {
    case NetAlgorithm::greedy: return "greedy";
    case NetAlgorithm::maxmin: return "maxmin";
    case NetAlgorithm::kmeans: return "kmeans";
  }
  return "unknown";
}

inline NetAlgorithm parse_net_algorithm(std::string_view name) {
  if (name == "greedy") return NetAlgorithm::greedy;
  if (name == "maxmin") return NetAlgorithm::maxmin;
  if (name == "kmeans") return NetAlgorithm::kmeans;
  throw ParameterError("unknown net algorithm '" + std::string(name) + "'");
}

struct NetParams {
  NetAlgorithm algorithm = NetAlgorithm::greedy;
  std::optional<double> epsilon;           // greedy, maxmin
  std::optional<std::size_t> max_centers;  // maxmin early stop
  std::size_t k = 0;                       // kmeans
  std::uint64_t seed = 0;                  // kmeans
  std::size_t kmeans_max_iters = 100;

  static NetParams greedy(double eps) {
    NetParams p;
    p.epsilon = eps;
    return p;
  }
  static NetParams maxmin(double eps, std::optional<std::size_t> max_centers = std::nullopt) {
    NetParams p;
    p.algorithm = NetAlgorithm::maxmin;
    p.epsilon = eps;
    p.max_centers = max_centers;
    return p;
  }
  static NetParams kmeans(std::size_t k, std::uint64_t seed, std::size_t max_iters = 100) {
    NetParams p;
    p.algorithm = NetAlgorithm::kmeans;
    p.k = k;
    p.seed = seed;
    p.kmeans_max_iters = max_iters;
    return p;
  }
};

namespace detail {

inline constexpr std::size_t kMarkGrain = 4096;

inline void require_nonempty(const PointCloud& cloud) {
  if (cloud.empty()) throw ParameterError("point cloud is empty");
}

inline void require_positive_epsilon(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw ParameterError("epsilon must be a positive finite number");
}

// Cover lists for fixed centers at radius eps. Throws CoverageError naming
// the lowest-index uncovered point.
inline CoverVector assign_covers(const MetricView& view, std::vector<std::size_t> centers,
                                 double eps, Exec exec) {
  const std::size_t n = view.size();
  std::vector<std::size_t> sorted = centers;
  std::sort(sorted.begin(), sorted.end());

  const std::size_t chunks = chunk_count(n, exec, 256);
  std::vector<std::vector<std::size_t>> counts(chunks), lists(chunks);
  parallel_chunks(
      n, exec,
      [&](std::size_t begin, std::size_t end, std::size_t chunk) {
        auto& cnt = counts[chunk];
        auto& out = lists[chunk];
        cnt.reserve(end - begin);
        for (std::size_t x = begin; x < end; ++x) {
          std::size_t found = 0;
          double nearest = std::numeric_limits<double>::infinity();
          for (std::size_t c : sorted) {
            const double d = view(x, c);
            if (d <= eps) {
              out.push_back(c);
              ++found;
            } else {
              nearest = std::min(nearest, d);
            }
          }
          if (found == 0) throw CoverageError(x, nearest);
          cnt.push_back(found);
        }
      },
      256);

  CoverVector cover;
  cover.epsilon = eps;
  cover.centers = std::move(centers);
  cover.offsets.reserve(n + 1);
  cover.offsets.push_back(0);
  for (std::size_t c = 0; c < chunks; ++c) {
    for (std::size_t k : counts[c]) cover.offsets.push_back(cover.offsets.back() + k);
    cover.members.insert(cover.members.end(), lists[c].begin(), lists[c].end());
  }
  return cover;
}

inline void check_center_list(const std::vector<std::size_t>& centers, std::size_t n) {
  if (centers.empty()) throw ParameterError("center list is empty");
  std::vector<char> seen(n, 0);
  for (std::size_t c : centers) {
    if (c >= n)
      throw ParameterError("center index " + std::to_string(c) + " out of range");
    if (seen[c]) throw ParameterError("duplicate center index " + std::to_string(c));
    seen[c] = 1;
  }
}

}  // namespace detail

// Walks points in index order; every still-uncovered point becomes a center
// and covers its closed eps-ball.
inline CoverVector greedy_epsilon_net(const PointCloud& cloud, const MetricSpec& metric,
                                      double epsilon, Exec exec = {}) {
  detail::require_nonempty(cloud);
  detail::require_positive_epsilon(epsilon);
  const MetricView view(cloud, metric);
  const std::size_t n = cloud.size();

  std::vector<char> covered(n, 0);
  std::vector<std::size_t> centers;
  for (std::size_t p = 0; p < n; ++p) {
    if (covered[p]) continue;
    centers.push_back(p);
    detail::parallel_chunks(
        n, exec,
        [&](std::size_t begin, std::size_t end, std::size_t) {
          for (std::size_t x = begin; x < end; ++x)
            if (!covered[x] && view(p, x) <= epsilon) covered[x] = 1;
        },
        detail::kMarkGrain);
  }
  return detail::assign_covers(view, std::move(centers), epsilon, exec);
}

// Farthest-point sampling from index 0, ties to the lowest index. Stops
// before adding a point whose distance to the centers is <= epsilon, or once
// max_centers centers exist. After an early stop the cover radius grows to
// the farthest remaining distance so every point stays covered; the returned
// epsilon is the radius actually used.
inline CoverVector maxmin_epsilon_net(const PointCloud& cloud, const MetricSpec& metric,
                                      double epsilon,
                                      std::optional<std::size_t> max_centers = std::nullopt,
                                      Exec exec = {}) {
  detail::require_nonempty(cloud);
  detail::require_positive_epsilon(epsilon);
  if (max_centers && *max_centers == 0) throw ParameterError("max_centers must be >= 1");
  const MetricView view(cloud, metric);
  const std::size_t n = cloud.size();

  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  std::vector<char> is_center(n, 0);
  std::vector<std::size_t> centers;

  auto add_center = [&](std::size_t c) {
    centers.push_back(c);
    is_center[c] = 1;
    detail::parallel_chunks(
        n, exec,
        [&](std::size_t begin, std::size_t end, std::size_t) {
          for (std::size_t x = begin; x < end; ++x)
            nearest[x] = std::min(nearest[x], view(c, x));
        },
        detail::kMarkGrain);
  };

  add_center(0);
  double radius = epsilon;
  while (true) {
    std::size_t best = n;
    double best_d = -1.0;
    for (std::size_t x = 0; x < n; ++x) {
      if (!is_center[x] && nearest[x] > best_d) {
        best = x;
        best_d = nearest[x];
      }
    }
    if (best == n || best_d <= epsilon) break;
    if (max_centers && centers.size() >= *max_centers) {
      radius = std::max(epsilon, best_d);
      break;
    }
    add_center(best);
  }
  return detail::assign_covers(view, std::move(centers), radius, exec);
}

// Lloyd's k-means from farthest-point seeding (random start), then each
// centroid snapped to its nearest data point. Epsilon becomes the largest
// point-to-nearest-center distance, so the cover is total.
inline CoverVector kmeans_centers(const PointCloud& cloud, const MetricSpec& metric,
                                  std::size_t k, std::uint64_t seed,
                                  std::size_t max_iters = 100, Exec exec = {}) {
  detail::require_nonempty(cloud);
  if (metric.kind() != MetricKind::euclidean)
    throw ParameterError("k-means centers require the euclidean metric");
  if (!cloud.has_coordinates()) throw ParameterError("k-means needs coordinates");
  const std::size_t n = cloud.size();
  if (k == 0 || k > n)
    throw ParameterError("k must be in [1, " + std::to_string(n) + "], got " +
                         std::to_string(k));
  if (max_iters == 0) throw ParameterError("kmeans_max_iters must be positive");

  const MetricView view(cloud, metric);
  const std::size_t dim = cloud.dim();
  const double* coords = cloud.coordinates().data();

  // Farthest-point seeding.
  Rng rng(seed);
  std::vector<std::size_t> seeds{static_cast<std::size_t>(rng.below(n))};
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  std::vector<char> chosen(n, 0);
  chosen[seeds[0]] = 1;
  while (seeds.size() < k) {
    const std::size_t last = seeds.back();
    std::size_t best = n;
    double best_d = -1.0;
    for (std::size_t x = 0; x < n; ++x) {
      nearest[x] = std::min(nearest[x], view(last, x));
      if (!chosen[x] && nearest[x] > best_d) {
        best = x;
        best_d = nearest[x];
      }
    }
    seeds.push_back(best);
    chosen[best] = 1;
  }

  std::vector<double> centroids(k * dim);
  for (std::size_t c = 0; c < k; ++c)
    std::copy_n(coords + seeds[c] * dim, dim, centroids.begin() + c * dim);

  auto sq = [dim](const double* a, const double* b) {
    double acc = 0.0;
    for (std::size_t t = 0; t < dim; ++t) acc += (a[t] - b[t]) * (a[t] - b[t]);
    return acc;
  };

  std::vector<std::size_t> assignment(n, k);
  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    for (std::size_t x = 0; x < n; ++x) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double d = sq(coords + x * dim, centroids.data() + c * dim);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (assignment[x] != best) {
        assignment[x] = best;
        changed = true;
      }
    }
    if (!changed) break;
    std::vector<double> sums(k * dim, 0.0);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t x = 0; x < n; ++x) {
      ++counts[assignment[x]];
      for (std::size_t t = 0; t < dim; ++t) sums[assignment[x] * dim + t] += coords[x * dim + t];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;  // empty cluster keeps its centroid
      for (std::size_t t = 0; t < dim; ++t)
        centroids[c * dim + t] = sums[c * dim + t] / static_cast<double>(counts[c]);
    }
  }

  // Snap centroids onto data points; drop repeats, keeping first occurrence.
  std::vector<std::size_t> centers;
  std::vector<char> used(n, 0);
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < n; ++x) {
      const double d = sq(coords + x * dim, centroids.data() + c * dim);
      if (d < best_d) {
        best_d = d;
        best = x;
      }
    }
    if (!used[best]) {
      used[best] = 1;
      centers.push_back(best);
    }
  }

  double eps = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t c : centers) d = std::min(d, view(x, c));
    eps = std::max(eps, d);
  }
  return detail::assign_covers(view, std::move(centers), eps, exec);
}

// Cover lists for a fixed center set at a new radius; centers kept verbatim.
inline CoverVector recover(const PointCloud& cloud, const MetricSpec& metric,
                           std::vector<std::size_t> centers, double epsilon, Exec exec = {}) {
  detail::require_nonempty(cloud);
  detail::require_positive_epsilon(epsilon);
  detail::check_center_list(centers, cloud.size());
  const MetricView view(cloud, metric);
  return detail::assign_covers(view, std::move(centers), epsilon, exec);
}

inline CoverVector build_net(const PointCloud& cloud, const MetricSpec& metric,
                             const NetParams& params, Exec exec = {}) {
  switch (params.algorithm) {
    case NetAlgorithm::greedy:
      if (!params.epsilon) throw ParameterError("greedy net requires epsilon");
      return greedy_epsilon_net(cloud, metric, *params.epsilon, exec);
    case NetAlgorithm::maxmin:
      if (!params.epsilon) throw ParameterError("maxmin net requires epsilon");
      return maxmin_epsilon_net(cloud, metric, *params.epsilon, params.max_centers, exec);
    case NetAlgorithm::kmeans:
      return kmeans_centers(cloud, metric, params.k, params.seed, params.kmeans_max_iters, exec);
  }
  throw ParameterError("unknown net algorithm");
}

// Re-derives every cover invariant from scratch; throws InvariantError.
inline void verify_cover(const PointCloud& cloud, const MetricSpec& metric,
                         const CoverVector& cover) {
  const std::size_t n = cloud.size();
  if (cover.size() != n) throw InvariantError("cover vector size differs from cloud size");
  if (cover.offsets.front() != 0 || cover.offsets.back() != cover.members.size())
    throw InvariantError("cover offsets are inconsistent");
  std::vector<char> is_center(n, 0);
  for (std::size_t c : cover.centers) {
    if (c >= n || is_center[c]) throw InvariantError("invalid or duplicate center");
    is_center[c] = 1;
  }
  const MetricView view(cloud, metric);
  for (std::size_t x = 0; x < n; ++x) {
    const auto list = cover.covers(x);
    if (list.empty()) throw InvariantError("point " + std::to_string(x) + " is uncovered");
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (list[i] >= n || !is_center[list[i]])
        throw InvariantError("cover list of point " + std::to_string(x) + " names a non-center");
      if (i > 0 && list[i] <= list[i - 1])
        throw InvariantError("cover list of point " + std::to_string(x) + " is not sorted");
      if (!(view(x, list[i]) <= cover.epsilon))
        throw InvariantError("point " + std::to_string(x) + " lies outside a listed ball");
    }
  }
}

}  // namespace ballmapper
