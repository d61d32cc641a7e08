#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ballmapper/cover.hpp"
#include "ballmapper/errors.hpp"
#include "ballmapper/graph.hpp"
#include "ballmapper/metric.hpp"
#include "ballmapper/multiscale.hpp"

namespace ballmapper {

// Mean number of neighbours per vertex, 2E / V.
inline double average_degree(const BMGraph& g) {
  if (g.vertex_count() == 0) throw ParameterError("average degree of an empty graph");
  return 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.vertex_count());
}

// Where a ball center sits inside the cube [0, side]^d.
enum class CubeRegion { interior, boundary, corner };

// Interior: at least interior_margin from every face. Corner: closer than
// corner_margin to a face along every axis. Anything else is boundary.
inline CubeRegion classify_cube_region(std::span<const double> p, double side,
                                       double interior_margin, double corner_margin) {
  std::size_t near_interior = 0, near_corner = 0;
  for (double c : p) {
    const double gap = std::min(c, side - c);
    if (gap < interior_margin) ++near_interior;
    if (gap < corner_margin) ++near_corner;
  }
  if (near_interior == 0) return CubeRegion::interior;
  if (near_corner == p.size()) return CubeRegion::corner;
  return CubeRegion::boundary;
}

struct RegionDegrees {
  double interior = 0.0, boundary = 0.0, corner = 0.0;  // NaN when the region is empty
  std::size_t interior_count = 0, boundary_count = 0, corner_count = 0;
};

// Mean degree per cube region. Default margins: 2 eps for interior, eps for corners.
inline RegionDegrees degree_by_region(const BMGraph& g, const PointCloud& cloud, double side,
                                      std::optional<double> interior_margin = std::nullopt,
                                      std::optional<double> corner_margin = std::nullopt) {
  const double im = interior_margin.value_or(2.0 * g.epsilon);
  const double cm = corner_margin.value_or(g.epsilon);
  const auto deg = vertex_degrees(g);
  double sums[3] = {0, 0, 0};
  std::size_t counts[3] = {0, 0, 0};
  for (const auto& v : g.vertices) {
    const auto r = static_cast<int>(classify_cube_region(cloud.point(v.center), side, im, cm));
    sums[r] += static_cast<double>(deg[v.id]);
    ++counts[r];
  }
  auto mean = [&](int r) {
    return counts[r] ? sums[r] / static_cast<double>(counts[r]) : std::nan("");
  };
  return {mean(0), mean(1), mean(2), counts[0], counts[1], counts[2]};
}

// Average degree against radius, per repetition and averaged.
struct DegreeSweep {
  std::vector<double> radii;
  std::vector<double> mean_degree;                 // averaged over repetitions
  std::size_t repetitions = 0;
  std::vector<std::vector<double>> per_repetition; // [rep][radius]
  // Interior-only averages, filled when the sweep knows the cube side.
  std::vector<double> interior_mean_degree;
  std::vector<std::vector<double>> interior_per_repetition;

  friend bool operator==(const DegreeSweep&, const DegreeSweep&) = default;
};

struct SweepOptions {
  std::size_t repetitions = 1;
  std::uint64_t seed = 0;
  NetParams net = NetParams::greedy(1.0);  // epsilon is replaced by radii[0]
  std::optional<double> cube_side;          // enables interior-only averages
  Exec exec = {};
};

using Sampler = std::function<PointCloud(std::uint64_t seed)>;

// Repetition r draws sampler(seed + r), builds the net at radii[0] and the
// multiscale graphs over all radii.
inline DegreeSweep dimension_sweep(const Sampler& sampler, const MetricSpec& metric,
                                   const std::vector<double>& radii, const SweepOptions& opt) {
  detail::check_radii(radii);
  if (opt.repetitions == 0) throw ParameterError("repetitions must be >= 1");

  DegreeSweep sweep;
  sweep.radii = radii;
  sweep.repetitions = opt.repetitions;
  NetParams net = opt.net;
  if (net.algorithm != NetAlgorithm::kmeans) net.epsilon.reset();

  for (std::size_t rep = 0; rep < opt.repetitions; ++rep) {
    const PointCloud cloud = sampler(opt.seed + rep);
    const MultiScaleBM ms = multiscale_bm(cloud, metric, radii, net, opt.exec);
    std::vector<double> curve, interior;
    for (const auto& g : ms.graphs) {
      curve.push_back(average_degree(g));
      if (opt.cube_side) interior.push_back(degree_by_region(g, cloud, *opt.cube_side).interior);
    }
    sweep.per_repetition.push_back(std::move(curve));
    if (opt.cube_side) sweep.interior_per_repetition.push_back(std::move(interior));
  }

  auto average = [&](const std::vector<std::vector<double>>& rows) {
    std::vector<double> out(radii.size(), 0.0);
    for (const auto& row : rows)
      for (std::size_t i = 0; i < row.size(); ++i) out[i] += row[i];
    for (double& v : out) v /= static_cast<double>(rows.size());
    return out;
  };
  sweep.mean_degree = average(sweep.per_repetition);
  if (opt.cube_side) sweep.interior_mean_degree = average(sweep.interior_per_repetition);
  return sweep;
}

inline DegreeSweep dimension_sweep(const PointCloud& cloud, const MetricSpec& metric,
                                   const std::vector<double>& radii, const SweepOptions& opt) {
  return dimension_sweep([&cloud](std::uint64_t) { return cloud; }, metric, radii, opt);
}

// Median over the middle third of a curve: indices [n/3, n - n/3).
inline double plateau_value(std::span<const double> curve) {
  const std::size_t n = curve.size();
  if (n < 3) throw ParameterError("plateau needs at least 3 radii");
  std::vector<double> band(curve.begin() + static_cast<std::ptrdiff_t>(n / 3),
                           curve.begin() + static_cast<std::ptrdiff_t>(n - n / 3));
  std::sort(band.begin(), band.end());
  const std::size_t m = band.size();
  return m % 2 ? band[m / 2] : 0.5 * (band[m / 2 - 1] + band[m / 2]);
}

inline double plateau_degree(const DegreeSweep& sweep) { return plateau_value(sweep.mean_degree); }

struct TrustBand {
  double lower = 0.0;
  double upper = 0.0;
};

// Features of a BM graph at eps built on data within Hausdorff distance
// delta of the truth are trusted when they persist from eps to 3 eps + 2 delta.
inline TrustBand trust_band(double epsilon, double delta) {
  if (!(epsilon > 0.0)) throw ParameterError("epsilon must be positive");
  if (!(delta >= 0.0)) throw ParameterError("delta must be nonnegative");
  return {epsilon, 3.0 * epsilon + 2.0 * delta};
}

inline constexpr double kDefaultDensityQuantile = 0.25;

// Quantile of vertex sizes (linear interpolation between order statistics),
// rounded down.
inline std::size_t suggest_density_threshold(const BMGraph& g,
                                             double quantile = kDefaultDensityQuantile) {
  if (!(quantile >= 0.0 && quantile <= 1.0))
    throw ParameterError("quantile must lie in [0, 1]");
  if (g.vertex_count() == 0) throw ParameterError("density threshold of an empty graph");
  std::vector<std::size_t> sizes;
  sizes.reserve(g.vertex_count());
  for (const auto& v : g.vertices) sizes.push_back(v.size);
  std::sort(sizes.begin(), sizes.end());
  const double pos = quantile * static_cast<double>(sizes.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sizes.size() - 1);
  const double value = static_cast<double>(sizes[lo]) +
                       (pos - static_cast<double>(lo)) *
                           (static_cast<double>(sizes[hi]) - static_cast<double>(sizes[lo]));
  return static_cast<std::size_t>(std::floor(value));
}

}  // namespace ballmapper
