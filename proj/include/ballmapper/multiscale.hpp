#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "ballmapper/cover.hpp"
#include "ballmapper/errors.hpp"
#include "ballmapper/graph.hpp"
#include "ballmapper/metric.hpp"
#include "ballmapper/union_find.hpp"

namespace ballmapper {

// Fixed centers, growing radii, one graph per radius (same vertex order).
struct MultiScaleBM {
  std::vector<std::size_t> centers;
  std::vector<double> radii;
  std::vector<BMGraph> graphs;

  friend bool operator==(const MultiScaleBM&, const MultiScaleBM&) = default;
};

namespace detail {

inline void check_radii(const std::vector<double>& radii) {
  if (radii.empty()) throw ParameterError("radii list is empty");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || !std::isfinite(radii[i]))
      throw ParameterError("radii must be positive and finite");
    if (i > 0 && radii[i] < radii[i - 1]) throw ParameterError("radii must be nondecreasing");
  }
}

}  // namespace detail

inline MultiScaleBM multiscale_from_centers(const PointCloud& cloud, const MetricSpec& metric,
                                            const std::vector<std::size_t>& centers,
                                            const std::vector<double>& radii, Exec exec = {}) {
  detail::check_radii(radii);
  MultiScaleBM ms{centers, radii, {}};
  ms.graphs.reserve(radii.size());
  for (double r : radii) ms.graphs.push_back(build_bm_graph(recover(cloud, metric, centers, r, exec), exec));
  return ms;
}

// Centers come from the net at radii[0]; each radius then re-covers them.
// For greedy and maxmin an explicit params.epsilon must equal radii[0]. A
// k-means net picks its own radius, so radii[0] must reach it.
inline MultiScaleBM multiscale_bm(const PointCloud& cloud, const MetricSpec& metric,
                                  const std::vector<double>& radii, NetParams params,
                                  Exec exec = {}) {
  detail::check_radii(radii);
  if (params.algorithm != NetAlgorithm::kmeans) {
    if (params.epsilon && *params.epsilon != radii.front())
      throw ParameterError("net epsilon must equal the first radius");
    params.epsilon = radii.front();
  }
  const CoverVector net = build_net(cloud, metric, params, exec);
  return multiscale_from_centers(cloud, metric, net.centers, radii, exec);
}

// Components of the graph joining points at distance <= cutoff, by
// union-find over all pairs.
inline Components single_linkage_components(const PointCloud& cloud, const MetricSpec& metric,
                                            double cutoff) {
  if (cloud.empty()) throw ParameterError("point cloud is empty");
  if (!(cutoff >= 0.0) || !std::isfinite(cutoff))
    throw ParameterError("cutoff must be a nonnegative finite number");
  const MetricView view(cloud, metric);
  const std::size_t n = cloud.size();
  UnionFind uf(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (view(i, j) <= cutoff) uf.unite(i, j);
  return {uf.set_count(), uf.canonical_labels()};
}

struct InclusionReport {
  bool pass = true;
  std::vector<std::size_t> component_counts;  // per radius
  std::string first_violation;                // empty when pass
};

// Edge nesting, weight monotonicity and nonincreasing component counts
// between consecutive radii. The first violation is reported, not thrown.
inline InclusionReport check_inclusions(const MultiScaleBM& ms) {
  InclusionReport report;
  auto fail = [&](std::string what) {
    if (report.pass) {
      report.pass = false;
      report.first_violation = std::move(what);
    }
  };
  if (ms.graphs.size() != ms.radii.size()) fail("graph count differs from radius count");
  for (std::size_t i = 0; i < ms.graphs.size(); ++i) {
    const auto& g = ms.graphs[i];
    report.component_counts.push_back(connected_components(g).count);
    if (g.vertex_count() != ms.centers.size()) {
      fail("graph " + std::to_string(i) + " has a different vertex set");
      continue;
    }
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
      if (g.vertices[v].center != ms.centers[v])
        fail("graph " + std::to_string(i) + " vertex " + std::to_string(v) +
             " has a different center");
    if (i == 0) continue;
    if (i < ms.radii.size() && ms.radii[i] < ms.radii[i - 1])
      fail("radii not sorted at index " + std::to_string(i));
    const auto& prev = ms.graphs[i - 1];
    // Both edge lists are sorted by (u, v): merge-walk.
    std::size_t j = 0;
    for (const auto& e : prev.edges) {
      while (j < g.edges.size() && g.edges[j] < e) ++j;
      const std::string name = "edge " + std::to_string(e.u) + "-" + std::to_string(e.v);
      if (j == g.edges.size() || g.edges[j].u != e.u || g.edges[j].v != e.v) {
        fail(name + " present at radius index " + std::to_string(i - 1) +
             " is missing at radius index " + std::to_string(i));
      } else if (g.edges[j].weight < e.weight) {
        fail(name + " loses weight between radius index " + std::to_string(i - 1) + " and " +
             std::to_string(i));
      }
    }
    if (report.component_counts[i] > report.component_counts[i - 1])
      fail("component count grows between radius index " + std::to_string(i - 1) + " and " +
           std::to_string(i));
  }
  return report;
}

// Component counts sandwiched between the BM graphs at eps and 2 eps and
// single linkage at eps and 2 eps.
struct InterleavingReport {
  double epsilon = 0.0;
  std::size_t graph_eps = 0;       // components of G_eps
  std::size_t graph_2eps = 0;      // components of G_2eps
  std::size_t linkage_eps = 0;     // components of SL(X, eps)
  std::size_t linkage_2eps = 0;    // components of SL(X, 2 eps)
  bool lower_holds = false;        // SL(2 eps) <= G_eps
  bool upper_holds = false;        // G_2eps <= SL(eps)

  bool pass() const noexcept { return lower_holds && upper_holds; }
};

// Requires the centers to cover X at eps (CoverageError otherwise).
inline InterleavingReport interleaving_h0_check(const PointCloud& cloud, const MetricSpec& metric,
                                                const std::vector<std::size_t>& centers,
                                                double epsilon, Exec exec = {}) {
  const BMGraph g1 = build_bm_graph(recover(cloud, metric, centers, epsilon, exec), exec);
  const BMGraph g2 = build_bm_graph(recover(cloud, metric, centers, 2.0 * epsilon, exec), exec);
  InterleavingReport r;
  r.epsilon = epsilon;
  r.graph_eps = connected_components(g1).count;
  r.graph_2eps = connected_components(g2).count;
  r.linkage_eps = single_linkage_components(cloud, metric, epsilon).count;
  r.linkage_2eps = single_linkage_components(cloud, metric, 2.0 * epsilon).count;
  r.lower_holds = r.linkage_2eps <= r.graph_eps;
  r.upper_holds = r.graph_2eps <= r.linkage_eps;
  return r;
}

}  // namespace ballmapper
