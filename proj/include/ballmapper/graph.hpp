#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ballmapper/cover.hpp"
#include "ballmapper/errors.hpp"
#include "ballmapper/parallel.hpp"
#include "ballmapper/union_find.hpp"

namespace ballmapper {

struct BMVertex {
  std::size_t id = 0;
  std::size_t center = 0;              // point index of the ball center
  std::vector<std::size_t> covered;    // sorted point indices
  std::size_t size = 0;

  friend bool operator==(const BMVertex&, const BMVertex&) = default;
};

struct BMEdge {
  std::size_t u = 0;
  std::size_t v = 0;  // u < v
  std::size_t weight = 0;  // points covered by both balls

  friend bool operator==(const BMEdge&, const BMEdge&) = default;
  friend auto operator<=>(const BMEdge& a, const BMEdge& b) {
    return std::pair(a.u, a.v) <=> std::pair(b.u, b.v);
  }
};

// Ball Mapper graph. Vertex ids follow center order; edges are sorted by
// (u, v). A partial graph has had vertices filtered out, so its covered sets
// no longer cover every point.
struct BMGraph {
  double epsilon = 0.0;
  std::size_t point_count = 0;
  std::vector<BMVertex> vertices;
  std::vector<BMEdge> edges;
  bool partial = false;

  std::size_t vertex_count() const noexcept { return vertices.size(); }
  std::size_t edge_count() const noexcept { return edges.size(); }

  friend bool operator==(const BMGraph&, const BMGraph&) = default;
};

namespace detail {

inline constexpr std::size_t kDenseEdgeLimit = 2048;

inline std::uint64_t edge_key(std::size_t u, std::size_t v) {
  return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint64_t>(v);
}

// Maps point index -> vertex id for the centers of a cover.
inline std::vector<std::size_t> vertex_index(const CoverVector& cover) {
  const std::size_t none = cover.size();
  std::vector<std::size_t> index(cover.size(), none);
  for (std::size_t v = 0; v < cover.centers.size(); ++v) index[cover.centers[v]] = v;
  return index;
}

}  // namespace detail

// One vertex per center; an edge per pair of centers that share a covered
// point, weighted by the number of such witness points.
inline BMGraph build_bm_graph(const CoverVector& cover, Exec exec = {}) {
  const std::size_t n = cover.size();
  const std::size_t vcount = cover.centers.size();
  if (vcount >= (std::size_t{1} << 32)) throw ParameterError("too many centers");
  const auto index = detail::vertex_index(cover);

  BMGraph g;
  g.epsilon = cover.epsilon;
  g.point_count = n;
  g.vertices.resize(vcount);
  for (std::size_t v = 0; v < vcount; ++v) {
    g.vertices[v].id = v;
    g.vertices[v].center = cover.centers[v];
  }
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t c : cover.covers(x)) {
      if (c >= n || index[c] == n) throw ParameterError("cover list names a non-center");
      g.vertices[index[c]].covered.push_back(x);
    }
  for (auto& vert : g.vertices) vert.size = vert.covered.size();

  // Witness pairs are counted in a dense V x V table when it is small enough,
  // otherwise in hash maps; both paths give the same sorted edge list.
  const std::size_t chunks = detail::chunk_count(n, exec, 1024);
  const bool dense = vcount <= detail::kDenseEdgeLimit;
  std::vector<std::vector<std::uint32_t>> tables(dense ? chunks : 0);
  std::vector<std::unordered_map<std::uint64_t, std::size_t>> maps(dense ? 0 : chunks);
  detail::parallel_chunks(
      n, exec,
      [&](std::size_t begin, std::size_t end, std::size_t chunk) {
        if (dense) tables[chunk].assign(vcount * vcount, 0);
        std::vector<std::size_t> ids;
        for (std::size_t x = begin; x < end; ++x) {
          ids.clear();
          for (std::size_t c : cover.covers(x)) ids.push_back(index[c]);
          std::sort(ids.begin(), ids.end());
          for (std::size_t i = 0; i < ids.size(); ++i)
            for (std::size_t j = i + 1; j < ids.size(); ++j) {
              if (dense)
                ++tables[chunk][ids[i] * vcount + ids[j]];
              else
                ++maps[chunk][detail::edge_key(ids[i], ids[j])];
            }
        }
      },
      1024);

  if (dense) {
    for (std::size_t u = 0; u < vcount; ++u)
      for (std::size_t v = u + 1; v < vcount; ++v) {
        std::size_t w = 0;
        for (const auto& t : tables) w += t[u * vcount + v];
        if (w > 0) g.edges.push_back({u, v, w});
      }
  } else {
    auto& merged = maps[0];
    for (std::size_t c = 1; c < chunks; ++c)
      for (const auto& [key, w] : maps[c]) merged[key] += w;
    g.edges.reserve(merged.size());
    for (const auto& [key, w] : merged)
      g.edges.push_back({static_cast<std::size_t>(key >> 32),
                         static_cast<std::size_t>(key & 0xffffffffu), w});
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

inline Components connected_components(const BMGraph& g) {
  UnionFind uf(g.vertex_count());
  for (const auto& e : g.edges) uf.unite(e.u, e.v);
  return {uf.set_count(), uf.canonical_labels()};
}

// First Betti number of the graph: E - V + C.
inline long long cycle_rank(const BMGraph& g) {
  return static_cast<long long>(g.edge_count()) - static_cast<long long>(g.vertex_count()) +
         static_cast<long long>(connected_components(g).count);
}

inline std::vector<std::size_t> vertex_degrees(const BMGraph& g) {
  std::vector<std::size_t> deg(g.vertex_count(), 0);
  for (const auto& e : g.edges) {
    ++deg[e.u];
    ++deg[e.v];
  }
  return deg;
}

// Keeps vertices covering at least n_min points and the edges between them.
// Vertex ids are renumbered; centers and covered sets are untouched.
inline BMGraph filter_low_density(const BMGraph& g, std::size_t n_min) {
  BMGraph out;
  out.epsilon = g.epsilon;
  out.point_count = g.point_count;
  out.partial = g.partial;
  std::vector<std::size_t> remap(g.vertex_count(), g.vertex_count());
  for (const auto& v : g.vertices) {
    if (v.size < n_min) {
      out.partial = true;
      continue;
    }
    remap[v.id] = out.vertices.size();
    BMVertex kept = v;
    kept.id = out.vertices.size();
    out.vertices.push_back(std::move(kept));
  }
  for (const auto& e : g.edges) {
    const std::size_t u = remap[e.u], v = remap[e.v];
    if (u != g.vertex_count() && v != g.vertex_count()) out.edges.push_back({u, v, e.weight});
  }
  return out;
}

enum class Aggregator { mean, min, max };

inline std::string_view to_string(Aggregator a) {
  switch (a) {
    case Aggregator::mean: return "mean";
    case Aggregator::min: return "min";
    case Aggregator::max: return "max";
  }
  return "unknown";
}

inline Aggregator parse_aggregator(std::string_view name) {
  if (name == "mean") return Aggregator::mean;
  if (name == "min") return Aggregator::min;
  if (name == "max") return Aggregator::max;
  throw ParameterError("unknown aggregator '" + std::string(name) + "'");
}

struct VertexColoring {
  std::string attribute;
  Aggregator aggregator = Aggregator::mean;
  std::vector<double> values;  // one per vertex

  friend bool operator==(const VertexColoring&, const VertexColoring&) = default;
};

// Aggregates an attribute over each vertex's covered points.
inline VertexColoring vertex_coloring(const BMGraph& g, std::string name,
                                      std::span<const double> attribute,
                                      Aggregator aggregator = Aggregator::mean) {
  if (attribute.size() != g.point_count)
    throw ParameterError("attribute length " + std::to_string(attribute.size()) +
                         " differs from point count " + std::to_string(g.point_count));
  for (std::size_t i = 0; i < attribute.size(); ++i)
    if (!std::isfinite(attribute[i]))
      throw DataError("non-finite attribute value at point " + std::to_string(i));

  VertexColoring col{std::move(name), aggregator, {}};
  col.values.reserve(g.vertex_count());
  for (const auto& v : g.vertices) {
    if (v.covered.empty()) throw ParameterError("vertex " + std::to_string(v.id) + " covers no points");
    double acc = attribute[v.covered.front()];
    for (std::size_t i = 1; i < v.covered.size(); ++i) {
      const double a = attribute[v.covered[i]];
      switch (aggregator) {
        case Aggregator::mean: acc += a; break;
        case Aggregator::min: acc = std::min(acc, a); break;
        case Aggregator::max: acc = std::max(acc, a); break;
      }
    }
    if (aggregator == Aggregator::mean) acc /= static_cast<double>(v.covered.size());
    col.values.push_back(acc);
  }
  return col;
}

// Structural checks on a graph, rethrown as InvariantError.
inline void verify_graph(const BMGraph& g) {
  std::vector<char> seen(g.point_count, 0);
  for (std::size_t i = 0; i < g.vertex_count(); ++i) {
    const auto& v = g.vertices[i];
    if (v.id != i) throw InvariantError("vertex ids are not 0..V-1");
    if (v.size != v.covered.size()) throw InvariantError("vertex size differs from covered count");
    for (std::size_t x : v.covered) {
      if (x >= g.point_count) throw InvariantError("covered point out of range");
      seen[x] = 1;
    }
  }
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const auto& e = g.edges[i];
    if (e.u >= e.v || e.v >= g.vertex_count()) throw InvariantError("malformed edge");
    if (e.weight == 0) throw InvariantError("edge with zero weight");
    if (i > 0 && !(g.edges[i - 1] < e)) throw InvariantError("edges unsorted or duplicated");
  }
  if (!g.partial)
    for (std::size_t x = 0; x < g.point_count; ++x)
      if (!seen[x]) throw InvariantError("point " + std::to_string(x) + " is not covered");
}

}  // namespace ballmapper
