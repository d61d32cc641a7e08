#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <vector>

#include "ballmapper/cover.hpp"
#include "ballmapper/errors.hpp"
#include "ballmapper/graph.hpp"

namespace ballmapper {

using Simplex = std::vector<std::size_t>;  // sorted vertex ids

// Filtered nerve of a cover: a simplex for every set of balls with a common
// witness point, valued by the number of such witnesses. Vertex ids are the
// same as in BMGraph (center order).
struct NerveComplex {
  std::size_t max_dim = 2;
  std::map<Simplex, std::size_t> simplices;

  std::size_t count(std::size_t dim) const {
    std::size_t k = 0;
    for (const auto& [s, f] : simplices)
      if (s.size() == dim + 1) ++k;
    return k;
  }

  friend bool operator==(const NerveComplex&, const NerveComplex&) = default;
};

inline constexpr std::size_t kDefaultMaxDim = 2;
inline constexpr std::size_t kDefaultCoverGuard = 20;

namespace detail {

inline void emit_subsets(const std::vector<std::size_t>& ids, std::size_t max_size,
                         std::size_t start, Simplex& current,
                         std::map<Simplex, std::size_t>& out) {
  for (std::size_t i = start; i < ids.size(); ++i) {
    current.push_back(ids[i]);
    ++out[current];
    if (current.size() < max_size) emit_subsets(ids, max_size, i + 1, current, out);
    current.pop_back();
  }
}

}  // namespace detail

// Emits every subset (up to max_dim + 1 vertices) of each point's cover list.
// A point in more than max_covers_per_point balls aborts with
// CoverBlowupError before any enumeration.
inline NerveComplex build_nerve(const CoverVector& cover, std::size_t max_dim = kDefaultMaxDim,
                                std::size_t max_covers_per_point = kDefaultCoverGuard) {
  if (max_dim < 1) throw ParameterError("max_dim must be >= 1");
  const std::size_t n = cover.size();
  for (std::size_t x = 0; x < n; ++x)
    if (cover.covers(x).size() > max_covers_per_point)
      throw CoverBlowupError(x, cover.covers(x).size(), max_covers_per_point);

  const auto index = detail::vertex_index(cover);
  NerveComplex nerve;
  nerve.max_dim = max_dim;
  std::vector<std::size_t> ids;
  Simplex scratch;
  for (std::size_t x = 0; x < n; ++x) {
    ids.clear();
    for (std::size_t c : cover.covers(x)) {
      if (c >= n || index[c] == n) throw ParameterError("cover list names a non-center");
      ids.push_back(index[c]);
    }
    std::sort(ids.begin(), ids.end());
    detail::emit_subsets(ids, max_dim + 1, 0, scratch, nerve.simplices);
  }
  return nerve;
}

// Graph with the nerve's vertices and edges, weights = filtration values.
inline BMGraph one_skeleton(const NerveComplex& nerve, const CoverVector& cover) {
  BMGraph g;
  g.epsilon = cover.epsilon;
  g.point_count = cover.size();
  const auto index = detail::vertex_index(cover);
  g.vertices.resize(cover.centers.size());
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    g.vertices[v].id = v;
    g.vertices[v].center = cover.centers[v];
  }
  for (std::size_t x = 0; x < cover.size(); ++x)
    for (std::size_t c : cover.covers(x)) g.vertices[index[c]].covered.push_back(x);
  for (auto& v : g.vertices) v.size = v.covered.size();
  for (const auto& [s, f] : nerve.simplices)
    if (s.size() == 2) g.edges.push_back({s[0], s[1], f});
  return g;
}

}  // namespace ballmapper
