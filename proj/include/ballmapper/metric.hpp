#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ballmapper/errors.hpp"

namespace ballmapper {

// A named real column of length N riding along with the points.
struct Attribute {
  std::string name;
  std::vector<double> values;

  friend bool operator==(const Attribute&, const Attribute&) = default;
};

// N points in D coordinates, stored row-major. A cloud read from a distance
// matrix has D = 0: it carries ids only and every coordinate op rejects it.
class PointCloud {
 public:
  PointCloud() = default;

  PointCloud(std::size_t dim, std::vector<double> coords,
             std::vector<Attribute> attributes = {})
      : dim_(dim), coords_(std::move(coords)), attributes_(std::move(attributes)) {
    if (dim_ == 0) throw ParameterError("point dimension must be positive");
    if (coords_.size() % dim_ != 0)
      throw DataError("coordinate count is not a multiple of the dimension");
    size_ = coords_.size() / dim_;
    for (std::size_t i = 0; i < coords_.size(); ++i)
      if (!std::isfinite(coords_[i]))
        throw DataError("non-finite coordinate at point " + std::to_string(i / dim_));
    check_attributes();
  }

  // Cloud with ids 0..n-1 and no coordinates.
  static PointCloud ids_only(std::size_t n, std::vector<Attribute> attributes = {}) {
    PointCloud cloud;
    cloud.size_ = n;
    cloud.attributes_ = std::move(attributes);
    cloud.check_attributes();
    return cloud;
  }

  std::size_t size() const noexcept { return size_; }
  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return size_ == 0; }
  bool has_coordinates() const noexcept { return dim_ > 0; }

  std::span<const double> point(std::size_t i) const {
    if (!has_coordinates()) throw ParameterError("point cloud has no coordinates");
    if (i >= size_) throw ParameterError("point index " + std::to_string(i) + " out of range");
    return {coords_.data() + i * dim_, dim_};
  }

  const std::vector<double>& coordinates() const noexcept { return coords_; }
  const std::vector<Attribute>& attributes() const noexcept { return attributes_; }

  const Attribute* find_attribute(std::string_view name) const {
    for (const auto& a : attributes_)
      if (a.name == name) return &a;
    return nullptr;
  }

  const Attribute& attribute(std::string_view name) const {
    if (const auto* a = find_attribute(name)) return *a;
    throw ParameterError("no attribute named '" + std::string(name) + "'");
  }

  friend bool operator==(const PointCloud&, const PointCloud&) = default;

 private:
  void check_attributes() const {
    for (const auto& a : attributes_)
      if (a.values.size() != size_)
        throw DataError("attribute '" + a.name + "' has length " +
                        std::to_string(a.values.size()) + ", expected " +
                        std::to_string(size_));
  }

  std::size_t dim_ = 0;
  std::size_t size_ = 0;
  std::vector<double> coords_;
  std::vector<Attribute> attributes_;
};

enum class MetricKind { euclidean, manhattan, chebyshev, precomputed };

inline std::string_view to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::euclidean: return "euclidean";
    case MetricKind::manhattan: return "manhattan";
    case MetricKind::chebyshev: return "chebyshev";
    case MetricKind::precomputed: return "precomputed";
  }
  return "unknown";
}

inline MetricKind parse_metric_kind(std::string_view name) {
  if (name == "euclidean") return MetricKind::euclidean;
  if (name == "manhattan") return MetricKind::manhattan;
  if (name == "chebyshev") return MetricKind::chebyshev;
  if (name == "precomputed") return MetricKind::precomputed;
  throw ParameterError("unknown metric '" + std::string(name) + "'");
}

// Which distance to use. A precomputed metric owns a validated N x N matrix
// shared between copies.
class MetricSpec {
 public:
  static constexpr double symmetry_tolerance = 1e-12;

  MetricSpec() = default;

  explicit MetricSpec(MetricKind kind) : kind_(kind) {
    if (kind == MetricKind::precomputed)
      throw ParameterError("precomputed metric requires a distance matrix");
  }

  static MetricSpec euclidean() { return MetricSpec(MetricKind::euclidean); }
  static MetricSpec manhattan() { return MetricSpec(MetricKind::manhattan); }
  static MetricSpec chebyshev() { return MetricSpec(MetricKind::chebyshev); }

  // Validates symmetry (absolute 1e-12), zero diagonal and nonnegativity.
  static MetricSpec precomputed(std::size_t n, std::vector<double> matrix) {
    if (matrix.size() != n * n)
      throw DataError("distance matrix must be square (" + std::to_string(n) + "x" +
                      std::to_string(n) + ")");
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double v = matrix[i * n + j];
        if (!std::isfinite(v))
          throw DataError("non-finite distance at (" + std::to_string(i) + "," +
                          std::to_string(j) + ")");
        if (v < 0.0)
          throw DataError("negative distance at (" + std::to_string(i) + "," +
                          std::to_string(j) + ")");
        if (i == j && v != 0.0)
          throw DataError("nonzero diagonal entry at " + std::to_string(i));
        if (j > i && std::abs(v - matrix[j * n + i]) > symmetry_tolerance)
          throw DataError("asymmetric distance matrix at (" + std::to_string(i) + "," +
                          std::to_string(j) + ")");
      }
    }
    MetricSpec m;
    m.kind_ = MetricKind::precomputed;
    m.n_ = n;
    m.matrix_ = std::make_shared<const std::vector<double>>(std::move(matrix));
    return m;
  }

  MetricKind kind() const noexcept { return kind_; }
  bool is_precomputed() const noexcept { return kind_ == MetricKind::precomputed; }
  std::size_t matrix_size() const noexcept { return n_; }

  double entry(std::size_t i, std::size_t j) const {
    if (!is_precomputed()) throw ParameterError("metric has no distance matrix");
    if (i >= n_ || j >= n_)
      throw ParameterError("point index out of range for distance matrix");
    return (*matrix_)[i * n_ + j];
  }

  double entry_unchecked(std::size_t i, std::size_t j) const noexcept {
    return (*matrix_)[i * n_ + j];
  }

  // Distance between raw coordinate vectors.
  double operator()(std::span<const double> a, std::span<const double> b) const {
    if (is_precomputed())
      throw ParameterError("precomputed metric cannot be queried with coordinates");
    if (a.size() != b.size())
      throw ParameterError("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                           std::to_string(b.size()));
    return coordinate_distance(a.data(), b.data(), a.size());
  }

  // Unchecked kernel; the caller guarantees equal lengths and a coordinate metric.
  double coordinate_distance(const double* a, const double* b, std::size_t dim) const noexcept {
    double acc = 0.0;
    switch (kind_) {
      case MetricKind::euclidean:
        for (std::size_t k = 0; k < dim; ++k) {
          const double t = a[k] - b[k];
          acc += t * t;
        }
        return std::sqrt(acc);
      case MetricKind::manhattan:
        for (std::size_t k = 0; k < dim; ++k) acc += std::abs(a[k] - b[k]);
        return acc;
      case MetricKind::chebyshev:
        for (std::size_t k = 0; k < dim; ++k) acc = std::max(acc, std::abs(a[k] - b[k]));
        return acc;
      case MetricKind::precomputed:
        break;
    }
    return std::numeric_limits<double>::quiet_NaN();
  }

 private:
  MetricKind kind_ = MetricKind::euclidean;
  std::size_t n_ = 0;
  std::shared_ptr<const std::vector<double>> matrix_;
};

// A cloud viewed through a metric; the pair every algorithm works on.
// Holds references, so it must not outlive its arguments.
class MetricView {
 public:
  MetricView(const PointCloud& cloud, const MetricSpec& metric)
      : cloud_(cloud), metric_(metric) {
    if (metric.is_precomputed()) {
      if (metric.matrix_size() != cloud.size())
        throw ParameterError("distance matrix has " + std::to_string(metric.matrix_size()) +
                             " points but the cloud has " + std::to_string(cloud.size()));
    } else if (!cloud.has_coordinates() && !cloud.empty()) {
      throw ParameterError("metric '" + std::string(to_string(metric.kind())) +
                           "' needs coordinates, but the cloud carries ids only");
    }
  }

  std::size_t size() const noexcept { return cloud_.size(); }
  const PointCloud& cloud() const noexcept { return cloud_; }
  const MetricSpec& metric() const noexcept { return metric_; }

  // Unchecked distance between point indices.
  double operator()(std::size_t i, std::size_t j) const noexcept {
    if (metric_.is_precomputed()) return metric_.entry_unchecked(i, j);
    const std::size_t dim = cloud_.dim();
    const double* base = cloud_.coordinates().data();
    return metric_.coordinate_distance(base + i * dim, base + j * dim, dim);
  }

 private:
  const PointCloud& cloud_;
  const MetricSpec& metric_;
};

// Checked distance between two points of a cloud.
inline double distance(const PointCloud& cloud, const MetricSpec& metric, std::size_t a,
                       std::size_t b) {
  if (a >= cloud.size() || b >= cloud.size())
    throw ParameterError("point index out of range");
  return MetricView(cloud, metric)(a, b);
}

inline double distance(const MetricSpec& metric, std::span<const double> a,
                       std::span<const double> b) {
  return metric(a, b);
}

// max(sup_x inf_y d, sup_y inf_x d), by the O(N*M) double loop.
inline double hausdorff_distance(const PointCloud& x, const PointCloud& y,
                                 const MetricSpec& metric) {
  if (x.empty() || y.empty()) throw ParameterError("Hausdorff distance of an empty cloud");
  if (metric.is_precomputed())
    throw ParameterError("Hausdorff distance is undefined for a precomputed metric");
  if (!x.has_coordinates() || !y.has_coordinates())
    throw ParameterError("Hausdorff distance needs coordinates");
  if (x.dim() != y.dim())
    throw ParameterError("dimension mismatch: " + std::to_string(x.dim()) + " vs " +
                         std::to_string(y.dim()));
  const std::size_t dim = x.dim();
  auto directed = [&](const PointCloud& from, const PointCloud& to) {
    double worst = 0.0;
    for (std::size_t i = 0; i < from.size(); ++i) {
      const double* p = from.coordinates().data() + i * dim;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < to.size() && best > worst; ++j)
        best = std::min(best, metric.coordinate_distance(p, to.coordinates().data() + j * dim, dim));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(x, y), directed(y, x));
}

}  // namespace ballmapper
