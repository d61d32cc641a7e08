#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "ballmapper/csv.hpp"
#include "ballmapper/errors.hpp"
#include "ballmapper/metric.hpp"
#include "ballmapper/random.hpp"

namespace ballmapper {

namespace detail {

inline void require_count(std::size_t n) {
  if (n == 0) throw ParameterError("sample size must be >= 1");
}

inline void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw ParameterError(std::string(what) + " must be positive and finite");
}

}  // namespace detail

// n points uniform in [0, side]^d.
inline PointCloud sample_cube(std::size_t n, std::size_t d, double side, std::uint64_t seed) {
  detail::require_count(n);
  if (d == 0) throw ParameterError("dimension must be >= 1");
  detail::require_positive(side, "side");
  Rng rng(seed);
  std::vector<double> coords(n * d);
  for (double& c : coords) c = rng.uniform(0.0, side);
  return PointCloud(d, std::move(coords));
}

// ((R + r cos v) cos u, (R + r cos v) sin u, r sin v), u and v uniform angles.
inline PointCloud sample_torus(std::size_t n, double major, double minor, std::uint64_t seed) {
  detail::require_count(n);
  detail::require_positive(minor, "minor radius");
  if (!(major > minor)) throw ParameterError("torus needs major radius > minor radius");
  Rng rng(seed);
  std::vector<double> coords;
  coords.reserve(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = 2.0 * std::numbers::pi * rng.uniform();
    const double v = 2.0 * std::numbers::pi * rng.uniform();
    coords.push_back((major + minor * std::cos(v)) * std::cos(u));
    coords.push_back((major + minor * std::cos(v)) * std::sin(u));
    coords.push_back(minor * std::sin(v));
  }
  return PointCloud(3, std::move(coords));
}

// Uniform angle on a circle in the first two axes, zero-padded to ambient_dim.
inline PointCloud sample_circle(std::size_t n, double radius, std::size_t ambient_dim,
                                std::uint64_t seed) {
  detail::require_count(n);
  detail::require_positive(radius, "radius");
  if (ambient_dim < 2) throw ParameterError("circle needs ambient dimension >= 2");
  Rng rng(seed);
  std::vector<double> coords(n * ambient_dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 2.0 * std::numbers::pi * rng.uniform();
    coords[i * ambient_dim] = radius * std::cos(t);
    coords[i * ambient_dim + 1] = radius * std::sin(t);
  }
  return PointCloud(ambient_dim, std::move(coords));
}

// Three arms of length arm_length leaving the origin at 90, 210 and 330
// degrees, uniform in arc length, with gaussian jitter of 1% of the arm.
inline PointCloud sample_y_junction(std::size_t n, double arm_length, std::uint64_t seed) {
  detail::require_count(n);
  detail::require_positive(arm_length, "arm length");
  constexpr double kDeg = std::numbers::pi / 180.0;
  const double angles[3] = {90.0 * kDeg, 210.0 * kDeg, 330.0 * kDeg};
  const double jitter = 0.01 * arm_length;
  Rng rng(seed);
  std::vector<double> coords;
  coords.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = angles[rng.below(3)];
    const double t = rng.uniform(0.0, arm_length);
    const double jx = jitter * rng.normal();
    const double jy = jitter * rng.normal();
    coords.push_back(t * std::cos(a) + jx);
    coords.push_back(t * std::sin(a) + jy);
  }
  return PointCloud(2, std::move(coords));
}

// Uniform on the square annulus [-outer, outer]^2 minus (-inner, inner)^2.
inline PointCloud sample_window(std::size_t n, double outer, double inner, std::uint64_t seed) {
  detail::require_count(n);
  detail::require_positive(inner, "inner half-width");
  if (!(outer > inner)) throw ParameterError("window needs outer > inner");
  Rng rng(seed);
  std::vector<double> coords;
  coords.reserve(2 * n);
  while (coords.size() < 2 * n) {
    const double x = rng.uniform(-outer, outer);
    const double y = rng.uniform(-outer, outer);
    if (std::abs(x) < inner && std::abs(y) < inner) continue;
    coords.push_back(x);
    coords.push_back(y);
  }
  return PointCloud(2, std::move(coords));
}

// The two diagonals of [-box, box]^2 (gaussian jitter 1% of box), followed by
// round(n_signal * noise_pct) points uniform over the box. Attribute "signal"
// is 1 for diagonal points and 0 for noise.
inline PointCloud sample_x_with_noise(std::size_t n_signal, double noise_pct, double box,
                                      std::uint64_t seed) {
  detail::require_count(n_signal);
  detail::require_positive(box, "box half-width");
  if (!(noise_pct >= 0.0) || !std::isfinite(noise_pct))
    throw ParameterError("noise fraction must be nonnegative");
  const auto n_noise = static_cast<std::size_t>(std::llround(static_cast<double>(n_signal) * noise_pct));
  const double jitter = 0.01 * box;
  Rng rng(seed);
  std::vector<double> coords;
  std::vector<double> signal;
  coords.reserve(2 * (n_signal + n_noise));
  for (std::size_t i = 0; i < n_signal; ++i) {
    const double t = rng.uniform(-box, box);
    const double sign = rng.below(2) ? 1.0 : -1.0;
    const double jx = jitter * rng.normal();
    const double jy = jitter * rng.normal();
    coords.push_back(t + jx);
    coords.push_back(sign * t + jy);
    signal.push_back(1.0);
  }
  for (std::size_t i = 0; i < n_noise; ++i) {
    coords.push_back(rng.uniform(-box, box));
    coords.push_back(rng.uniform(-box, box));
    signal.push_back(0.0);
  }
  return PointCloud(2, std::move(coords), {{"signal", std::move(signal)}});
}

inline constexpr const char* kIrisClasses[3] = {"setosa", "versicolor", "virginica"};

// Iris as 150 x 4 with one-hot class attributes setosa/versicolor/virginica.
// Expects five comma-separated columns and no header.
inline PointCloud load_iris(const std::string& path) {
  const auto lines = csv::read_lines(path);
  std::vector<double> coords;
  std::vector<Attribute> classes;
  for (const char* name : kIrisClasses) classes.push_back({name, {}});
  for (const auto& line : lines) {
    const auto cells = csv::split(line.text, ',');
    if (cells.size() != 5)
      throw DataError("iris line " + std::to_string(line.number) + " has " +
                      std::to_string(cells.size()) + " columns, expected 5");
    for (std::size_t k = 0; k < 4; ++k) {
      const auto v = csv::parse_double(cells[k]);
      if (!v)
        throw DataError("iris line " + std::to_string(line.number) + " column " +
                        std::to_string(k + 1) + " is not numeric");
      coords.push_back(*v);
    }
    std::string_view label = cells[4];
    if (label.starts_with("Iris-")) label.remove_prefix(5);
    bool matched = false;
    for (std::size_t c = 0; c < 3; ++c) {
      const bool hit = label == kIrisClasses[c];
      matched = matched || hit;
      classes[c].values.push_back(hit ? 1.0 : 0.0);
    }
    if (!matched)
      throw DataError("iris line " + std::to_string(line.number) + " has unknown class '" +
                      std::string(label) + "'");
  }
  if (lines.size() != 150)
    throw DataError("iris file has " + std::to_string(lines.size()) + " rows, expected 150");
  return PointCloud(4, std::move(coords), std::move(classes));
}

// Every regular file in a directory, sorted by name, read as a raw 8-bit
// grayscale raster of width x height and flattened row-major.
inline PointCloud load_raw_images(const std::string& directory, std::size_t width,
                                  std::size_t height) {
  namespace fs = std::filesystem;
  if (width == 0 || height == 0) throw ParameterError("image size must be positive");
  std::error_code ec;
  if (!fs::is_directory(directory, ec)) throw DataError("'" + directory + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(directory))
    if (entry.is_regular_file()) files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw DataError("no image files in '" + directory + "'");

  const std::size_t pixels = width * height;
  std::vector<double> coords;
  coords.reserve(files.size() * pixels);
  std::vector<unsigned char> buffer(pixels);
  for (const auto& file : files) {
    if (fs::file_size(file) != pixels)
      throw DataError("'" + file.string() + "' is not a " + std::to_string(width) + "x" +
                      std::to_string(height) + " 8-bit raster");
    std::ifstream in(file, std::ios::binary);
    in.read(reinterpret_cast<char*>(buffer.data()), static_cast<std::streamsize>(pixels));
    if (!in) throw DataError("cannot read '" + file.string() + "'");
    for (unsigned char b : buffer) coords.push_back(static_cast<double>(b));
  }
  return PointCloud(pixels, std::move(coords));
}

}  // namespace ballmapper
