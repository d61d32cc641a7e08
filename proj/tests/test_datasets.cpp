#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "ballmapper/datasets.hpp"
#include "ballmapper/random.hpp"

using namespace ballmapper;

TEST(Rng, UniformRangeAndDeterminism) {
  Rng a(5), b(5), c(6);
  bool differs = false;
  for (int i = 0; i < 10000; ++i) {
    const double u = a.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_EQ(u, b.uniform());
    differs = differs || u != c.uniform();
  }
  EXPECT_TRUE(differs);
  Rng d(1);
  for (int i = 0; i < 10000; ++i) EXPECT_LT(d.below(7), 7u);
}

TEST(Rng, NormalMoments) {
  Rng r(11);
  double s = 0, s2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.02);
}

TEST(Cube, RangeDeterminismAndMean) {
  const auto x = sample_cube(10000, 3, 10.0, 2018);
  EXPECT_EQ(x.size(), 10000u);
  EXPECT_EQ(x.dim(), 3u);
  std::vector<double> sum(3, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t k = 0; k < 3; ++k) {
      const double c = x.point(i)[k];
      EXPECT_GE(c, 0.0);
      EXPECT_LE(c, 10.0);
      sum[k] += c;
    }
  for (double s : sum) EXPECT_NEAR(s / 10000.0, 5.0, 0.1);
  // Variance side^2 / 12; 3 sigma of the sample variance at n = 1e4 is about 0.22.
  for (std::size_t k = 0; k < 3; ++k) {
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) ss += std::pow(x.point(i)[k] - sum[k] / 10000.0, 2);
    EXPECT_NEAR(ss / 9999.0, 100.0 / 12.0, 0.22);
  }
  EXPECT_EQ(x, sample_cube(10000, 3, 10.0, 2018));
  EXPECT_NE(x, sample_cube(10000, 3, 10.0, 2019));
  EXPECT_THROW(sample_cube(0, 3, 1.0, 1), ParameterError);
  EXPECT_THROW(sample_cube(5, 0, 1.0, 1), ParameterError);
  EXPECT_THROW(sample_cube(5, 2, -1.0, 1), ParameterError);
}

TEST(Torus, SatisfiesImplicitEquation) {
  const double R = 2.0, r = 1.0;
  const auto x = sample_torus(1300, R, r, 4);
  ASSERT_EQ(x.dim(), 3u);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto p = x.point(i);
    const double rho = std::hypot(p[0], p[1]);
    EXPECT_NEAR((rho - R) * (rho - R) + p[2] * p[2], r * r, 1e-9);
  }
  EXPECT_EQ(x, sample_torus(1300, R, r, 4));
  EXPECT_THROW(sample_torus(10, 1.0, 1.0, 1), ParameterError);
}

TEST(Torus, LongitudeUniformity) {
  const auto x = sample_torus(10000, 2.0, 1.0, 17);
  std::vector<double> bins(8, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = std::atan2(x.point(i)[1], x.point(i)[0]) + std::numbers::pi;
    bins[std::min<std::size_t>(7, static_cast<std::size_t>(t / (2 * std::numbers::pi) * 8))] += 1;
  }
  double chi = 0;
  for (double b : bins) chi += (b - 1250.0) * (b - 1250.0) / 1250.0;
  EXPECT_LT(chi, 24.32);
}

TEST(Circle, RadiusPaddingAndAngleUniformity) {
  const auto x = sample_circle(4000, 1.5, 3, 8);
  ASSERT_EQ(x.dim(), 3u);
  std::vector<double> bins(8, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto p = x.point(i);
    EXPECT_NEAR(std::hypot(p[0], p[1]), 1.5, 1e-12);
    EXPECT_EQ(p[2], 0.0);
    const double t = std::atan2(p[1], p[0]) + std::numbers::pi;
    bins[std::min<std::size_t>(7, static_cast<std::size_t>(t / (2 * std::numbers::pi) * 8))] += 1;
  }
  // Chi-square with 7 degrees of freedom; 24.32 is the 0.999 quantile.
  double chi = 0;
  for (double b : bins) chi += (b - 500.0) * (b - 500.0) / 500.0;
  EXPECT_LT(chi, 24.32);
  EXPECT_THROW(sample_circle(10, 1.0, 1, 1), ParameterError);
}

TEST(YJunction, PointsLieNearTheArms) {
  const auto x = sample_y_junction(3000, 1.0, 5);
  const double angles[3] = {std::numbers::pi / 2, 7 * std::numbers::pi / 6, 11 * std::numbers::pi / 6};
  std::size_t per_arm[3] = {0, 0, 0};
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto p = x.point(i);
    double best = 1e9;
    std::size_t arm = 0;
    for (std::size_t a = 0; a < 3; ++a) {
      const double ux = std::cos(angles[a]), uy = std::sin(angles[a]);
      const double t = std::clamp(p[0] * ux + p[1] * uy, 0.0, 1.0);
      const double d = std::hypot(p[0] - t * ux, p[1] - t * uy);
      if (d < best) {
        best = d;
        arm = a;
      }
    }
    EXPECT_LT(best, 0.06);  // six sigma of the 1% jitter
    ++per_arm[arm];
  }
  for (std::size_t c : per_arm) EXPECT_NEAR(static_cast<double>(c), 1000.0, 150.0);
}

TEST(Window, InnerSquareIsEmpty) {
  const auto x = sample_window(2000, 2.0, 1.0, 3);
  EXPECT_EQ(x.size(), 2000u);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto p = x.point(i);
    EXPECT_FALSE(std::abs(p[0]) < 1.0 && std::abs(p[1]) < 1.0);
    EXPECT_LE(std::abs(p[0]), 2.0);
    EXPECT_LE(std::abs(p[1]), 2.0);
  }
  EXPECT_THROW(sample_window(10, 1.0, 1.0, 1), ParameterError);
}

TEST(XWithNoise, CountsAndLabels) {
  const auto x = sample_x_with_noise(1000, 0.3, 10.0, 1);
  ASSERT_EQ(x.size(), 1300u);
  const auto& s = x.attribute("signal").values;
  std::size_t signal = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    signal += s[i] == 1.0;
    if (s[i] == 1.0) {
      const auto p = x.point(i);
      EXPECT_LT(std::min(std::abs(p[0] - p[1]), std::abs(p[0] + p[1])), 1.0);
      EXPECT_EQ(i < 1000, true);
    }
  }
  EXPECT_EQ(signal, 1000u);
  EXPECT_EQ(sample_x_with_noise(10, 0.0, 1.0, 1).size(), 10u);
  EXPECT_THROW(sample_x_with_noise(10, -0.1, 1.0, 1), ParameterError);
}

TEST(Iris, ShapeAndClasses) {
  const auto x = load_iris(std::string(BALLMAPPER_DATA_DIR) + "/iris.csv");
  ASSERT_EQ(x.size(), 150u);
  ASSERT_EQ(x.dim(), 4u);
  ASSERT_EQ(x.attributes().size(), 3u);
  for (const char* name : kIrisClasses) {
    double total = 0;
    for (double v : x.attribute(name).values) total += v;
    EXPECT_EQ(total, 50.0) << name;
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    double row = 0;
    for (const auto& a : x.attributes()) row += a.values[i];
    EXPECT_EQ(row, 1.0);
  }
  EXPECT_EQ(x.point(0)[0], 5.1);
  EXPECT_EQ(x.point(149)[3], 1.8);
}

TEST(Iris, RejectsWrongRowCount) {
  const auto path = std::filesystem::temp_directory_path() / "bm_short_iris.csv";
  std::ofstream(path) << "5.1,3.5,1.4,0.2,Iris-setosa\n";
  EXPECT_THROW(load_iris(path.string()), DataError);
  std::ofstream(path) << "5.1,3.5,1.4,0.2,Iris-unknown\n";
  EXPECT_THROW(load_iris(path.string()), DataError);
  std::filesystem::remove(path);
}

TEST(RawImages, SortedFlattenedRasters) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "bm_raw_images";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const unsigned char b[6] = {9, 8, 7, 6, 5, 4}, a[6] = {0, 1, 2, 3, 4, 255};
  std::ofstream(dir / "b.raw", std::ios::binary).write(reinterpret_cast<const char*>(b), 6);
  std::ofstream(dir / "a.raw", std::ios::binary).write(reinterpret_cast<const char*>(a), 6);
  const auto x = load_raw_images(dir.string(), 3, 2);
  ASSERT_EQ(x.size(), 2u);
  ASSERT_EQ(x.dim(), 6u);
  EXPECT_EQ(x.point(0)[5], 255.0);
  EXPECT_EQ(x.point(1)[0], 9.0);
  EXPECT_THROW(load_raw_images(dir.string(), 2, 2), DataError);
  EXPECT_THROW(load_raw_images((dir / "missing").string(), 3, 2), DataError);
  fs::remove_all(dir);
}
