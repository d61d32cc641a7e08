#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "ballmapper/cover.hpp"
#include "oracles.hpp"

using namespace ballmapper;

namespace {

using Lists = std::vector<std::vector<std::size_t>>;

Lists lists_of(const CoverVector& c) {
  Lists out;
  for (std::size_t x = 0; x < c.size(); ++x) {
    auto s = c.covers(x);
    out.emplace_back(s.begin(), s.end());
  }
  return out;
}

const PointCloud& line5() {
  static const PointCloud x(1, {0.0, 0.5, 1.0, 1.5, 2.0});
  return x;
}

double max_pairwise(const PointCloud& x, const MetricSpec& m) {
  double d = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) d = std::max(d, oracle::dist(x, m, i, j));
  return d;
}

void expect_separated(const PointCloud& x, const MetricSpec& m, const CoverVector& c) {
  for (std::size_t i = 0; i < c.centers.size(); ++i)
    for (std::size_t j = i + 1; j < c.centers.size(); ++j)
      EXPECT_GT(oracle::dist(x, m, c.centers[i], c.centers[j]), c.epsilon);
}

// Algorithm 1 run over an explicit visiting order.
std::vector<std::size_t> greedy_in_order(const PointCloud& x, const MetricSpec& m, double eps,
                                         const std::vector<std::size_t>& order) {
  std::vector<char> covered(x.size(), 0);
  std::vector<std::size_t> centers;
  for (std::size_t p : order) {
    if (covered[p]) continue;
    centers.push_back(p);
    for (std::size_t q = 0; q < x.size(); ++q)
      if (oracle::dist(x, m, p, q) <= eps) covered[q] = 1;
  }
  return centers;
}

}  // namespace

TEST(GreedyNet, HandTracedLine) {
  const auto c = greedy_epsilon_net(line5(), MetricSpec::euclidean(), 0.6);
  EXPECT_EQ(c.centers, (std::vector<std::size_t>{0, 2, 4}));
  EXPECT_EQ(lists_of(c), (Lists{{0}, {0, 2}, {2}, {2, 4}, {4}}));
  EXPECT_EQ(c.epsilon, 0.6);
}

TEST(GreedyNet, EpsilonAboveDiameterGivesOneBall) {
  const auto c = greedy_epsilon_net(line5(), MetricSpec::euclidean(), 2.0);
  EXPECT_EQ(c.centers, (std::vector<std::size_t>{0}));
  for (std::size_t x = 0; x < 5; ++x) EXPECT_EQ(lists_of(c)[x], (std::vector<std::size_t>{0}));
}

TEST(GreedyNet, SinglePoint) {
  const auto c = greedy_epsilon_net(PointCloud(2, {1, 1}), MetricSpec::euclidean(), 0.1);
  EXPECT_EQ(c.centers, (std::vector<std::size_t>{0}));
  EXPECT_EQ(lists_of(c), (Lists{{0}}));
}

TEST(GreedyNet, Errors) {
  EXPECT_THROW(greedy_epsilon_net(PointCloud{}, MetricSpec::euclidean(), 1.0), ParameterError);
  EXPECT_THROW(greedy_epsilon_net(line5(), MetricSpec::euclidean(), 0.0), ParameterError);
  EXPECT_THROW(greedy_epsilon_net(line5(), MetricSpec::euclidean(), -1.0), ParameterError);
}

TEST(GreedyNet, ClosedBallsCoverBoundaryPoints) {
  // d(0, 1) == eps exactly: the second point is covered, so one center.
  const auto c = greedy_epsilon_net(PointCloud(1, {0.0, 1.0}), MetricSpec::euclidean(), 1.0);
  EXPECT_EQ(c.centers.size(), 1u);
}

TEST(GreedyNet, PrecomputedMetric) {
  // Path metric on 4 points: 0-1-2-3 with unit steps.
  std::vector<double> m(16);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m[i * 4 + j] = std::abs(i - j);
  const auto metric = MetricSpec::precomputed(4, m);
  const auto c = greedy_epsilon_net(PointCloud::ids_only(4), metric, 1.0);
  EXPECT_EQ(c.centers, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(lists_of(c), (Lists{{0}, {0, 2}, {2}, {2}}));
}

TEST(MaxminNet, HandTracedLine) {
  const auto c = maxmin_epsilon_net(line5(), MetricSpec::euclidean(), 0.6);
  EXPECT_EQ(c.centers, (std::vector<std::size_t>{0, 4, 2}));
  EXPECT_EQ(lists_of(c), (Lists{{0}, {0, 2}, {2}, {2, 4}, {4}}));
  EXPECT_EQ(c.epsilon, 0.6);
}

TEST(MaxminNet, SinglePoint) {
  const auto c = maxmin_epsilon_net(PointCloud(1, {3.0}), MetricSpec::euclidean(), 5.0);
  EXPECT_EQ(c.centers, (std::vector<std::size_t>{0}));
}

TEST(MaxminNet, EarlyStopGrowsRadius) {
  std::mt19937_64 rng(2024);
  const PointCloud x = oracle::random_cloud(rng, 100, 2, 1.0);
  const auto m = MetricSpec::euclidean();
  const auto c = maxmin_epsilon_net(x, m, 0.01, 5);
  ASSERT_EQ(c.centers.size(), 5u);
  double farthest = 0;
  for (std::size_t p = 0; p < x.size(); ++p) {
    double near = 1e300;
    for (std::size_t k : c.centers) near = std::min(near, oracle::dist(x, m, p, k));
    farthest = std::max(farthest, near);
  }
  EXPECT_EQ(c.epsilon, farthest);
  EXPECT_NO_THROW(verify_cover(x, m, c));
  EXPECT_EQ(lists_of(c), oracle::covers(x, m, c.centers, c.epsilon));
}

TEST(MaxminNet, Errors) {
  EXPECT_THROW(maxmin_epsilon_net(PointCloud{}, MetricSpec::euclidean(), 1.0), ParameterError);
  EXPECT_THROW(maxmin_epsilon_net(line5(), MetricSpec::euclidean(), 0.0), ParameterError);
  EXPECT_THROW(maxmin_epsilon_net(line5(), MetricSpec::euclidean(), 1.0, 0), ParameterError);
}

TEST(KMeans, KEqualsNGivesEveryPoint) {
  const auto c = kmeans_centers(line5(), MetricSpec::euclidean(), 5, 3);
  auto sorted = c.centers;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::vector<std::size_t>{0, 1, 2, 3, 4}));
  EXPECT_EQ(c.epsilon, 0.0);
  EXPECT_EQ(lists_of(c), (Lists{{0}, {1}, {2}, {3}, {4}}));
}

TEST(KMeans, SingleClusterSnapsToPointNearestCentroid) {
  std::mt19937_64 rng(5);
  const auto m = MetricSpec::euclidean();
  for (int trial = 0; trial < 20; ++trial) {
    const PointCloud x = oracle::random_cloud(rng, 30 + trial, 3, 4.0);
    // Oracle: scan every candidate for the smallest distance to the centroid.
    std::vector<double> centroid(3, 0.0);
    for (std::size_t p = 0; p < x.size(); ++p)
      for (std::size_t k = 0; k < 3; ++k) centroid[k] += x.point(p)[k];
    for (double& v : centroid) v /= static_cast<double>(x.size());
    std::size_t best = 0;
    for (std::size_t p = 1; p < x.size(); ++p)
      if (m(x.point(p), centroid) < m(x.point(best), centroid)) best = p;
    double radius = 0;
    for (std::size_t p = 0; p < x.size(); ++p) radius = std::max(radius, oracle::dist(x, m, p, best));

    const auto c = kmeans_centers(x, m, 1, static_cast<std::uint64_t>(trial));
    EXPECT_EQ(c.centers, (std::vector<std::size_t>{best}));
    EXPECT_EQ(c.epsilon, radius);
  }
}

TEST(KMeans, TwoSeparatedClusters) {
  const PointCloud x(1, {0.0, 0.1, 10.0, 10.1});
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    const auto c = kmeans_centers(x, MetricSpec::euclidean(), 2, seed);
    ASSERT_EQ(c.centers.size(), 2u);
    const bool left = c.centers[0] < 2 || c.centers[1] < 2;
    const bool right = c.centers[0] >= 2 || c.centers[1] >= 2;
    EXPECT_TRUE(left && right);
    EXPECT_NEAR(c.epsilon, 0.1, 1e-12);
  }
}

TEST(KMeans, Errors) {
  EXPECT_THROW(kmeans_centers(line5(), MetricSpec::euclidean(), 6, 0), ParameterError);
  EXPECT_THROW(kmeans_centers(line5(), MetricSpec::euclidean(), 0, 0), ParameterError);
  EXPECT_THROW(kmeans_centers(line5(), MetricSpec::manhattan(), 2, 0), ParameterError);
}

TEST(Recover, IdempotentAtOwnRadius) {
  const auto m = MetricSpec::euclidean();
  const auto net = greedy_epsilon_net(line5(), m, 0.6);
  EXPECT_EQ(recover(line5(), m, net.centers, net.epsilon), net);
}

TEST(Recover, LargerRadiusHandComputed) {
  const auto c = recover(line5(), MetricSpec::euclidean(), {0, 2, 4}, 1.2);
  EXPECT_EQ(c.centers, (std::vector<std::size_t>{0, 2, 4}));
  EXPECT_EQ(lists_of(c), (Lists{{0, 2}, {0, 2}, {0, 2, 4}, {2, 4}, {2, 4}}));
}

TEST(Recover, CenterOrderPreservedVerbatim) {
  const auto c = recover(line5(), MetricSpec::euclidean(), {4, 0, 2}, 0.6);
  EXPECT_EQ(c.centers, (std::vector<std::size_t>{4, 0, 2}));
}

TEST(Recover, UncoveredPointIsReported) {
  try {
    recover(line5(), MetricSpec::euclidean(), {0, 4}, 0.4);
    FAIL() << "expected CoverageError";
  } catch (const CoverageError& e) {
    EXPECT_EQ(e.point(), 1u);
    EXPECT_DOUBLE_EQ(e.nearest_distance(), 0.5);
  }
  EXPECT_THROW(recover(line5(), MetricSpec::euclidean(), {}, 1.0), ParameterError);
  EXPECT_THROW(recover(line5(), MetricSpec::euclidean(), {0, 0}, 1.0), ParameterError);
  EXPECT_THROW(recover(line5(), MetricSpec::euclidean(), {9}, 1.0), ParameterError);
}

TEST(CoverProperties, CoverageSeparationAndOracleFuzz) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> eps_dist(0.05, 3.0);
  const MetricSpec metrics[] = {MetricSpec::euclidean(), MetricSpec::manhattan(),
                                MetricSpec::chebyshev()};
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t n = 1 + rng() % 200;
    const std::size_t d = 1 + rng() % 5;
    const PointCloud x = oracle::random_cloud(rng, n, d, 5.0);
    const double eps = eps_dist(rng);
    const auto& m = metrics[trial % 3];
    for (const auto& c : {greedy_epsilon_net(x, m, eps), maxmin_epsilon_net(x, m, eps)}) {
      EXPECT_NO_THROW(verify_cover(x, m, c));
      expect_separated(x, m, c);
      EXPECT_EQ(lists_of(c), oracle::covers(x, m, c.centers, eps));
    }
    if (m.kind() == MetricKind::euclidean) {
      const auto c = kmeans_centers(x, m, 1 + rng() % n, rng());
      EXPECT_NO_THROW(verify_cover(x, m, c));
      EXPECT_EQ(lists_of(c), oracle::covers(x, m, c.centers, c.epsilon));
    }
  }
}

TEST(CoverProperties, GreedyFollowsInputOrder) {
  std::mt19937_64 rng(3);
  const auto m = MetricSpec::euclidean();
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 20 + rng() % 80;
    const PointCloud x = oracle::random_cloud(rng, n, 2, 4.0);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> coords;
    for (std::size_t i : perm)
      for (double v : x.point(i)) coords.push_back(v);
    const PointCloud y(2, coords);
    const auto cy = greedy_epsilon_net(y, m, 0.7);
    std::vector<std::size_t> mapped;
    for (std::size_t c : cy.centers) mapped.push_back(perm[c]);
    EXPECT_EQ(mapped, greedy_in_order(x, m, 0.7, perm));
    EXPECT_EQ(cy, greedy_epsilon_net(y, m, 0.7));
  }
}

TEST(CoverProperties, MaxminMonotoneInEpsilon) {
  std::mt19937_64 rng(8);
  const auto m = MetricSpec::euclidean();
  for (int trial = 0; trial < 20; ++trial) {
    const PointCloud x = oracle::random_cloud(rng, 150, 1 + trial % 3, 5.0);
    std::size_t prev = 0;
    for (double eps = 4.0; eps > 0.1; eps *= 0.8) {
      const std::size_t count = maxmin_epsilon_net(x, m, eps).centers.size();
      EXPECT_GE(count, prev);
      prev = count;
    }
  }
}

TEST(CoverProperties, ThreadCountDoesNotChangeResults) {
  std::mt19937_64 rng(17);
  const auto m = MetricSpec::euclidean();
  const PointCloud x = oracle::random_cloud(rng, 9000, 3, 10.0);
  for (unsigned t : {2u, 3u, 8u}) {
    EXPECT_EQ(greedy_epsilon_net(x, m, 1.0), greedy_epsilon_net(x, m, 1.0, Exec{t}));
    EXPECT_EQ(maxmin_epsilon_net(x, m, 1.5), maxmin_epsilon_net(x, m, 1.5, std::nullopt, Exec{t}));
  }
}

TEST(CoverProperties, DiameterRadiusCoversWithPointZero) {
  std::mt19937_64 rng(21);
  const auto m = MetricSpec::euclidean();
  for (int trial = 0; trial < 10; ++trial) {
    const PointCloud x = oracle::random_cloud(rng, 40, 3, 2.0);
    const auto c = greedy_epsilon_net(x, m, max_pairwise(x, m));
    EXPECT_EQ(c.centers, (std::vector<std::size_t>{0}));
  }
}

TEST(BuildNet, Dispatch) {
  const auto m = MetricSpec::euclidean();
  EXPECT_EQ(build_net(line5(), m, NetParams::greedy(0.6)).centers, (std::vector<std::size_t>{0, 2, 4}));
  EXPECT_EQ(build_net(line5(), m, NetParams::maxmin(0.6)).centers, (std::vector<std::size_t>{0, 4, 2}));
  EXPECT_EQ(build_net(line5(), m, NetParams::kmeans(5, 1)).epsilon, 0.0);
  NetParams missing;
  EXPECT_THROW(build_net(line5(), m, missing), ParameterError);
}
