#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "leakwatch/clustering.hpp"
#include "leakwatch/error.hpp"
#include "oracles.hpp"

using namespace leakwatch;

namespace {

// Canonical form: clusters relabeled by first appearance, noise stays -1.
std::vector<int> canonical(const std::vector<int>& labels) {
  std::map<int, int> remap;
  std::vector<int> out;
  out.reserve(labels.size());
  for (int label : labels) {
    if (label < 0) {
      out.push_back(-1);
      continue;
    }
    auto [it, inserted] = remap.try_emplace(label, static_cast<int>(remap.size()));
    out.push_back(it->second);
  }
  return out;
}

std::vector<double> gaussian_blob(std::mt19937& rng, double cx, double cy, double sigma,
                                  std::size_t count) {
  std::normal_distribution<double> noise(0.0, sigma);
  std::vector<double> pts;
  pts.reserve(count * 2);
  for (std::size_t i = 0; i < count; ++i) {
    pts.push_back(cx + noise(rng));
    pts.push_back(cy + noise(rng));
  }
  return pts;
}

}  // namespace

TEST_CASE("k-distance curve on collinear and square layouts") {
  const std::vector<double> line = {0, 0, 1, 0, 2, 0};
  CHECK(knn_distance_curve(line, 3, 2, 1) == std::vector<double>{1, 1, 1});

  const std::vector<double> square = {0, 0, 1, 0, 0, 1, 1, 1};
  const auto curve = knn_distance_curve(square, 4, 2, 2);
  CHECK(curve == std::vector<double>{1, 1, 1, 1});

  CHECK_THROWS_AS(knn_distance_curve(square, 2, 2, 2), Error);
}

TEST_CASE("kneedle finds no knee in a straight line") {
  std::vector<double> line(100);
  for (std::size_t i = 0; i < line.size(); ++i) line[i] = static_cast<double>(i);
  CHECK(!kneedle_knee(line, 1.0).has_value());
  CHECK(!oracle::kneedle_reference(line, 1.0).has_value());

  std::vector<double> constant(50, 3.0);
  CHECK(!kneedle_knee(constant, 1.0).has_value());
}

TEST_CASE("kneedle locates the hockey-stick elbow") {
  std::vector<double> curve(100);
  for (std::size_t i = 0; i < 80; ++i) curve[i] = 0.01 * static_cast<double>(i);
  for (std::size_t i = 80; i < 100; ++i) {
    curve[i] = curve[79] + 1.0 * static_cast<double>(i - 79);
  }
  const auto knee = kneedle_knee(curve, 1.0);
  REQUIRE(knee.has_value());
  CHECK(std::llabs(static_cast<long long>(*knee) - 80) <= 2);
  const auto ref = oracle::kneedle_reference(curve, 1.0);
  REQUIRE(ref.has_value());
  CHECK(*knee == *ref);
}

TEST_CASE("kneedle rejects curves shorter than three points") {
  CHECK_THROWS_AS(kneedle_knee({1.0, 2.0}, 1.0), Error);
}

TEST_CASE("estimated epsilon lands in the two-cluster plateau for two blobs") {
  std::mt19937 rng(41);
  auto pts = gaussian_blob(rng, 0, 0, 0.01, 50);
  const auto far = gaussian_blob(rng, 10, 0, 0.01, 50);
  pts.insert(pts.end(), far.begin(), far.end());

  ClusterParams params;
  const double eps = estimate_epsilon(pts, 100, 2, params);
  CHECK(eps > 0.0);
  CHECK(eps < 5.0);  // far below the blob separation

  const auto labels = dbscan(pts, 100, 2, eps, params.min_pts);
  CHECK(labels.cluster_count() == 2);

  // The chosen epsilon sits in the plateau where the reference finds exactly
  // two clusters as well.
  const auto ref = oracle::dbscan_reference(pts, 100, 2, eps, params.min_pts);
  CHECK(ref.cluster_count == 2);
}

TEST_CASE("identical points collapse to the epsilon floor and one cluster") {
  const std::vector<double> pts(20, 0.0);  // 10 identical 2-D points
  ClusterParams params;
  const double eps = estimate_epsilon(pts, 10, 2, params);
  CHECK(eps == 1e-12);
  const auto labels = dbscan(pts, 10, 2, eps, params.min_pts);
  REQUIRE(labels.cluster_count() == 1);
  CHECK(labels.cluster_sizes[0] == 10);
}

TEST_CASE("flat k-distance curves take the quantile fallback") {
  // Equilateral triangle: every pairwise distance is 1, so the k-distance
  // curve is constant, kneedle finds nothing, and the quantile IS the value.
  const std::vector<double> pts = {0, 0, 1, 0, 0.5, std::sqrt(3.0) / 2};
  ClusterParams params;
  params.min_pts = 2;
  const double eps = estimate_epsilon(pts, 3, 2, params);
  const auto curve = knn_distance_curve(pts, 3, 2, 2);
  CHECK(eps == doctest::Approx(oracle::quantile_reference(curve, 0.90)).epsilon(1e-12));
}

TEST_CASE("estimate_epsilon is scale-equivariant") {
  std::mt19937 rng(43);
  auto pts = gaussian_blob(rng, 0, 0, 1.0, 30);
  const auto far = gaussian_blob(rng, 8, 3, 0.5, 25);
  pts.insert(pts.end(), far.begin(), far.end());

  ClusterParams params;
  const double eps = estimate_epsilon(pts, 55, 2, params);
  const double alpha = 37.5;
  std::vector<double> scaled = pts;
  for (double& v : scaled) v *= alpha;
  const double eps_scaled = estimate_epsilon(scaled, 55, 2, params);
  CHECK(eps_scaled == doctest::Approx(alpha * eps).epsilon(1e-12));
}

TEST_CASE("frozen dbscan examples") {
  SUBCASE("two blobs and an in-between straggler") {
    std::mt19937 rng(47);
    auto pts = gaussian_blob(rng, 0, 0, 0.5, 20);
    const auto far = gaussian_blob(rng, 100, 0, 0.5, 20);
    pts.insert(pts.end(), far.begin(), far.end());
    pts.push_back(50.0);
    pts.push_back(0.0);

    const auto labels = dbscan(pts, 41, 2, 5.0, 5);
    CHECK(labels.cluster_count() == 2);
    CHECK(labels.labels[40] == -1);
    const auto ref = oracle::dbscan_reference(pts, 41, 2, 5.0, 5);
    CHECK(canonical(labels.labels) == canonical(ref.labels));
  }

  SUBCASE("a single point is noise") {
    const auto labels = dbscan({0.0, 0.0}, 1, 2, 1.0, 2);
    CHECK(labels.labels == std::vector<int>{-1});
    CHECK(labels.cluster_count() == 0);
  }

  SUBCASE("ten identical points form one cluster") {
    const std::vector<double> pts(20, 3.5);
    const auto labels = dbscan(pts, 10, 2, 0.1, 5);
    REQUIRE(labels.cluster_count() == 1);
    CHECK(labels.cluster_sizes[0] == 10);
  }
}

TEST_CASE("dbscan matches the union-find reference on random instances") {
  std::mt19937 rng(53);
  std::uniform_int_distribution<std::size_t> n_dist(5, 60), d_dist(1, 3);
  std::uniform_real_distribution<double> coord(-5.0, 5.0), eps_dist(0.3, 3.0);
  std::uniform_int_distribution<std::size_t> min_pts_dist(2, 6);

  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = n_dist(rng), d = d_dist(rng);
    std::vector<double> pts(n * d);
    for (double& v : pts) v = coord(rng);
    const double eps = eps_dist(rng);
    const std::size_t min_pts = min_pts_dist(rng);

    const auto got = dbscan(pts, n, d, eps, min_pts);
    const auto ref = oracle::dbscan_reference(pts, n, d, eps, min_pts);
    REQUIRE(got.cluster_count() == ref.cluster_count);
    CHECK(canonical(got.labels) == canonical(ref.labels));
  }
}

TEST_CASE("growing epsilon never grows the noise set") {
  std::mt19937 rng(59);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> pts(40 * 2);
    for (double& v : pts) v = coord(rng);
    const double eps_small = 0.4, eps_large = 1.1;
    const auto small = dbscan(pts, 40, 2, eps_small, 4);
    const auto large = dbscan(pts, 40, 2, eps_large, 4);
    std::size_t noise_small = 0, noise_large = 0;
    for (int l : small.labels) noise_small += l < 0;
    for (int l : large.labels) noise_large += l < 0;
    CHECK(noise_large <= noise_small);
  }
}
