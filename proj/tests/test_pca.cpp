#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "leakwatch/error.hpp"
#include "leakwatch/pca.hpp"

using namespace leakwatch;

namespace {

double centered_pairwise_sq(const std::vector<double>& m, std::size_t rows, std::size_t cols,
                            std::size_t i, std::size_t j) {
  // Distances between rows are unchanged by column centering.
  double acc = 0.0;
  for (std::size_t c = 0; c < cols; ++c) {
    const double diff = m[i * cols + c] - m[j * cols + c];
    acc += diff * diff;
  }
  return acc;
}

double embedding_pairwise_sq(const Embedding& e, std::size_t i, std::size_t j) {
  double acc = 0.0;
  for (std::size_t d = 0; d < e.dims; ++d) {
    const double diff = e.at(i, d) - e.at(j, d);
    acc += diff * diff;
  }
  return acc;
}

}  // namespace

TEST_CASE("all-zero input falls back to the zero-variance convention") {
  const std::vector<double> zeros(25, 0.0);
  const Embedding e = pca_fit_transform(zeros, 5, 5);
  CHECK(e.dims == 1);
  CHECK(e.explained_variance_ratio == std::vector<double>{1.0});
  for (double v : e.coords) CHECK(v == 0.0);
}

TEST_CASE("diagonal points project onto one component with known coordinates") {
  // Points (0,0),(1,1),(2,2),(3,3): the lone component is (1,1)/sqrt(2) and
  // the centered projections are +-0.5*sqrt(2), +-1.5*sqrt(2).
  const std::vector<double> pts = {0, 0, 1, 1, 2, 2, 3, 3};
  const Embedding e = pca_fit_transform(pts, 4, 2);
  REQUIRE(e.dims == 1);
  const double s2 = std::sqrt(2.0);
  CHECK(e.at(0, 0) == doctest::Approx(-1.5 * s2).epsilon(1e-12));
  CHECK(e.at(1, 0) == doctest::Approx(-0.5 * s2).epsilon(1e-12));
  CHECK(e.at(2, 0) == doctest::Approx(0.5 * s2).epsilon(1e-12));
  CHECK(e.at(3, 0) == doctest::Approx(1.5 * s2).epsilon(1e-12));
  CHECK(e.explained_variance_ratio[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dimension count follows the sample eigenvalue ratio") {
  std::mt19937 rng(5);
  std::normal_distribution<double> wide(0.0, 10.0), narrow(0.0, std::sqrt(0.1));
  const std::size_t n = 10;
  std::vector<double> pts(n * 2);
  for (std::size_t i = 0; i < n; ++i) {
    pts[i * 2] = wide(rng);
    pts[i * 2 + 1] = narrow(rng);
  }

  // 2x2 sample covariance eigenvalues, computed directly.
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += pts[i * 2];
    my += pts[i * 2 + 1];
  }
  mx /= n;
  my /= n;
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = pts[i * 2] - mx, dy = pts[i * 2 + 1] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  const double tr = sxx + syy;
  const double det = sxx * syy - sxy * sxy;
  const double l1 = 0.5 * (tr + std::sqrt(tr * tr - 4 * det));

  const Embedding e = pca_fit_transform(pts, n, 2, 0.99);
  const std::size_t expected_dims = (l1 / tr >= 0.99) ? 1 : 2;
  CHECK(e.dims == expected_dims);
}

TEST_CASE("degenerate inputs are rejected") {
  CHECK_THROWS_AS(pca_fit_transform({1.0, 2.0}, 1, 2), Error);
  CHECK_THROWS_AS(pca_fit_transform({1.0, 2.0}, 2, 1, 0.0), Error);
}

TEST_CASE("retained variance and reconstruction identity on random matrices") {
  std::mt19937 rng(17);
  std::uniform_int_distribution<std::size_t> rows_dist(5, 40), cols_dist(2, 8);
  std::normal_distribution<double> value(0.0, 1.0);

  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t rows = rows_dist(rng), cols = cols_dist(rng);
    std::vector<double> m(rows * cols);
    for (double& v : m) v = value(rng);

    const Embedding e = pca_fit_transform(m, rows, cols, 0.99);
    const double retained =
        std::accumulate(e.explained_variance_ratio.begin(), e.explained_variance_ratio.end(), 0.0);
    CHECK(retained >= 0.99);

    // Total variance of the centered matrix.
    std::vector<double> mean(cols, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t c = 0; c < cols; ++c) mean[c] += m[i * cols + c];
    }
    for (double& v : mean) v /= static_cast<double>(rows);
    double total = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t c = 0; c < cols; ++c) {
        const double d = m[i * cols + c] - mean[c];
        total += d * d;
      }
    }
    double projected = 0.0;
    for (double v : e.coords) projected += v * v;
    // Orthogonal projection: dropped variance equals (1 - retained ratio).
    CHECK(total - projected ==
          doctest::Approx((1.0 - retained) * total).epsilon(1e-9).scale(total));
  }
}

TEST_CASE("full-rank embedding preserves centered pairwise distances") {
  std::mt19937 rng(29);
  std::uniform_int_distribution<std::size_t> rows_dist(4, 30), cols_dist(2, 6);
  std::normal_distribution<double> value(0.0, 2.0);

  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t rows = rows_dist(rng), cols = cols_dist(rng);
    std::vector<double> m(rows * cols);
    for (double& v : m) v = value(rng);

    const Embedding e = pca_fit_transform(m, rows, cols, 1.0);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = i + 1; j < rows; ++j) {
        const double want = centered_pairwise_sq(m, rows, cols, i, j);
        const double got = embedding_pairwise_sq(e, i, j);
        CHECK(got == doctest::Approx(want).epsilon(1e-9).scale(1e-9));
      }
    }
  }
}

TEST_CASE("row reordering commutes with the embedding") {
  std::mt19937 rng(31);
  std::normal_distribution<double> value(0.0, 1.0);
  const std::size_t rows = 12, cols = 4;
  std::vector<double> m(rows * cols);
  for (double& v : m) v = value(rng);

  std::vector<std::size_t> perm(rows);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<double> permuted(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t c = 0; c < cols; ++c) permuted[i * cols + c] = m[perm[i] * cols + c];
  }

  const Embedding original = pca_fit_transform(m, rows, cols, 1.0);
  const Embedding shuffled = pca_fit_transform(permuted, rows, cols, 1.0);
  REQUIRE(original.dims == shuffled.dims);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t d = 0; d < original.dims; ++d) {
      CHECK(shuffled.at(i, d) == doctest::Approx(original.at(perm[i], d)).epsilon(1e-9).scale(1.0));
    }
  }
}
