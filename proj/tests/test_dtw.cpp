#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "leakwatch/dtw.hpp"
#include "leakwatch/error.hpp"
#include "oracles.hpp"

using namespace leakwatch;

namespace {

PressureCycle cycle_from_logs(const std::vector<double>& logs, double t0 = 0.0) {
  PressureCycle cycle;
  cycle.start = t0;
  cycle.end = t0 + static_cast<double>(logs.size());
  for (std::size_t i = 0; i < logs.size(); ++i) {
    cycle.samples.push_back({t0 + static_cast<double>(i), std::pow(10.0, logs[i])});
    cycle.log_values.push_back(logs[i]);
  }
  return cycle;
}

std::vector<double> random_sequence(std::mt19937& rng, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(1, max_len);
  std::uniform_real_distribution<double> value(-8.0, -2.0);
  std::vector<double> seq(len(rng));
  for (double& v : seq) v = value(rng);
  return seq;
}

}  // namespace

TEST_CASE("identical sequences have zero distance") {
  const std::vector<double> a = {1, 2, 3};
  CHECK(dtw_distance(a, a) == 0.0);
}

TEST_CASE("hand-enumerated and frozen small distances") {
  const std::vector<double> a = {0, 0}, b = {1, 1};
  CHECK(oracle::dtw_enumerate(a, b) == 2.0);  // oracle agrees with hand enumeration
  CHECK(dtw_distance(a, b) == 2.0);
}

TEST_CASE("lag and duration changes cost nothing when shapes match") {
  const std::vector<double> a = {1, 2, 3};
  const std::vector<double> b = {1, 1, 2, 2, 3, 3};
  CHECK(oracle::dtw_enumerate(a, b) == 0.0);
  CHECK(dtw_distance(a, b) == 0.0);
}

TEST_CASE("empty input is rejected") {
  const std::vector<double> a = {1.0};
  CHECK_THROWS_AS(dtw_distance({}, a), Error);
  CHECK_THROWS_AS(dtw_distance(a, {}), Error);
}

TEST_CASE("downsample keeps short cycles and endpoints") {
  std::vector<double> logs(200, -6.0);
  const PressureCycle c200 = cycle_from_logs(logs);
  const PressureCycle same = downsample(c200, 200);
  CHECK(same.size() == 200);

  logs.assign(400, -6.0);
  logs.front() = -7.0;
  logs.back() = -5.0;
  const PressureCycle c400 = cycle_from_logs(logs);
  const PressureCycle cut = downsample(c400, 200);
  CHECK(cut.size() == 200);
  CHECK(cut.log_values.front() == -7.0);
  CHECK(cut.log_values.back() == -5.0);
  CHECK(cut.samples.front().timestamp == c400.samples.front().timestamp);
  CHECK(cut.samples.back().timestamp == c400.samples.back().timestamp);

  const PressureCycle tiny = cycle_from_logs({-7, -6, -5, -4, -3});
  const PressureCycle two = downsample(tiny, 2);
  REQUIRE(two.size() == 2);
  CHECK(two.log_values[0] == -7.0);
  CHECK(two.log_values[1] == -3.0);
}

TEST_CASE("pairwise matrix shape, symmetry, and frozen values") {
  const PressureCycle c = cycle_from_logs(std::vector<double>(50, -6.0));
  std::vector<double> shifted_logs(50, -5.0);  // +1 in log space
  const PressureCycle shifted = cycle_from_logs(shifted_logs);

  SUBCASE("identical cycles give a zero matrix") {
    const auto m = pairwise_distance_matrix({c, c, c});
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) CHECK(m.at(i, j) == 0.0);
    }
  }

  SUBCASE("constant shift costs one per matched sample") {
    const auto m = pairwise_distance_matrix({c, c, shifted});
    CHECK(m.at(0, 1) == 0.0);
    CHECK(m.at(0, 2) == 50.0);
    CHECK(m.at(1, 2) == 50.0);
    CHECK(m.at(2, 0) == m.at(0, 2));
  }

  SUBCASE("two cycles") {
    const auto m = pairwise_distance_matrix({c, shifted});
    CHECK(m.n == 2);
    CHECK(m.at(0, 0) == 0.0);
    CHECK(m.at(0, 1) == m.at(1, 0));
  }

  CHECK_THROWS_AS(pairwise_distance_matrix({c}), Error);
}

TEST_CASE("full-band DTW matches the no-band reference on short sequences") {
  std::mt19937 rng(11);
  DtwParams full;
  full.band_fraction = 1.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_sequence(rng, 20);
    const auto b = random_sequence(rng, 20);
    CHECK(dtw_distance(a, b, full) == doctest::Approx(oracle::dtw_full(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("DTW property suite: identity, symmetry, duplication, scaling") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> alpha_dist(0.1, 10.0);
  std::uniform_int_distribution<int> k_dist(1, 4);
  const DtwParams params;

  for (int trial = 0; trial < 300; ++trial) {
    const auto a = random_sequence(rng, 50);
    const auto b = random_sequence(rng, 50);

    CHECK(dtw_distance(a, a, params) == 0.0);

    const double d_ab = dtw_distance(a, b, params);
    CHECK(d_ab >= 0.0);
    CHECK(dtw_distance(b, a, params) == d_ab);

    // Repeating every element k times must still align for free.
    const int k = k_dist(rng);
    std::vector<double> repeated;
    repeated.reserve(a.size() * static_cast<std::size_t>(k));
    for (double v : a) {
      for (int r = 0; r < k; ++r) repeated.push_back(v);
    }
    CHECK(dtw_distance(a, repeated, params) == 0.0);

    const double alpha = alpha_dist(rng);
    std::vector<double> sa = a, sb = b;
    for (double& v : sa) v *= alpha;
    for (double& v : sb) v *= alpha;
    CHECK(dtw_distance(sa, sb, params) == doctest::Approx(alpha * d_ab).epsilon(1e-9));
  }
}
