#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <atomic>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "sublevy/rng.hpp"
#include "sublevy/stats.hpp"

using namespace sublevy;

TEST_CASE("neumaier summation keeps cancelled mass") {
  NeumaierSum s;
  s.add(1e16);
  s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 1.0);
  CHECK(compensated_sum({1e16, 1.0, -1e16}) == 1.0);
}

TEST_CASE("mean_and_se") {
  const MeanSe s = mean_and_se({1.0, 2.0, 3.0, 4.0});
  CHECK(s.mean == 2.5);
  CHECK(s.variance == doctest::Approx(5.0 / 3.0));
  CHECK(s.se == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK_THROWS_AS(mean_and_se({}), std::invalid_argument);
}

TEST_CASE("normal cdf") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-9));
  CHECK(normal_sf(1.959963984540054) == doctest::Approx(0.025).epsilon(1e-9));
  CHECK(normal_pdf(0.0) == doctest::Approx(0.3989422804014327));
}

TEST_CASE("ks two-sample: same law accepts, shifted law rejects") {
  Rng rng(100);
  const long n = 20000;
  std::vector<double> a(n), b(n), c(n);
  for (long i = 0; i < n; ++i) {
    a[static_cast<std::size_t>(i)] = rng.normal();
    b[static_cast<std::size_t>(i)] = rng.normal();
    c[static_cast<std::size_t>(i)] = rng.normal() + 0.1;
  }
  CHECK(ks_two_sample(a, b).p_value > 0.01);
  CHECK(ks_two_sample(a, c).p_value < 1e-6);
}

TEST_CASE("ks statistic on a tiny hand case") {
  // F_a jumps at 1,2; F_b jumps at 1.5: max gap 0.5 at x in [1,1.5).
  const KsResult ks = ks_two_sample({1.0, 2.0}, {1.5, 1.5});
  CHECK(ks.statistic == doctest::Approx(0.5));
}

TEST_CASE("hill estimator recovers a pareto index") {
  Rng rng(200);
  const double alpha = 1.5;
  std::vector<double> xs(1000000);
  for (auto& x : xs) x = std::pow(rng.uniform01_open(), -1.0 / alpha);
  const HillEstimate h = hill_tail_index(xs, 0.01);
  CHECK(h.conclusive);
  CHECK(h.index == doctest::Approx(alpha).epsilon(0.07));
  CHECK(h.se > 0.0);
}

TEST_CASE("hill estimator flags light tails with a large index") {
  Rng rng(201);
  std::vector<double> xs(200000);
  for (auto& x : xs) x = rng.normal();
  const HillEstimate h = hill_tail_index(xs, 0.01);
  CHECK(h.conclusive);
  CHECK(h.index > 2.5);
}

TEST_CASE("hill estimator is inconclusive on tiny tails") {
  std::vector<double> xs(500, 1.0);
  const HillEstimate h = hill_tail_index(xs, 0.01);
  CHECK_FALSE(h.conclusive);
}

TEST_CASE("chunk ranges tile the index space") {
  const long n = 1003;
  long covered = 0;
  for (int c = 0; c < kMcChunks; ++c) {
    const auto [lo, hi] = chunk_range(n, kMcChunks, c);
    covered += hi - lo;
    CHECK(lo <= hi);
  }
  CHECK(covered == n);
}

TEST_CASE("parallel_chunks writes every slot once for any thread count") {
  for (int threads : {1, 3, 7}) {
    std::vector<int> hits(kMcChunks, 0);
    std::atomic<int> calls{0};
    parallel_chunks(kMcChunks, threads, [&](int c) {
      hits[static_cast<std::size_t>(c)] += 1;
      calls.fetch_add(1);
    });
    CHECK(calls.load() == kMcChunks);
    for (int h : hits) CHECK(h == 1);
  }
}
