#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "pentakit/error.hpp"
#include "pentakit/flowmap.hpp"
#include "support/ari.hpp"

using namespace pentakit;
using pentakit_test::adjusted_rand_index;

namespace {

FeatureMatrix blobs(std::size_t per, std::vector<std::size_t>& truth, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> noise(0.0, 0.1);
  const double centers[3][2] = {{0.0, 0.0}, {10.0, 0.0}, {5.0, 8.660254037844386}};
  FeatureMatrix m;
  m.d = 2;
  truth.clear();
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < per; ++i) {
      m.values.push_back(centers[c][0] + noise(gen));
      m.values.push_back(centers[c][1] + noise(gen));
      truth.push_back(c);
    }
  }
  m.n = truth.size();
  return m;
}

}  // namespace

TEST_CASE("adjusted Rand index helper") {
  CHECK(adjusted_rand_index({0, 0, 1, 1}, {1, 1, 0, 0}) == 1.0);
  // Hand-computed: table {(0,0):2,(0,1):1,(1,1):3}; sum_ij=4, a=3+3, b=1+6.
  const double expected = (4.0 - 6.0 * 7.0 / 15.0) / (6.5 - 6.0 * 7.0 / 15.0);
  CHECK(adjusted_rand_index({0, 0, 0, 1, 1, 1}, {0, 0, 1, 1, 1, 1}) == doctest::Approx(expected));
}

TEST_CASE("k = 1 gives the mean") {
  std::vector<std::size_t> truth;
  const FeatureMatrix m = blobs(20, truth, 3);
  const KMeansResult r = kmeans(m, 1, 5);
  for (std::size_t j = 0; j < 2; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.n; ++i) s += m.row(i)[j];
    CHECK(r.centroids[j] == doctest::Approx(s / m.n).epsilon(1e-14));
  }
  for (auto l : r.labels) CHECK(l == 0);
}

TEST_CASE("three blobs") {
  std::vector<std::size_t> truth;
  const FeatureMatrix m = blobs(100, truth, 7);
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    const KMeansResult r = kmeans(m, 3, seed);
    CHECK(adjusted_rand_index(r.labels, truth) > 0.99);
    CHECK(r.iterations <= 300);
  }
}

TEST_CASE("inertia is non-increasing") {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t k : {2u, 5u, 9u}) {
    FeatureMatrix m;
    m.n = 300;
    m.d = 4;
    for (std::size_t i = 0; i < m.n * m.d; ++i) m.values.push_back(u(gen));
    const KMeansResult r = kmeans(m, k, k);
    REQUIRE(!r.inertia_history.empty());
    for (std::size_t i = 1; i < r.inertia_history.size(); ++i)
      CHECK(r.inertia_history[i] <= r.inertia_history[i - 1] * (1.0 + 1e-14));
    // Every label is the nearest centroid.
    for (std::size_t i = 0; i < m.n; ++i) {
      double own = 0.0;
      for (std::size_t j = 0; j < m.d; ++j) {
        const double t = m.row(i)[j] - r.centroids[r.labels[i] * m.d + j];
        own += t * t;
      }
      for (std::size_t c = 0; c < k; ++c) {
        double dc = 0.0;
        for (std::size_t j = 0; j < m.d; ++j) {
          const double t = m.row(i)[j] - r.centroids[c * m.d + j];
          dc += t * t;
        }
        CHECK(own <= dc + 1e-12);
      }
    }
  }
}

TEST_CASE("k-means errors and determinism") {
  FeatureMatrix same;
  same.n = 5;
  same.d = 2;
  same.values.assign(10, 3.0);
  CHECK_THROWS_AS(kmeans(same, 2, 1), Error);
  CHECK_NOTHROW(kmeans(same, 1, 1));
  CHECK_THROWS_AS(kmeans(same, 6, 1), Error);

  std::vector<std::size_t> truth;
  const FeatureMatrix m = blobs(30, truth, 9);
  KMeansResult a = kmeans(m, 3, 11), b = kmeans(m, 3, 11);
  CHECK(a.labels == b.labels);
  CHECK(a.centroids == b.centroids);

  // Canonical labels do not depend on the cluster numbering.
  KMeansResult c = a;
  const std::size_t perm[3] = {2, 0, 1};
  for (auto& l : c.labels) l = perm[l];
  for (std::size_t q = 0; q < 3; ++q)
    for (std::size_t j = 0; j < 2; ++j) c.centroids[perm[q] * 2 + j] = a.centroids[q * 2 + j];
  canonicalize_labels(a);
  canonicalize_labels(c);
  CHECK(a.labels == c.labels);
  CHECK(a.centroids == c.centroids);
  for (std::size_t i = 1; i < 3; ++i) {
    CHECK(a.centroids[2 * (i - 1)] + a.centroids[2 * (i - 1) + 1] <=
          a.centroids[2 * i] + a.centroids[2 * i + 1]);
  }
}

TEST_CASE("connected regions") {
  CHECK(count_regions({0, 0, 0, 0}, 2) == 1);
  CHECK(count_regions({0, 1, 1, 0}, 2) == 4);
  CHECK(count_regions({0, 0, 1, 1, 0, 1, 1, 1, 0}, 3) == 4);
  CHECK_THROWS_AS(count_regions({0, 1}, 2), Error);
}

TEST_CASE("small flowmap sweep") {
  FlowmapConfig cfg;
  cfg.grid = 4;
  cfg.na = 128;
  cfg.T = 2.0;
  cfg.c_range = {0.0, 0.6};  // explicit nonlinear term stays stable at this spacing
  cfg.f0_range = {0.0, 0.0};
  const FeatureMatrix f = run_flowmap_sweep(cfg);
  CHECK(f.n == 16);
  CHECK(f.d == 128);
  for (double x : f.values) CHECK(std::isfinite(x));

  // Worker count does not change the sweep.
  const FeatureMatrix g = run_flowmap_sweep(cfg, Executor(3, 1));
  CHECK(f.values == g.values);

  cfg.f0_range = {0.0, 1.0};
  cfg.clusters = 2;
  const FlowmapResult r = build_flowmap(cfg);
  CHECK(r.labels.size() == 16);
  CHECK(r.mean_c.front() == 0.0);
  CHECK(r.mean_c.back() == 0.6);
  cfg.feature = "nonsense";
  CHECK_THROWS_AS(cluster_flowmap(cfg, f), Error);
}
