#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pentakit/diagnostics.hpp"
#include "pentakit/error.hpp"

using namespace pentakit;
using std::numbers::pi;

namespace {

Field2D sample(std::size_t n, double L, double (*f)(double, double)) {
  Field2D g(n, n, L / n, L / n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) g.at(i, j) = f(i * g.dx, j * g.dy);
  return g;
}

}  // namespace

TEST_CASE("error_l2_analytic") {
  const double dx = 0.1;
  auto ana = [](double x, double t) { return std::sin(x) * std::exp(-t); };
  std::vector<double> v(50);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = ana(i * dx, 0.3);
  CHECK(error_l2_analytic(v, ana, dx, 0.3) == 0.0);
  for (auto& x : v) x += 0.25;
  CHECK(error_l2_analytic(v, ana, dx, 0.3) == doctest::Approx(0.25).epsilon(1e-14));

  std::mt19937_64 g(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (auto& x : v) x = u(g);
  long double acc = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const long double d = v[i] - ana(i * dx, 0.3);
    acc += d * d;
  }
  const double direct = static_cast<double>(std::sqrt(acc / v.size()));
  CHECK(std::fabs(error_l2_analytic(v, ana, dx, 0.3) - direct) < 1e-15);
}

TEST_CASE("Richardson errors") {
  SUBCASE("injected coarse grid gives zero") {
    std::vector<double> fine(16), coarse(8);
    for (std::size_t i = 0; i < 16; ++i) fine[i] = std::cos(i * 0.3);
    for (std::size_t i = 0; i < 8; ++i) coarse[i] = fine[2 * i];
    CHECK(richardson_error_1d(fine, coarse, 2.0) == 0.0);
  }
  SUBCASE("hand summation, N = 8") {
    // fine x_j = j/8 on [0,1); coarse carries an extra 0.1 i.
    std::vector<double> fine(8), coarse(4);
    for (std::size_t j = 0; j < 8; ++j) fine[j] = j / 8.0;
    for (std::size_t i = 0; i < 4; ++i) coarse[i] = i / 4.0 + 0.1 * i;
    // (0 + 0.1 + 0.2 + 0.3) * 0.25 / 1
    CHECK(richardson_error_1d(fine, coarse, 1.0) == doctest::Approx(0.15).epsilon(1e-14));
  }
  SUBCASE("grid mismatch") {
    std::vector<double> fine(10), coarse(4);
    CHECK_THROWS_AS(richardson_error_1d(fine, coarse, 1.0), Error);
    CHECK_THROWS_AS(richardson_error_2d(Field2D(8, 8, 1, 1), Field2D(3, 4, 1, 1)), Error);
  }
  SUBCASE("2D four-point average") {
    Field2D coarse(4, 4, 0.5, 0.5), fine(8, 8, 0.25, 0.25);
    for (std::size_t j = 0; j < 8; ++j)
      for (std::size_t i = 0; i < 8; ++i) fine.at(i, j) = static_cast<double>(i + 8 * j);
    for (std::size_t j = 0; j < 4; ++j)
      for (std::size_t i = 0; i < 4; ++i)
        coarse.at(i, j) = (fine.at(2 * i, 2 * j) + fine.at(2 * i + 1, 2 * j) +
                           fine.at(2 * i, 2 * j + 1) + fine.at(2 * i + 1, 2 * j + 1)) / 4;
    CHECK(richardson_error_2d(fine, coarse) == 0.0);
    coarse.at(1, 2) += 0.8;
    // One cell of area 0.25 out of a domain of area 4.
    CHECK(richardson_error_2d(fine, coarse) == doctest::Approx(0.8 * 0.25 / 4));
  }
  SUBCASE("orders of a known error model") {
    // e_N = C N^-p exactly gives order p; blended models approach it.
    std::vector<std::size_t> ns;
    std::vector<double> e;
    for (std::size_t n = 64; n <= 4096; n *= 2) {
      ns.push_back(n);
      e.push_back(3.0 * std::pow(n, -2.0) + 50.0 * std::pow(n, -3.0));
    }
    const auto rows = convergence_table(ns, e);
    CHECK(std::isnan(rows.back().order));
    CHECK(std::fabs(rows[rows.size() - 2].order - 2.0) < 0.15);
    for (std::size_t k = 1; k + 1 < rows.size(); ++k) CHECK(rows[k].order <= rows[k - 1].order);
  }
  SUBCASE("order undefined on zero error") {
    const auto rows = convergence_table({8, 16, 32}, {1.0, 0.0, 0.5});
    CHECK(std::isnan(rows[0].order));
    CHECK(std::isnan(rows[1].order));
  }
}

TEST_CASE("free energy") {
  const std::size_t n = 64;
  const double L = 2 * pi;
  CHECK(free_energy_2d(sample(n, L, [](double, double) { return 1.0; }), 0.01) == 0.0);
  CHECK(free_energy_2d(sample(n, L, [](double, double) { return 0.0; }), 0.01) ==
        doctest::Approx(0.5 * L * L).epsilon(1e-13));
  const double sinx = free_energy_2d(sample(n, L, [](double x, double) { return std::sin(x); }), 0.0);
  CHECK(sinx == doctest::Approx(0.5 * (3.0 / 8.0) * L * L).epsilon(1e-12));
  std::vector<double> zero(32, 0.0);
  CHECK(free_energy_1d(zero, 0.1, 0.01) == doctest::Approx(0.5 * 3.2));
  CHECK_THROWS_AS(free_energy_2d(Field2D(7, 8, 1, 1), 0.0), Error);
}

TEST_CASE("s(t)") {
  CHECK(s_of_t(std::vector<double>(16, 0.0)) == 1.0);
  std::vector<double> half(16, std::sqrt(0.5));
  CHECK(s_of_t(half) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(s_of_t(sample(32, 2 * pi, [](double x, double) { return std::sin(x); })) ==
        doctest::Approx(2.0).epsilon(1e-13));
  CHECK_THROWS_AS(s_of_t(std::vector<double>(16, 1.0)), Error);
}

TEST_CASE("k1(t)") {
  const std::size_t n = 64;
  const double L = 2 * pi;
  CHECK(k1_of_t(sample(n, L, [](double x, double) { return std::cos(3 * x); }), L) ==
        doctest::Approx(3.0).epsilon(1e-12));
  CHECK(k1_of_t(sample(n, L, [](double, double y) { return std::sin(5 * y); }), L) ==
        doctest::Approx(5.0).epsilon(1e-12));
  // Equal power in |k| = 1 and |k| = 2.
  const auto two = sample(n, L, [](double x, double y) { return std::cos(x) + std::cos(2 * y); });
  CHECK(k1_of_t(two, L) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  // Domain length rescales wavenumbers.
  CHECK(k1_of_t(sample(n, L, [](double x, double) { return std::cos(3 * x); }), 2 * L) ==
        doctest::Approx(1.5).epsilon(1e-12));

  std::mt19937_64 g(4);
  std::uniform_real_distribution<double> u(-1, 1);
  Field2D r(n, n, L / n, L / n);
  for (auto& v : r.values) v = u(g);
  const double base = k1_of_t(r, L);
  Field2D scaled = r, shifted = r;
  for (auto& v : scaled.values) v *= 2.0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) shifted.at(i, j) = r.at((i + 5) % n, (j + 11) % n);
  CHECK(k1_of_t(scaled, L) == doctest::Approx(base).epsilon(1e-12));
  CHECK(k1_of_t(shifted, L) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("beta_series") {
  std::vector<double> t, F;
  for (int k = 0; k <= 200; ++k) t.push_back(1.0 + 0.01 * k);
  SUBCASE("power law") {
    for (double x : t) F.push_back(2.0 * std::pow(x, -1.0 / 3.0));
    const auto b = beta_series(t, F);
    for (std::size_t i = 1; i + 1 < b.size(); ++i) CHECK(std::fabs(b[i] - 1.0 / 3.0) < 5e-5);
    CHECK(std::fabs(b.front() - 1.0 / 3.0) < 1e-4);
  }
  SUBCASE("constant energy") {
    F.assign(t.size(), 4.0);
    for (double b : beta_series(t, F)) CHECK(b == doctest::Approx(0.0));
  }
  SUBCASE("exponential decay gives beta = t") {
    for (double x : t) F.push_back(std::exp(-x));
    const auto b = beta_series(t, F);
    for (std::size_t i = 1; i + 1 < b.size(); ++i) CHECK(std::fabs(b[i] - t[i]) < 1e-4);
  }
  SUBCASE("second order in the sample spacing") {
    auto err = [](double h) {
      std::vector<double> tt, ff;
      for (int k = 0; k <= 10; ++k) {
        tt.push_back(1.0 + h * k);
        ff.push_back(std::pow(tt.back(), -1.0 / 3.0));
      }
      return std::fabs(beta_series(tt, ff)[5] - 1.0 / 3.0);
    };
    CHECK(std::log2(err(0.02) / err(0.01)) == doctest::Approx(2.0).epsilon(0.05));
  }
  SUBCASE("non-positive energy") {
    F.assign(t.size(), 1.0);
    F[7] = 0.0;
    CHECK_THROWS_AS(beta_series(t, F), Error);
  }
}

TEST_CASE("moments and histograms") {
  SUBCASE("skew sample against a direct oracle") {
    std::mt19937_64 g(5);
    std::normal_distribution<double> nd;
    std::vector<double> x(5000);
    for (auto& v : x) v = std::fabs(nd(g)) + 0.3 * nd(g);
    long double mean = 0;
    for (double v : x) mean += v;
    mean /= x.size();
    long double m2 = 0, m3 = 0;
    for (double v : x) {
      m2 += (v - mean) * (v - mean);
      m3 += (v - mean) * (v - mean) * (v - mean);
    }
    m2 /= x.size();
    m3 /= x.size();
    const Moments m = moments(x);
    CHECK(std::fabs(m.mean - static_cast<double>(mean)) < 1e-12);
    CHECK(std::fabs(m.variance - static_cast<double>(m2)) < 1e-12);
    CHECK(std::fabs(m.skewness - static_cast<double>(m3 / std::pow(m2, 1.5L))) < 1e-12);
    CHECK(m.skewness > 0);

    const Histogram h = make_histogram(x, -2, 5, 40);
    CHECK(std::fabs(h.area() - 1.0) < 1e-9);
  }
  SUBCASE("windowed beta pooling") {
    std::vector<BetaRun> runs(3);
    for (auto& r : runs) {
      for (int k = 0; k < 30; ++k) {
        r.t.push_back(5.0 * k);
        r.beta.push_back(1.0 / 3.0);
      }
    }
    runs[1].beta[4] = 1.5;  // t = 20, dropped by the cutoff
    const BetaStats s = windowed_beta_histogram(runs, {10, 100}, 1.0, 10);
    // t in (10, 100): k = 3..19 → 17 samples per run, one removed.
    CHECK(s.samples.size() == 3 * 17 - 1);
    CHECK(s.pooled.mean == doctest::Approx(1.0 / 3.0));
    CHECK(s.pooled.variance == doctest::Approx(0.0));
    CHECK(s.histogram.density[0] > 0);
    for (std::size_t b = 1; b < s.histogram.density.size(); ++b) CHECK(s.histogram.density[b] == 0);
    CHECK(std::fabs(s.histogram.area() - 1.0) < 1e-9);
    CHECK(s.per_time.size() == 17);
    CHECK_THROWS_AS(windowed_beta_histogram(runs, {200, 300}, 1.0, 10), Error);
  }
}

TEST_CASE("linear fit") {
  const std::vector<double> x = {0, 1, 2, 3, 4};
  const std::vector<double> y = {1, 3, 5, 7, 9};
  const LinearFit f = linear_fit(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r == doctest::Approx(1.0));
}
