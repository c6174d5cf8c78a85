#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "support/random_systems.hpp"
#include "pentakit/error.hpp"
#include "pentakit/stencil.hpp"

using namespace pentakit;
using std::numbers::pi;

namespace {

Field2D random_field(std::size_t nx, std::size_t ny, std::mt19937_64& g) {
  Field2D f(nx, ny, 0.1, 0.2);
  f.values = testgen::random_vector(nx * ny, g);
  return f;
}

double slope(const std::vector<double>& n, const std::vector<double>& e) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double x = std::log(n[i]), y = std::log(e[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

}  // namespace

TEST_CASE("apply_1d_batch") {
  SUBCASE("constants are annihilated by derivative stencils") {
    BatchField b(16, 3, Layout::Interleaved, 2.5);
    const auto out = apply_1d_batch(b, StencilSpec::linear_x(2, 2, weights::fourth_derivative(1.0)));
    for (double v : out.data) CHECK(v == 0.0);
  }
  SUBCASE("second derivative of sin") {
    const std::size_t n = 1024;
    const double dx = 2 * pi / n;
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = std::sin(i * dx);
    const auto out = apply_1d_batch(interleave({s, s}), StencilSpec::linear_x(1, 1, weights::second_derivative(dx)));
    double err = 0;
    for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::fabs(out.at(i, 1) + s[i]));
    CHECK(err < 1e-4);
  }
  SUBCASE("fourth derivative of x^4 is 24 in the interior") {
    const std::size_t n = 21;
    const double dx = 0.05;
    std::vector<double> x4(n);
    for (std::size_t i = 0; i < n; ++i) x4[i] = std::pow(i * dx, 4);
    const auto spec =
        StencilSpec::linear_x(2, 2, weights::fourth_derivative(dx), Boundary::NonPeriodicLeaveHalo);
    const auto out = apply_1d_batch(interleave({x4}), spec);
    for (std::size_t i = 2; i + 2 < n; ++i) CHECK(out.data[i] == doctest::Approx(24.0).epsilon(1e-9));
    for (std::size_t i : {0u, 1u, 19u, 20u}) CHECK(out.data[i] == x4[i]);
  }
  SUBCASE("contiguous layout gives the same values") {
    std::mt19937_64 g(1);
    std::vector<std::vector<double>> cols;
    for (int s = 0; s < 5; ++s) cols.push_back(testgen::random_vector(12, g));
    const auto spec = StencilSpec::linear_x(1, 2, {0.3, -1.1, 0.5, 0.3});
    const auto a = apply_1d_batch(interleave(cols), spec);
    const auto b = apply_1d_batch(to_layout(interleave(cols), Layout::Contiguous), spec);
    CHECK(to_layout(b, Layout::Interleaved).data == a.data);
  }
  SUBCASE("window too large") {
    BatchField b(4, 2);
    CHECK_THROWS_AS(apply_1d_batch(b, StencilSpec::linear_x(2, 2, weights::fourth_derivative(1.0))), Error);
  }
}

TEST_CASE("apply_2d") {
  SUBCASE("mixed fourth derivative of x^2 y^2") {
    const double dx = 0.1, dy = 0.2;
    Field2D f(9, 7, dx, dy);
    for (std::size_t j = 0; j < 7; ++j)
      for (std::size_t i = 0; i < 9; ++i) f.at(i, j) = std::pow(i * dx, 2) * std::pow(j * dy, 2);
    const auto spec = StencilSpec::linear_xy(1, 1, 1, 1, weights::cross_derivative(dx, dy),
                                             Boundary::NonPeriodicLeaveHalo);
    const auto out = apply_2d(f, spec, Direction::XY);
    for (std::size_t j = 1; j < 6; ++j)
      for (std::size_t i = 1; i < 8; ++i) CHECK(out.at(i, j) == doctest::Approx(4.0).epsilon(1e-9));
    for (std::size_t i = 0; i < 9; ++i) {
      CHECK(out.at(i, 0) == f.at(i, 0));
      CHECK(out.at(i, 6) == f.at(i, 6));
    }
    for (std::size_t j = 0; j < 7; ++j) {
      CHECK(out.at(0, j) == f.at(0, j));
      CHECK(out.at(8, j) == f.at(8, j));
    }
  }
  SUBCASE("zero field") {
    Field2D f(8, 8, 1, 1);
    const auto out = apply_2d(f, StencilSpec::linear_xy(2, 2, 2, 2, weights::biharmonic_13pt(1, 1)), Direction::XY);
    for (double v : out.values) CHECK(v == 0.0);
  }
  SUBCASE("X then Y equals the 9-point product stencil") {
    std::mt19937_64 g(2);
    const Field2D f = random_field(16, 12, g);
    const auto x = apply_2d(f, StencilSpec::linear_x(1, 1, {1, -2, 1}), Direction::X);
    const auto xy = apply_2d(x, StencilSpec::linear_y(1, 1, {1, -2, 1}), Direction::Y);
    const auto direct =
        apply_2d(f, StencilSpec::linear_xy(1, 1, 1, 1, {1, -2, 1, -2, 4, -2, 1, -2, 1}), Direction::XY);
    for (std::size_t k = 0; k < f.values.size(); ++k) CHECK(std::fabs(xy.values[k] - direct.values[k]) < 1e-12);
  }
  SUBCASE("linearity") {
    std::mt19937_64 g(3);
    const Field2D f = random_field(10, 10, g), h = random_field(10, 10, g);
    Field2D comb = f;
    for (std::size_t k = 0; k < f.values.size(); ++k) comb.values[k] = 1.5 * f.values[k] - 0.7 * h.values[k];
    const auto spec = StencilSpec::linear_xy(2, 2, 2, 2, weights::biharmonic_13pt(0.3, 0.3));
    const auto a = apply_2d(f, spec, Direction::XY), b = apply_2d(h, spec, Direction::XY);
    const auto c = apply_2d(comb, spec, Direction::XY);
    for (std::size_t k = 0; k < f.values.size(); ++k)
      CHECK(std::fabs(c.values[k] - (1.5 * a.values[k] - 0.7 * b.values[k])) < 1e-12 * 1e3);
  }
  SUBCASE("translation equivariance is exact") {
    std::mt19937_64 g(4);
    const Field2D f = random_field(11, 9, g);
    Field2D shifted = f;
    for (std::size_t j = 0; j < 9; ++j)
      for (std::size_t i = 0; i < 11; ++i) shifted.at((i + 3) % 11, (j + 2) % 9) = f.at(i, j);
    const auto spec = StencilSpec::linear_xy(1, 2, 2, 1, testgen::random_vector(16, g));
    const auto a = apply_2d(f, spec, Direction::XY), b = apply_2d(shifted, spec, Direction::XY);
    for (std::size_t j = 0; j < 9; ++j)
      for (std::size_t i = 0; i < 11; ++i) CHECK(b.at((i + 3) % 11, (j + 2) % 9) == a.at(i, j));
  }
  SUBCASE("direction consistency") {
    Field2D f(8, 8, 1, 1);
    CHECK_THROWS_AS(apply_2d(f, StencilSpec::linear_y(1, 1, {1, -2, 1}), Direction::X), Error);
  }
  SUBCASE("worker count does not change bytes") {
    std::mt19937_64 g(5);
    const Field2D f = random_field(64, 48, g);
    const auto spec = StencilSpec::linear_xy(2, 2, 2, 2, weights::biharmonic_13pt(0.1, 0.1));
    Executor ex(3, 1);
    CHECK(apply_2d(f, spec, Direction::XY).values == apply_2d(f, spec, Direction::XY, ex).values);
  }
}

TEST_CASE("apply_nonlinear") {
  SUBCASE("centre kernel is the identity") {
    std::mt19937_64 g(6);
    const Field2D f = random_field(7, 6, g);
    const auto spec = StencilSpec::nonlinear(1, 1, 1, 1, NonlinearKernel{&kernels::centre, {4.0}, "centre"});
    CHECK(apply_nonlinear(f, spec).values == f.values);
  }
  SUBCASE("laplacian of C^3 - C on a constant is zero") {
    Field2D f(8, 8, 0.1, 0.1, 0.37);
    const auto spec = StencilSpec::nonlinear(1, 1, 1, 1, NonlinearKernel{&kernels::laplacian_cubic, {100, 100}, "laplacian_cubic"});
    for (double v : apply_nonlinear(f, spec).values) CHECK(std::fabs(v) < 1e-12);
  }
  SUBCASE("laplacian of C^3 - C on sin x sin y") {
    const std::size_t n = 256;
    const double h = 2 * pi / n;
    Field2D f(n, n, h, h);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) f.at(i, j) = std::sin(i * h) * std::sin(j * h);
    const auto spec = StencilSpec::nonlinear(
        1, 1, 1, 1, NonlinearKernel{&kernels::laplacian_cubic, {1 / (h * h), 1 / (h * h)}, "laplacian_cubic"});
    const auto out = apply_nonlinear(f, spec);
    // Oracle: with s = sin x, t = sin y, C = s t,
    // lap(C^3) = 6 C (|grad C|^2) + 3 C^2 lap C, lap C = -2C.
    double err = 0;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) {
        const double x = i * h, y = j * h;
        const double c = std::sin(x) * std::sin(y);
        const double gx = std::cos(x) * std::sin(y), gy = std::sin(x) * std::cos(y);
        const double lap_c = -2 * c;
        const double exact = 6 * c * (gx * gx + gy * gy) + 3 * c * c * lap_c - lap_c;
        err = std::max(err, std::fabs(out.at(i, j) - exact));
      }
    CHECK(err < 10 * h * h);
    CHECK(err > 0.0);
  }
  SUBCASE("kernel failure aborts the apply") {
    Field2D f(8, 8, 1, 1);
    auto bad = +[](const double*, const double*, std::size_t site) -> double {
      if (site == 17) throw std::runtime_error("kernel failed");
      return 0.0;
    };
    const auto spec = StencilSpec::nonlinear(1, 1, 1, 1, NonlinearKernel{bad, {}, "bad"});
    CHECK_THROWS_AS(apply_nonlinear(f, spec), std::runtime_error);
  }
  SUBCASE("1D batch kernel matches the 2D kernel on a constant-y field") {
    const std::size_t n = 32;
    const double h = 2 * pi / n;
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = 0.5 * std::cos(3 * i * h);
    const auto spec = StencilSpec::nonlinear(1, 1, 0, 0, NonlinearKernel{&kernels::laplacian_cubic_1d, {1 / (h * h)}, "laplacian_cubic_1d"});
    const auto out = apply_nonlinear(interleave({v}), spec);
    for (std::size_t i = 0; i < n; ++i) {
      auto nl = [&](std::size_t k) { const double c = v[k % n]; return c * c * c - c; };
      const double ref = (nl(i + n - 1) - 2 * nl(i) + nl(i + 1)) / (h * h);
      CHECK(out.data[i] == doctest::Approx(ref).epsilon(1e-12));
    }
  }
}

TEST_CASE("weno_deriv") {
  SUBCASE("linear ramp has unit derivative away from the wrap") {
    const std::size_t n = 32;
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = 0.1 * i;
    for (bool left : {true, false}) {
      const auto d = weno_deriv(f, 0.1, left);
      for (std::size_t i = 4; i + 4 < n; ++i) CHECK(d[i] == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("smooth convergence slope") {
    std::vector<double> ns, errs;
    for (std::size_t n = 64; n <= 1024; n *= 2) {
      const double h = 2 * pi / n;
      std::vector<double> f(n);
      for (std::size_t i = 0; i < n; ++i) f[i] = std::sin(i * h);
      const auto d = weno_deriv(f, h, true);
      double err = 0;
      for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::fabs(d[i] - std::cos(i * h)));
      ns.push_back(double(n));
      errs.push_back(err);
      MESSAGE("n=" << n << " err=" << err);
    }
    const double p = slope(ns, errs);
    MESSAGE("slope " << p);
    CHECK(p <= -4.0);
    CHECK(p >= -5.5);
  }
  SUBCASE("step profile has no overshoot") {
    const std::size_t n = 64;
    const double h = 1.0 / n;
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = (i >= 16 && i < 48) ? 1.0 : 0.0;
    // One explicit upwind advection step must stay within [0, 1].
    const auto d = weno_deriv(f, h, true);
    const double dt = 0.1 * h;
    for (std::size_t i = 0; i < n; ++i) {
      const double u = f[i] - dt * d[i];
      CHECK(u <= 1.0 + 1e-3);
      CHECK(u >= -1e-3);
    }
  }
}
