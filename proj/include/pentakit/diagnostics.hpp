#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "pentakit/stencil.hpp"

namespace pentakit {

/// sqrt((1/N) sum (num_i - f(x_i, t))^2) with x_i = i * dx.
double error_l2_analytic(std::span<const double> numeric,
                         const std::function<double(double, double)>& analytic, double dx,
                         double t);

/// (1/L) sum_i |fine[2i] - coarse[i]| dx_coarse, dx_coarse = L / coarse.size().
double richardson_error_1d(std::span<const double> fine, std::span<const double> coarse,
                           double L);

/// 2D form: four-point average of the fine cells covering coarse point (i, j).
double richardson_error_2d(const Field2D& fine, const Field2D& coarse);

struct ConvergenceRow {
  std::size_t n = 0;
  double e_n = 0.0;
  double order = 0.0;  // log2(E_N / E_2N); NaN where undefined
};

/// Builds rows from errors E_N listed for increasing N (each N doubling).
std::vector<ConvergenceRow> convergence_table(const std::vector<std::size_t>& n,
                                              const std::vector<double>& e);

/// Periodic composite Simpson weights (h/3) * {2, 4, 2, 4, ...}; n must be even.
std::vector<double> simpson_weights(std::size_t n, double h);

/// F = int 1/2 (C^2 - 1)^2 + gamma/2 |grad C|^2 with central-difference
/// gradients and periodic Simpson quadrature.
double free_energy_2d(const Field2D& f, double gamma);
double free_energy_1d(std::span<const double> c, double dx, double gamma);

/// s = 1 / (1 - <C^2>), with <.> the Simpson domain average.
double s_of_t(std::span<const double> c);
double s_of_t(const Field2D& f);

/// k1 = sum |C_k|^2 / sum |k|^-1 |C_k|^2 over k != 0, |k| in units of 2 pi / L.
double k1_of_t(const Field2D& f, double L);

/// beta = -(t / F) dF/dt using three-point derivatives on the sample grid.
std::vector<double> beta_series(std::span<const double> t, std::span<const double> F);

/// Three-point derivative on a possibly non-uniform grid.
std::vector<double> derivative_3pt(std::span<const double> t, std::span<const double> y);

struct Moments {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // population
  double skewness = 0.0;  // standardized third central moment
};

Moments moments(std::span<const double> x);

struct Histogram {
  std::vector<double> edges;    // bins + 1
  std::vector<double> density;  // area-normalized
  double area() const;
};

/// Area-normalized histogram over [lo, hi]; values outside are dropped.
Histogram make_histogram(std::span<const double> x, double lo, double hi, std::size_t bins);

struct BetaRun {
  std::vector<double> t;
  std::vector<double> beta;
};

struct MomentRow {
  double t = 0.0;
  Moments m;
};

struct BetaStats {
  Histogram histogram;
  Moments pooled;
  std::vector<MomentRow> per_time;  // across runs, per sample time
  std::vector<double> samples;      // pooled values in run order
};

/// Pools beta samples with t_lo < t < t_hi and beta < cutoff over runs in
/// index order. The histogram spans [min sample, cutoff] unless a range is
/// given. Throws EmptyWindow if nothing is sampled.
BetaStats windowed_beta_histogram(const std::vector<BetaRun>& runs,
                                  std::pair<double, double> window, double cutoff,
                                  std::size_t bins, std::pair<double, double> range = {0.0, 0.0});

/// Least-squares fit y = a + b x with Pearson correlation r.
struct LinearFit {
  double intercept = 0.0, slope = 0.0, r = 0.0;
};
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

}  // namespace pentakit
