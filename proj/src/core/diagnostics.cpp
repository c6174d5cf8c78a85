#include "pentakit/diagnostics.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <string>

#include "pentakit/error.hpp"

namespace pentakit {

double error_l2_analytic(std::span<const double> numeric,
                         const std::function<double(double, double)>& analytic, double dx,
                         double t) {
  if (numeric.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < numeric.size(); ++i) {
    const double d = numeric[i] - analytic(static_cast<double>(i) * dx, t);
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(numeric.size()));
}

double richardson_error_1d(std::span<const double> fine, std::span<const double> coarse,
                           double L) {
  if (coarse.empty() || fine.size() != 2 * coarse.size()) {
    raise(ErrorCode::GridMismatch, "fine grid must have exactly twice the coarse points");
  }
  const double dxc = L / static_cast<double>(coarse.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < coarse.size(); ++i) sum += std::fabs(fine[2 * i] - coarse[i]) * dxc;
  return sum / L;
}

double richardson_error_2d(const Field2D& fine, const Field2D& coarse) {
  if (coarse.nx == 0 || coarse.ny == 0 || fine.nx != 2 * coarse.nx || fine.ny != 2 * coarse.ny) {
    raise(ErrorCode::GridMismatch, "fine grid must have exactly twice the coarse points");
  }
  const double omega = static_cast<double>(coarse.nx) * coarse.dx *
                       static_cast<double>(coarse.ny) * coarse.dy;
  const double area = coarse.dx * coarse.dy;
  double sum = 0.0;
  for (std::size_t j = 0; j < coarse.ny; ++j) {
    for (std::size_t i = 0; i < coarse.nx; ++i) {
      const double avg = (fine.at(2 * i, 2 * j) + fine.at(2 * i, 2 * j + 1) +
                          fine.at(2 * i + 1, 2 * j) + fine.at(2 * i + 1, 2 * j + 1)) /
                         4.0;
      sum += std::fabs(avg - coarse.at(i, j)) * area;
    }
  }
  return sum / omega;
}

std::vector<ConvergenceRow> convergence_table(const std::vector<std::size_t>& n,
                                              const std::vector<double>& e) {
  if (n.size() != e.size()) raise(ErrorCode::DimensionMismatch, "n and e differ in length");
  std::vector<ConvergenceRow> rows(n.size());
  for (std::size_t k = 0; k < n.size(); ++k) {
    rows[k].n = n[k];
    rows[k].e_n = e[k];
    rows[k].order = std::numeric_limits<double>::quiet_NaN();
    if (k + 1 < n.size() && e[k] > 0.0 && e[k + 1] > 0.0) rows[k].order = std::log2(e[k] / e[k + 1]);
  }
  return rows;
}

std::vector<double> simpson_weights(std::size_t n, double h) {
  if (n == 0 || n % 2 != 0) raise(ErrorCode::InvalidArgument, "Simpson rule needs an even point count");
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = (i % 2 == 0 ? 2.0 : 4.0) * h / 3.0;
  return w;
}

double free_energy_2d(const Field2D& f, double gamma) {
  const std::size_t nx = f.nx, ny = f.ny;
  const auto wx = simpson_weights(nx, f.dx), wy = simpson_weights(ny, f.dy);
  const double hx = 1.0 / (2.0 * f.dx), hy = 1.0 / (2.0 * f.dy);
  double total = 0.0;
  for (std::size_t j = 0; j < ny; ++j) {
    const std::size_t jm = (j + ny - 1) % ny, jp = (j + 1) % ny;
    double row = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t im = (i + nx - 1) % nx, ip = (i + 1) % nx;
      const double c = f.at(i, j);
      const double gx = (f.at(ip, j) - f.at(im, j)) * hx;
      const double gy = (f.at(i, jp) - f.at(i, jm)) * hy;
      const double bulk = 0.5 * (c * c - 1.0) * (c * c - 1.0);
      row += wx[i] * (bulk + 0.5 * gamma * (gx * gx + gy * gy));
    }
    total += wy[j] * row;
  }
  return total;
}

double free_energy_1d(std::span<const double> c, double dx, double gamma) {
  const std::size_t n = c.size();
  const auto w = simpson_weights(n, dx);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double g = (c[(i + 1) % n] - c[(i + n - 1) % n]) / (2.0 * dx);
    total += w[i] * (0.5 * (c[i] * c[i] - 1.0) * (c[i] * c[i] - 1.0) + 0.5 * gamma * g * g);
  }
  return total;
}

namespace {

double s_from_mean_square(double m2) {
  if (m2 >= 1.0 - 1e-12) raise(ErrorCode::SaturatedField, "<C^2> is not below 1");
  return 1.0 / (1.0 - m2);
}

}  // namespace

double s_of_t(std::span<const double> c) {
  const std::size_t n = c.size();
  const auto w = simpson_weights(n, 1.0 / static_cast<double>(n));
  double m2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) m2 += w[i] * c[i] * c[i];
  return s_from_mean_square(m2);
}

double s_of_t(const Field2D& f) {
  const auto wx = simpson_weights(f.nx, 1.0 / static_cast<double>(f.nx));
  const auto wy = simpson_weights(f.ny, 1.0 / static_cast<double>(f.ny));
  double m2 = 0.0;
  for (std::size_t j = 0; j < f.ny; ++j) {
    double row = 0.0;
    for (std::size_t i = 0; i < f.nx; ++i) row += wx[i] * f.at(i, j) * f.at(i, j);
    m2 += wy[j] * row;
  }
  return s_from_mean_square(m2);
}

namespace {
std::mutex& fftw_plan_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

double k1_of_t(const Field2D& f, double L) {
  const int nx = static_cast<int>(f.nx), ny = static_cast<int>(f.ny);
  const int hx = nx / 2 + 1;
  std::vector<double> in(f.values);
  auto* out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * ny * hx));
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    plan = fftw_plan_dft_r2c_2d(ny, nx, in.data(), out, FFTW_ESTIMATE);
  }
  fftw_execute(plan);

  const double unit = 2.0 * M_PI / L;
  double num = 0.0, den = 0.0;
  for (int j = 0; j < ny; ++j) {
    const int ky = j <= ny / 2 ? j : j - ny;
    for (int i = 0; i < hx; ++i) {
      if (i == 0 && j == 0) continue;
      // Half-spectrum columns other than 0 and nx/2 stand for a conjugate pair.
      const double mult = (i == 0 || (nx % 2 == 0 && i == nx / 2)) ? 1.0 : 2.0;
      const double re = out[j * hx + i][0], im = out[j * hx + i][1];
      const double p = mult * (re * re + im * im);
      const double kmag = unit * std::sqrt(static_cast<double>(i) * i + static_cast<double>(ky) * ky);
      num += p;
      den += p / kmag;
    }
  }
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(out);
  if (!(den > 0.0)) return 0.0;
  return num / den;
}

std::vector<double> derivative_3pt(std::span<const double> t, std::span<const double> y) {
  const std::size_t n = t.size();
  if (y.size() != n) raise(ErrorCode::DimensionMismatch, "t and y differ in length");
  if (n < 3) raise(ErrorCode::InvalidArgument, "need at least three samples");
  std::vector<double> d(n);
  // Lagrange derivative through (t0, t1, t2) evaluated at `at`.
  auto lag = [](double t0, double t1, double t2, double y0, double y1, double y2, double at) {
    const double l0 = ((at - t1) + (at - t2)) / ((t0 - t1) * (t0 - t2));
    const double l1 = ((at - t0) + (at - t2)) / ((t1 - t0) * (t1 - t2));
    const double l2 = ((at - t0) + (at - t1)) / ((t2 - t0) * (t2 - t1));
    return y0 * l0 + y1 * l1 + y2 * l2;
  };
  d[0] = lag(t[0], t[1], t[2], y[0], y[1], y[2], t[0]);
  for (std::size_t i = 1; i + 1 < n; ++i)
    d[i] = lag(t[i - 1], t[i], t[i + 1], y[i - 1], y[i], y[i + 1], t[i]);
  d[n - 1] = lag(t[n - 3], t[n - 2], t[n - 1], y[n - 3], y[n - 2], y[n - 1], t[n - 1]);
  return d;
}

std::vector<double> beta_series(std::span<const double> t, std::span<const double> F) {
  for (double f : F) {
    if (!(f > 0.0)) raise(ErrorCode::NonPositiveEnergy, "free energy must be positive");
  }
  const auto dF = derivative_3pt(t, F);
  std::vector<double> beta(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) beta[i] = -t[i] * dF[i] / F[i];
  return beta;
}

Moments moments(std::span<const double> x) {
  Moments m;
  m.count = x.size();
  if (x.empty()) return m;
  const double n = static_cast<double>(x.size());
  double s = 0.0;
  for (double v : x) s += v;
  m.mean = s / n;
  double m2 = 0.0, m3 = 0.0;
  for (double v : x) {
    const double d = v - m.mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m.variance = m2;
  m.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  return m;
}

double Histogram::area() const {
  double a = 0.0;
  for (std::size_t b = 0; b < density.size(); ++b) a += density[b] * (edges[b + 1] - edges[b]);
  return a;
}

Histogram make_histogram(std::span<const double> x, double lo, double hi, std::size_t bins) {
  if (bins == 0) raise(ErrorCode::InvalidArgument, "histogram needs at least one bin");
  if (!(hi > lo)) raise(ErrorCode::InvalidArgument, "histogram range is empty");
  Histogram h;
  h.edges.resize(bins + 1);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t b = 0; b <= bins; ++b) h.edges[b] = lo + width * static_cast<double>(b);
  std::vector<std::size_t> counts(bins, 0);
  std::size_t total = 0;
  for (double v : x) {
    if (!(v >= lo) || !(v <= hi)) continue;
    std::size_t b = static_cast<std::size_t>((v - lo) / width);
    if (b >= bins) b = bins - 1;
    ++counts[b];
    ++total;
  }
  h.density.assign(bins, 0.0);
  if (total == 0) return h;
  for (std::size_t b = 0; b < bins; ++b)
    h.density[b] = static_cast<double>(counts[b]) / (static_cast<double>(total) * width);
  return h;
}

BetaStats windowed_beta_histogram(const std::vector<BetaRun>& runs,
                                  std::pair<double, double> window, double cutoff,
                                  std::size_t bins, std::pair<double, double> range) {
  BetaStats out;
  // Per-time moments assume runs share their sample times; times are taken
  // from the first run and matched by index.
  std::vector<std::vector<double>> by_time;
  std::vector<double> times;
  for (const auto& run : runs) {
    if (run.t.size() != run.beta.size()) raise(ErrorCode::DimensionMismatch, "ragged beta run");
    for (std::size_t k = 0; k < run.t.size(); ++k) {
      const double t = run.t[k], b = run.beta[k];
      if (!(t > window.first && t < window.second) || !(b < cutoff)) continue;
      out.samples.push_back(b);
      if (by_time.size() <= k) {
        by_time.resize(k + 1);
        times.resize(k + 1, 0.0);
      }
      by_time[k].push_back(b);
      times[k] = t;
    }
  }
  if (out.samples.empty()) raise(ErrorCode::EmptyWindow, "no beta samples inside the window");
  out.pooled = moments(out.samples);
  for (std::size_t k = 0; k < by_time.size(); ++k) {
    if (by_time[k].empty()) continue;
    out.per_time.push_back({times[k], moments(by_time[k])});
  }
  double lo = range.first, hi = range.second;
  if (!(hi > lo)) {
    lo = *std::min_element(out.samples.begin(), out.samples.end());
    hi = cutoff;
    if (!(hi > lo)) hi = lo + 1.0;
  }
  out.histogram = make_histogram(out.samples, lo, hi, bins);
  return out;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (y.size() != n || n < 2) raise(ErrorCode::InvalidArgument, "linear fit needs matched samples");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LinearFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  f.r = (sxx > 0 && syy > 0) ? sxy / std::sqrt(sxx * syy) : 0.0;
  return f;
}

}  // namespace pentakit
