#pragma once

// Dense reference linear algebra used as an independent oracle in tests.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pentakit/banded.hpp"

namespace oracle {

struct Dense {
  std::size_t n;
  std::vector<double> v;  // row-major

  explicit Dense(std::size_t n_) : n(n_), v(n_ * n_, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return v[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return v[i * n + j]; }
};

inline Dense from_penta(const pentakit::PentaDiag& m) {
  const std::size_t n = m.size();
  Dense d(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= 2) d(i, i - 2) = m.a[i];
    if (i >= 1) d(i, i - 1) = m.b[i];
    d(i, i) = m.c[i];
    if (i + 1 < n) d(i, i + 1) = m.d[i];
    if (i + 2 < n) d(i, i + 2) = m.e[i];
  }
  return d;
}

inline Dense from_tri(const pentakit::TriDiag& m) {
  const std::size_t n = m.size();
  Dense d(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= 1) d(i, i - 1) = m.a[i];
    d(i, i) = m.b[i];
    if (i + 1 < n) d(i, i + 1) = m.c[i];
  }
  return d;
}

// Wrapped matrices are assembled by accumulation so small n still works.
inline Dense from_cyclic(const pentakit::CyclicTri& m) {
  const std::size_t n = m.n;
  Dense d(n);
  for (std::size_t i = 0; i < n; ++i) {
    d(i, (i + n - 1) % n) += m.a;
    d(i, i) += m.b;
    d(i, (i + 1) % n) += m.c;
  }
  return d;
}

inline Dense from_cyclic(const pentakit::CyclicPenta& m) {
  const std::size_t n = m.n;
  Dense d(n);
  for (std::size_t i = 0; i < n; ++i) {
    d(i, (i + n - 2) % n) += m.a;
    d(i, (i + n - 1) % n) += m.b;
    d(i, i) += m.c;
    d(i, (i + 1) % n) += m.d;
    d(i, (i + 2) % n) += m.e;
  }
  return d;
}

inline std::vector<double> matvec(const Dense& a, const std::vector<double>& x) {
  std::vector<double> y(a.n, 0.0);
  for (std::size_t i = 0; i < a.n; ++i) {
    long double s = 0;
    for (std::size_t j = 0; j < a.n; ++j) s += static_cast<long double>(a(i, j)) * x[j];
    y[i] = static_cast<double>(s);
  }
  return y;
}

/// Gaussian elimination with partial pivoting.
inline std::vector<double> solve(Dense a, std::vector<double> b) {
  const std::size_t n = a.n;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::fabs(a(i, k)) > std::fabs(a(p, k))) p = i;
    if (a(p, k) == 0.0) throw std::runtime_error("singular");
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      std::swap(b[k], b[p]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

inline double max_rel_diff(const std::vector<double>& x, const std::vector<double>& y) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num = std::max(num, std::fabs(x[i] - y[i]));
    den = std::max(den, std::fabs(y[i]));
  }
  return den > 0 ? num / den : num;
}

}  // namespace oracle
