#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "pentakit/banded.hpp"

namespace testgen {

/// Random strictly diagonally dominant pentadiagonal matrix.
inline pentakit::PentaDiag dominant_penta(std::size_t n, std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  pentakit::PentaDiag m{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n),
                        std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    m.a[i] = i >= 2 ? u(g) : 0.0;
    m.b[i] = i >= 1 ? u(g) : 0.0;
    m.d[i] = i + 1 < n ? u(g) : 0.0;
    m.e[i] = i + 2 < n ? u(g) : 0.0;
    const double off = std::fabs(m.a[i]) + std::fabs(m.b[i]) + std::fabs(m.d[i]) + std::fabs(m.e[i]);
    m.c[i] = (u(g) < 0 ? -1.0 : 1.0) * (off + 1.0 + std::fabs(u(g)));
  }
  return m;
}

inline pentakit::TriDiag dominant_tri(std::size_t n, std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  pentakit::TriDiag m{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    m.a[i] = i >= 1 ? u(g) : 0.0;
    m.c[i] = i + 1 < n ? u(g) : 0.0;
    m.b[i] = (u(g) < 0 ? -1.0 : 1.0) * (std::fabs(m.a[i]) + std::fabs(m.c[i]) + 1.0 + std::fabs(u(g)));
  }
  return m;
}

inline pentakit::CyclicTri dominant_cyclic_tri(std::size_t n, std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  pentakit::CyclicTri m{n, u(g), 0.0, u(g)};
  m.b = std::fabs(m.a) + std::fabs(m.c) + 0.5 + std::fabs(u(g));
  return m;
}

inline pentakit::CyclicPenta dominant_cyclic_penta(std::size_t n, std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  pentakit::CyclicPenta m{n, u(g), u(g), 0.0, u(g), u(g)};
  m.c = std::fabs(m.a) + std::fabs(m.b) + std::fabs(m.d) + std::fabs(m.e) + 0.5 + std::fabs(u(g));
  return m;
}

inline std::vector<double> random_vector(std::size_t n, std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(g);
  return v;
}

}  // namespace testgen
