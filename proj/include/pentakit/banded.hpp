#pragma once

// Single-system banded solvers. No pivoting: systems are assumed diagonally
// dominant or SPD. A pivot is rejected only if |pivot| < kPivotTolerance.

#include <cstddef>
#include <vector>

namespace pentakit {

inline constexpr double kPivotTolerance = 1e-14;

/// Tridiagonal matrix. Row i reads a[i] x[i-1] + b[i] x[i] + c[i] x[i+1];
/// a[0] and c[n-1] are ignored.
struct TriDiag {
  std::vector<double> a, b, c;

  std::size_t size() const noexcept { return b.size(); }
  static TriDiag constant(std::size_t n, double a, double b, double c);
};

/// Pentadiagonal matrix with bands a (i-2), b (i-1), c (i), d (i+1), e (i+2).
/// Entries that fall outside the matrix are ignored.
struct PentaDiag {
  std::vector<double> a, b, c, d, e;

  std::size_t size() const noexcept { return c.size(); }
  static PentaDiag constant(std::size_t n, double a, double b, double c, double d, double e);
  PentaDiag transposed() const;
};

/// A = L R with L lower (bands epsilon, beta, alpha) and R unit upper
/// (bands gamma, delta). epsilon equals the input a band.
struct FactoredPenta {
  std::vector<double> alpha, beta, gamma, delta, epsilon;

  std::size_t size() const noexcept { return alpha.size(); }
};

/// Thomas prefactorization: chat[i] = c[i] / (b[i] - a[i] chat[i-1]).
/// `denom` caches the pivots b[i] - a[i] chat[i-1].
struct FactoredTri {
  std::vector<double> a, b, chat, denom;

  std::size_t size() const noexcept { return b.size(); }
};

FactoredPenta penta_factor(const PentaDiag& m);
std::vector<double> penta_solve(const FactoredPenta& f, const std::vector<double>& rhs);

FactoredTri thomas_factor(const TriDiag& m);
std::vector<double> thomas_solve(const FactoredTri& f, const std::vector<double>& rhs);

/// Periodic constant-coefficient tridiagonal: row i is
/// a x[i-1] + b x[i] + c x[i+1] with indices taken mod n.
struct CyclicTri {
  std::size_t n = 0;
  double a = 0, b = 1, c = 0;

  TriDiag dense_bands() const { return TriDiag::constant(n, a, b, c); }
};

/// Periodic constant-coefficient pentadiagonal, indices mod n.
struct CyclicPenta {
  std::size_t n = 0;
  double a = 0, b = 0, c = 1, d = 0, e = 0;
};

/// Sherman-Morrison solver for CyclicTri. The auxiliary solve A'z = u is
/// done once at construction.
class CyclicTriSolver {
 public:
  explicit CyclicTriSolver(const CyclicTri& m);

  std::size_t size() const noexcept { return m_.n; }
  const CyclicTri& matrix() const noexcept { return m_; }
  const FactoredTri& modified_factor() const noexcept { return fac_; }
  const std::vector<double>& z() const noexcept { return z_; }

  std::vector<double> solve(const std::vector<double>& rhs) const;

  /// In-place solve of columns [s0, s1) of an interleaved block with row
  /// stride `stride`. `scratch` must hold at least s1 - s0 values.
  void solve_strided(double* x, std::size_t stride, std::size_t s0, std::size_t s1,
                     double* scratch) const;

 private:
  CyclicTri m_;
  FactoredTri fac_;
  std::vector<double> z_;
  double ratio_ = 0;  // a / b
  double denom_ = 1;  // 1 + v.z
};

/// Navon reduction for CyclicPenta. The leading (n-2) block E is factored
/// once, together with E^-1 k, E^-T h and the inverse 2x2 Schur complement.
class CyclicPentaSolver {
 public:
  explicit CyclicPentaSolver(const CyclicPenta& m);

  std::size_t size() const noexcept { return m_.n; }
  const CyclicPenta& matrix() const noexcept { return m_; }

  std::vector<double> solve(const std::vector<double>& rhs) const;

  /// In-place solve of interleaved columns [s0, s1). `scratch` must hold at
  /// least 2 (s1 - s0) values.
  void solve_strided(double* x, std::size_t stride, std::size_t s0, std::size_t s1,
                     double* scratch) const;

 private:
  CyclicPenta m_;
  FactoredPenta core_;
  std::vector<double> ek1_, ek2_;  // E^-1 k columns
  std::vector<double> eh1_, eh2_;  // E^-T h columns
  double sinv_[4] = {1, 0, 0, 1};  // row-major inverse Schur complement
};

std::vector<double> solve_cyclic_tri(const CyclicTri& m, const std::vector<double>& rhs);
std::vector<double> solve_cyclic_penta(const CyclicPenta& m, const std::vector<double>& rhs);

// Strided sweep kernels shared by the single-system and batched paths.
// Column s of an interleaved block holds entry i at x[i * stride + s].
void penta_solve_strided(const FactoredPenta& f, double* x, std::size_t stride,
                         std::size_t s0, std::size_t s1);
void thomas_solve_strided(const FactoredTri& f, double* x, std::size_t stride,
                          std::size_t s0, std::size_t s1);

}  // namespace pentakit
