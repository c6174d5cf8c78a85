#include "pentakit/banded.hpp"

#include <cmath>
#include <string>

#include "pentakit/error.hpp"

namespace pentakit {

namespace {

void check_pivot(double p, std::size_t row) {
  if (!(std::fabs(p) >= kPivotTolerance)) {
    throw Error(ErrorCode::ZeroPivot, "zero pivot at row " + std::to_string(row),
                static_cast<long>(row));
  }
}

void check_rhs(std::size_t n, std::size_t got) {
  if (n != got) {
    raise(ErrorCode::DimensionMismatch,
          "rhs length " + std::to_string(got) + " does not match system size " +
              std::to_string(n));
  }
}

}  // namespace

TriDiag TriDiag::constant(std::size_t n, double a, double b, double c) {
  return TriDiag{std::vector<double>(n, a), std::vector<double>(n, b), std::vector<double>(n, c)};
}

PentaDiag PentaDiag::constant(std::size_t n, double a, double b, double c, double d, double e) {
  return PentaDiag{std::vector<double>(n, a), std::vector<double>(n, b), std::vector<double>(n, c),
                   std::vector<double>(n, d), std::vector<double>(n, e)};
}

PentaDiag PentaDiag::transposed() const {
  const std::size_t n = size();
  PentaDiag t{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), c,
              std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= 2) t.a[i] = e[i - 2];
    if (i >= 1) t.b[i] = d[i - 1];
    if (i + 1 < n) t.d[i] = b[i + 1];
    if (i + 2 < n) t.e[i] = a[i + 2];
  }
  return t;
}

FactoredPenta penta_factor(const PentaDiag& m) {
  const std::size_t n = m.size();
  if (n < 5) raise(ErrorCode::InvalidArgument, "pentadiagonal system needs n >= 5");
  if (m.a.size() != n || m.b.size() != n || m.d.size() != n || m.e.size() != n) {
    raise(ErrorCode::DimensionMismatch, "pentadiagonal bands differ in length");
  }
  FactoredPenta f;
  f.alpha.assign(n, 0.0);
  f.beta.assign(n, 0.0);
  f.gamma.assign(n, 0.0);
  f.delta.assign(n, 0.0);
  f.epsilon.assign(n, 0.0);
  auto& al = f.alpha;
  auto& be = f.beta;
  auto& ga = f.gamma;
  auto& de = f.delta;

  al[0] = m.c[0];
  check_pivot(al[0], 0);
  ga[0] = m.d[0] / al[0];
  de[0] = m.e[0] / al[0];

  be[1] = m.b[1];
  al[1] = m.c[1] - be[1] * ga[0];
  check_pivot(al[1], 1);
  ga[1] = (m.d[1] - be[1] * de[0]) / al[1];
  de[1] = m.e[1] / al[1];

  for (std::size_t i = 2; i + 2 < n; ++i) {
    be[i] = m.b[i] - m.a[i] * ga[i - 2];
    al[i] = m.c[i] - m.a[i] * de[i - 2] - be[i] * ga[i - 1];
    check_pivot(al[i], i);
    ga[i] = (m.d[i] - be[i] * de[i - 1]) / al[i];
    de[i] = m.e[i] / al[i];
  }

  const std::size_t p = n - 2;
  be[p] = m.b[p] - m.a[p] * ga[p - 2];
  al[p] = m.c[p] - m.a[p] * de[p - 2] - be[p] * ga[p - 1];
  check_pivot(al[p], p);
  ga[p] = (m.d[p] - be[p] * de[p - 1]) / al[p];

  const std::size_t q = n - 1;
  be[q] = m.b[q] - m.a[q] * ga[q - 2];
  al[q] = m.c[q] - m.a[q] * de[q - 2] - be[q] * ga[q - 1];
  check_pivot(al[q], q);

  for (std::size_t i = 2; i < n; ++i) f.epsilon[i] = m.a[i];
  return f;
}

void penta_solve_strided(const FactoredPenta& f, double* x, std::size_t stride, std::size_t s0,
                         std::size_t s1) {
  const std::size_t n = f.size();
  const double* al = f.alpha.data();
  const double* be = f.beta.data();
  const double* ga = f.gamma.data();
  const double* de = f.delta.data();
  const double* ep = f.epsilon.data();

  {
    double* r0 = x;
    double* r1 = x + stride;
    for (std::size_t s = s0; s < s1; ++s) r0[s] = r0[s] / al[0];
    for (std::size_t s = s0; s < s1; ++s) r1[s] = (r1[s] - be[1] * r0[s]) / al[1];
  }
  for (std::size_t i = 2; i < n; ++i) {
    double* ri = x + i * stride;
    const double* rm1 = ri - stride;
    const double* rm2 = rm1 - stride;
    const double e = ep[i], b = be[i], a = al[i];
    for (std::size_t s = s0; s < s1; ++s) ri[s] = (ri[s] - e * rm2[s] - b * rm1[s]) / a;
  }

  {
    double* rp = x + (n - 2) * stride;
    const double* rq = rp + stride;
    const double g = ga[n - 2];
    for (std::size_t s = s0; s < s1; ++s) rp[s] = rp[s] - g * rq[s];
  }
  for (std::size_t i = n - 2; i-- > 0;) {
    double* ri = x + i * stride;
    const double* rp1 = ri + stride;
    const double* rp2 = rp1 + stride;
    const double g = ga[i], d = de[i];
    for (std::size_t s = s0; s < s1; ++s) ri[s] = ri[s] - g * rp1[s] - d * rp2[s];
  }
}

std::vector<double> penta_solve(const FactoredPenta& f, const std::vector<double>& rhs) {
  check_rhs(f.size(), rhs.size());
  std::vector<double> x = rhs;
  penta_solve_strided(f, x.data(), 1, 0, 1);
  return x;
}

FactoredTri thomas_factor(const TriDiag& m) {
  const std::size_t n = m.size();
  if (n < 3) raise(ErrorCode::InvalidArgument, "tridiagonal system needs n >= 3");
  if (m.a.size() != n || m.c.size() != n) {
    raise(ErrorCode::DimensionMismatch, "tridiagonal bands differ in length");
  }
  FactoredTri f;
  f.a = m.a;
  f.b = m.b;
  f.chat.assign(n, 0.0);
  f.denom.assign(n, 0.0);
  f.a[0] = 0.0;

  f.denom[0] = m.b[0];
  check_pivot(f.denom[0], 0);
  f.chat[0] = m.c[0] / m.b[0];
  for (std::size_t i = 1; i < n; ++i) {
    f.denom[i] = m.b[i] - m.a[i] * f.chat[i - 1];
    check_pivot(f.denom[i], i);
    f.chat[i] = (i + 1 < n) ? m.c[i] / f.denom[i] : 0.0;
  }
  return f;
}

void thomas_solve_strided(const FactoredTri& f, double* x, std::size_t stride, std::size_t s0,
                          std::size_t s1) {
  const std::size_t n = f.size();
  const double* a = f.a.data();
  const double* ch = f.chat.data();
  const double* dn = f.denom.data();

  for (std::size_t s = s0; s < s1; ++s) x[s] = x[s] / dn[0];
  for (std::size_t i = 1; i < n; ++i) {
    double* ri = x + i * stride;
    const double* rm1 = ri - stride;
    const double ai = a[i], di = dn[i];
    for (std::size_t s = s0; s < s1; ++s) ri[s] = (ri[s] - ai * rm1[s]) / di;
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    double* ri = x + i * stride;
    const double* rp1 = ri + stride;
    const double c = ch[i];
    for (std::size_t s = s0; s < s1; ++s) ri[s] = ri[s] - c * rp1[s];
  }
}

std::vector<double> thomas_solve(const FactoredTri& f, const std::vector<double>& rhs) {
  check_rhs(f.size(), rhs.size());
  std::vector<double> x = rhs;
  thomas_solve_strided(f, x.data(), 1, 0, 1);
  return x;
}

// Sherman-Morrison: A = A' + u v^T with u = (-b, 0, .., 0, c) and
// v = (1, 0, .., 0, -a/b). A' differs from the banded part of A only in the
// corners A'(0,0) = 2b and A'(n-1,n-1) = b + ac/b.
CyclicTriSolver::CyclicTriSolver(const CyclicTri& m) : m_(m) {
  const std::size_t n = m.n;
  if (n < 3) raise(ErrorCode::InvalidArgument, "cyclic tridiagonal system needs n >= 3");
  if (!(std::fabs(m.b) >= kPivotTolerance)) {
    throw Error(ErrorCode::ZeroPivot, "cyclic tridiagonal needs b != 0", 0);
  }
  TriDiag ap = TriDiag::constant(n, m.a, m.b, m.c);
  ap.b[0] = 2.0 * m.b;
  ap.b[n - 1] = m.b + m.a * m.c / m.b;
  fac_ = thomas_factor(ap);

  ratio_ = m.a / m.b;
  z_.assign(n, 0.0);
  z_[0] = -m.b;
  z_[n - 1] = m.c;
  thomas_solve_strided(fac_, z_.data(), 1, 0, 1);
  denom_ = 1.0 + (z_[0] - ratio_ * z_[n - 1]);
  if (!(std::fabs(denom_) >= kPivotTolerance)) {
    raise(ErrorCode::SingularCorrection, "Sherman-Morrison denominator 1 + v.z vanishes");
  }
}

void CyclicTriSolver::solve_strided(double* x, std::size_t stride, std::size_t s0, std::size_t s1,
                                    double* scratch) const {
  const std::size_t n = m_.n;
  thomas_solve_strided(fac_, x, stride, s0, s1);
  const double* first = x;
  const double* last = x + (n - 1) * stride;
  double* coef = scratch - s0;
  for (std::size_t s = s0; s < s1; ++s) coef[s] = (first[s] - ratio_ * last[s]) / denom_;
  for (std::size_t i = 0; i < n; ++i) {
    double* ri = x + i * stride;
    const double zi = z_[i];
    for (std::size_t s = s0; s < s1; ++s) ri[s] = ri[s] - coef[s] * zi;
  }
}

std::vector<double> CyclicTriSolver::solve(const std::vector<double>& rhs) const {
  check_rhs(m_.n, rhs.size());
  std::vector<double> x = rhs;
  double scratch = 0.0;
  solve_strided(x.data(), 1, 0, 1, &scratch);
  return x;
}

// Navon: split x = (X, x_{n-2}, x_{n-1}). With E the leading (n-2) block,
//   E X + k x_last = f_head,   h^T X + B x_last = f_tail,
// so S x_last = f_tail - h^T E^-1 f_head with S = B - h^T E^-1 k, and
// X = E^-1 f_head - (E^-1 k) x_last.
CyclicPentaSolver::CyclicPentaSolver(const CyclicPenta& m) : m_(m) {
  const std::size_t n = m.n;
  if (n < 7) raise(ErrorCode::InvalidArgument, "cyclic pentadiagonal system needs n >= 7");
  const std::size_t k = n - 2;
  core_ = penta_factor(PentaDiag::constant(k, m.a, m.b, m.c, m.d, m.e));
  const FactoredPenta core_t = penta_factor(PentaDiag::constant(k, m.e, m.d, m.c, m.b, m.a));

  ek1_.assign(k, 0.0);
  ek2_.assign(k, 0.0);
  eh1_.assign(k, 0.0);
  eh2_.assign(k, 0.0);
  // Coupling of the core rows to x_{n-2} and x_{n-1}.
  ek1_[0] = m.a;
  ek1_[k - 2] = m.e;
  ek1_[k - 1] = m.d;
  ek2_[0] = m.b;
  ek2_[1] = m.a;
  ek2_[k - 1] = m.e;
  // Coupling of the last two rows to the core unknowns.
  eh1_[0] = m.e;
  eh1_[k - 2] = m.a;
  eh1_[k - 1] = m.b;
  eh2_[0] = m.d;
  eh2_[1] = m.e;
  eh2_[k - 1] = m.a;
  const std::vector<double> h1 = eh1_, h2 = eh2_;

  penta_solve_strided(core_, ek1_.data(), 1, 0, 1);
  penta_solve_strided(core_, ek2_.data(), 1, 0, 1);
  penta_solve_strided(core_t, eh1_.data(), 1, 0, 1);
  penta_solve_strided(core_t, eh2_.data(), 1, 0, 1);

  double s00 = m.c, s01 = m.d, s10 = m.b, s11 = m.c;
  for (std::size_t i = 0; i < k; ++i) {
    s00 -= h1[i] * ek1_[i];
    s01 -= h1[i] * ek2_[i];
    s10 -= h2[i] * ek1_[i];
    s11 -= h2[i] * ek2_[i];
  }
  const double det = s00 * s11 - s01 * s10;
  if (!(std::fabs(det) >= kPivotTolerance)) {
    raise(ErrorCode::Singular2x2, "Schur complement of cyclic pentadiagonal system is singular");
  }
  sinv_[0] = s11 / det;
  sinv_[1] = -s01 / det;
  sinv_[2] = -s10 / det;
  sinv_[3] = s00 / det;
}

void CyclicPentaSolver::solve_strided(double* x, std::size_t stride, std::size_t s0,
                                      std::size_t s1, double* scratch) const {
  const std::size_t n = m_.n;
  const std::size_t k = n - 2;
  const std::size_t w = s1 - s0;
  double* r1 = scratch - s0;
  double* r2 = scratch + w - s0;
  double* t1 = x + k * stride;
  double* t2 = t1 + stride;

  for (std::size_t s = s0; s < s1; ++s) {
    r1[s] = t1[s];
    r2[s] = t2[s];
  }
  for (std::size_t i = 0; i < k; ++i) {
    const double* ri = x + i * stride;
    const double h1 = eh1_[i], h2 = eh2_[i];
    for (std::size_t s = s0; s < s1; ++s) {
      r1[s] = r1[s] - h1 * ri[s];
      r2[s] = r2[s] - h2 * ri[s];
    }
  }
  for (std::size_t s = s0; s < s1; ++s) {
    t1[s] = sinv_[0] * r1[s] + sinv_[1] * r2[s];
    t2[s] = sinv_[2] * r1[s] + sinv_[3] * r2[s];
  }

  penta_solve_strided(core_, x, stride, s0, s1);
  for (std::size_t i = 0; i < k; ++i) {
    double* ri = x + i * stride;
    const double k1 = ek1_[i], k2 = ek2_[i];
    for (std::size_t s = s0; s < s1; ++s) ri[s] = ri[s] - k1 * t1[s] - k2 * t2[s];
  }
}

std::vector<double> CyclicPentaSolver::solve(const std::vector<double>& rhs) const {
  check_rhs(m_.n, rhs.size());
  std::vector<double> x = rhs;
  double scratch[2];
  solve_strided(x.data(), 1, 0, 1, scratch);
  return x;
}

std::vector<double> solve_cyclic_tri(const CyclicTri& m, const std::vector<double>& rhs) {
  return CyclicTriSolver(m).solve(rhs);
}

std::vector<double> solve_cyclic_penta(const CyclicPenta& m, const std::vector<double>& rhs) {
  return CyclicPentaSolver(m).solve(rhs);
}

}  // namespace pentakit
