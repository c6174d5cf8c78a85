#include "pentakit/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pentakit/error.hpp"

namespace pentakit {

namespace {

void require_positive(const SchemeParams& p) {
  if (!(p.dt > 0.0) || !(p.dx > 0.0)) raise(ErrorCode::InvalidArgument, "dt and dx must be positive");
}

BatchField as_batch(const std::vector<double>& v) {
  BatchField b(v.size(), 1);
  b.data = v;
  return b;
}

}  // namespace

SimState1D make_state(std::vector<double> c0) {
  SimState1D s;
  s.prev = c0;
  s.c = std::move(c0);
  return s;
}

SimState2D make_state(Field2D c0) {
  SimState2D s;
  s.prev = c0;
  s.c = std::move(c0);
  return s;
}

std::vector<double> uniform_field(std::size_t count, double lo, double hi, std::uint64_t key) {
  const CounterRng rng(key);
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) v[i] = lo + (hi - lo) * rng.uniform_at(i);
  return v;
}

double max_stable_dt_ftcs(double alpha, double dx) {
  if (!(alpha > 0.0)) raise(ErrorCode::InvalidArgument, "alpha must be positive");
  return dx * dx / (2.0 * alpha);
}

void step_heat_ftcs(SimState1D& s, const SchemeParams& p, bool allow_unstable) {
  require_positive(p);
  const double sg = p.alpha * p.dt / (p.dx * p.dx);
  if (sg > 0.5 && !allow_unstable) {
    raise(ErrorCode::StabilityViolation,
          "FTCS requires alpha dt / dx^2 <= 1/2, got " + std::to_string(sg));
  }
  const std::size_t n = s.c.size();
  if (n < 3) raise(ErrorCode::InvalidArgument, "FTCS needs n >= 3");
  s.prev.resize(n);
  const double* t = s.c.data();
  double* o = s.prev.data();
  const double mid = 1.0 - 2.0 * sg;
  o[0] = sg * t[1] + mid * t[0] + sg * t[n - 1];
  for (std::size_t i = 1; i + 1 < n; ++i) o[i] = sg * t[i + 1] + mid * t[i] + sg * t[i - 1];
  o[n - 1] = sg * t[0] + mid * t[n - 1] + sg * t[n - 2];
  s.c.swap(s.prev);
  s.t += p.dt;
  ++s.step;
}

DiffusionCN::DiffusionCN(std::size_t n, const SchemeParams& p)
    : sigma_(p.D * p.dt / (2.0 * p.dx * p.dx)),
      dt_(p.dt),
      rhs_(StencilSpec::linear_x(1, 1, {sigma_, 1.0 - 2.0 * sigma_, sigma_})),
      solver_(CyclicTri{n, -sigma_, 1.0 + 2.0 * sigma_, -sigma_}) {
  require_positive(p);
}

void DiffusionCN::step(BatchField& c, const Executor& ex) {
  apply_1d_batch(c, rhs_, work_, ex);
  solver_.solve_inplace(work_, ex);
  c.data.swap(work_.data);
}

void DiffusionCN::step(SimState1D& s) {
  BatchField b = as_batch(s.c);
  step(b);
  s.prev.swap(s.c);
  s.c = std::move(b.data);
  s.t += dt_;
  ++s.step;
}

HyperdiffusionCN::HyperdiffusionCN(std::size_t n, const SchemeParams& p)
    : sigma_(p.gamma * p.D * p.dt / (2.0 * std::pow(p.dx, 4))),
      dt_(p.dt),
      rhs_(StencilSpec::linear_x(
          2, 2, {-sigma_, 4.0 * sigma_, 1.0 - 6.0 * sigma_, 4.0 * sigma_, -sigma_})),
      solver_(CyclicPenta{n, sigma_, -4.0 * sigma_, 1.0 + 6.0 * sigma_, -4.0 * sigma_, sigma_}) {
  require_positive(p);
}

void HyperdiffusionCN::step(BatchField& c, const Executor& ex) {
  apply_1d_batch(c, rhs_, work_, ex);
  solver_.solve_inplace(work_, ex);
  c.data.swap(work_.data);
}

void HyperdiffusionCN::step(SimState1D& s) {
  BatchField b = as_batch(s.c);
  step(b);
  s.prev.swap(s.c);
  s.c = std::move(b.data);
  s.t += dt_;
  ++s.step;
}

namespace {

CyclicPenta ch_lhs(std::size_t n, double sg) {
  return CyclicPenta{n, sg, -4.0 * sg, 1.0 + 6.0 * sg, -4.0 * sg, sg};
}

}  // namespace

ChStepper1D::ChStepper1D(std::size_t n, const SchemeParams& p)
    : p_(p),
      n_(n),
      lap_(StencilSpec::linear_x(1, 1, weights::second_derivative(p.dx))),
      solver_(ch_lhs(n, p.gamma * p.D * p.dt / std::pow(p.dx, 4))) {
  require_positive(p);
  const double ax = p.D * p.dt / (p.dx * p.dx);
  lap_ = StencilSpec::linear_x(1, 1, {ax, -2.0 * ax, ax});
  if (p.f0 != 0.0) {
    forcing_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      forcing_[i] = p.dt * (p.f0 * p.k * std::cos(p.k * (static_cast<double>(i) * p.dx)));
    }
  }
}

void ChStepper1D::add_forcing(BatchField& rhs, const BatchField& c, const Executor& ex) const {
  const std::size_t n = n_, m = c.m;
  if (p_.v != 0.0) {
    const bool left = weno_left_biased_for_speed(p_.v);
    const double scale = p_.dt * p_.v;
    ex.for_chunks(m, [&](std::size_t s0, std::size_t s1) {
      std::vector<double> col(n), d(n);
      for (std::size_t s = s0; s < s1; ++s) {
        for (std::size_t i = 0; i < n; ++i) col[i] = c.data[i * m + s];
        weno_deriv(col, p_.dx, left, d);
        for (std::size_t i = 0; i < n; ++i) rhs.data[i * m + s] += scale * d[i];
      }
    });
  }
  if (!forcing_.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      double* r = rhs.data.data() + i * m;
      const double f = forcing_[i];
      for (std::size_t s = 0; s < m; ++s) r[s] += f;
    }
  }
}

void ChStepper1D::step(BatchField& c, const Executor& ex) {
  if (c.n != n_) raise(ErrorCode::DimensionMismatch, "field length differs from stepper size");
  if (nl_.data.size() != c.data.size()) nl_ = BatchField(c.n, c.m, c.layout);
  ex.for_chunks(c.data.size(), 4096, [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      const double v = c.data[k];
      nl_.data[k] = v * v * v - v;
    }
  });
  apply_1d_batch(nl_, lap_, rhs_, ex);
  ex.for_chunks(c.data.size(), 4096, [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) rhs_.data[k] = c.data[k] + rhs_.data[k];
  });
  if (forced()) add_forcing(rhs_, c, ex);
  solver_.solve_inplace(rhs_, ex);
  c.data.swap(rhs_.data);
}

void ChStepper1D::step(SimState1D& s) {
  BatchField b = as_batch(s.c);
  step(b);
  s.prev.swap(s.c);
  s.c = std::move(b.data);
  s.t += p_.dt;
  ++s.step;
}

void CookNoise::fill(std::size_t nx, std::size_t ny, double dx, double dy, double dt,
                     std::size_t step, std::vector<double>& eta, const Executor& ex) const {
  const std::size_t cells = nx * ny;
  eta.resize(cells);
  std::vector<double> rx(cells), ry(cells);
  const std::uint64_t base = static_cast<std::uint64_t>(step) * cells;
  ex.for_chunks(cells, 4096, [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      const auto [a, c] = rng_.normal_pair_at(base + k);
      rx[k] = a;
      ry[k] = c;
    }
  });
  const double amp = std::sqrt(sigma_ / (dx * dx * dt));
  const double hx = 1.0 / (2.0 * dx), hy = 1.0 / (2.0 * dy);
  ex.for_chunks(ny, 1, [&](std::size_t j0, std::size_t j1) {
    for (std::size_t j = j0; j < j1; ++j) {
      const std::size_t jm = (j + ny - 1) % ny, jp = (j + 1) % ny;
      for (std::size_t i = 0; i < nx; ++i) {
        const std::size_t im = (i + nx - 1) % nx, ip = (i + 1) % nx;
        const double div = (rx[j * nx + ip] - rx[j * nx + im]) * hx +
                           (ry[jp * nx + i] - ry[jm * nx + i]) * hy;
        eta[j * nx + i] = amp * div;
      }
    }
  });
}

void transpose(const double* in, double* out, std::size_t rows, std::size_t cols,
               const Executor& ex) {
  // Small tiles with contiguous writes; wide tiles thrash cache sets when the
  // row length is a power of two.
  constexpr std::size_t B = 16;
  const std::size_t row_blocks = (rows + B - 1) / B;
  ex.for_chunks(row_blocks, 1, [&](std::size_t rb0, std::size_t rb1) {
    for (std::size_t rb = rb0; rb < rb1; ++rb) {
      const std::size_t r0 = rb * B, r1 = std::min(rows, r0 + B);
      for (std::size_t c0 = 0; c0 < cols; c0 += B) {
        const std::size_t c1 = std::min(cols, c0 + B);
        for (std::size_t c = c0; c < c1; ++c)
          for (std::size_t r = r0; r < r1; ++r) out[c * rows + r] = in[r * cols + c];
      }
    }
  });
}

AdiCh2D::AdiCh2D(std::size_t n, const SchemeParams& p)
    : p_(p),
      n_(n),
      sigma_((2.0 / 3.0) * p.D * p.gamma * p.dt / std::pow(p.dx, 4)),
      bih_(StencilSpec::linear_xy(2, 2, 2, 2, weights::biharmonic_13pt(p.dx, p.dx))),
      lap_(StencilSpec::linear_xy(1, 1, 1, 1, weights::laplacian_5pt(p.dx, p.dx))),
      solver_(ch_lhs(n, sigma_)) {
  require_positive(p);
  if (p.dy != 0.0 && p.dy != p.dx) raise(ErrorCode::InvalidArgument, "ADI scheme needs dx == dy");
}

void AdiCh2D::step(SimState2D& s, const Executor& ex, const CookNoise* noise) {
  const std::size_t n = n_, cells = n * n;
  if (s.c.nx != n || s.c.ny != n || s.prev.values.size() != cells) {
    raise(ErrorCode::DimensionMismatch, "state does not match the stepper grid");
  }
  if (cbar_.values.size() != cells) {
    cbar_ = Field2D(n, n, p_.dx, p_.dx);
    nl_ = cbar_;
    w_ = BatchField(n, n);
    wt_ = BatchField(n, n);
  }
  const double* c = s.c.values.data();
  const double* pv = s.prev.values.data();
  double* cb = cbar_.values.data();
  double* nl = nl_.values.data();
  ex.for_chunks(n, 1, [&](std::size_t j0, std::size_t j1) {
    for (std::size_t k = j0 * n; k < j1 * n; ++k) {
      cb[k] = 2.0 * c[k] - pv[k];
      nl[k] = c[k] * c[k] * c[k] - c[k];
    }
  });
  apply_2d(cbar_, bih_, Direction::XY, bih_out_, ex);
  apply_2d(nl_, lap_, Direction::XY, lap_out_, ex);

  const bool noisy = noise != nullptr && noise->sigma() != 0.0;
  if (noisy) noise->fill(n, n, p_.dx, p_.dx, p_.dt, s.step, eta_, ex);

  const double two3 = 2.0 / 3.0;
  const double cb4 = two3 * p_.D * p_.gamma * p_.dt;
  const double cl = two3 * p_.D * p_.dt;
  const double cn = two3 * p_.dt;
  const double* bo = bih_out_.values.data();
  const double* lo = lap_out_.values.data();
  double* w = wt_.data.data();  // row-major scratch
  ex.for_chunks(n, 1, [&](std::size_t j0, std::size_t j1) {
    for (std::size_t k = j0 * n; k < j1 * n; ++k) {
      w[k] = -two3 * (c[k] - pv[k]) - cb4 * bo[k] + cl * lo[k];
    }
    if (noisy) {
      for (std::size_t k = j0 * n; k < j1 * n; ++k) w[k] += cn * eta_[k];
    }
  });

  // x-sweep: systems are rows, so transpose to make x the slow index.
  transpose(wt_.data.data(), w_.data.data(), n, n, ex);
  solver_.solve_inplace(w_, ex);
  // y-sweep: row-major storage already has y as the slow index.
  transpose(w_.data.data(), wt_.data.data(), n, n, ex);
  solver_.solve_inplace(wt_, ex);

  s.prev.values.swap(s.c.values);
  double* out = s.c.values.data();
  const double* v = wt_.data.data();
  ex.for_chunks(n, 1, [&](std::size_t j0, std::size_t j1) {
    for (std::size_t k = j0 * n; k < j1 * n; ++k) out[k] = cb[k] + v[k];
  });
  s.t += p_.dt;
  ++s.step;
}

void step_diffusion_cn(SimState1D& s, const SchemeParams& p) { DiffusionCN(s.c.size(), p).step(s); }

void step_hyperdiffusion_cn(SimState1D& s, const SchemeParams& p) {
  HyperdiffusionCN(s.c.size(), p).step(s);
}

void step_ch_1d(SimState1D& s, const SchemeParams& p) {
  SchemeParams q = p;
  q.f0 = 0.0;
  q.v = 0.0;
  ChStepper1D(s.c.size(), q).step(s);
}

void step_ch_forced_1d(SimState1D& s, const SchemeParams& p) { ChStepper1D(s.c.size(), p).step(s); }

void step_ch_2d_adi(SimState2D& s, const SchemeParams& p) { AdiCh2D(s.c.nx, p).step(s); }

void step_ch_cook_2d(SimState2D& s, const SchemeParams& p, const CounterRng& rng) {
  const CookNoise noise(rng, p.sigma_noise);
  AdiCh2D(s.c.nx, p).step(s, Executor::serial(), &noise);
}

}  // namespace pentakit
