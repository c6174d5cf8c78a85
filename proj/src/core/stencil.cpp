#include "pentakit/stencil.hpp"

#include <algorithm>
#include <cmath>

#include "pentakit/error.hpp"

namespace pentakit {

namespace {

std::size_t wrap(long i, std::size_t n) {
  const long m = static_cast<long>(n);
  long r = i % m;
  return static_cast<std::size_t>(r < 0 ? r + m : r);
}

void check_extents(const StencilSpec& spec, std::size_t nx, std::size_t ny) {
  if (spec.left >= nx || spec.right >= nx || spec.top >= ny || spec.bottom >= ny ||
      spec.left + spec.right >= nx || spec.top + spec.bottom >= ny) {
    raise(ErrorCode::WindowTooLarge, "stencil window does not fit the grid");
  }
  if (const auto* lw = std::get_if<LinearWeights>(&spec.kind)) {
    if (lw->weights.size() != spec.window_size()) {
      raise(ErrorCode::InvalidArgument, "weight count does not match window size");
    }
  } else if (std::get<NonlinearKernel>(spec.kind).fn == nullptr) {
    raise(ErrorCode::InvalidArgument, "nonlinear stencil without kernel");
  }
}

void check_direction(const StencilSpec& spec, Direction d) {
  const bool has_x = spec.left + spec.right > 0;
  const bool has_y = spec.top + spec.bottom > 0;
  if ((d == Direction::X && has_y) || (d == Direction::Y && has_x)) {
    raise(ErrorCode::InvalidArgument, "stencil extents inconsistent with direction");
  }
}

// out[i] = sum_k w[k] * in[i + k - left] over a contiguous periodic vector,
// accumulated in window order for every i.
void linear_row(const double* in, double* out, std::size_t n, std::size_t left,
                std::size_t right, const double* w, bool first) {
  const std::size_t width = left + right + 1;
  if (first) std::fill(out, out + n, 0.0);
  for (std::size_t k = 0; k < width; ++k) {
    const double wk = w[k];
    if (wk == 0.0) continue;
    const long off = static_cast<long>(k) - static_cast<long>(left);
    const std::size_t lo = left, hi = n - right;
    for (std::size_t i = 0; i < lo; ++i) out[i] += wk * in[wrap(static_cast<long>(i) + off, n)];
    const double* src = in + off;
    for (std::size_t i = lo; i < hi; ++i) out[i] += wk * src[i];
    for (std::size_t i = hi; i < n; ++i) out[i] += wk * in[wrap(static_cast<long>(i) + off, n)];
  }
}

}  // namespace

StencilSpec StencilSpec::linear_x(std::size_t left, std::size_t right, std::vector<double> w,
                                  Boundary b) {
  return StencilSpec{left, right, 0, 0, LinearWeights{std::move(w)}, b};
}

StencilSpec StencilSpec::linear_y(std::size_t top, std::size_t bottom, std::vector<double> w,
                                  Boundary b) {
  return StencilSpec{0, 0, top, bottom, LinearWeights{std::move(w)}, b};
}

StencilSpec StencilSpec::linear_xy(std::size_t left, std::size_t right, std::size_t top,
                                   std::size_t bottom, std::vector<double> w, Boundary b) {
  return StencilSpec{left, right, top, bottom, LinearWeights{std::move(w)}, b};
}

StencilSpec StencilSpec::nonlinear(std::size_t left, std::size_t right, std::size_t top,
                                   std::size_t bottom, NonlinearKernel k, Boundary b) {
  return StencilSpec{left, right, top, bottom, std::move(k), b};
}

void apply_1d(std::span<const double> in, std::span<double> out, const StencilSpec& spec) {
  const std::size_t n = in.size();
  if (out.size() != n) raise(ErrorCode::DimensionMismatch, "output size differs from input");
  if (spec.top || spec.bottom) raise(ErrorCode::InvalidArgument, "stencil is not one-dimensional");
  check_extents(spec, n, 1);
  if (const auto* lw = std::get_if<LinearWeights>(&spec.kind)) {
    linear_row(in.data(), out.data(), n, spec.left, spec.right, lw->weights.data(), true);
  } else {
    const auto& k = std::get<NonlinearKernel>(spec.kind);
    std::vector<double> win(spec.width());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < win.size(); ++c)
        win[c] = in[wrap(static_cast<long>(i + c) - static_cast<long>(spec.left), n)];
      out[i] = k.fn(win.data(), k.coeffs.data(), i);
    }
  }
  if (spec.boundary == Boundary::NonPeriodicLeaveHalo) {
    for (std::size_t i = 0; i < spec.left; ++i) out[i] = in[i];
    for (std::size_t i = n - spec.right; i < n; ++i) out[i] = in[i];
  }
}

BatchField apply_1d_batch(const BatchField& b, const StencilSpec& spec, const Executor& ex) {
  BatchField out(b.n, b.m, b.layout);
  apply_1d_batch(b, spec, out, ex);
  return out;
}

void apply_1d_batch(const BatchField& b, const StencilSpec& spec, BatchField& out,
                    const Executor& ex) {
  if (spec.top || spec.bottom) raise(ErrorCode::InvalidArgument, "stencil is not one-dimensional");
  check_extents(spec, b.n, 1);
  if (out.n != b.n || out.m != b.m || out.layout != b.layout || out.data.size() != b.data.size()) {
    out = BatchField(b.n, b.m, b.layout);
  }
  if (b.layout == Layout::Contiguous) {
    ex.for_chunks(b.m, [&](std::size_t s0, std::size_t s1) {
      for (std::size_t s = s0; s < s1; ++s) {
        apply_1d(std::span<const double>(b.data.data() + s * b.n, b.n),
                 std::span<double>(out.data.data() + s * b.n, b.n), spec);
      }
    });
    return;
  }

  const std::size_t n = b.n, m = b.m;
  const bool halo = spec.boundary == Boundary::NonPeriodicLeaveHalo;
  if (const auto* lw = std::get_if<LinearWeights>(&spec.kind)) {
    const auto& w = lw->weights;
    ex.for_chunks(n, 1, [&](std::size_t r0, std::size_t r1) {
      for (std::size_t i = r0; i < r1; ++i) {
        double* o = out.data.data() + i * m;
        if (halo && (i < spec.left || i + spec.right >= n)) {
          std::copy_n(b.data.data() + i * m, m, o);
          continue;
        }
        std::fill(o, o + m, 0.0);
        for (std::size_t k = 0; k < w.size(); ++k) {
          const double wk = w[k];
          if (wk == 0.0) continue;
          const std::size_t src = wrap(static_cast<long>(i + k) - static_cast<long>(spec.left), n);
          const double* in = b.data.data() + src * m;
          for (std::size_t s = 0; s < m; ++s) o[s] += wk * in[s];
        }
      }
    });
    return;
  }
  out = apply_nonlinear(b, spec, ex);
}

BatchField apply_nonlinear(const BatchField& b, const StencilSpec& spec, const Executor& ex) {
  if (spec.top || spec.bottom) raise(ErrorCode::InvalidArgument, "stencil is not one-dimensional");
  check_extents(spec, b.n, 1);
  const auto* k = std::get_if<NonlinearKernel>(&spec.kind);
  if (!k) raise(ErrorCode::InvalidArgument, "stencil has no nonlinear kernel");
  BatchField out(b.n, b.m, b.layout);
  const std::size_t n = b.n;
  const bool halo = spec.boundary == Boundary::NonPeriodicLeaveHalo;
  ex.for_chunks(b.m, [&](std::size_t s0, std::size_t s1) {
    std::vector<double> win(spec.width());
    for (std::size_t s = s0; s < s1; ++s) {
      for (std::size_t i = 0; i < n; ++i) {
        if (halo && (i < spec.left || i + spec.right >= n)) {
          out.at(i, s) = b.at(i, s);
          continue;
        }
        for (std::size_t c = 0; c < win.size(); ++c)
          win[c] = b.at(wrap(static_cast<long>(i + c) - static_cast<long>(spec.left), n), s);
        out.at(i, s) = k->fn(win.data(), k->coeffs.data(), b.index(i, s));
      }
    }
  });
  return out;
}

void apply_2d(const Field2D& f, const StencilSpec& spec, Direction direction, Field2D& out,
              const Executor& ex) {
  check_direction(spec, direction);
  check_extents(spec, f.nx, f.ny);
  if (!std::holds_alternative<LinearWeights>(spec.kind)) {
    out = apply_nonlinear(f, spec, ex);
    return;
  }
  if (out.nx != f.nx || out.ny != f.ny || out.values.size() != f.values.size()) {
    out = Field2D(f.nx, f.ny, f.dx, f.dy);
  }
  out.dx = f.dx;
  out.dy = f.dy;
  const auto& w = std::get<LinearWeights>(spec.kind).weights;
  const std::size_t nx = f.nx, ny = f.ny, width = spec.width();
  const bool halo = spec.boundary == Boundary::NonPeriodicLeaveHalo;

  ex.for_chunks(ny, 1, [&](std::size_t j0, std::size_t j1) {
    for (std::size_t j = j0; j < j1; ++j) {
      double* o = out.values.data() + j * nx;
      const double* self = f.values.data() + j * nx;
      if (halo && (j < spec.top || j + spec.bottom >= ny)) {
        std::copy_n(self, nx, o);
        continue;
      }
      bool first = true;
      for (std::size_t r = 0; r < spec.height(); ++r) {
        const std::size_t src = wrap(static_cast<long>(j + r) - static_cast<long>(spec.top), ny);
        linear_row(f.values.data() + src * nx, o, nx, spec.left, spec.right, w.data() + r * width,
                   first);
        first = false;
      }
      if (halo) {
        for (std::size_t i = 0; i < spec.left; ++i) o[i] = self[i];
        for (std::size_t i = nx - spec.right; i < nx; ++i) o[i] = self[i];
      }
    }
  });
}

Field2D apply_2d(const Field2D& f, const StencilSpec& spec, Direction direction,
                 const Executor& ex) {
  Field2D out(f.nx, f.ny, f.dx, f.dy);
  apply_2d(f, spec, direction, out, ex);
  return out;
}

Field2D apply_nonlinear(const Field2D& f, const StencilSpec& spec, const Executor& ex) {
  check_extents(spec, f.nx, f.ny);
  const auto* k = std::get_if<NonlinearKernel>(&spec.kind);
  if (!k) raise(ErrorCode::InvalidArgument, "stencil has no nonlinear kernel");
  Field2D out(f.nx, f.ny, f.dx, f.dy);
  const std::size_t nx = f.nx, ny = f.ny, width = spec.width();
  const bool halo = spec.boundary == Boundary::NonPeriodicLeaveHalo;
  ex.for_chunks(ny, 1, [&](std::size_t j0, std::size_t j1) {
    std::vector<double> win(spec.window_size());
    for (std::size_t j = j0; j < j1; ++j) {
      const bool halo_row = halo && (j < spec.top || j + spec.bottom >= ny);
      for (std::size_t i = 0; i < nx; ++i) {
        if (halo_row || (halo && (i < spec.left || i + spec.right >= nx))) {
          out.at(i, j) = f.at(i, j);
          continue;
        }
        for (std::size_t r = 0; r < spec.height(); ++r) {
          const std::size_t jj = wrap(static_cast<long>(j + r) - static_cast<long>(spec.top), ny);
          for (std::size_t c = 0; c < width; ++c) {
            const std::size_t ii =
                wrap(static_cast<long>(i + c) - static_cast<long>(spec.left), nx);
            win[r * width + c] = f.at(ii, jj);
          }
        }
        out.at(i, j) = k->fn(win.data(), k->coeffs.data(), j * nx + i);
      }
    }
  });
  return out;
}

namespace kernels {

double centre(const double* w, const double* coeffs, std::size_t) {
  return w[static_cast<std::size_t>(coeffs[0])];
}

double laplacian_cubic(const double* w, const double* coeffs, std::size_t) {
  auto n = [&](std::size_t k) { return w[k] * w[k] * w[k] - w[k]; };
  // 3x3 window: 1 = north, 3 = west, 4 = centre, 5 = east, 7 = south.
  return coeffs[0] * (n(3) - 2.0 * n(4) + n(5)) + coeffs[1] * (n(1) - 2.0 * n(4) + n(7));
}

double laplacian_cubic_1d(const double* w, const double* coeffs, std::size_t) {
  auto n = [&](std::size_t k) { return w[k] * w[k] * w[k] - w[k]; };
  return coeffs[0] * (n(0) - 2.0 * n(1) + n(2));
}

}  // namespace kernels

KernelFn kernel_by_id(const std::string& id) {
  if (id == "centre") return &kernels::centre;
  if (id == "laplacian_cubic") return &kernels::laplacian_cubic;
  if (id == "laplacian_cubic_1d") return &kernels::laplacian_cubic_1d;
  return nullptr;
}

void weno_deriv(std::span<const double> f, double dx, bool upwind_from_left,
                std::span<double> out) {
  const std::size_t n = f.size();
  if (n < 7) raise(ErrorCode::InvalidArgument, "WENO needs at least 7 points");
  if (out.size() != n) raise(ErrorCode::DimensionMismatch, "output size differs from input");
  const double inv = 1.0 / dx;
  // Backward differences D-f_i = (f_i - f_{i-1}) / dx.
  std::vector<double> dm(n);
  for (std::size_t i = 0; i < n; ++i) dm[i] = (f[i] - f[wrap(static_cast<long>(i) - 1, n)]) * inv;
  auto at = [&](long i) { return dm[wrap(i, n)]; };

  for (std::size_t i = 0; i < n; ++i) {
    const long li = static_cast<long>(i);
    double v1, v2, v3, v4, v5;
    if (upwind_from_left) {
      v1 = at(li - 2);
      v2 = at(li - 1);
      v3 = at(li);
      v4 = at(li + 1);
      v5 = at(li + 2);
    } else {
      // D+f_i = D-f_{i+1}, mirrored.
      v1 = at(li + 3);
      v2 = at(li + 2);
      v3 = at(li + 1);
      v4 = at(li);
      v5 = at(li - 1);
    }
    const double p1 = v1 / 3.0 - 7.0 * v2 / 6.0 + 11.0 * v3 / 6.0;
    const double p2 = -v2 / 6.0 + 5.0 * v3 / 6.0 + v4 / 3.0;
    const double p3 = v3 / 3.0 + 5.0 * v4 / 6.0 - v5 / 6.0;

    const double s1 = 13.0 / 12.0 * (v1 - 2 * v2 + v3) * (v1 - 2 * v2 + v3) +
                      0.25 * (v1 - 4 * v2 + 3 * v3) * (v1 - 4 * v2 + 3 * v3);
    const double s2 = 13.0 / 12.0 * (v2 - 2 * v3 + v4) * (v2 - 2 * v3 + v4) +
                      0.25 * (v2 - v4) * (v2 - v4);
    const double s3 = 13.0 / 12.0 * (v3 - 2 * v4 + v5) * (v3 - 2 * v4 + v5) +
                      0.25 * (3 * v3 - 4 * v4 + v5) * (3 * v3 - 4 * v4 + v5);

    const double a1 = 0.1 / ((s1 + kWenoEpsilon) * (s1 + kWenoEpsilon));
    const double a2 = 0.6 / ((s2 + kWenoEpsilon) * (s2 + kWenoEpsilon));
    const double a3 = 0.3 / ((s3 + kWenoEpsilon) * (s3 + kWenoEpsilon));
    const double sum = a1 + a2 + a3;
    out[i] = (a1 * p1 + a2 * p2 + a3 * p3) / sum;
  }
}

std::vector<double> weno_deriv(std::span<const double> f, double dx, bool upwind_from_left) {
  std::vector<double> out(f.size());
  weno_deriv(f, dx, upwind_from_left, out);
  return out;
}

namespace weights {

std::vector<double> second_derivative(double dx) {
  const double s = 1.0 / (dx * dx);
  return {s, -2.0 * s, s};
}

std::vector<double> fourth_derivative(double dx) {
  const double s = 1.0 / (dx * dx * dx * dx);
  return {s, -4.0 * s, 6.0 * s, -4.0 * s, s};
}

std::vector<double> laplacian_5pt(double dx, double dy) {
  const double sx = 1.0 / (dx * dx), sy = 1.0 / (dy * dy);
  return {0, sy, 0, sx, -2.0 * sx - 2.0 * sy, sx, 0, sy, 0};
}

std::vector<double> biharmonic_13pt(double dx, double dy) {
  const double x4 = 1.0 / (dx * dx * dx * dx), y4 = 1.0 / (dy * dy * dy * dy);
  const double xy = 1.0 / (dx * dx * dy * dy);
  std::vector<double> w(25, 0.0);
  auto at = [&](int di, int dj) -> double& { return w[(dj + 2) * 5 + (di + 2)]; };
  at(0, 0) = 6 * x4 + 6 * y4 + 8 * xy;
  at(-1, 0) = at(1, 0) = -4 * x4 - 4 * xy;
  at(0, -1) = at(0, 1) = -4 * y4 - 4 * xy;
  at(-2, 0) = at(2, 0) = x4;
  at(0, -2) = at(0, 2) = y4;
  at(-1, -1) = at(1, -1) = at(-1, 1) = at(1, 1) = 2 * xy;
  return w;
}

std::vector<double> cross_derivative(double dx, double dy) {
  const double s = 1.0 / (dx * dx * dy * dy);
  return {s, -2 * s, s, -2 * s, 4 * s, -2 * s, s, -2 * s, s};
}

}  // namespace weights

}  // namespace pentakit
