#pragma once

// Finite-difference stencil application on batched 1D and on 2D fields.

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pentakit/batch.hpp"
#include "pentakit/parallel.hpp"

namespace pentakit {

enum class Boundary { Periodic, NonPeriodicLeaveHalo };
enum class Direction { X, Y, XY };

/// Pointwise kernel over a window. `window` is row-major over the stencil
/// extents; `site` is the flat index of the output point.
using KernelFn = double (*)(const double* window, const double* coeffs, std::size_t site);

struct LinearWeights {
  std::vector<double> weights;  // row-major over the window
};

struct NonlinearKernel {
  KernelFn fn = nullptr;
  std::vector<double> coeffs;
  std::string id;
};

struct StencilSpec {
  std::size_t left = 0, right = 0;   // x extents
  std::size_t top = 0, bottom = 0;   // y extents (top is toward j - 1)
  std::variant<LinearWeights, NonlinearKernel> kind;
  Boundary boundary = Boundary::Periodic;

  std::size_t width() const noexcept { return left + right + 1; }
  std::size_t height() const noexcept { return top + bottom + 1; }
  std::size_t window_size() const noexcept { return width() * height(); }

  static StencilSpec linear_x(std::size_t left, std::size_t right, std::vector<double> w,
                              Boundary b = Boundary::Periodic);
  static StencilSpec linear_y(std::size_t top, std::size_t bottom, std::vector<double> w,
                              Boundary b = Boundary::Periodic);
  static StencilSpec linear_xy(std::size_t left, std::size_t right, std::size_t top,
                               std::size_t bottom, std::vector<double> w,
                               Boundary b = Boundary::Periodic);
  static StencilSpec nonlinear(std::size_t left, std::size_t right, std::size_t top,
                               std::size_t bottom, NonlinearKernel k,
                               Boundary b = Boundary::Periodic);
};

/// Row-major 2D field: value (i, j) at values[j * nx + i].
struct Field2D {
  std::size_t nx = 0, ny = 0;
  double dx = 1, dy = 1;
  std::vector<double> values;

  Field2D() = default;
  Field2D(std::size_t nx_, std::size_t ny_, double dx_, double dy_, double fill = 0.0)
      : nx(nx_), ny(ny_), dx(dx_), dy(dy_), values(nx_ * ny_, fill) {}

  double& at(std::size_t i, std::size_t j) noexcept { return values[j * nx + i]; }
  double at(std::size_t i, std::size_t j) const noexcept { return values[j * nx + i]; }
};

/// Applies a 1D stencil (top = bottom = 0) to every system of a batch.
BatchField apply_1d_batch(const BatchField& b, const StencilSpec& spec,
                          const Executor& ex = Executor::serial());
/// Output variant reusing `out` storage; `out` must not alias `b`.
void apply_1d_batch(const BatchField& b, const StencilSpec& spec, BatchField& out,
                    const Executor& ex = Executor::serial());

/// Applies a 1D stencil to a single periodic or halo-bounded vector.
void apply_1d(std::span<const double> in, std::span<double> out, const StencilSpec& spec);

Field2D apply_2d(const Field2D& f, const StencilSpec& spec, Direction direction,
                 const Executor& ex = Executor::serial());
/// In-place output variant; `out` must be sized like `f` and must not alias it.
void apply_2d(const Field2D& f, const StencilSpec& spec, Direction direction, Field2D& out,
              const Executor& ex = Executor::serial());

Field2D apply_nonlinear(const Field2D& f, const StencilSpec& spec,
                        const Executor& ex = Executor::serial());
BatchField apply_nonlinear(const BatchField& b, const StencilSpec& spec,
                           const Executor& ex = Executor::serial());

/// Built-in kernels.
namespace kernels {
/// Returns the window centre; coeffs = {centre index}.
double centre(const double* w, const double* coeffs, std::size_t site);
/// Five-point Laplacian of C^3 - C on a 3x3 window; coeffs = {1/dx^2, 1/dy^2}.
double laplacian_cubic(const double* w, const double* coeffs, std::size_t site);
/// Laplacian of C^3 - C on a 3-point 1D window; coeffs = {1/dx^2}.
double laplacian_cubic_1d(const double* w, const double* coeffs, std::size_t site);
}  // namespace kernels

/// Looks up a built-in kernel by id ("centre", "laplacian_cubic",
/// "laplacian_cubic_1d"); returns nullptr if unknown.
KernelFn kernel_by_id(const std::string& id);

inline constexpr double kWenoEpsilon = 1e-6;

/// Fifth-order Hamilton-Jacobi WENO approximation of df/dx on a periodic
/// grid. With upwind_from_left the D- (left-biased) stencil is used,
/// otherwise D+. Needs at least 7 points.
std::vector<double> weno_deriv(std::span<const double> f, double dx, bool upwind_from_left);
void weno_deriv(std::span<const double> f, double dx, bool upwind_from_left, std::span<double> out);

/// The one-sided derivative selected for an advection term +v df/dx on the
/// right-hand side: D+ for v > 0, D- for v < 0 (either for v = 0).
inline bool weno_left_biased_for_speed(double v) noexcept { return v < 0.0; }

/// Standard weight sets.
namespace weights {
std::vector<double> second_derivative(double dx);  // (1, -2, 1) / dx^2
std::vector<double> fourth_derivative(double dx);  // (1, -4, 6, -4, 1) / dx^4
std::vector<double> laplacian_5pt(double dx, double dy);
std::vector<double> biharmonic_13pt(double dx, double dy);  // 5x5 window
std::vector<double> cross_derivative(double dx, double dy);  // d^4/dx^2dy^2, 3x3 window
}  // namespace weights

}  // namespace pentakit
