#pragma once

// Time-stepping schemes built from the stencil engine and banded solvers.
// All grids are periodic with dx = L / N.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pentakit/batch.hpp"
#include "pentakit/parallel.hpp"
#include "pentakit/rng.hpp"
#include "pentakit/stencil.hpp"

namespace pentakit {

struct SchemeParams {
  double D = 1.0;       // mobility / diffusion coefficient
  double gamma = 0.01;  // interface parameter
  double alpha = 1.0;   // heat-equation diffusivity
  double dt = 0.0;
  double dx = 0.0;
  double dy = 0.0;
  double L = 0.0;
  double f0 = 0.0;  // forcing amplitude
  double k = 1.0;   // forcing wavenumber
  double v = 0.0;   // travelling-frame speed
  double sigma_noise = 0.0;
};

struct SimState1D {
  std::vector<double> c;
  std::vector<double> prev;
  double t = 0.0;
  std::size_t step = 0;
};

/// Two time levels; `prev` starts equal to `c`.
struct SimState2D {
  Field2D c;
  Field2D prev;
  double t = 0.0;
  std::size_t step = 0;
};

SimState1D make_state(std::vector<double> c0);
SimState2D make_state(Field2D c0);

double max_stable_dt_ftcs(double alpha, double dx);

/// Explicit heat step T <- s T[i+1] + (1 - 2s) T[i] + s T[i-1], s = alpha dt / dx^2.
/// Throws StabilityViolation if s > 1/2 unless `allow_unstable` is set.
void step_heat_ftcs(SimState1D& s, const SchemeParams& p, bool allow_unstable = false);

/// Crank-Nicolson diffusion, sigma = D dt / (2 dx^2), via the cyclic Thomas
/// solver.
class DiffusionCN {
 public:
  DiffusionCN(std::size_t n, const SchemeParams& p);
  void step(SimState1D& s);
  void step(BatchField& c, const Executor& ex = Executor::serial());
  double sigma() const noexcept { return sigma_; }

 private:
  double sigma_, dt_;
  StencilSpec rhs_;
  BatchCyclicSolver solver_;
  BatchField work_;
};

/// Crank-Nicolson hyperdiffusion dC/dt = -gamma D d4C/dx4,
/// sigma = gamma D dt / (2 dx^4), via the cyclic pentadiagonal solver.
class HyperdiffusionCN {
 public:
  HyperdiffusionCN(std::size_t n, const SchemeParams& p);
  void step(SimState1D& s);
  void step(BatchField& c, const Executor& ex = Executor::serial());
  double sigma() const noexcept { return sigma_; }

 private:
  double sigma_, dt_;
  StencilSpec rhs_;
  BatchCyclicSolver solver_;
  BatchField work_;
};

/// Semi-implicit 1D Cahn-Hilliard
///   (1 + dt gamma D d4) C' = C + dt D d2(C^3 - C) [+ dt (v dC/dx + f0 k cos(k x))]
/// The bracketed travelling-frame terms are added only when v or f0 is
/// nonzero; the advection derivative is HJ-WENO5 upwinded on the sign of v.
class ChStepper1D {
 public:
  ChStepper1D(std::size_t n, const SchemeParams& p);
  void step(SimState1D& s);
  /// Advances every system of an interleaved batch by one step.
  void step(BatchField& c, const Executor& ex = Executor::serial());
  const SchemeParams& params() const noexcept { return p_; }
  bool forced() const noexcept { return p_.v != 0.0 || p_.f0 != 0.0; }

 private:
  void add_forcing(BatchField& rhs, const BatchField& c, const Executor& ex) const;

  SchemeParams p_;
  std::size_t n_;
  StencilSpec lap_;
  BatchCyclicSolver solver_;
  std::vector<double> forcing_;  // dt f0 k cos(k x_i)
  BatchField nl_, rhs_;
};

/// Conservative Cook noise eta = sqrt(sigma / (dx^2 dt)) div(rho) with
/// rho ~ N(0, 1)^2 per cell. Draws depend only on (key, step, cell).
class CookNoise {
 public:
  CookNoise(const CounterRng& rng, double sigma) : rng_(rng), sigma_(sigma) {}
  double sigma() const noexcept { return sigma_; }
  /// Fills `eta` (sized nx*ny, row-major) for time-step index `step`.
  void fill(std::size_t nx, std::size_t ny, double dx, double dy, double dt, std::size_t step,
            std::vector<double>& eta, const Executor& ex = Executor::serial()) const;

 private:
  CounterRng rng_;
  double sigma_;
};

/// ADI Cahn-Hilliard step on a square periodic grid:
///   L_x w = -(2/3)(C^n - C^{n-1}) - (2/3) D gamma dt lap^2 Cbar
///           + (2/3) D dt lap(C^3 - C)^n [+ (2/3) dt eta]
///   L_y v = w,  C^{n+1} = Cbar + v,  Cbar = 2 C^n - C^{n-1},
/// with L = I + (2/3) D gamma dt d4 along each axis.
class AdiCh2D {
 public:
  AdiCh2D(std::size_t n, const SchemeParams& p);
  void step(SimState2D& s, const Executor& ex = Executor::serial(),
            const CookNoise* noise = nullptr);
  double sigma() const noexcept { return sigma_; }

 private:
  SchemeParams p_;
  std::size_t n_;
  double sigma_;
  StencilSpec bih_, lap_;
  BatchCyclicSolver solver_;
  Field2D cbar_, nl_, bih_out_, lap_out_;
  BatchField w_, wt_;
  std::vector<double> eta_;
};

// One-shot wrappers: construct the stepper and advance a single step.
void step_diffusion_cn(SimState1D& s, const SchemeParams& p);
void step_hyperdiffusion_cn(SimState1D& s, const SchemeParams& p);
void step_ch_1d(SimState1D& s, const SchemeParams& p);
void step_ch_forced_1d(SimState1D& s, const SchemeParams& p);
void step_ch_2d_adi(SimState2D& s, const SchemeParams& p);
void step_ch_cook_2d(SimState2D& s, const SchemeParams& p, const CounterRng& rng);

/// Blocked transpose of an rows x cols row-major block into cols x rows.
void transpose(const double* in, double* out, std::size_t rows, std::size_t cols,
               const Executor& ex = Executor::serial());

/// Uniform random field in [lo, hi] from the substream `key`.
std::vector<double> uniform_field(std::size_t count, double lo, double hi, std::uint64_t key);

}  // namespace pentakit
