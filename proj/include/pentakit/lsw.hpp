#pragma once

// LSW self-similar theory and the finite-N droplet population model.

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "pentakit/diagnostics.hpp"
#include "pentakit/parallel.hpp"

namespace pentakit {

inline constexpr double kGammaL = 4.0 / 27.0;

/// Self-similar size distribution, normalized to unit area on [0, 3/2).
double lsw_f(double x, double D = 3.0);

/// The normalization constant of lsw_f (area of the raw profile), cached per D.
double lsw_f_area(double D = 3.0);

/// <R> = (3 gamma_L t)^(1/3). Throws NonPositiveTime for t <= 0.
double lsw_mean_radius(double t);

/// alpha = (t / r)(-1/r^2 + u_bar / r).
double alpha_of_r(double r, double t, double u_bar);

/// Roots r1 <= r2 of alpha(r) = a in the self-similar regime at time t.
/// count is 0 above the maximum rate, 1 for a <= 0, 2 for 0 < a < 1/3.
struct AlphaRoots {
  int count = 0;
  double r1 = 0.0, r2 = 0.0;
};
AlphaRoots alpha_roots(double a, double t);

/// Growth-rate density p_alpha(a) for LSW-distributed radii (time independent).
double p_alpha(double a, double t = 1.0);

/// Droplet radii evolving under dR/dt = H(R)(-1/R^2 + u_bar/R) with
/// u_bar = sum H / sum H R. Extinct droplets hold R = 0 and never revive.
struct DropletEnsemble {
  std::vector<double> radii;
  double t = 0.0;
  double eps = 1e-3;  // droplets shrinking below eps are removed
  double v0 = 0.0;    // sum R^3 at creation

  std::size_t alive() const;
  double volume() const;  // sum over live droplets of R^3
  double energy() const;  // F = 1/2 sum R^2
};

/// N radii uniform in (0, 1) drawn from the substream `key`.
DropletEnsemble make_droplets(std::size_t n, std::uint64_t key, double eps = 1e-3);

double droplet_u_bar(const DropletEnsemble& e);
std::vector<double> droplet_rates(const DropletEnsemble& e);

/// Analytic dF/dt = -sum H/R (1 - u_bar R)^2.
double droplet_energy_rate(const DropletEnsemble& e);

/// beta_N = -(t / F) dF/dt. Throws NonPositiveEnergy when F <= 0.
double ensemble_beta(const DropletEnsemble& e);

/// Advances by dt with classical RK4 in the volume variable V = R^3, where
/// the constraint makes sum dV/dt vanish identically. A step that would
/// carry a droplet through zero is split at the extinction time.
void droplet_step(DropletEnsemble& e, double dt);

struct DropletBatchConfig {
  std::size_t n = 1000;
  std::size_t runs = 10;
  std::uint64_t seed = 1;
  double dt = 1e-4;
  double t_end = 40.0;
  double sample_every = 0.1;
  std::pair<double, double> beta_window = {1.0, 40.0};
  std::pair<double, double> alpha_window = {10.0, 40.0};
  double beta_cutoff = 1.0;
  std::size_t bins = 50;
  double eps = 1e-3;
};

struct DropletSample {
  std::size_t run = 0;
  double t = 0.0, F = 0.0, beta = 0.0;
  std::size_t alive = 0;
};

struct DropletBatchResult {
  std::vector<DropletSample> series;  // run-major, time ascending
  BetaStats beta;
  Histogram alpha;  // pooled over alpha_window, range [-1, 0.4]
  Histogram x;      // R / ((3 gamma_L)^(1/3) t^(1/3)) over alpha_window, range [0, 2]
  double max_volume_drift = 0.0;    // relative, worst run
  double max_energy_increase = 0.0;  // worst F(t+dt) - F(t) over all steps
};

DropletBatchResult run_droplet_batch(const DropletBatchConfig& cfg,
                                     const Executor& ex = Executor::serial());

/// Peak of a histogram: center of the densest bin (first on ties).
double histogram_mode(const Histogram& h);

}  // namespace pentakit
