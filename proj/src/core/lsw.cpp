#include "pentakit/lsw.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "pentakit/error.hpp"
#include "pentakit/rng.hpp"

namespace pentakit {

namespace {

double lsw_f_raw(double x, double D) {
  if (!(x > 0.0) || !(x < 1.5)) return 0.0;
  return x * x * std::pow(3.0 + x, -1.0 - 4.0 * D / 9.0) *
         std::pow(1.5 - x, -2.0 - 5.0 * D / 9.0) * std::exp(-D / (3.0 - 2.0 * x));
}

}  // namespace

double lsw_f_area(double D) {
  static std::mutex m;
  static std::map<double, double> cache;
  std::lock_guard<std::mutex> lock(m);
  auto it = cache.find(D);
  if (it != cache.end()) return it->second;
  boost::math::quadrature::tanh_sinh<double> q;
  const double area = q.integrate([D](double x) { return lsw_f_raw(x, D); }, 0.0, 1.5, 1e-10);
  cache.emplace(D, area);
  return area;
}

double lsw_f(double x, double D) {
  const double raw = lsw_f_raw(x, D);
  return raw == 0.0 ? 0.0 : raw / lsw_f_area(D);
}

double lsw_mean_radius(double t) {
  if (!(t > 0.0)) raise(ErrorCode::NonPositiveTime, "mean radius needs t > 0");
  return std::cbrt(3.0 * kGammaL * t);
}

double alpha_of_r(double r, double t, double u_bar) {
  return (t / r) * (-1.0 / (r * r) + u_bar / r);
}

AlphaRoots alpha_roots(double a, double t) {
  if (std::isnan(a)) raise(ErrorCode::RootBracketFailure, "growth rate is NaN");
  const double rm = lsw_mean_radius(t), ub = 1.0 / rm, rs = 1.5 * rm;
  const double amax = alpha_of_r(rs, t, ub);
  AlphaRoots out;
  if (a > amax) return out;
  auto g = [&](double r) { return alpha_of_r(r, t, ub) - a; };
  auto tol = [rm](double lo, double hi) { return std::fabs(hi - lo) <= 1e-14 * rm; };
  auto solve = [&](double lo, double hi) {
    std::uintmax_t iters = 200;
    const auto br = boost::math::tools::toms748_solve(g, lo, hi, tol, iters);
    return 0.5 * (br.first + br.second);
  };
  if (a == amax) {
    out.count = 2;
    out.r1 = out.r2 = rs;
    return out;
  }
  if (a <= 0.0) {
    double lo = rm;
    int k = 0;
    while (g(lo) > 0.0) {
      lo *= 0.5;
      if (++k > 2000) raise(ErrorCode::RootBracketFailure, "no lower bracket for alpha root");
    }
    out.count = 1;
    out.r1 = g(rm) == 0.0 ? rm : (g(lo) == 0.0 ? lo : solve(lo, rm));
    out.r2 = out.r1;
    return out;
  }
  double hi = rs;
  int k = 0;
  while (g(hi) > 0.0) {
    hi *= 2.0;
    if (++k > 2000) raise(ErrorCode::RootBracketFailure, "no upper bracket for alpha root");
  }
  out.count = 2;
  out.r1 = solve(rm, rs);
  out.r2 = g(hi) == 0.0 ? hi : solve(rs, hi);
  return out;
}

double p_alpha(double a, double t) {
  const AlphaRoots roots = alpha_roots(a, t);
  if (roots.count == 0) return 0.0;
  const double rm = lsw_mean_radius(t), ub = 1.0 / rm;
  auto term = [&](double r) {
    const double pr = lsw_f(r / rm) / rm;
    if (pr == 0.0) return 0.0;
    const double slope = std::fabs(t * (3.0 - 2.0 * ub * r) / (r * r * r * r));
    return pr / slope;
  };
  double p = term(roots.r1);
  if (roots.count == 2 && roots.r2 != roots.r1) p += term(roots.r2);
  return p;
}

// ---------------------------------------------------------------------------
// Droplet model

namespace {

/// RK4 in V = R^3 over the live droplets only. Since
/// dV_i/dt = 3(-1 + u_bar R_i) and u_bar = n / sum R, the rates sum to zero
/// and total volume is a linear invariant of every stage.
class VolumeIntegrator {
 public:
  VolumeIntegrator(const std::vector<double>& radii, double eps) : eps3_(eps * eps * eps) {
    if (!(eps > 0.0)) raise(ErrorCode::InvalidArgument, "droplet eps must be positive");
    for (std::size_t i = 0; i < radii.size(); ++i) {
      if (radii[i] > 0.0) {
        v_.push_back(radii[i] * radii[i] * radii[i]);
        ids_.push_back(i);
      }
    }
    freeze();
  }

  /// Advances by dt. Returns the volume removed with extinct droplets.
  double advance(double dt) {
    double removed = 0.0;
    double remaining = dt;
    while (remaining > 0.0 && !v_.empty()) {
      rk4(v_, remaining, trial_);
      std::size_t first = v_.size();
      double theta = 2.0;
      for (std::size_t i = 0; i < v_.size(); ++i) {
        if (trial_[i] < 0.0) {
          const double th = v_[i] / (v_[i] - trial_[i]);
          if (th < theta) {
            theta = th;
            first = i;
          }
        }
      }
      if (first == v_.size()) {
        v_.swap(trial_);
        removed += freeze();
        break;
      }
      // Land the earliest crossing droplet inside (0, eps^3].
      const double target = 0.5 * eps3_;
      auto g = [&](double h) {
        rk4(v_, h, probe_);
        return probe_[first] - target;
      };
      auto tol = [this](double lo, double hi) { return std::fabs(hi - lo) <= eps3_ / 12.0; };
      // Live droplets hold more than eps^3, so g(0) > 0 and g(remaining) < 0.
      std::uintmax_t iters = 100;
      const double h = boost::math::tools::toms748_solve(g, 0.0, remaining, tol, iters).first;
      if (h > 0.0) {
        rk4(v_, h, trial_);
        v_.swap(trial_);
      }
      remaining -= h;
      removed += freeze();
    }
    return removed;
  }

  const std::vector<double>& volumes() const { return v_; }
  const std::vector<std::size_t>& ids() const { return ids_; }

 private:
  void rates(const std::vector<double>& v, std::vector<double>& k) {
    const std::size_t n = v.size();
    r_.resize(n);
    k.resize(n);
    double sr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      r_[i] = std::cbrt(v[i]);
      sr += r_[i];
    }
    const double ub = sr > 0.0 ? static_cast<double>(n) / sr : 0.0;
    for (std::size_t i = 0; i < n; ++i) k[i] = 3.0 * (-1.0 + ub * r_[i]);
  }

  void rk4(const std::vector<double>& v, double h, std::vector<double>& out) {
    const std::size_t n = v.size();
    tmp_.resize(n);
    out.resize(n);
    rates(v, k1_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = v[i] + 0.5 * h * k1_[i];
    rates(tmp_, k2_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = v[i] + 0.5 * h * k2_[i];
    rates(tmp_, k3_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = v[i] + h * k3_[i];
    rates(tmp_, k4_);
    for (std::size_t i = 0; i < n; ++i)
      out[i] = v[i] + h / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
  }

  double freeze() {
    double removed = 0.0;
    std::size_t w = 0;
    for (std::size_t i = 0; i < v_.size(); ++i) {
      if (v_[i] <= eps3_) {
        removed += v_[i];
        continue;
      }
      v_[w] = v_[i];
      ids_[w] = ids_[i];
      ++w;
    }
    v_.resize(w);
    ids_.resize(w);
    return removed;
  }

  double eps3_;
  std::vector<double> v_;
  std::vector<std::size_t> ids_;
  std::vector<double> trial_, probe_, tmp_, k1_, k2_, k3_, k4_, r_;
};

struct LiveStats {
  std::size_t n = 0;
  double sum_r = 0.0, sum_r2 = 0.0, sum_inv_r = 0.0;
};

LiveStats live_stats(const std::vector<double>& radii) {
  LiveStats s;
  for (double r : radii) {
    if (r > 0.0) {
      ++s.n;
      s.sum_r += r;
      s.sum_r2 += r * r;
      s.sum_inv_r += 1.0 / r;
    }
  }
  return s;
}

double beta_from(const LiveStats& s, double t) {
  const double F = 0.5 * s.sum_r2;
  if (!(F > 0.0)) raise(ErrorCode::NonPositiveEnergy, "droplet energy must be positive");
  const double ub = s.n > 0 ? static_cast<double>(s.n) / s.sum_r : 0.0;
  // sum (1/R)(1 - ub R)^2 = sum 1/R - 2 ub sum 1 + ub^2 sum R = sum 1/R - n ub
  const double dF = -(s.sum_inv_r - static_cast<double>(s.n) * ub);
  return -t * dF / F;
}

}  // namespace

std::size_t DropletEnsemble::alive() const {
  return static_cast<std::size_t>(std::count_if(radii.begin(), radii.end(), [](double r) { return r > 0.0; }));
}

double DropletEnsemble::volume() const {
  double v = 0.0;
  for (double r : radii)
    if (r > 0.0) v += r * r * r;
  return v;
}

double DropletEnsemble::energy() const {
  double f = 0.0;
  for (double r : radii)
    if (r > 0.0) f += 0.5 * r * r;
  return f;
}

DropletEnsemble make_droplets(std::size_t n, std::uint64_t key, double eps) {
  DropletEnsemble e;
  e.eps = eps;
  const CounterRng rng(key);
  e.radii.resize(n);
  // (0, 1): 1 - [0, 1) excludes zero.
  for (std::size_t i = 0; i < n; ++i) e.radii[i] = 1.0 - rng.uniform_at(i);
  e.v0 = e.volume();
  return e;
}

double droplet_u_bar(const DropletEnsemble& e) {
  const LiveStats s = live_stats(e.radii);
  return s.n > 0 ? static_cast<double>(s.n) / s.sum_r : 0.0;
}

std::vector<double> droplet_rates(const DropletEnsemble& e) {
  const double ub = droplet_u_bar(e);
  std::vector<double> k(e.radii.size(), 0.0);
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double r = e.radii[i];
    if (r > 0.0) k[i] = -1.0 / (r * r) + ub / r;
  }
  return k;
}

double droplet_energy_rate(const DropletEnsemble& e) {
  const double ub = droplet_u_bar(e);
  double d = 0.0;
  for (double r : e.radii) {
    if (r > 0.0) d -= (1.0 - ub * r) * (1.0 - ub * r) / r;
  }
  return d;
}

double ensemble_beta(const DropletEnsemble& e) {
  const double F = e.energy();
  if (!(F > 0.0)) raise(ErrorCode::NonPositiveEnergy, "droplet energy must be positive");
  return -e.t * droplet_energy_rate(e) / F;
}

void droplet_step(DropletEnsemble& e, double dt) {
  if (!(dt > 0.0)) raise(ErrorCode::InvalidArgument, "dt must be positive");
  VolumeIntegrator vi(e.radii, e.eps);
  vi.advance(dt);
  std::fill(e.radii.begin(), e.radii.end(), 0.0);
  const auto& v = vi.volumes();
  const auto& ids = vi.ids();
  for (std::size_t i = 0; i < v.size(); ++i) e.radii[ids[i]] = std::cbrt(v[i]);
  e.t += dt;
}

namespace {

struct Binner {
  double lo, hi;
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;
  Binner(double l, double h, std::size_t bins) : lo(l), hi(h), counts(bins, 0) {}
  void add(double x) {
    if (!(x >= lo) || !(x <= hi)) return;
    const double w = (hi - lo) / static_cast<double>(counts.size());
    std::size_t b = static_cast<std::size_t>((x - lo) / w);
    if (b >= counts.size()) b = counts.size() - 1;
    ++counts[b];
    ++total;
  }
  void merge(const Binner& o) {
    for (std::size_t b = 0; b < counts.size(); ++b) counts[b] += o.counts[b];
    total += o.total;
  }
  Histogram histogram() const {
    Histogram h;
    const std::size_t bins = counts.size();
    const double w = (hi - lo) / static_cast<double>(bins);
    h.edges.resize(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b) h.edges[b] = lo + w * static_cast<double>(b);
    h.density.assign(bins, 0.0);
    if (total == 0) return h;
    for (std::size_t b = 0; b < bins; ++b)
      h.density[b] = static_cast<double>(counts[b]) / (static_cast<double>(total) * w);
    return h;
  }
};

struct RunOutput {
  std::vector<DropletSample> series;
  BetaRun beta;
  Binner alpha{-1.0, 0.4, 1}, x{0.0, 2.0, 1};
  double drift = 0.0, rise = 0.0;
};

}  // namespace

DropletBatchResult run_droplet_batch(const DropletBatchConfig& cfg, const Executor& ex) {
  if (!(cfg.dt > 0.0) || !(cfg.t_end > 0.0) || !(cfg.sample_every >= cfg.dt)) {
    raise(ErrorCode::InvalidArgument, "droplet batch needs dt > 0, t_end > 0, sample_every >= dt");
  }
  if (cfg.n == 0 || cfg.runs == 0 || cfg.bins == 0) {
    raise(ErrorCode::InvalidArgument, "droplet batch needs droplets, runs and bins");
  }
  const auto steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
  const auto every = static_cast<std::size_t>(std::llround(cfg.sample_every / cfg.dt));
  const double c = std::cbrt(3.0 * kGammaL);

  std::vector<RunOutput> outs(cfg.runs);
  ex.for_chunks(cfg.runs, 1, [&](std::size_t r0, std::size_t r1) {
    for (std::size_t run = r0; run < r1; ++run) {
      RunOutput& o = outs[run];
      o.alpha = Binner(-1.0, 0.4, cfg.bins);
      o.x = Binner(0.0, 2.0, cfg.bins);
      const DropletEnsemble e0 = make_droplets(cfg.n, substream(cfg.seed, run), cfg.eps);
      VolumeIntegrator vi(e0.radii, cfg.eps);
      double vol = 0.0;
      for (double v : vi.volumes()) vol += v;
      const double v0 = vol;
      double removed_total = 0.0;
      std::vector<double> radii;
      auto energy = [&]() {
        double f = 0.0;
        for (double v : vi.volumes()) {
          const double r = std::cbrt(v);
          f += 0.5 * r * r;
        }
        return f;
      };
      double F_prev = energy();
      for (std::size_t k = 1; k <= steps; ++k) {
        removed_total += vi.advance(cfg.dt);
        const double F = energy();
        o.rise = std::max(o.rise, F - F_prev);
        F_prev = F;
        if (k % every != 0) continue;
        const double t = static_cast<double>(k) * cfg.dt;
        radii.clear();
        for (double v : vi.volumes()) radii.push_back(std::cbrt(v));
        const LiveStats s = live_stats(radii);
        if (s.n == 0) break;
        const double beta = beta_from(s, t);
        o.series.push_back({run, t, 0.5 * s.sum_r2, beta, s.n});
        o.beta.t.push_back(t);
        o.beta.beta.push_back(beta);
        if (t > cfg.alpha_window.first && t < cfg.alpha_window.second) {
          const double ub = static_cast<double>(s.n) / s.sum_r;
          const double scale = c * std::cbrt(t);
          for (double r : radii) {
            o.alpha.add(alpha_of_r(r, t, ub));
            o.x.add(r / scale);
          }
        }
      }
      double v1 = 0.0;
      for (double v : vi.volumes()) v1 += v;
      // Removed droplets carry at most eps^3 each; drift counts them as lost.
      o.drift = std::fabs(v1 - v0) / v0;
      (void)removed_total;
    }
  });

  DropletBatchResult res;
  std::vector<BetaRun> runs;
  Binner alpha(-1.0, 0.4, cfg.bins), x(0.0, 2.0, cfg.bins);
  for (auto& o : outs) {
    res.series.insert(res.series.end(), o.series.begin(), o.series.end());
    runs.push_back(std::move(o.beta));
    alpha.merge(o.alpha);
    x.merge(o.x);
    res.max_volume_drift = std::max(res.max_volume_drift, o.drift);
    res.max_energy_increase = std::max(res.max_energy_increase, o.rise);
  }
  res.beta = windowed_beta_histogram(runs, cfg.beta_window, cfg.beta_cutoff, cfg.bins,
                                     {0.0, cfg.beta_cutoff});
  res.alpha = alpha.histogram();
  res.x = x.histogram();
  return res;
}

double histogram_mode(const Histogram& h) {
  if (h.density.empty()) raise(ErrorCode::InvalidArgument, "empty histogram");
  const auto it = std::max_element(h.density.begin(), h.density.end());
  const std::size_t b = static_cast<std::size_t>(it - h.density.begin());
  return 0.5 * (h.edges[b] + h.edges[b + 1]);
}

}  // namespace pentakit
