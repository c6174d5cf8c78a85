// Batch studies: coarsening scale, solver benchmark, droplet ensembles,
// 2D energy-decay statistics and forced flow-pattern maps.

#include <algorithm>
#include <cmath>
#include <numbers>

#include "common.hpp"
#include "pentakit/batch.hpp"
#include "pentakit/diagnostics.hpp"
#include "pentakit/flowmap.hpp"
#include "pentakit/lsw.hpp"
#include "pentakit/rng.hpp"
#include "pentakit/schemes.hpp"

namespace pentakit::detail {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void write_histogram(const OutDir& out, const std::string& name, const Histogram& h) {
  Csv csv(out.file(name), {"bin_left", "bin_right", "density"});
  for (std::size_t b = 0; b < h.density.size(); ++b) csv.row(h.edges[b], h.edges[b + 1], h.density[b]);
}

Json moments_json(const Moments& m) {
  return {{"count", m.count}, {"mean", m.mean}, {"variance", m.variance}, {"skewness", m.skewness}};
}

}  // namespace

// ---------------------------------------------------------------------------

Json defaults_scaling_1d() {
  return {{"M", 1024},       {"N", 256},      {"L", kTwoPi},
          {"gamma", 0.01},   {"D", 1.0},      {"dt_factor", 0.1},
          {"T", 100.0},      {"ic_range", {-0.1, 0.1}}, {"fit_window", {10.0, 100.0}},
          {"seed", 1}};
}

Json run_scaling_1d(const Json& cfg, const Executor& ex, const OutDir& out) {
  const auto M = get<std::size_t>(cfg, "M"), N = get<std::size_t>(cfg, "N");
  const auto seed = get<std::uint64_t>(cfg, "seed");
  const auto [lo, hi] = get_pair(cfg, "ic_range");
  const auto [w0, w1] = get_pair(cfg, "fit_window");
  if (M == 0 || N < 8) raise(ErrorCode::Config, "scaling-1d needs M >= 1 and N >= 8");
  SchemeParams p;
  p.L = get<double>(cfg, "L");
  p.gamma = get<double>(cfg, "gamma");
  p.D = get<double>(cfg, "D");
  p.dx = p.L / static_cast<double>(N);
  p.dt = get<double>(cfg, "dt_factor") * p.dx;
  const double T = get<double>(cfg, "T");

  std::vector<std::vector<double>> ics(M);
  for (std::size_t m = 0; m < M; ++m) ics[m] = uniform_field(N, lo, hi, substream(seed, m));
  BatchField b = interleave(ics);

  std::vector<double> acc(M);
  auto mean_s = [&] {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t i = 0; i < N; ++i) {
      const double* row = b.data.data() + i * M;
      for (std::size_t m = 0; m < M; ++m) acc[m] += row[m] * row[m];
    }
    double s = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
      const double c2 = acc[m] / static_cast<double>(N);
      if (!(c2 < 1.0)) raise(ErrorCode::SaturatedField, "mean C^2 reached 1");
      s += 1.0 / (1.0 - c2);
    }
    return s / static_cast<double>(M);
  };

  Csv csv(out.file("scaling.csv"), {"t", "log_t", "mean_s"});
  std::vector<double> fx, fy;
  const StepPlan plan = plan_steps(T, p.dt);
  ChStepper1D stepper(N, p);
  SchemeParams q = p;
  q.dt = plan.last_dt;
  ChStepper1D last(N, q);
  for (std::size_t st = 0; st < plan.steps; ++st) {
    (st + 1 < plan.steps ? stepper : last).step(b, ex);
    const double t = st + 1 < plan.steps ? static_cast<double>(st + 1) * p.dt : T;
    const double s = mean_s();
    csv.row(t, std::log(t), s);
    if (t >= w0 && t <= w1) {
      fx.push_back(std::log(t));
      fy.push_back(s);
    }
  }
  if (fx.size() < 3) raise(ErrorCode::EmptyWindow, "fit window holds fewer than 3 samples");
  const LinearFit fit = linear_fit(fx, fy);
  Csv fcsv(out.file("fit.csv"), {"intercept", "slope", "r", "samples"});
  fcsv.row(fit.intercept, fit.slope, fit.r, fx.size());
  return {{"intercept", fit.intercept}, {"slope", fit.slope}, {"r", fit.r}, {"samples", fx.size()}};
}

// ---------------------------------------------------------------------------

Json defaults_bench_batch() {
  return {{"n", 512}, {"m", 4096}, {"steps", 250}, {"repetitions", 5},
          {"workers", {1}}, {"chunk", 32}, {"seed", 1}};
}

Json run_bench_batch(const Json& cfg, const Executor&, const OutDir& out) {
  BenchConfig bc;
  bc.n = get<std::size_t>(cfg, "n");
  bc.m = get<std::size_t>(cfg, "m");
  bc.steps = get<std::size_t>(cfg, "steps");
  bc.repetitions = get<std::size_t>(cfg, "repetitions");
  bc.workers = get<std::vector<unsigned>>(cfg, "workers");
  bc.chunk = get<std::size_t>(cfg, "chunk");
  bc.seed = get<std::uint64_t>(cfg, "seed");
  const auto rows = bench_batch(bc);
  Csv csv(out.file("timing.csv"), {"regime", "n", "m", "steps", "workers", "median_seconds"});
  Json summary = Json::array();
  for (const auto& r : rows) {
    csv.row(r.regime, r.n, r.m, r.steps, r.workers, r.median_seconds);
    summary.push_back({{"regime", r.regime}, {"workers", r.workers}, {"median_seconds", r.median_seconds}});
  }
  return summary;
}

// ---------------------------------------------------------------------------

Json defaults_droplets() {
  const DropletBatchConfig d;
  return {{"n", {100, 1000, 10000}},
          {"runs", {100, 30, 6}},
          {"dt", d.dt},
          {"t_end", d.t_end},
          {"sample_every", d.sample_every},
          {"beta_window", {d.beta_window.first, d.beta_window.second}},
          {"alpha_window", {d.alpha_window.first, d.alpha_window.second}},
          {"beta_cutoff", d.beta_cutoff},
          {"bins", d.bins},
          {"eps", d.eps},
          {"theory_points", 301},
          {"seed", 1}};
}

Json run_droplets(const Json& cfg, const Executor& ex, const OutDir& out) {
  const auto ns = get_sizes(cfg, "n");
  const auto runs = get_sizes(cfg, "runs");
  if (runs.size() != ns.size()) raise(ErrorCode::Config, "'runs' needs one entry per 'n'");
  DropletBatchConfig base;
  base.seed = get<std::uint64_t>(cfg, "seed");
  base.dt = get<double>(cfg, "dt");
  base.t_end = get<double>(cfg, "t_end");
  base.sample_every = get<double>(cfg, "sample_every");
  base.beta_window = get_pair(cfg, "beta_window");
  base.alpha_window = get_pair(cfg, "alpha_window");
  base.beta_cutoff = get<double>(cfg, "beta_cutoff");
  base.bins = get<std::size_t>(cfg, "bins");
  base.eps = get<double>(cfg, "eps");

  Json summary = Json::array();
  for (std::size_t k = 0; k < ns.size(); ++k) {
    DropletBatchConfig c = base;
    c.n = ns[k];
    c.runs = runs[k];
    c.seed = substream(base.seed, ns[k]);
    const DropletBatchResult r = run_droplet_batch(c, ex);
    const std::string suffix = "_n" + std::to_string(ns[k]) + ".csv";
    {
      Csv csv(out.file("droplets" + suffix), {"run_id", "t", "F", "beta", "n_alive"});
      for (const auto& s : r.series) csv.row(s.run, s.t, s.F, s.beta, s.alive);
    }
    write_histogram(out, "beta_hist" + suffix, r.beta.histogram);
    write_histogram(out, "alpha_hist" + suffix, r.alpha);
    write_histogram(out, "x_hist" + suffix, r.x);
    summary.push_back({{"n", ns[k]},
                       {"runs", runs[k]},
                       {"beta_peak", histogram_mode(r.beta.histogram)},
                       {"beta", moments_json(r.beta.pooled)},
                       {"max_volume_drift", r.max_volume_drift},
                       {"max_energy_increase", r.max_energy_increase}});
  }

  // Self-similar theory curves for overlays.
  const auto pts = std::max<std::size_t>(2, get<std::size_t>(cfg, "theory_points"));
  Csv f(out.file("lsw_f.csv"), {"x", "f"});
  for (double x : linspace(0.0, 1.5, pts)) f.row(x, lsw_f(x));
  Csv pa(out.file("lsw_p_alpha.csv"), {"alpha", "p_alpha"});
  for (double a : linspace(-1.0, 1.0 / 3.0, pts)) pa.row(a, p_alpha(a));
  return {{"ensembles", summary}};
}

// ---------------------------------------------------------------------------

Json defaults_beta_stats() {
  return {{"runs", 64},
          {"domains", {1, 2}},
          {"mixtures", {"symmetric", "asymmetric", "cook"}},
          {"points_per_2pi", 256},
          {"gamma", 0.01},
          {"D", 1.0},
          {"dt_factor", 0.1},
          {"T", 100.0},
          {"sample_every", 10},
          {"window", {10.0, 100.0}},
          {"cutoff", 1.0},
          {"bins", 50},
          {"sigma", 1e-14},
          {"seed", 1}};
}

namespace {

struct Sample2D {
  double t, F, s, k1;
};

std::vector<Sample2D> run_ch2d_sample(std::size_t n, const SchemeParams& p, double T,
                                      std::size_t every, const std::string& mixture,
                                      double sigma, std::uint64_t ic_key,
                                      std::uint64_t noise_key) {
  const bool asym = mixture == "asymmetric";
  Field2D f(n, n, p.dx, p.dy);
  f.values = uniform_field(n * n, asym ? 0.4 : -0.1, asym ? 0.6 : 0.1, ic_key);
  SimState2D s = make_state(std::move(f));
  const CookNoise noise(CounterRng(noise_key), sigma);
  const CookNoise* np = mixture == "cook" ? &noise : nullptr;

  std::vector<Sample2D> out;
  auto record = [&](double t) {
    out.push_back({t, free_energy_2d(s.c, p.gamma), s_of_t(s.c), k1_of_t(s.c, p.L)});
  };
  record(0.0);
  const StepPlan plan = plan_steps(T, p.dt);
  AdiCh2D stepper(n, p);
  for (std::size_t st = 0; st + 1 < plan.steps; ++st) {
    stepper.step(s, Executor::serial(), np);
    if ((st + 1) % every == 0) record(static_cast<double>(st + 1) * p.dt);
  }
  SchemeParams q = p;
  q.dt = plan.last_dt;
  AdiCh2D(n, q).step(s, Executor::serial(), np);
  record(T);
  return out;
}

}  // namespace

Json run_beta_stats(const Json& cfg, const Executor& ex, const OutDir& out) {
  const auto runs = get<std::size_t>(cfg, "runs");
  const auto domains = get_sizes(cfg, "domains");
  const auto mixtures = get<std::vector<std::string>>(cfg, "mixtures");
  const auto ppl = get<std::size_t>(cfg, "points_per_2pi");
  const auto every = std::max<std::size_t>(1, get<std::size_t>(cfg, "sample_every"));
  const auto window = get_pair(cfg, "window");
  const double cutoff = get<double>(cfg, "cutoff"), sigma = get<double>(cfg, "sigma");
  const double T = get<double>(cfg, "T");
  const auto bins = get<std::size_t>(cfg, "bins");
  const auto seed = get<std::uint64_t>(cfg, "seed");
  if (runs == 0) raise(ErrorCode::Config, "runs must be positive");
  for (const auto& m : mixtures) {
    if (m != "symmetric" && m != "asymmetric" && m != "cook") {
      raise(ErrorCode::Config, "unknown mixture '" + m + "'");
    }
  }

  Json summary = Json::array();
  for (std::size_t d : domains) {
    const std::size_t n = ppl * d;
    SchemeParams p;
    p.L = kTwoPi * static_cast<double>(d);
    p.gamma = get<double>(cfg, "gamma");
    p.D = get<double>(cfg, "D");
    p.dx = p.dy = p.L / static_cast<double>(n);
    p.dt = get<double>(cfg, "dt_factor") * p.dx;
    for (const auto& mix : mixtures) {
      // Symmetric and Cook runs share initial conditions; noise has its own streams.
      const std::uint64_t ic_base = substream(seed, d * 2 + (mix == "asymmetric" ? 1 : 0));
      const std::uint64_t noise_base = substream(~seed, d);
      std::vector<std::vector<Sample2D>> series(runs);
      ex.for_chunks(runs, 1, [&](std::size_t a, std::size_t b) {
        for (std::size_t r = a; r < b; ++r) {
          series[r] = run_ch2d_sample(n, p, T, every, mix, sigma, substream(ic_base, r),
                                      substream(noise_base, r));
        }
      });

      const std::string suffix = "_" + mix + "_L" + std::to_string(d) + ".csv";
      std::vector<BetaRun> betas(runs);
      Csv csv(out.file("series" + suffix), {"run_id", "t", "F", "beta", "s", "k1"});
      for (std::size_t r = 0; r < runs; ++r) {
        std::vector<double> t, F;
        for (const auto& x : series[r]) {
          t.push_back(x.t);
          F.push_back(x.F);
        }
        betas[r].t = t;
        betas[r].beta = beta_series(t, F);
        for (std::size_t i = 0; i < t.size(); ++i)
          csv.row(r, t[i], F[i], betas[r].beta[i], series[r][i].s, series[r][i].k1);
      }
      const BetaStats st = windowed_beta_histogram(betas, window, cutoff, bins);
      write_histogram(out, "beta_hist" + suffix, st.histogram);
      Csv mcsv(out.file("moments" + suffix), {"t", "count", "mean", "variance", "skewness"});
      for (const auto& row : st.per_time)
        mcsv.row(row.t, row.m.count, row.m.mean, row.m.variance, row.m.skewness);
      summary.push_back({{"domain", d}, {"mixture", mix}, {"n", n}, {"pooled", moments_json(st.pooled)},
                         {"beta_peak", histogram_mode(st.histogram)}});
    }
  }
  return {{"cases", summary}};
}

// ---------------------------------------------------------------------------

Json defaults_flowmap() {
  const FlowmapConfig f;
  return {{"k_wave", f.k_wave},
          {"v", f.v},
          {"f0_range", {f.f0_range.first, f.f0_range.second}},
          {"c_range", {f.c_range.first, f.c_range.second}},
          {"grid", f.grid},
          {"na", f.na},
          {"T", f.T},
          {"L", f.L},
          {"gamma", f.gamma},
          {"noise", f.noise},
          {"clusters", f.clusters},
          {"feature", f.feature},
          {"seed", f.seed}};
}

Json run_flowmap(const Json& cfg, const Executor& ex, const OutDir& out) {
  FlowmapConfig f;
  f.k_wave = get<double>(cfg, "k_wave");
  f.v = get<double>(cfg, "v");
  f.f0_range = get_pair(cfg, "f0_range");
  f.c_range = get_pair(cfg, "c_range");
  f.grid = get<std::size_t>(cfg, "grid");
  f.na = get<std::size_t>(cfg, "na");
  f.T = get<double>(cfg, "T");
  f.L = get<double>(cfg, "L");
  f.gamma = get<double>(cfg, "gamma");
  f.noise = get<double>(cfg, "noise");
  f.clusters = get<std::size_t>(cfg, "clusters");
  f.feature = get<std::string>(cfg, "feature");
  f.seed = get<std::uint64_t>(cfg, "seed");
  const FlowmapResult r = build_flowmap(f, ex);

  Csv csv(out.file("flowmap.csv"), {"mean_c", "f0", "label"});
  for (std::size_t ic = 0; ic < f.grid; ++ic)
    for (std::size_t jf = 0; jf < f.grid; ++jf) csv.row(r.mean_c[ic], r.f0[jf], r.labels[ic * f.grid + jf]);
  return {{"regions", count_regions(r.labels, f.grid)},
          {"iterations", r.km.iterations},
          {"inertia", r.km.inertia}};
}

}  // namespace pentakit::detail
