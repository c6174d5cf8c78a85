// Grid-convergence studies: heat (FTCS), hyperdiffusion (CN), 1D
// Cahn-Hilliard with and without travelling-wave forcing, 2D ADI.

#include <algorithm>
#include <cmath>
#include <numbers>

#include "common.hpp"
#include "pentakit/diagnostics.hpp"
#include "pentakit/schemes.hpp"

namespace pentakit::detail {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Table rows plus the coarse companion of the first row.
std::vector<std::size_t> run_sizes(const std::vector<std::size_t>& rows) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 8 || rows[i] % 2 || (i && rows[i] != 2 * rows[i - 1])) {
      raise(ErrorCode::Config, "grid sizes must be even, >= 8 and successively doubled");
    }
  }
  std::vector<std::size_t> n{rows.front() / 2};
  n.insert(n.end(), rows.begin(), rows.end());
  return n;
}

Json write_convergence(const OutDir& out, const std::string& name,
                       const std::vector<std::size_t>& n, const std::vector<double>& e) {
  const auto table = convergence_table(n, e);
  Csv csv(out.file(name), {"n", "e_n", "order"});
  Json rows = Json::array();
  for (const auto& r : table) {
    csv.row(r.n, r.e_n, r.order);
    rows.push_back({{"n", r.n}, {"e_n", r.e_n}, {"order", std::isnan(r.order) ? Json() : Json(r.order)}});
  }
  return rows;
}

// Runs fn(i) for every index, largest problems first.
template <class F>
void for_each_size(std::size_t count, const Executor& ex, F fn) {
  ex.for_chunks(count, 1, [&](std::size_t a, std::size_t b) {
    for (std::size_t k = a; k < b; ++k) fn(count - 1 - k);
  });
}

}  // namespace

Json defaults_converge_heat() {
  return {{"L", kTwoPi},  {"alpha", 1.0},    {"k", 1.0},
          {"amplitude", 1.0}, {"phase", 0.0}, {"T", 10.0},
          {"cfl", 0.9},   {"n", {128, 256, 512, 1024, 2048, 4096}}, {"seed", 1}};
}

Json run_converge_heat(const Json& cfg, const Executor& ex, const OutDir& out) {
  const double L = get<double>(cfg, "L"), alpha = get<double>(cfg, "alpha");
  const double k = get<double>(cfg, "k"), A = get<double>(cfg, "amplitude");
  const double phase = get<double>(cfg, "phase"), T = get<double>(cfg, "T");
  const double cfl = get<double>(cfg, "cfl");
  if (!(cfl > 0.0 && cfl <= 1.0)) raise(ErrorCode::Config, "cfl must be in (0, 1]");
  const auto rows = get_sizes(cfg, "n");
  const auto sizes = run_sizes(rows);
  auto exact = [&](double x, double t) { return A * std::exp(-alpha * k * k * t) * std::sin(k * x + phase); };

  std::vector<std::vector<double>> sol(sizes.size());
  std::vector<double> linf(sizes.size());
  for_each_size(sizes.size(), ex, [&](std::size_t r) {
    const std::size_t n = sizes[r];
    SchemeParams p;
    p.alpha = alpha;
    p.L = L;
    p.dx = L / static_cast<double>(n);
    p.dt = cfl * max_stable_dt_ftcs(alpha, p.dx);
    std::vector<double> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = exact(static_cast<double>(i) * p.dx, 0.0);
    SimState1D s = make_state(std::move(c));
    const StepPlan plan = plan_steps(T, p.dt);
    for (std::size_t st = 0; st + 1 < plan.steps; ++st) step_heat_ftcs(s, p);
    p.dt = plan.last_dt;
    step_heat_ftcs(s, p);
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      m = std::max(m, std::fabs(s.c[i] - exact(static_cast<double>(i) * L / static_cast<double>(n), T)));
    linf[r] = m;
    sol[r] = std::move(s.c);
  });

  std::vector<double> e;
  for (std::size_t r = 1; r < sizes.size(); ++r) e.push_back(richardson_error_1d(sol[r], sol[r - 1], L));
  Json summary;
  summary["convergence"] = write_convergence(out, "convergence.csv", rows, e);
  summary["analytic"] = write_convergence(out, "analytic.csv", sizes, linf);
  return summary;
}

Json defaults_converge_hyper() {
  return {{"L", 1.0},  {"mode", 2},    {"gamma", 1.0}, {"D", 1.0}, {"amplitude", 1.0},
          {"phase", 0.0}, {"dt", 1e-8}, {"T", 1e-4},    {"n", {64, 128, 256, 512}},
          {"sample_every", 100}, {"seed", 1}};
}

Json run_converge_hyper(const Json& cfg, const Executor& ex, const OutDir& out) {
  const double L = get<double>(cfg, "L");
  const double k = kTwoPi * static_cast<double>(get<std::size_t>(cfg, "mode")) / L;
  const double gamma = get<double>(cfg, "gamma"), D = get<double>(cfg, "D");
  const double A = get<double>(cfg, "amplitude"), phase = get<double>(cfg, "phase");
  const double dt = get<double>(cfg, "dt"), T = get<double>(cfg, "T");
  const auto ns = get_sizes(cfg, "n");
  const std::size_t every = std::max<std::size_t>(1, get<std::size_t>(cfg, "sample_every"));
  const double lambda = gamma * D * std::pow(k, 4);
  auto exact = [&](double x, double t) { return A * std::exp(-lambda * t) * std::cos(k * x + phase); };

  std::vector<double> err(ns.size());
  std::vector<std::vector<std::pair<double, double>>> decay(ns.size());
  for_each_size(ns.size(), ex, [&](std::size_t r) {
    const std::size_t n = ns[r];
    SchemeParams p;
    p.gamma = gamma;
    p.D = D;
    p.L = L;
    p.dx = L / static_cast<double>(n);
    p.dt = dt;
    std::vector<double> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = exact(static_cast<double>(i) * p.dx, 0.0);
    SimState1D s = make_state(std::move(c));
    auto amplitude = [&] {
      // Projection on the initial mode.
      double a = 0.0;
      for (std::size_t i = 0; i < n; ++i) a += s.c[i] * std::cos(k * static_cast<double>(i) * p.dx + phase);
      return 2.0 * a / static_cast<double>(n);
    };
    const StepPlan plan = plan_steps(T, dt);
    HyperdiffusionCN stepper(n, p);
    decay[r].emplace_back(0.0, amplitude());
    for (std::size_t st = 0; st + 1 < plan.steps; ++st) {
      stepper.step(s);
      if ((st + 1) % every == 0) decay[r].emplace_back(static_cast<double>(st + 1) * dt, amplitude());
    }
    SchemeParams q = p;
    q.dt = plan.last_dt;
    HyperdiffusionCN(n, q).step(s);
    decay[r].emplace_back(T, amplitude());
    err[r] = error_l2_analytic(s.c, exact, p.dx, T);
  });

  Json summary;
  summary["convergence"] = write_convergence(out, "convergence.csv", ns, err);
  std::vector<double> lx, ly;
  for (std::size_t r = 0; r < ns.size(); ++r) {
    lx.push_back(std::log(static_cast<double>(ns[r])));
    ly.push_back(std::log(err[r]));
  }
  const LinearFit slope = linear_fit(lx, ly);

  // Decay rate from the finest grid.
  const auto& d = decay.back();
  Csv csv(out.file("decay.csv"), {"t", "amplitude", "exact"});
  std::vector<double> t, la;
  for (const auto& [tt, a] : d) {
    csv.row(tt, a, A * std::exp(-lambda * tt));
    t.push_back(tt);
    la.push_back(std::log(std::fabs(a)));
  }
  const LinearFit rate = linear_fit(t, la);
  summary["slope"] = slope.slope;
  summary["slope_r"] = slope.r;
  summary["lambda_fit"] = -rate.slope;
  summary["lambda_exact"] = lambda;
  return summary;
}

namespace {

Json ch1d_defaults(double T, double f0, double v) {
  return {{"L", kTwoPi},    {"gamma", 0.01},  {"D", 1.0},   {"dt_factor", 0.1},
          {"T", T},         {"amplitude", 1e-6}, {"mode", 5}, {"f0", f0},
          {"k", 1.0},       {"v", v},         {"n", {256, 512, 1024, 2048, 4096}},
          {"seed", 1}};
}

}  // namespace

Json defaults_converge_ch1d() { return ch1d_defaults(10.0, 0.0, 0.0); }
Json defaults_converge_ch1d_forced() { return ch1d_defaults(30.0, 1.0, 0.5); }

Json run_converge_ch1d(const Json& cfg, const Executor& ex, const OutDir& out) {
  SchemeParams base;
  base.L = get<double>(cfg, "L");
  base.gamma = get<double>(cfg, "gamma");
  base.D = get<double>(cfg, "D");
  base.f0 = get<double>(cfg, "f0");
  base.k = get<double>(cfg, "k");
  base.v = get<double>(cfg, "v");
  const double factor = get<double>(cfg, "dt_factor"), T = get<double>(cfg, "T");
  const double A = get<double>(cfg, "amplitude");
  const double mode = static_cast<double>(get<std::size_t>(cfg, "mode"));
  const auto rows = get_sizes(cfg, "n");
  const auto sizes = run_sizes(rows);

  std::vector<std::vector<double>> sol(sizes.size());
  for_each_size(sizes.size(), ex, [&](std::size_t r) {
    const std::size_t n = sizes[r];
    SchemeParams p = base;
    p.dx = p.L / static_cast<double>(n);
    p.dt = factor * p.dx;
    std::vector<double> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = A * std::cos(mode * static_cast<double>(i) * p.dx);
    SimState1D s = make_state(std::move(c));
    const StepPlan plan = plan_steps(T, p.dt);
    ChStepper1D stepper(n, p);
    for (std::size_t st = 0; st + 1 < plan.steps; ++st) stepper.step(s);
    p.dt = plan.last_dt;
    ChStepper1D(n, p).step(s);
    sol[r] = std::move(s.c);
  });

  std::vector<double> e;
  for (std::size_t r = 1; r < sizes.size(); ++r)
    e.push_back(richardson_error_1d(sol[r], sol[r - 1], base.L));
  Json summary;
  summary["convergence"] = write_convergence(out, "convergence.csv", rows, e);
  return summary;
}

Json defaults_converge_ch2d() {
  return {{"L", kTwoPi}, {"gamma", 0.01},      {"D", 1.0},
          {"dt_factor", 0.1}, {"T", 1.0},      {"amplitude", 1e-6},
          {"n", {256, 512, 1024, 2048}}, {"seed", 1}};
}

Json run_converge_ch2d(const Json& cfg, const Executor& ex, const OutDir& out) {
  SchemeParams base;
  base.L = get<double>(cfg, "L");
  base.gamma = get<double>(cfg, "gamma");
  base.D = get<double>(cfg, "D");
  const double factor = get<double>(cfg, "dt_factor"), T = get<double>(cfg, "T");
  const double A = get<double>(cfg, "amplitude");
  const auto rows = get_sizes(cfg, "n");
  const auto sizes = run_sizes(rows);
  const double half = 0.5 * base.L;

  std::vector<Field2D> sol;
  for (std::size_t n : sizes) {
    SchemeParams p = base;
    p.dx = p.dy = p.L / static_cast<double>(n);
    p.dt = factor * p.dx;
    // Radial front centred in the periodic box.
    Field2D f(n, n, p.dx, p.dy);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) * p.dx - half, y = static_cast<double>(j) * p.dy - half;
        f.at(i, j) = A * std::tanh(std::sqrt(x * x + y * y) - half);
      }
    }
    SimState2D s = make_state(std::move(f));
    const StepPlan plan = plan_steps(T, p.dt);
    AdiCh2D stepper(n, p);
    for (std::size_t st = 0; st + 1 < plan.steps; ++st) stepper.step(s, ex);
    p.dt = plan.last_dt;
    AdiCh2D(n, p).step(s, ex);
    sol.push_back(std::move(s.c));
  }

  std::vector<double> e;
  for (std::size_t r = 1; r < sizes.size(); ++r) e.push_back(richardson_error_2d(sol[r], sol[r - 1]));
  Json summary;
  summary["convergence"] = write_convergence(out, "convergence.csv", rows, e);
  return summary;
}

}  // namespace pentakit::detail
