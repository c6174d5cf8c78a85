#include "pentakit/flowmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pentakit/batch.hpp"
#include "pentakit/error.hpp"
#include "pentakit/rng.hpp"
#include "pentakit/schemes.hpp"

namespace pentakit {

namespace {

double dist2(const double* a, const double* b, std::size_t d) {
  double s = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    const double t = a[j] - b[j];
    s += t * t;
  }
  return s;
}

bool same_point(const double* a, const double* b, std::size_t d) {
  return std::equal(a, a + d, b);
}

}  // namespace

KMeansResult kmeans(const FeatureMatrix& pts, std::size_t k, std::uint64_t seed,
                    std::size_t max_iter) {
  const std::size_t n = pts.n, d = pts.d;
  if (k == 0 || d == 0 || pts.values.size() != n * d) {
    raise(ErrorCode::InvalidArgument, "k-means needs k >= 1 and a consistent point matrix");
  }
  if (k > n) raise(ErrorCode::InvalidArgument, "k exceeds the number of points");

  // Initial centroids: distinct points in a seeded random order.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const CounterRng rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.at(i) % i);
    std::swap(order[i - 1], order[j]);
  }
  std::vector<std::size_t> chosen;
  for (std::size_t idx : order) {
    bool dup = false;
    for (std::size_t c : chosen) dup = dup || same_point(pts.row(idx), pts.row(c), d);
    if (!dup) chosen.push_back(idx);
    if (chosen.size() == k) break;
  }
  if (chosen.size() < k) raise(ErrorCode::DegenerateInput, "fewer distinct points than clusters");

  KMeansResult r;
  r.k = k;
  r.d = d;
  r.centroids.resize(k * d);
  for (std::size_t c = 0; c < k; ++c)
    std::copy(pts.row(chosen[c]), pts.row(chosen[c]) + d, r.centroids.begin() + c * d);
  r.labels.assign(n, std::numeric_limits<std::size_t>::max());

  std::vector<double> best(n);
  std::vector<std::size_t> counts(k);
  for (std::size_t it = 0; it < max_iter; ++it) {
    bool changed = false;
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t arg = 0;
      double bd = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double dd = dist2(pts.row(i), r.centroids.data() + c * d, d);
        if (dd < bd) {
          bd = dd;
          arg = c;
        }
      }
      best[i] = bd;
      inertia += bd;
      if (r.labels[i] != arg) {
        r.labels[i] = arg;
        changed = true;
      }
    }
    r.inertia = inertia;
    r.inertia_history.push_back(inertia);
    r.iterations = it + 1;
    if (!changed) break;

    std::fill(r.centroids.begin(), r.centroids.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = r.labels[i];
      ++counts[c];
      for (std::size_t j = 0; j < d; ++j) r.centroids[c * d + j] += pts.row(i)[j];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        const std::size_t far =
            static_cast<std::size_t>(std::max_element(best.begin(), best.end()) - best.begin());
        std::copy(pts.row(far), pts.row(far) + d, r.centroids.begin() + c * d);
        best[far] = 0.0;
        continue;
      }
      for (std::size_t j = 0; j < d; ++j) r.centroids[c * d + j] /= static_cast<double>(counts[c]);
    }
  }
  return r;
}

void canonicalize_labels(KMeansResult& r) {
  const std::size_t k = r.k, d = r.d;
  std::vector<double> mean(k, 0.0);
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t j = 0; j < d; ++j) mean[c] += r.centroids[c * d + j];
    mean[c] /= static_cast<double>(d);
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return mean[a] < mean[b]; });
  std::vector<std::size_t> rank(k);
  for (std::size_t pos = 0; pos < k; ++pos) rank[order[pos]] = pos;
  std::vector<double> cent(r.centroids.size());
  for (std::size_t c = 0; c < k; ++c)
    std::copy(r.centroids.begin() + c * d, r.centroids.begin() + (c + 1) * d,
              cent.begin() + rank[c] * d);
  r.centroids.swap(cent);
  for (auto& l : r.labels) l = rank[l];
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  for (std::size_t i = 0; i < n; ++i)
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

FeatureMatrix run_flowmap_sweep(const FlowmapConfig& cfg, const Executor& ex) {
  if (cfg.grid == 0 || cfg.na < 8 || !(cfg.T > 0.0)) {
    raise(ErrorCode::InvalidArgument, "flowmap needs grid >= 1, na >= 8 and T > 0");
  }
  const auto cs = linspace(cfg.c_range.first, cfg.c_range.second, cfg.grid);
  const auto fs = linspace(cfg.f0_range.first, cfg.f0_range.second, cfg.grid);
  const std::size_t g = cfg.grid, na = cfg.na;
  FeatureMatrix out;
  out.n = g * g;
  out.d = na;
  out.values.resize(out.n * na);

  SchemeParams p;
  p.L = cfg.L;
  p.dx = p.dy = cfg.L / static_cast<double>(na);
  p.dt = 0.1 * p.dx;
  p.gamma = cfg.gamma;
  p.k = cfg.k_wave;
  p.v = cfg.v;
  const auto steps = static_cast<std::size_t>(std::ceil(cfg.T / p.dt - 1e-9));
  const double last = cfg.T - static_cast<double>(steps - 1) * p.dt;

  // One batch per forcing amplitude; the mean composition only enters the IC.
  ex.for_chunks(g, 1, [&](std::size_t j0, std::size_t j1) {
    for (std::size_t jf = j0; jf < j1; ++jf) {
      SchemeParams q = p;
      q.f0 = fs[jf];
      std::vector<std::vector<double>> ics(g);
      for (std::size_t ic = 0; ic < g; ++ic) {
        ics[ic] = uniform_field(na, -cfg.noise, cfg.noise, substream(cfg.seed, ic * g + jf));
        for (double& x : ics[ic]) x += cs[ic];
      }
      BatchField b = interleave(ics);
      ChStepper1D st(na, q);
      for (std::size_t s = 0; s + 1 < steps; ++s) st.step(b);
      SchemeParams ql = q;
      ql.dt = last;
      ChStepper1D(na, ql).step(b);
      for (std::size_t ic = 0; ic < g; ++ic) {
        double* row = out.values.data() + (ic * g + jf) * na;
        for (std::size_t i = 0; i < na; ++i) row[i] = b.at(i, ic);
      }
    }
  });
  return out;
}

FlowmapResult cluster_flowmap(const FlowmapConfig& cfg, FeatureMatrix features) {
  if (cfg.feature != "profile" && cfg.feature != "centered") {
    raise(ErrorCode::Config, "feature must be \"profile\" or \"centered\"");
  }
  FlowmapResult res;
  res.mean_c = linspace(cfg.c_range.first, cfg.c_range.second, cfg.grid);
  res.f0 = linspace(cfg.f0_range.first, cfg.f0_range.second, cfg.grid);
  FeatureMatrix pts = features;
  if (cfg.feature == "centered") {
    for (std::size_t i = 0; i < pts.n; ++i) {
      double* row = pts.values.data() + i * pts.d;
      const double m = std::accumulate(row, row + pts.d, 0.0) / static_cast<double>(pts.d);
      for (std::size_t j = 0; j < pts.d; ++j) row[j] -= m;
    }
  }
  res.km = kmeans(pts, cfg.clusters, cfg.seed);
  canonicalize_labels(res.km);
  res.labels = res.km.labels;
  res.features = std::move(features);
  return res;
}

FlowmapResult build_flowmap(const FlowmapConfig& cfg, const Executor& ex) {
  return cluster_flowmap(cfg, run_flowmap_sweep(cfg, ex));
}

std::size_t count_regions(const std::vector<std::size_t>& labels, std::size_t grid) {
  if (labels.size() != grid * grid) raise(ErrorCode::DimensionMismatch, "label grid size");
  std::vector<char> seen(labels.size(), 0);
  std::vector<std::size_t> stack;
  std::size_t regions = 0;
  for (std::size_t s = 0; s < labels.size(); ++s) {
    if (seen[s]) continue;
    ++regions;
    seen[s] = 1;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::size_t c = stack.back();
      stack.pop_back();
      const std::size_t i = c / grid, j = c % grid;
      const std::size_t nb[4] = {i > 0 ? c - grid : c, i + 1 < grid ? c + grid : c,
                                 j > 0 ? c - 1 : c, j + 1 < grid ? c + 1 : c};
      for (std::size_t q : nb) {
        if (!seen[q] && labels[q] == labels[c]) {
          seen[q] = 1;
          stack.push_back(q);
        }
      }
    }
  }
  return regions;
}

}  // namespace pentakit
