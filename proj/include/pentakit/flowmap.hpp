#pragma once

// Lloyd k-means and flow-pattern maps over forced Cahn-Hilliard sweeps.

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pentakit/parallel.hpp"

namespace pentakit {

/// Row-major n x d point set.
struct FeatureMatrix {
  std::size_t n = 0, d = 0;
  std::vector<double> values;
  const double* row(std::size_t i) const { return values.data() + i * d; }
};

struct KMeansResult {
  std::size_t k = 0, d = 0;
  std::vector<double> centroids;  // k x d
  std::vector<std::size_t> labels;
  std::size_t iterations = 0;
  double inertia = 0.0;
  std::vector<double> inertia_history;  // after every assignment step
};

/// Lloyd's algorithm from k distinct data points chosen by `seed`. An empty
/// cluster is reseeded at the point farthest from its centroid. Throws
/// DegenerateInput when fewer than k distinct points exist.
KMeansResult kmeans(const FeatureMatrix& points, std::size_t k, std::uint64_t seed,
                    std::size_t max_iter = 300);

/// Relabels clusters in ascending order of centroid component mean.
void canonicalize_labels(KMeansResult& r);

struct FlowmapConfig {
  double k_wave = 1.0;
  double v = 0.5;
  std::pair<double, double> f0_range = {0.0, 2.0};
  std::pair<double, double> c_range = {0.0, 1.5};
  std::size_t grid = 16;
  std::size_t na = 512;  // points per simulation
  double T = 50.0;
  double L = 6.283185307179586;
  double gamma = 0.01;
  double noise = 0.1;  // IC is <C> + uniform(-noise, noise)
  std::size_t clusters = 3;
  std::uint64_t seed = 1;
  std::string feature = "profile";  // or "centered": profile minus its mean
};

struct FlowmapResult {
  std::vector<double> mean_c;  // grid values, axis 0
  std::vector<double> f0;      // grid values, axis 1
  std::vector<std::size_t> labels;  // cell (ic, jf) at ic * grid + jf
  FeatureMatrix features;
  KMeansResult km;
};

std::vector<double> linspace(double lo, double hi, std::size_t n);

/// Final travelling-frame profiles for every (mean_c, f0) cell.
FeatureMatrix run_flowmap_sweep(const FlowmapConfig& cfg, const Executor& ex = Executor::serial());

FlowmapResult build_flowmap(const FlowmapConfig& cfg, const Executor& ex = Executor::serial());

/// Clusters precomputed features into a label grid.
FlowmapResult cluster_flowmap(const FlowmapConfig& cfg, FeatureMatrix features);

/// Number of 4-connected regions of equal label in a grid x grid map.
std::size_t count_regions(const std::vector<std::size_t>& labels, std::size_t grid);

}  // namespace pentakit
