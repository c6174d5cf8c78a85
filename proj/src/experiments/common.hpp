#pragma once

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "pentakit/error.hpp"
#include "pentakit/experiments.hpp"
#include "pentakit/parallel.hpp"

namespace pentakit::detail {

/// Fresh output directory; files may be created once each.
class OutDir {
 public:
  explicit OutDir(const std::filesystem::path& root);
  std::filesystem::path file(const std::string& name) const;
  const std::filesystem::path& root() const noexcept { return root_; }

 private:
  std::filesystem::path root_;
};

/// CSV writer. Doubles are written with 17 significant digits so files are
/// exact and byte-stable.
class Csv {
 public:
  Csv(const std::filesystem::path& path, const std::vector<std::string>& header);
  ~Csv();
  Csv(const Csv&) = delete;
  Csv& operator=(const Csv&) = delete;

  template <class... Ts>
  void row(const Ts&... values) {
    bool first = true;
    (cell(values, first), ...);
    std::fputc('\n', f_);
  }

 private:
  template <class T>
  void cell(const T& v, bool& first) {
    if (!first) std::fputc(',', f_);
    first = false;
    if constexpr (std::is_floating_point_v<T>) {
      std::fprintf(f_, "%.17g", static_cast<double>(v));
    } else if constexpr (std::is_integral_v<T>) {
      if constexpr (std::is_signed_v<T>) {
        std::fprintf(f_, "%lld", static_cast<long long>(v));
      } else {
        std::fprintf(f_, "%llu", static_cast<unsigned long long>(v));
      }
    } else {
      std::fputs(std::string(v).c_str(), f_);
    }
  }

  std::FILE* f_ = nullptr;
  std::filesystem::path path_;
};

void write_json(const std::filesystem::path& path, const Json& j);

/// Typed config lookup; wrong types become Config errors naming the key.
template <class T>
T get(const Json& cfg, const char* key) {
  try {
    return cfg.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::Config, std::string("config key '") + key + "': " + e.what());
  }
}

std::pair<double, double> get_pair(const Json& cfg, const char* key);
std::vector<std::size_t> get_sizes(const Json& cfg, const char* key);

/// Steps needed to reach T with step dt, and the final (shortened) step.
struct StepPlan {
  std::size_t steps;
  double last_dt;
};
StepPlan plan_steps(double T, double dt);

/// Formats a number for file names: 1 -> "1", 0.5 -> "0.5".
std::string tag(double x);

using RunFn = Json (*)(const Json& cfg, const Executor& ex, const OutDir& out);

// Experiments.
Json defaults_converge_heat();
Json run_converge_heat(const Json&, const Executor&, const OutDir&);
Json defaults_converge_hyper();
Json run_converge_hyper(const Json&, const Executor&, const OutDir&);
Json defaults_converge_ch1d();
Json defaults_converge_ch1d_forced();
Json run_converge_ch1d(const Json&, const Executor&, const OutDir&);
Json defaults_converge_ch2d();
Json run_converge_ch2d(const Json&, const Executor&, const OutDir&);
Json defaults_scaling_1d();
Json run_scaling_1d(const Json&, const Executor&, const OutDir&);
Json defaults_bench_batch();
Json run_bench_batch(const Json&, const Executor&, const OutDir&);
Json defaults_droplets();
Json run_droplets(const Json&, const Executor&, const OutDir&);
Json defaults_beta_stats();
Json run_beta_stats(const Json&, const Executor&, const OutDir&);
Json defaults_flowmap();
Json run_flowmap(const Json&, const Executor&, const OutDir&);

}  // namespace pentakit::detail
