#include "pentakit/experiments.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>

#include "common.hpp"

#ifndef PENTAKIT_VERSION
#define PENTAKIT_VERSION "0.1.0"
#endif

namespace pentakit {

namespace detail {

namespace fs = std::filesystem;

OutDir::OutDir(const fs::path& root) : root_(root) {
  std::error_code ec;
  if (fs::exists(root_, ec)) {
    if (!fs::is_directory(root_, ec)) raise(ErrorCode::Io, root_.string() + " is not a directory");
    if (!fs::is_empty(root_, ec)) {
      raise(ErrorCode::Io, "output directory " + root_.string() + " is not empty");
    }
  } else if (!fs::create_directories(root_, ec) || ec) {
    raise(ErrorCode::Io, "cannot create " + root_.string() + ": " + ec.message());
  }
}

fs::path OutDir::file(const std::string& name) const {
  fs::path p = root_ / name;
  if (fs::exists(p)) raise(ErrorCode::Io, p.string() + " already exists");
  return p;
}

Csv::Csv(const fs::path& path, const std::vector<std::string>& header) : path_(path) {
  f_ = std::fopen(path.c_str(), "wx");
  if (!f_) raise(ErrorCode::Io, "cannot create " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) std::fputc(',', f_);
    std::fputs(header[i].c_str(), f_);
  }
  std::fputc('\n', f_);
}

Csv::~Csv() {
  if (f_) std::fclose(f_);
}

void write_json(const fs::path& path, const Json& j) {
  std::ofstream o(path);
  if (!o) raise(ErrorCode::Io, "cannot create " + path.string());
  o << j.dump(2) << '\n';
  if (!o) raise(ErrorCode::Io, "write failed for " + path.string());
}

std::pair<double, double> get_pair(const Json& cfg, const char* key) {
  const auto v = get<std::vector<double>>(cfg, key);
  if (v.size() != 2) raise(ErrorCode::Config, std::string("config key '") + key + "' needs two values");
  return {v[0], v[1]};
}

std::vector<std::size_t> get_sizes(const Json& cfg, const char* key) {
  const auto v = get<std::vector<std::size_t>>(cfg, key);
  if (v.empty()) raise(ErrorCode::Config, std::string("config key '") + key + "' is empty");
  return v;
}

StepPlan plan_steps(double T, double dt) {
  if (!(T > 0.0) || !(dt > 0.0)) raise(ErrorCode::Config, "T and dt must be positive");
  const auto steps = static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
  return {steps, T - static_cast<double>(steps - 1) * dt};
}

std::string tag(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

struct Entry {
  const char* name;
  Json (*defaults)();
  RunFn run;
};

const Entry kEntries[] = {
    {"converge-heat", defaults_converge_heat, run_converge_heat},
    {"converge-hyper", defaults_converge_hyper, run_converge_hyper},
    {"converge-ch1d", defaults_converge_ch1d, run_converge_ch1d},
    {"converge-ch1d-forced", defaults_converge_ch1d_forced, run_converge_ch1d},
    {"converge-ch2d", defaults_converge_ch2d, run_converge_ch2d},
    {"scaling-1d", defaults_scaling_1d, run_scaling_1d},
    {"bench-batch", defaults_bench_batch, run_bench_batch},
    {"droplets", defaults_droplets, run_droplets},
    {"beta-stats", defaults_beta_stats, run_beta_stats},
    {"flowmap", defaults_flowmap, run_flowmap},
};

const Entry& find(const std::string& name) {
  for (const Entry& e : kEntries)
    if (name == e.name) return e;
  raise(ErrorCode::Config, "unknown experiment '" + name + "'");
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace detail

std::vector<std::string> experiment_names() {
  std::vector<std::string> out;
  for (const auto& e : detail::kEntries) out.emplace_back(e.name);
  return out;
}

Json experiment_defaults(const std::string& name) { return detail::find(name).defaults(); }

Json resolve_config(const std::string& name, const Json& overrides) {
  Json cfg = experiment_defaults(name);
  if (overrides.is_null()) return cfg;
  if (!overrides.is_object()) raise(ErrorCode::Config, "config must be a JSON object");
  for (auto it = overrides.begin(); it != overrides.end(); ++it) {
    if (!cfg.contains(it.key())) {
      raise(ErrorCode::Config, "unknown config key '" + it.key() + "' for " + name);
    }
    Json& slot = cfg[it.key()];
    const bool numeric = slot.is_number() && it.value().is_number();
    if (!numeric && slot.type() != it.value().type()) {
      raise(ErrorCode::Config, "config key '" + it.key() + "' expects " + slot.type_name() +
                                   ", got " + it.value().type_name());
    }
    slot = it.value();
  }
  return cfg;
}

Json run_experiment(const std::string& name, const Json& overrides, unsigned workers,
                    const std::string& out_dir) {
  const detail::Entry& entry = detail::find(name);
  const Json cfg = resolve_config(name, overrides);
  if (workers == 0) raise(ErrorCode::Config, "workers must be at least 1");
  const detail::OutDir out(out_dir);
  const std::string started = detail::utc_now();
  const auto t0 = std::chrono::steady_clock::now();

  const Executor ex(workers);
  Json summary = entry.run(cfg, ex, out);

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (name != "bench-batch") detail::write_json(out.file("summary.json"), summary);
  Json manifest = {{"experiment", name},
                   {"config", cfg},
                   {"seed", cfg.value("seed", std::uint64_t{0})},
                   {"version", version_string()},
                   {"workers", workers},
                   {"started_at", started},
                   {"wall_seconds", wall}};
  detail::write_json(out.file("manifest.json"), manifest);
  return summary;
}

std::string version_string() { return PENTAKIT_VERSION; }

}  // namespace pentakit
