// pentakit command-line driver. Talks to the library only through the C API.

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <string>
#include <vector>

#include "pentakit/pentakit.h"

namespace {

using nlohmann::json;

struct ContextDeleter {
  void operator()(pk_context* c) const { pk_context_destroy(c); }
};
using Context = std::unique_ptr<pk_context, ContextDeleter>;

std::string take(char* s) {
  std::string out = s ? s : "";
  pk_string_free(s);
  return out;
}

std::vector<std::string> experiment_names() {
  pk_context* raw = nullptr;
  if (pk_context_create(1, &raw) != PK_OK) return {};
  Context ctx(raw);
  char* names = nullptr;
  if (pk_experiment_names(ctx.get(), &names) != PK_OK) return {};
  return json::parse(take(names)).get<std::vector<std::string>>();
}

void usage(std::ostream& os, const std::vector<std::string>& names) {
  os << "usage: pentakit <subcommand> [--config path] [--seed u64] [--workers n] [--out dir]"
        " [key=value ...]\n"
        "       pentakit <subcommand> --print-config [...]\n"
        "       pentakit --version\n\nsubcommands:\n";
  for (const auto& n : names) os << "  " << n << '\n';
}

// key=value; the value is read as JSON when it parses, else as a string.
void apply_assignment(json& overrides, const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("expected key=value, got '" + kv + "'");
  const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
  json v = json::parse(value, nullptr, false);
  overrides[key] = v.is_discarded() ? json(value) : v;
}

}  // namespace

int main(int argc, char** argv) {
  const auto names = experiment_names();
  if (names.empty()) {
    std::cerr << "pentakit: library initialisation failed\n";
    return 1;
  }
  if (argc < 2) {
    usage(std::cerr, names);
    return 2;
  }
  const std::string first = argv[1];
  if (first == "-h" || first == "--help") {
    usage(std::cout, names);
    return 0;
  }
  if (first == "--version") {
    std::cout << "pentakit " << pk_version() << '\n';
    return 0;
  }
  if (std::find(names.begin(), names.end(), first) == names.end()) {
    std::cerr << "pentakit: unknown subcommand '" << first << "'\n";
    usage(std::cerr, names);
    return 2;
  }

  CLI::App app{"pentakit " + first, "pentakit " + first};
  std::string config_path, out_dir = "out/" + first;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  bool print_config = false;
  std::vector<std::string> assignments;
  auto* seed_opt = app.add_option("--seed", seed, "master seed (overrides config)");
  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--workers", workers, "worker threads")->check(CLI::Range(1u, 1024u));
  app.add_option("--out", out_dir, "output directory (absent or empty)");
  app.add_flag("--print-config", print_config, "print the resolved config and exit");
  app.add_option("overrides", assignments, "config overrides as key=value");
  try {
    app.parse(argc - 1, argv + 1);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  json overrides = json::object();
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      overrides = json::parse(in);
      if (!overrides.is_object()) throw CLI::ValidationError("config file must hold a JSON object");
    }
    for (const auto& kv : assignments) apply_assignment(overrides, kv);
    if (*seed_opt) overrides["seed"] = seed;
  } catch (const std::exception& e) {
    std::cerr << "pentakit: " << e.what() << '\n';
    return 2;
  }

  pk_context* raw = nullptr;
  if (pk_context_create(workers, &raw) != PK_OK) {
    std::cerr << "pentakit: cannot create context\n";
    return 1;
  }
  Context ctx(raw);
  const std::string text = overrides.dump();
  char* result = nullptr;
  const pk_status st = print_config
                           ? pk_experiment_resolve(ctx.get(), first.c_str(), text.c_str(), &result)
                           : pk_experiment_run(ctx.get(), first.c_str(), text.c_str(),
                                               out_dir.c_str(), &result);
  if (st != PK_OK) {
    std::cerr << "pentakit: " << pk_status_name(st) << ": " << pk_last_error(ctx.get()) << '\n';
    return 1;
  }
  std::cout << take(result) << '\n';
  return 0;
}
