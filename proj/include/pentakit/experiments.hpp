#pragma once

// Experiment drivers behind the CLI. Each experiment takes a JSON config
// (defaults overridden key by key), writes CSVs plus manifest.json into a
// fresh output directory and returns a JSON summary.

#include <json.hpp>
#include <string>
#include <vector>

namespace pentakit {

using Json = nlohmann::json;

std::vector<std::string> experiment_names();

/// Default config for `name`; throws Config for an unknown experiment.
Json experiment_defaults(const std::string& name);

/// Defaults with `overrides` applied. Unknown keys and type changes throw Config.
Json resolve_config(const std::string& name, const Json& overrides);

/// Runs `name` into `out_dir`, which must be absent or empty. The summary is
/// also written to summary.json (bench-batch timings excepted).
Json run_experiment(const std::string& name, const Json& overrides, unsigned workers,
                    const std::string& out_dir);

std::string version_string();

}  // namespace pentakit
