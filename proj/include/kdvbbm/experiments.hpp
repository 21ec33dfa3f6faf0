#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kdvbbm/dynamics.hpp"
#include "kdvbbm/keyvalue.hpp"
#include "kdvbbm/model.hpp"
#include "kdvbbm/report.hpp"

namespace kdvbbm {

enum class ExperimentKind { simulate, energy_audit, estimates, illposed_scan, inflate, split };

std::string_view experiment_name(ExperimentKind k);
ExperimentKind experiment_from_name(std::string_view name);
std::vector<ExperimentKind> all_experiments();

/// A resolved run. Top-level config keys: experiment, preset, n, dt, out,
/// seed, scheme; optional sections [params] (instead of a preset) and
/// [experiment] (keys depend on the experiment).
struct RunConfig {
  ExperimentKind experiment = ExperimentKind::simulate;
  std::string preset;  // empty when [params] was given
  ModelParams params;
  std::vector<std::pair<std::string, std::string>> provenance;
  int n = 0;
  double dt = 0.0;
  std::filesystem::path out = "runs";
  std::uint64_t seed = 20240601;
  Scheme scheme = Scheme::integrating_factor_rk4;
  KeyValueBlock block;

  /// Everything that determines the numbers, in a fixed key order.
  Json to_json() const;
};

struct RunOverrides {
  std::optional<std::string> preset;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
};

/// Validates the document against `kind` (or its own `experiment` key) and
/// applies the overrides. Throws ConfigError naming every violation.
RunConfig resolve_run_config(const KeyValueDocument& doc, std::optional<ExperimentKind> kind,
                             const RunOverrides& overrides = {});

/// Parses "sin:1:1, cos:2:0.5", "zero" or "random:<degree>:<amp>" into a
/// field with the given max_mode.
SpectralField initial_from_spec(const std::string& spec, int max_mode, std::uint64_t seed);

struct ExperimentOutput {
  ExperimentReport report;
  std::optional<Trajectory> trajectory;
};

/// Computes without touching the file system. Failures inside the
/// experiment are recorded in the report; partial trajectories are kept.
ExperimentOutput run_experiment(const RunConfig& cfg);

/// 16 hex digits of FNV-1a over the canonical config JSON.
std::string run_id(const RunConfig& cfg);

/// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

struct RunResult {
  ExperimentReport report;
  std::string run_id;
  std::vector<std::filesystem::path> files;
};

/// run_experiment plus series.csv, report.json, manifest.json (and
/// trajectory.csv when there is one) under cfg.out.
RunResult run(const RunConfig& cfg);

}  // namespace kdvbbm
