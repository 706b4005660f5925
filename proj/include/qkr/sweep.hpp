#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qkr/core.hpp"
#include "qkr/observables.hpp"

namespace qkr {

// One evolve + fit per (alpha, resonance) pair. The base config supplies
// kappa0, initial condition, steps, back-end and truncation; alpha and the
// resonance are substituted per run.
struct SweepSpec {
  RunConfig base;
  std::vector<double> alpha_values;
  std::vector<ResonanceParams> resonances;
  std::int64_t window = 100;
  std::int64_t smooth_width = 0;
  double classify_tol = 0.05;
  std::filesystem::path output_dir;
};

struct SweepRun {
  double alpha = 0.0;
  std::int64_t p = 1;
  std::int64_t q = 1;
  std::string dir;  // relative to output_dir
  bool ok = false;
  std::string error;
  double gamma = 0.0;
  double rms_residual = 0.0;
  std::string model;
  std::string regime;
  double final_sigma = 0.0;
  double norm_leak = 0.0;
  double wall_time_s = 0.0;
};

struct SweepManifest {
  SweepSpec spec;
  std::vector<SweepRun> runs;
  std::string tool_version;
  std::string timestamp;  // ISO 8601 UTC
};

// Executes every (alpha, resonance) pair, up to `workers` runs in parallel.
// Each run writes series.csv, final.csv and meta.json into its own
// directory; manifest.json is written at output_dir root. Per-run failures
// are recorded and do not stop the sweep.
SweepManifest run_sweep(const SweepSpec& spec, int workers);

// Flat CSV: alpha,p,q,gamma,regime,predicted_gamma,residual. The predicted
// columns hold n/a for secondary resonances and failed runs.
std::string summarize(const SweepManifest& manifest);

nlohmann::json run_config_json(const RunConfig& config);
nlohmann::json manifest_json(const SweepManifest& manifest);
void write_manifest(const std::filesystem::path& path, const SweepManifest& manifest);

// run_<alpha with explicit sign, 4 decimals>_<p>_<q>
std::string run_dir_name(double alpha, const ResonanceParams& r);

}  // namespace qkr
