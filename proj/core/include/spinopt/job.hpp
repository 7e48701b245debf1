/* Copyright 2026 The spinopt Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinopt/gates.hpp"
#include "spinopt/grape.hpp"
#include "spinopt/models.hpp"
#include "spinopt/spectrum.hpp"

namespace spinopt {

/// Invalid job configuration. The message starts with the offending field
/// path, e.g. "model.omegas: expected 2 values".
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ModelKind { basic_nmr, crosstalk, global_field, electrode };

ModelKind parse_model_kind(const std::string& name);
std::string model_kind_name(ModelKind kind);

struct ModelConfig {
  ModelKind kind = ModelKind::electrode;
  int n_qubits = 2;
  CouplingSpec coupling;
  std::vector<double> omegas;
  std::vector<double> gbars;
  double rabi = 10.0;
  RealMatrix alpha;
};

struct JobConfig {
  ModelConfig model;
  /// Gate name or matrix CSV path (resolved against the config directory).
  std::string target = "cnot";
  bool target_is_file = false;
  double t_final = 1.0;
  int segments = 10;
  OptimizerConfig optimizer;
  std::size_t restarts = 1;
  std::size_t workers = 1;
  std::filesystem::path outputs = "out";
  /// Normalized JSON of the configuration as parsed.
  std::string snapshot;
};

/// Parses the JSON job description. Relative file paths are resolved against
/// `base_dir`. Throws ConfigError.
JobConfig parse_job_config(const std::string& text,
                           const std::filesystem::path& base_dir = {});
JobConfig load_job_config(const std::filesystem::path& path);

ControlSystem build_system(const ModelConfig& model);
GateTarget resolve_target(const JobConfig& config);

struct RunSummary {
  std::string model;
  std::string target;
  double t_final = 0.0;
  int segments = 0;
  double fidelity = 0.0;
  double gate_error = 0.0;
  int iterations = 0;
  bool converged = false;
  double wall_time_s = 0.0;
  double bandwidth_99 = 0.0;
  std::size_t restarts = 0;
  std::size_t best_restart = 0;

  std::string to_json() const;
  static RunSummary from_json(const std::string& text);
};

struct RunRecord {
  JobConfig config;
  OptimizationResult result;
  RunSummary summary;
  std::filesystem::path field_csv;
  std::filesystem::path spectrum_csv;
  std::filesystem::path summary_json;
};

/// Builds the system, optimizes (best of config.restarts), and writes
/// field.csv, spectrum.csv, summary.json and config.json under
/// config.outputs. The summary fidelity is re-evaluated from the written
/// field file.
RunRecord run_job(const JobConfig& config);

struct SweepCell {
  double rabi = 0.0;
  int segments = 0;
  std::string target;
  double best_fidelity = 0.0;
  bool converged = false;
  std::size_t restarts = 0;
};

/// Grid over (Omega, K) for the electrode model, best of `restarts` runs per
/// cell and target with the base optimizer budget. Cells run on
/// base.workers threads; results come back in grid order. With `cell_dir`
/// set, each cell's best field is written there atomically as it finishes.
std::vector<SweepCell> sweep(const JobConfig& base, const std::vector<double>& rabi_values,
                             const std::vector<int>& segment_values,
                             const std::vector<std::string>& targets, std::size_t restarts,
                             const std::optional<std::filesystem::path>& cell_dir = std::nullopt);

std::string sweep_csv(const std::vector<SweepCell>& cells);

struct VerifyReport {
  double fidelity = 0.0;
  double gate_error = 0.0;
  double max_segment_defect = 0.0;
  double total_defect = 0.0;
  bool bound_ok = true;
  double bandwidth_99 = 0.0;
  std::optional<double> summary_fidelity;
  bool summary_matches = true;

  std::string to_text() const;
};

/// Recomputes everything from the field file alone. If `summary_json` is
/// given, the stored fidelity is compared at 1e-10.
VerifyReport verify(const std::filesystem::path& field_csv, const JobConfig& config,
                    const std::optional<std::filesystem::path>& summary_json = std::nullopt);

}  // namespace spinopt
