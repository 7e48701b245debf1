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

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spinopt/gates.hpp"
#include "spinopt/geometric.hpp"
#include "spinopt/job.hpp"
#include "spinopt/propagation.hpp"
#include "spinopt/spectrum.hpp"

namespace fs = std::filesystem;
using namespace spinopt;

namespace {

enum ExitCode : int { kOk = 0, kUsage = 1, kUnconverged = 2, kNumerical = 3 };

struct Overrides {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> restarts;
  std::optional<std::size_t> workers;
};

void apply(JobConfig& config, const Overrides& o) {
  if (o.out) config.outputs = *o.out;
  if (o.seed) config.optimizer.seed = *o.seed;
  if (o.restarts) {
    if (*o.restarts == 0) throw ConfigError("--restarts: must be at least 1");
    config.restarts = *o.restarts;
  }
  if (o.workers) {
    if (*o.workers == 0) throw ConfigError("--workers: must be at least 1");
    config.workers = *o.workers;
  }
}

int cmd_synthesize(const std::string& config_path, const Overrides& o, bool strict) {
  JobConfig config = load_job_config(config_path);
  apply(config, o);
  const RunRecord record = run_job(config);
  const RunSummary& s = record.summary;
  std::printf("target=%s model=%s t_F=%g K=%d\n", s.target.c_str(), s.model.c_str(), s.t_final,
              s.segments);
  std::printf("fidelity=%.12f gate_error=%.6e iterations=%d converged=%s\n", s.fidelity,
              s.gate_error, s.iterations, s.converged ? "true" : "false");
  std::printf("bandwidth_99=%g wall_time_s=%.3f best_restart=%zu/%zu\n", s.bandwidth_99,
              s.wall_time_s, s.best_restart, s.restarts);
  std::printf("wrote %s\n", record.summary_json.string().c_str());
  return strict && !s.converged ? kUnconverged : kOk;
}

int cmd_sweep(const std::string& config_path, const Overrides& o, const std::vector<double>& rabis,
              const std::vector<int>& segments, std::vector<std::string> targets, bool strict) {
  JobConfig config = load_job_config(config_path);
  apply(config, o);
  if (targets.empty()) targets = {config.target};
  const std::size_t restarts = o.restarts.value_or(5);
  fs::create_directories(config.outputs);
  const auto cells = sweep(config, rabis, segments, targets, restarts, config.outputs / "cells");
  const std::string table = sweep_csv(cells);
  const fs::path path = config.outputs / "sweep.csv";
  write_file_atomic(path, table);
  std::cout << table;
  std::printf("wrote %s\n", path.string().c_str());
  bool all = true;
  for (const auto& c : cells) all = all && c.converged;
  return strict && !all ? kUnconverged : kOk;
}

ComplexMatrix load_matrix(const std::string& spec, int qubits) {
  if (fs::exists(spec)) return load_gate_csv(spec).matrix;
  return gate_by_name(spec, qubits).matrix;
}

/// Prints round-off residue as 0 rather than -0.000000000000.
double tidy(double v) { return std::abs(v) < 5e-13 ? 0.0 : v; }

void print_euler(const char* name, const EulerAngles& a) {
  std::printf("%s alpha=%.12f beta=%.12f gamma=%.12f\n", name, tidy(a.alpha), tidy(a.beta),
              tidy(a.gamma));
}

int cmd_decompose(const std::string& spec, int qubits) {
  ComplexMatrix u = load_matrix(spec, qubits);
  const auto n = u.rows();
  if (unitarity_defect(u) > 1e-10) throw std::invalid_argument("decompose: matrix is not unitary");
  // remove the global phase so the input lies in SU(n)
  const Complex det = u.determinant();
  const Complex global = std::pow(det, 1.0 / static_cast<double>(n));
  u /= global;
  std::printf("global_phase=%.12f\n", tidy(std::arg(global)));
  if (n == 2) {
    print_euler("euler", euler_decompose(u));
    std::printf("reassembly_error=%.3e\n", max_entry_diff(reassemble(euler_decompose(u)), u));
  } else if (n == 4) {
    const CartanDecomposition d = cartan_decompose(u);
    std::printf("cartan alpha1=%.12f alpha2=%.12f alpha3=%.12f\n", tidy(d.alpha1),
                tidy(d.alpha2), tidy(d.alpha3));
    std::printf("center_phase=%.0f%+.0fi\n", tidy(d.phase.real()), tidy(d.phase.imag()));
    print_euler("u1 qubit1", euler_decompose(d.u1_local.first));
    print_euler("u1 qubit2", euler_decompose(d.u1_local.second));
    print_euler("u2 qubit1", euler_decompose(d.u2_local.first));
    print_euler("u2 qubit2", euler_decompose(d.u2_local.second));
    std::printf("reassembly_error=%.3e\n", max_entry_diff(reassemble(d), u));
  } else {
    throw std::invalid_argument("decompose: only 2x2 and 4x4 matrices are supported");
  }
  return kOk;
}

int cmd_spectrum(const std::string& field, const std::optional<std::string>& out, double fraction) {
  const PiecewiseControl control = read_field_csv(fs::path(field));
  const SpectrumResult spec = control_spectrum(control);
  if (out) {
    write_spectrum_csv(fs::path(*out), spec);
    std::printf("wrote %s\n", out->c_str());
  } else {
    write_spectrum_csv(std::cout, spec);
  }
  std::printf("# bandwidth_%g=%g\n", fraction * 100.0, bandwidth_summary(spec, fraction));
  return kOk;
}

int cmd_verify(const std::string& field, const std::string& config_path,
               const std::optional<std::string>& summary, bool strict) {
  const JobConfig config = load_job_config(config_path);
  std::optional<fs::path> summary_path;
  if (summary) summary_path = *summary;
  const VerifyReport report = verify(field, config, summary_path);
  std::cout << report.to_text();
  const bool ok = report.summary_matches && report.bound_ok;
  return strict && !ok ? kUnconverged : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spinopt: control pulse synthesis for spin-qubit gates"};
  app.require_subcommand(1);

  Overrides over;
  std::string config_path;
  bool strict = false;
  auto add_job_flags = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON job configuration")->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", over.out, "output directory (overrides config)");
    sub->add_option("--seed", over.seed, "base RNG seed (overrides config)");
    sub->add_option("--restarts", over.restarts, "number of restarts");
    sub->add_option("--workers", over.workers, "worker threads");
    sub->add_flag("--strict", strict, "exit with status 2 unless converged");
  };

  auto* synth = app.add_subcommand("synthesize", "optimize a control field for one target");
  add_job_flags(synth);

  auto* sw = app.add_subcommand("sweep", "best-of-restarts grid over rabi frequency and K");
  add_job_flags(sw);
  std::vector<double> rabis;
  std::vector<int> seg_values;
  std::vector<std::string> targets;
  sw->add_option("--omegas", rabis, "rabi frequencies")->required()->delimiter(',');
  sw->add_option("--segments", seg_values, "segment counts")->required()->delimiter(',');
  sw->add_option("--targets", targets, "gate names (default: config target)")->delimiter(',');

  auto* dec = app.add_subcommand("decompose", "Euler or Cartan decomposition of a gate");
  std::string gate_spec;
  int qubits = 2;
  dec->add_option("gate", gate_spec, "gate name or matrix CSV")->required();
  dec->add_option("--qubits", qubits, "qubit count for named gates")->check(CLI::Range(1, 2));

  auto* spc = app.add_subcommand("spectrum", "one-sided spectrum of a field CSV");
  std::string field_path;
  std::optional<std::string> spec_out;
  double fraction = 0.99;
  spc->add_option("field", field_path, "field CSV")->required()->check(CLI::ExistingFile);
  spc->add_option("--out", spec_out, "spectrum CSV path (default: stdout)");
  spc->add_option("--fraction", fraction, "power fraction for the bandwidth summary")
      ->check(CLI::Range(0.0, 1.0));

  auto* ver = app.add_subcommand("verify", "recompute a stored run from its field file");
  std::optional<std::string> summary_path;
  ver->add_option("field", field_path, "field CSV")->required()->check(CLI::ExistingFile);
  ver->add_option("--config", config_path, "JSON job configuration")->required()
      ->check(CLI::ExistingFile);
  ver->add_option("--summary", summary_path, "summary JSON to compare against")
      ->check(CLI::ExistingFile);
  ver->add_flag("--strict", strict, "exit with status 2 on mismatch or bound violation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*synth) return cmd_synthesize(config_path, over, strict);
    if (*sw) return cmd_sweep(config_path, over, rabis, seg_values, targets, strict);
    if (*dec) return cmd_decompose(gate_spec, qubits);
    if (*spc) return cmd_spectrum(field_path, spec_out, fraction);
    if (*ver) return cmd_verify(field_path, config_path, summary_path, strict);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const ContractViolation& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
