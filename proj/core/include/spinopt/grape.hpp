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

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spinopt/propagation.hpp"

namespace spinopt {

enum class UpdateMode { global, local };

/// Which directional derivative feeds the update.
///
/// first_order places H_m at the end of segment k:
///   g_{m,k} = Im Tr[U_T^dag B_k H_m U_k F_{k-1}].
/// exact differentiates exp(-i dt H) through its spectrum and rescales by
/// N / dt_k, which agrees with first_order as dt -> 0.
enum class GradientForm { exact, first_order };

struct InitSpec {
  enum class Kind { zero, constant, uniform_random };
  Kind kind = Kind::uniform_random;
  /// Constant value, or half-width of the uniform distribution.
  double value = 1.0;
};

struct OptimizerConfig {
  UpdateMode mode = UpdateMode::global;
  GradientForm gradient = GradientForm::exact;
  int max_iters = 5000;
  double target_infidelity = 1e-4;
  double epsilon0 = 1.0;
  bool line_search = true;
  std::optional<double> amplitude_bound;
  std::uint64_t seed = 1;
  InitSpec init;
  /// Consecutive stalled iterations before epsilon is re-randomized.
  int stall_limit = 5;
  /// Re-randomization cycles before giving up.
  int stall_cycles = 3;
  /// Wall-clock cap per run in seconds; 0 disables it.
  double time_limit_s = 0.0;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

struct OptimizationResult {
  PiecewiseControl control;
  double fidelity = 0.0;
  std::vector<double> trace;
  int iterations = 0;
  bool converged = false;
  bool stalled = false;
  double wall_time = 0.0;
};

/// Paper-form update direction (K x M), see GradientForm. Caller applies epsilon.
RealMatrix update_direction(const PropagationCache& cache, const ControlSystem& system,
                            const GateTarget& target,
                            GradientForm form = GradientForm::first_order);

/// Exact partial derivatives dF/du_{m,k} (K x M).
RealMatrix fidelity_gradient(const PropagationCache& cache, const ControlSystem& system,
                             const GateTarget& target, const PiecewiseControl& control);

/// dF/du_m for a single segment, where F(U_k) = Re Tr(W U_k) / N and U_k =
/// exp(-i dt H) with H described by `spectrum`.
RealVector segment_gradient(const HermitianSpectrum& spectrum, double dt, const ComplexMatrix& w,
                            const ControlSystem& system);

struct LineSearchOptions {
  int j_max = 1;
  int j_min = -40;
  /// Sufficient-increase constant relative to the predicted gain.
  double armijo = 1e-4;
};

struct LineSearchResult {
  double epsilon = 0.0;
  double fidelity = 0.0;
  bool stalled = true;
  int trials = 0;
};

/// Tries epsilon = eps0 * 2^j for j = j_max down to j_min and accepts the
/// largest trial that raises the objective by at least armijo * epsilon *
/// slope. If none does, the best strictly increasing trial is accepted; if
/// nothing increases, returns epsilon = 0 with the stall flag set.
/// `slope` is the predicted gain per unit epsilon (zero means no direction).
LineSearchResult line_search_step(const std::function<double(double)>& objective, double f0,
                                  double slope, double eps0,
                                  const LineSearchOptions& options = {});

/// Clamps every amplitude to [-u_max, u_max].
PiecewiseControl clip_amplitudes(const PiecewiseControl& control, double u_max);

/// Starting control for restart `run_index`, drawn from a stream derived
/// from (cfg.seed, run_index).
PiecewiseControl initial_control(const ControlSystem& system, double t_final, int segments,
                                 const OptimizerConfig& cfg, std::uint64_t run_index = 0);

/// Runs monotone ascent until 1 - F <= target_infidelity or max_iters.
/// `cancel`, when set and raised, ends the run early as unconverged.
/// Throws NumericalFailure when the fidelity becomes non-finite.
OptimizationResult optimize(const ControlSystem& system, const GateTarget& target,
                            const PiecewiseControl& control0, const OptimizerConfig& cfg,
                            const std::atomic<bool>* cancel = nullptr);

struct RestartOutcome {
  OptimizationResult best;
  std::size_t best_index = 0;
  std::vector<double> fidelities;
  std::size_t restarts = 0;
};

/// Best of `restarts` runs from initial_control(.., run_index). Runs are spread
/// over `workers` threads. The lowest-index converged run wins; runs with a
/// higher index are cancelled once one converges, so the outcome does not
/// depend on scheduling. Without convergence the highest fidelity wins.
RestartOutcome optimize_restarts(const ControlSystem& system, const GateTarget& target,
                                 double t_final, int segments, const OptimizerConfig& cfg,
                                 std::size_t restarts, std::size_t workers = 1);

}  // namespace spinopt
