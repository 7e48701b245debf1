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
#include <span>
#include <vector>

#include "spinopt/gates.hpp"
#include "spinopt/models.hpp"

namespace spinopt {

/// Piecewise-constant control: segment k spans [times[k], times[k+1]) and
/// carries the amplitudes values.row(k), one column per control Hamiltonian.
///
/// Segment boundaries are stored rather than durations so that the field CSV
/// round-trips bit-exactly.
class PiecewiseControl {
 public:
  PiecewiseControl() = default;
  /// Throws std::invalid_argument unless times is strictly increasing with
  /// times.size() == values.rows() + 1, and values respect `bound`.
  PiecewiseControl(std::vector<double> times, RealMatrix values,
                   std::optional<double> bound = std::nullopt);

  /// K equal segments over [0, t_final], all amplitudes zero.
  static PiecewiseControl uniform(double t_final, int segments, int n_controls,
                                  std::optional<double> bound = std::nullopt);

  Eigen::Index segments() const { return values_.rows(); }
  Eigen::Index n_controls() const { return values_.cols(); }
  double t_final() const { return times_.empty() ? 0.0 : times_.back(); }
  double dt(Eigen::Index k) const {
    const auto i = static_cast<std::size_t>(k);
    return times_[i + 1] - times_[i];
  }
  bool is_uniform(double rel_tol = 1e-12) const;

  const std::vector<double>& times() const { return times_; }
  const RealMatrix& values() const { return values_; }
  const std::optional<double>& bound() const { return bound_; }

  /// Amplitudes of segment k as a contiguous span.
  std::vector<double> amplitudes(Eigen::Index k) const;

  /// Replaces the amplitudes. The bound is re-checked.
  void set_values(RealMatrix values);
  void set_segment(Eigen::Index k, std::span<const double> u);
  void set_bound(std::optional<double> bound);

  bool operator==(const PiecewiseControl& other) const = default;

 private:
  void check_bound() const;

  std::vector<double> times_{0.0};
  RealMatrix values_;
  std::optional<double> bound_;
};

/// Per-segment propagators and the partial products used by gradient sweeps.
///
/// With U_k the propagator of segment k (1-based), forward[k] = U_k ... U_1
/// (forward[0] = I) and backward[k] = U_K ... U_{k+1} (backward[K] = I), so
/// backward[k] * U_k * forward[k-1] == total for every k. Vectors here are
/// 0-based: segment_props[k-1] holds U_k.
struct PropagationCache {
  std::vector<double> durations;
  std::vector<HermitianSpectrum> spectra;
  std::vector<ComplexMatrix> segment_props;
  std::vector<ComplexMatrix> forward;
  std::vector<ComplexMatrix> backward;
  ComplexMatrix total;

  Eigen::Index segments() const { return static_cast<Eigen::Index>(segment_props.size()); }
};

/// exp(-i dt H(u)).
ComplexMatrix segment_propagator(const ControlSystem& system, std::span<const double> u,
                                 double dt);

/// Builds the full cache; later segments multiply on the left.
PropagationCache propagate(const ControlSystem& system, const PiecewiseControl& control);

/// Total propagator only, without storing partial products.
ComplexMatrix propagate_total(const ControlSystem& system, const PiecewiseControl& control);

double evolve_fidelity(const ControlSystem& system, const PiecewiseControl& control,
                       const GateTarget& target);

/// Field CSV: header "t_start,t_end,u_1,...,u_M", one row per segment.
/// Numbers use the shortest round-trip representation.
void write_field_csv(std::ostream& out, const PiecewiseControl& control);
void write_field_csv(const std::filesystem::path& path, const PiecewiseControl& control);
PiecewiseControl read_field_csv(std::istream& in);
PiecewiseControl read_field_csv(const std::filesystem::path& path);

/// Writes to a sibling temporary and renames over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace spinopt
