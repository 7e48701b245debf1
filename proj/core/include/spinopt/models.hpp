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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spinopt/operators.hpp"

namespace spinopt {

enum class CouplingKind { ising, heisenberg };

/// Pairwise couplings J_{nn'} (n < n') in units of J.
///
/// Either a uniform nearest-neighbour chain of strength `strength`, or an
/// explicit symmetric matrix of which only the strict upper triangle is read.
struct CouplingSpec {
  CouplingKind kind = CouplingKind::ising;
  double strength = 1.0;
  std::optional<RealMatrix> matrix;

  static CouplingSpec nearest_neighbour(CouplingKind kind, double j = 1.0);
  static CouplingSpec explicit_matrix(CouplingKind kind, RealMatrix j);

  /// J_{nn'} for 1 <= n < n' <= n_qubits.
  double coupling(int n, int n_prime, int n_qubits) const;
};

/// Control-linear model H(u) = drift + sum_m u_m controls[m].
struct ControlSystem {
  int n_qubits = 0;
  ComplexMatrix drift;
  std::vector<ComplexMatrix> controls;
  std::vector<std::string> labels;

  Eigen::Index dim() const { return drift.rows(); }
  std::size_t n_controls() const { return controls.size(); }

  /// drift + sum_m u[m] * controls[m].
  ComplexMatrix hamiltonian(std::span<const double> u) const;

  /// Checks the invariants: shared dimension 2^n_qubits, Hermiticity, M >= 1.
  /// Throws std::invalid_argument on violation.
  void validate() const;
};

/// Coupling sum over pairs n < n' (Ising: ZZ, Heisenberg: XX+YY+ZZ).
ComplexMatrix coupling_hamiltonian(const CouplingSpec& coupling, int n_qubits);

/// Ising-coupled register with independent x/y controls on every spin.
/// Controls are ordered x1, y1, x2, y2, ...
ControlSystem build_basic_nmr(const CouplingSpec& coupling, int n_qubits);

/// Replaces control m by sum_m' alpha(m, m') * base.controls[m'].
ControlSystem build_crosstalk(const ControlSystem& base, const RealMatrix& alpha);

/// Lab-frame register driven by one global field: drift carries the Ising
/// couplings and the Zeeman terms -omega_n/2 Z_n; the two controls are the
/// collective sums sum_n gbar_n X_n and sum_n gbar_n Y_n.
/// Empty `gbars` means all ones.
ControlSystem build_global_field_model(const std::vector<double>& omegas,
                                       const std::vector<double>& gbars,
                                       const CouplingSpec& coupling);

/// Heisenberg chain under a fixed global drive of Rabi frequency `rabi`
/// (drift term -rabi * sum_n gbar_n X_n) with one Z control per qubit.
ControlSystem build_electrode_model(double rabi, const std::vector<double>& gbars,
                                    int n_qubits, const CouplingSpec& coupling);

}  // namespace spinopt
