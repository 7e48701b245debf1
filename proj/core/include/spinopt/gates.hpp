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
#include <string>
#include <vector>

#include "spinopt/operators.hpp"

namespace spinopt {

struct GateTarget {
  std::string label;
  int n_qubits = 0;
  ComplexMatrix matrix;

  Eigen::Index dim() const { return matrix.rows(); }
};

enum class StandardGate { identity, had, t };

StandardGate parse_standard_gate(const std::string& name);

/// Single-qubit gate embedded at `qubit` (1-based) of an `n_qubits` register.
///
/// Had is the y-rotation exp(i pi/4 Y) rather than the textbook Hadamard, which
/// has determinant -1 and has no representative generated by a traceless
/// Hamiltonian. T is exp(i pi/8 Z).
GateTarget standard_gate(StandardGate gate, int qubit, int n_qubits);

/// e^{-i pi/4} diag(I, X): CNOT with its phase fixed so det = 1.
GateTarget cnot();

/// diag(1, 1, 1, 1, 1, 1, iX): controlled-controlled-NOT with det = 1.
GateTarget toffoli_like();

/// {I(x)I, Had(x)I, T(x)I, I(x)Had, I(x)T, CNOT}, in that order.
std::vector<GateTarget> universal_set_2q();

/// Resolves a CLI gate name ("identity", "had1", "t1", "had2", "t2", "cnot",
/// "toffoli-like"). "identity" and the single-qubit gates (the digit names the
/// qubit) are embedded in an `n_qubits` register.
GateTarget gate_by_name(const std::string& name, int n_qubits = 2);

/// Reads a square matrix from CSV: one row per line, each entry written as an
/// adjacent (real, imag) pair. Throws std::runtime_error on malformed input and
/// std::invalid_argument unless the matrix is in SU(n) to 1e-10.
GateTarget load_gate_csv(const std::filesystem::path& path);
void save_gate_csv(const std::filesystem::path& path, const ComplexMatrix& m);

/// (1/N) Re Tr(target^dagger U), N = dimension.
double fidelity(const GateTarget& target, const ComplexMatrix& u);
double fidelity(const ComplexMatrix& target, const ComplexMatrix& u);

/// Squared Frobenius norm of U - target.
double gate_error(const GateTarget& target, const ComplexMatrix& u);

}  // namespace spinopt
