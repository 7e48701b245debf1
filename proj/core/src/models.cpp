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

#include "spinopt/models.hpp"

#include <cmath>

namespace spinopt {

namespace {

ComplexMatrix pair_term(PauliAxis axis, int n, int n_prime, int n_qubits) {
  return embed_pauli(axis, n, n_qubits) * embed_pauli(axis, n_prime, n_qubits);
}

std::vector<double> ratios_or_ones(const std::vector<double>& gbars, int n_qubits,
                                   const char* what) {
  if (gbars.empty()) {
    return std::vector<double>(static_cast<std::size_t>(n_qubits), 1.0);
  }
  if (static_cast<int>(gbars.size()) != n_qubits) {
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(n_qubits) +
                                " coupling ratios, got " + std::to_string(gbars.size()));
  }
  return gbars;
}

}  // namespace

CouplingSpec CouplingSpec::nearest_neighbour(CouplingKind kind, double j) {
  CouplingSpec spec;
  spec.kind = kind;
  spec.strength = j;
  return spec;
}

CouplingSpec CouplingSpec::explicit_matrix(CouplingKind kind, RealMatrix j) {
  if (j.rows() != j.cols()) {
    throw std::invalid_argument("coupling matrix must be square");
  }
  if (!j.allFinite()) {
    throw std::invalid_argument("coupling matrix has non-finite entries");
  }
  CouplingSpec spec;
  spec.kind = kind;
  spec.matrix = std::move(j);
  return spec;
}

double CouplingSpec::coupling(int n, int n_prime, int n_qubits) const {
  if (matrix) {
    if (matrix->rows() != n_qubits) {
      throw std::invalid_argument("coupling matrix is " + std::to_string(matrix->rows()) +
                                  "x" + std::to_string(matrix->cols()) + " but register has " +
                                  std::to_string(n_qubits) + " qubits");
    }
    return (*matrix)(n - 1, n_prime - 1);
  }
  return n_prime == n + 1 ? strength : 0.0;
}

ComplexMatrix ControlSystem::hamiltonian(std::span<const double> u) const {
  if (u.size() != controls.size()) {
    throw std::invalid_argument("hamiltonian: got " + std::to_string(u.size()) +
                                " amplitudes for " + std::to_string(controls.size()) +
                                " controls");
  }
  ComplexMatrix h = drift;
  for (std::size_t m = 0; m < controls.size(); ++m) {
    if (u[m] != 0.0) {
      h.noalias() += u[m] * controls[m];
    }
  }
  return h;
}

void ControlSystem::validate() const {
  if (n_qubits < 1) {
    throw std::invalid_argument("control system needs at least one qubit");
  }
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  if (drift.rows() != d || drift.cols() != d) {
    throw std::invalid_argument("drift dimension does not match 2^n_qubits");
  }
  if (controls.empty()) {
    throw std::invalid_argument("control system needs at least one control");
  }
  if (labels.size() != controls.size()) {
    throw std::invalid_argument("one label per control required");
  }
  if (!drift.allFinite()) {
    throw std::invalid_argument("drift has non-finite entries");
  }
  if (hermiticity_defect(drift) > kHermitianTol) {
    throw std::invalid_argument("drift is not Hermitian");
  }
  for (std::size_t m = 0; m < controls.size(); ++m) {
    if (controls[m].rows() != d || controls[m].cols() != d) {
      throw std::invalid_argument("control '" + labels[m] + "' has wrong dimension");
    }
    if (!controls[m].allFinite()) {
      throw std::invalid_argument("control '" + labels[m] + "' has non-finite entries");
    }
    if (hermiticity_defect(controls[m]) > kHermitianTol) {
      throw std::invalid_argument("control '" + labels[m] + "' is not Hermitian");
    }
  }
}

ComplexMatrix coupling_hamiltonian(const CouplingSpec& coupling, int n_qubits) {
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  ComplexMatrix h = ComplexMatrix::Zero(d, d);
  for (int n = 1; n <= n_qubits; ++n) {
    for (int np = n + 1; np <= n_qubits; ++np) {
      const double j = coupling.coupling(n, np, n_qubits);
      if (!std::isfinite(j)) {
        throw std::invalid_argument("non-finite coupling strength");
      }
      if (j == 0.0) continue;
      h += j * pair_term(PauliAxis::z, n, np, n_qubits);
      if (coupling.kind == CouplingKind::heisenberg) {
        h += j * pair_term(PauliAxis::x, n, np, n_qubits);
        h += j * pair_term(PauliAxis::y, n, np, n_qubits);
      }
    }
  }
  return h;
}

ControlSystem build_basic_nmr(const CouplingSpec& coupling, int n_qubits) {
  if (n_qubits < 1) {
    throw std::invalid_argument("build_basic_nmr: n_qubits must be >= 1");
  }
  CouplingSpec ising = coupling;
  ising.kind = CouplingKind::ising;
  ControlSystem sys;
  sys.n_qubits = n_qubits;
  sys.drift = coupling_hamiltonian(ising, n_qubits);
  for (int n = 1; n <= n_qubits; ++n) {
    sys.controls.push_back(embed_pauli(PauliAxis::x, n, n_qubits));
    sys.labels.push_back("x" + std::to_string(n));
    sys.controls.push_back(embed_pauli(PauliAxis::y, n, n_qubits));
    sys.labels.push_back("y" + std::to_string(n));
  }
  return sys;
}

ControlSystem build_crosstalk(const ControlSystem& base, const RealMatrix& alpha) {
  const auto m = static_cast<Eigen::Index>(base.controls.size());
  if (m != 2 * base.n_qubits) {
    throw std::invalid_argument("build_crosstalk: base must have 2N controls");
  }
  if (alpha.rows() != m || alpha.cols() != m) {
    throw std::invalid_argument("build_crosstalk: alpha must be " + std::to_string(m) + "x" +
                                std::to_string(m));
  }
  ControlSystem sys;
  sys.n_qubits = base.n_qubits;
  sys.drift = base.drift;
  sys.labels = base.labels;
  for (Eigen::Index row = 0; row < m; ++row) {
    ComplexMatrix h = ComplexMatrix::Zero(base.dim(), base.dim());
    for (Eigen::Index col = 0; col < m; ++col) {
      if (alpha(row, col) != 0.0) {
        h += alpha(row, col) * base.controls[static_cast<std::size_t>(col)];
      }
    }
    sys.controls.push_back(std::move(h));
  }
  return sys;
}

ControlSystem build_global_field_model(const std::vector<double>& omegas,
                                       const std::vector<double>& gbars,
                                       const CouplingSpec& coupling) {
  const int n_qubits = static_cast<int>(omegas.size());
  if (n_qubits < 1) {
    throw std::invalid_argument("build_global_field_model: need at least one frequency");
  }
  const auto ratios = ratios_or_ones(gbars, n_qubits, "build_global_field_model");
  CouplingSpec ising = coupling;
  ising.kind = CouplingKind::ising;

  ControlSystem sys;
  sys.n_qubits = n_qubits;
  sys.drift = coupling_hamiltonian(ising, n_qubits);
  const Eigen::Index d = sys.drift.rows();
  ComplexMatrix x_sum = ComplexMatrix::Zero(d, d);
  ComplexMatrix y_sum = ComplexMatrix::Zero(d, d);
  for (int n = 1; n <= n_qubits; ++n) {
    const auto i = static_cast<std::size_t>(n - 1);
    if (!std::isfinite(omegas[i]) || !std::isfinite(ratios[i])) {
      throw std::invalid_argument("build_global_field_model: non-finite parameter");
    }
    sys.drift -= 0.5 * omegas[i] * embed_pauli(PauliAxis::z, n, n_qubits);
    x_sum += ratios[i] * embed_pauli(PauliAxis::x, n, n_qubits);
    y_sum += ratios[i] * embed_pauli(PauliAxis::y, n, n_qubits);
  }
  sys.controls = {std::move(x_sum), std::move(y_sum)};
  sys.labels = {"x", "y"};
  return sys;
}

ControlSystem build_electrode_model(double rabi, const std::vector<double>& gbars, int n_qubits,
                                    const CouplingSpec& coupling) {
  if (n_qubits < 1) {
    throw std::invalid_argument("build_electrode_model: n_qubits must be >= 1");
  }
  if (!std::isfinite(rabi)) {
    throw std::invalid_argument("build_electrode_model: non-finite Rabi frequency");
  }
  const auto ratios = ratios_or_ones(gbars, n_qubits, "build_electrode_model");
  CouplingSpec heisenberg = coupling;
  heisenberg.kind = CouplingKind::heisenberg;

  ControlSystem sys;
  sys.n_qubits = n_qubits;
  sys.drift = coupling_hamiltonian(heisenberg, n_qubits);
  for (int n = 1; n <= n_qubits; ++n) {
    const auto i = static_cast<std::size_t>(n - 1);
    sys.drift -= rabi * ratios[i] * embed_pauli(PauliAxis::x, n, n_qubits);
    sys.controls.push_back(embed_pauli(PauliAxis::z, n, n_qubits));
    sys.labels.push_back("z" + std::to_string(n));
  }
  return sys;
}

}  // namespace spinopt
