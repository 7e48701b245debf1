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

#include "spinopt/operators.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace spinopt {

PauliAxis parse_axis(char c) {
  switch (c) {
    case 'x': case 'X': return PauliAxis::x;
    case 'y': case 'Y': return PauliAxis::y;
    case 'z': case 'Z': return PauliAxis::z;
    default:
      throw std::invalid_argument(std::string("unknown Pauli axis '") + c + "'");
  }
}

char axis_name(PauliAxis axis) {
  switch (axis) {
    case PauliAxis::x: return 'x';
    case PauliAxis::y: return 'y';
    case PauliAxis::z: return 'z';
  }
  return '?';
}

ComplexMatrix pauli(PauliAxis axis) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  const Complex i(0.0, 1.0);
  switch (axis) {
    case PauliAxis::x:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case PauliAxis::y:
      m(0, 1) = -i;
      m(1, 0) = i;
      break;
    case PauliAxis::z:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
  }
  return m;
}

ComplexMatrix identity(Eigen::Index dim) {
  return ComplexMatrix::Identity(dim, dim);
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    }
  }
  return out;
}

ComplexMatrix embed_pauli(PauliAxis axis, int site, int n_qubits) {
  if (n_qubits < 1) {
    throw std::invalid_argument("embed_pauli: n_qubits must be >= 1");
  }
  if (site < 1 || site > n_qubits) {
    throw std::invalid_argument("embed_pauli: site " + std::to_string(site) +
                                " outside 1.." + std::to_string(n_qubits));
  }
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (int q = 1; q <= n_qubits; ++q) {
    out = tensor_product(out, q == site ? pauli(axis) : identity(2));
  }
  return out;
}

ComplexMatrix pauli_string(const std::string& letters) {
  if (letters.empty()) {
    throw std::invalid_argument("pauli_string: empty string");
  }
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (char c : letters) {
    out = tensor_product(out, (c == 'I' || c == 'i') ? identity(2) : pauli(parse_axis(c)));
  }
  return out;
}

double hermiticity_defect(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("hermiticity_defect: matrix not square");
  }
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_defect(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) {
    throw std::invalid_argument("unitarity_defect: matrix not square");
  }
  return (u.adjoint() * u - identity(u.rows())).cwiseAbs().maxCoeff();
}

double max_entry_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("max_entry_diff: dimension mismatch");
  }
  return (a - b).cwiseAbs().maxCoeff();
}

HermitianSpectrum hermitian_spectrum(const ComplexMatrix& h) {
  if (h.rows() != h.cols() || h.rows() == 0) {
    throw std::invalid_argument("hermitian_spectrum: matrix must be square and non-empty");
  }
  const double defect = hermiticity_defect(h);
  if (!(defect <= kHermitianTol)) {
    throw ContractViolation("generator is not Hermitian (defect " + std::to_string(defect) + ")");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("Hermitian eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix herm_expm(const HermitianSpectrum& spectrum, double dt) {
  const Eigen::Index n = spectrum.values.size();
  Eigen::VectorXcd phases(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    phases(j) = std::polar(1.0, -dt * spectrum.values(j));
  }
  return spectrum.vectors * phases.asDiagonal() * spectrum.vectors.adjoint();
}

ComplexMatrix herm_expm(const ComplexMatrix& h, double dt) {
  if (!std::isfinite(dt)) {
    throw std::invalid_argument("herm_expm: non-finite duration");
  }
  if (dt == 0.0) {
    if (h.rows() != h.cols()) {
      throw std::invalid_argument("herm_expm: matrix not square");
    }
    hermitian_spectrum(h);
    return identity(h.rows());
  }
  return herm_expm(hermitian_spectrum(h), dt);
}

}  // namespace spinopt
