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

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace spinopt {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Tolerance for Hermiticity checks on symbolically built Pauli sums.
inline constexpr double kHermitianTol = 1e-12;

/// Raised when a numerical precondition (Hermiticity, unitarity) is broken.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised when an iteration produces non-finite values.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PauliAxis { x, y, z };

PauliAxis parse_axis(char c);
char axis_name(PauliAxis axis);

/// 2x2 Pauli matrix for the given axis.
ComplexMatrix pauli(PauliAxis axis);
ComplexMatrix identity(Eigen::Index dim);

/// Kronecker product. The left factor owns the most significant index bits,
/// so qubit 1 is always the leftmost factor.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// sigma_axis acting on `site` (1-based) of an `n_qubits` register.
ComplexMatrix embed_pauli(PauliAxis axis, int site, int n_qubits);

/// Pauli string such as "XIZ" (leftmost letter = qubit 1). 'I' is allowed.
ComplexMatrix pauli_string(const std::string& letters);

/// Largest entry magnitude of A - A^dagger.
double hermiticity_defect(const ComplexMatrix& a);

/// Largest entry magnitude of U^dagger U - I.
double unitarity_defect(const ComplexMatrix& u);

/// Largest entry magnitude of A - B. Dimensions must agree.
double max_entry_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Eigendecomposition H = V diag(lambda) V^dagger of a Hermitian matrix.
struct HermitianSpectrum {
  RealVector values;
  ComplexMatrix vectors;
};

/// Throws ContractViolation if `h` is not Hermitian to kHermitianTol.
HermitianSpectrum hermitian_spectrum(const ComplexMatrix& h);

/// exp(-i dt H) for Hermitian H, via eigendecomposition.
ComplexMatrix herm_expm(const ComplexMatrix& h, double dt);

/// exp(-i dt H) from a precomputed spectrum.
ComplexMatrix herm_expm(const HermitianSpectrum& spectrum, double dt);

}  // namespace spinopt
