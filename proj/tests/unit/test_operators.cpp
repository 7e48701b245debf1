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

#include <gtest/gtest.h>

#include <numbers>

#include "spinopt/operators.hpp"
#include "test_util.hpp"

namespace spinopt {
namespace {

const Complex kI{0.0, 1.0};

TEST(TensorProduct, IdentityCase) {
  EXPECT_EQ(tensor_product(identity(2), identity(2)), identity(4));
}

TEST(TensorProduct, XTimesIdentityIsBlockAntiDiagonal) {
  const ComplexMatrix m = tensor_product(pauli(PauliAxis::x), identity(2));
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected.block(0, 2, 2, 2) = identity(2);
  expected.block(2, 0, 2, 2) = identity(2);
  EXPECT_EQ(m, expected);
}

TEST(TensorProduct, ZZDiagonal) {
  const ComplexMatrix m = tensor_product(pauli(PauliAxis::z), pauli(PauliAxis::z));
  const Eigen::Vector4cd d = m.diagonal();
  EXPECT_EQ(d, Eigen::Vector4cd(1, -1, -1, 1));
  EXPECT_EQ(m, ComplexMatrix(d.asDiagonal()));
}

TEST(TensorProduct, AssociativeOnPaulis) {
  for (auto a : {PauliAxis::x, PauliAxis::y, PauliAxis::z})
    for (auto b : {PauliAxis::x, PauliAxis::y, PauliAxis::z})
      for (auto c : {PauliAxis::x, PauliAxis::y, PauliAxis::z}) {
        EXPECT_EQ(tensor_product(tensor_product(pauli(a), pauli(b)), pauli(c)),
                  tensor_product(pauli(a), tensor_product(pauli(b), pauli(c))));
      }
}

TEST(EmbedPauli, SingleQubit) { EXPECT_EQ(embed_pauli(PauliAxis::z, 1, 1), pauli(PauliAxis::z)); }

TEST(EmbedPauli, SecondSiteOfTwo) {
  const Eigen::Vector4cd d = embed_pauli(PauliAxis::z, 2, 2).diagonal();
  EXPECT_EQ(d, Eigen::Vector4cd(1, -1, 1, -1));
}

TEST(EmbedPauli, Involution) {
  for (int n_qubits = 1; n_qubits <= 4; ++n_qubits)
    for (int site = 1; site <= n_qubits; ++site)
      for (auto axis : {PauliAxis::x, PauliAxis::y, PauliAxis::z}) {
        const ComplexMatrix p = embed_pauli(axis, site, n_qubits);
        EXPECT_EQ(p * p, identity(p.rows()));
      }
}

TEST(EmbedPauli, CommutationRelations) {
  const std::array axes{PauliAxis::x, PauliAxis::y, PauliAxis::z};
  for (int n_qubits = 1; n_qubits <= 3; ++n_qubits)
    for (int s1 = 1; s1 <= n_qubits; ++s1)
      for (int s2 = 1; s2 <= n_qubits; ++s2)
        for (auto a : axes)
          for (auto b : axes) {
            const ComplexMatrix p = embed_pauli(a, s1, n_qubits);
            const ComplexMatrix q = embed_pauli(b, s2, n_qubits);
            if (s1 != s2 || a == b) {
              EXPECT_LE((p * q - q * p).cwiseAbs().maxCoeff(), 1e-14);
            } else {
              EXPECT_LE((p * q + q * p).cwiseAbs().maxCoeff(), 1e-14);
            }
          }
}

TEST(EmbedPauli, RejectsBadSite) {
  EXPECT_THROW(embed_pauli(PauliAxis::x, 0, 2), std::invalid_argument);
  EXPECT_THROW(embed_pauli(PauliAxis::x, 3, 2), std::invalid_argument);
}

TEST(PauliString, MatchesEmbedding) {
  EXPECT_EQ(pauli_string("XIZ"),
            embed_pauli(PauliAxis::x, 1, 3) * embed_pauli(PauliAxis::z, 3, 3));
}

TEST(HermExpm, ZeroTime) {
  std::mt19937_64 rng(1);
  const ComplexMatrix h = testing::random_hermitian(rng, 4);
  EXPECT_LE(max_entry_diff(herm_expm(h, 0.0), identity(4)), 1e-15);
}

TEST(HermExpm, PauliZQuarterTurn) {
  ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
  expected(0, 0) = -kI;
  expected(1, 1) = kI;
  EXPECT_LE(max_entry_diff(herm_expm(pauli(PauliAxis::z), std::numbers::pi / 2), expected), 1e-15);
}

TEST(HermExpm, MatchesTaylorOracle) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix h = testing::random_hermitian(rng, 4);
    EXPECT_LE(max_entry_diff(herm_expm(h, 0.37), testing::taylor_expm(h, 0.37)), 1e-10);
  }
}

TEST(HermExpm, GroupLaw) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix h = testing::random_hermitian(rng, 8);
    EXPECT_LE(max_entry_diff(herm_expm(h, 0.3) * herm_expm(h, 0.45), herm_expm(h, 0.75)), 1e-10);
  }
}

TEST(HermExpm, TracelessGeneratorIsSpecial) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    ComplexMatrix h = testing::random_hermitian(rng, 4);
    h -= h.trace() / 4.0 * identity(4);
    EXPECT_LE(std::abs(herm_expm(h, 1.3).determinant() - 1.0), 1e-10);
  }
}

TEST(HermExpm, RejectsNonHermitian) {
  ComplexMatrix h = pauli(PauliAxis::x);
  h(0, 1) += 1e-9;
  EXPECT_THROW(herm_expm(h, 1.0), ContractViolation);
}

TEST(UnitarityDefect, Examples) {
  EXPECT_EQ(unitarity_defect(identity(4)), 0.0);
  EXPECT_DOUBLE_EQ(unitarity_defect(2.0 * identity(2)), 3.0);
  std::mt19937_64 rng(5);
  EXPECT_LE(unitarity_defect(herm_expm(testing::random_hermitian(rng, 8), 2.0)), 1e-12);
}

}  // namespace
}  // namespace spinopt
