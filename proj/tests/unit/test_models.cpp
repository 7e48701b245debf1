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

#include "spinopt/models.hpp"
#include "test_util.hpp"

namespace spinopt {
namespace {

const auto kIsing = CouplingSpec::nearest_neighbour(CouplingKind::ising);
const auto kHeisenberg = CouplingSpec::nearest_neighbour(CouplingKind::heisenberg);

void expect_diagonal(const ComplexMatrix& m, const std::vector<double>& d) {
  ASSERT_EQ(m.rows(), static_cast<Eigen::Index>(d.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      EXPECT_LE(std::abs(m(i, j) - (i == j ? d[static_cast<std::size_t>(i)] : 0.0)), 1e-14)
          << i << "," << j;
}

TEST(BasicNmr, SingleQubitHasNoDrift) {
  const ControlSystem sys = build_basic_nmr(kIsing, 1);
  EXPECT_EQ(sys.drift, ComplexMatrix::Zero(2, 2));
  ASSERT_EQ(sys.n_controls(), 2u);
  EXPECT_EQ(sys.controls[0], pauli(PauliAxis::x));
  EXPECT_EQ(sys.controls[1], pauli(PauliAxis::y));
}

TEST(BasicNmr, TwoQubitDrift) { expect_diagonal(build_basic_nmr(kIsing, 2).drift, {1, -1, -1, 1}); }

TEST(BasicNmr, ThreeQubitChainDrift) {
  expect_diagonal(build_basic_nmr(kIsing, 3).drift, {2, 0, -2, 0, 0, -2, 0, 2});
}

TEST(BasicNmr, ControlOrder) {
  const ControlSystem sys = build_basic_nmr(kIsing, 2);
  ASSERT_EQ(sys.n_controls(), 4u);
  EXPECT_EQ(sys.controls[0], pauli_string("XI"));
  EXPECT_EQ(sys.controls[1], pauli_string("YI"));
  EXPECT_EQ(sys.controls[2], pauli_string("IX"));
  EXPECT_EQ(sys.controls[3], pauli_string("IY"));
}

TEST(Crosstalk, IdentityLeavesBaseUnchanged) {
  const ControlSystem base = build_basic_nmr(kIsing, 2);
  const ControlSystem x = build_crosstalk(base, RealMatrix::Identity(4, 4));
  EXPECT_EQ(x.drift, base.drift);
  for (std::size_t m = 0; m < 4; ++m) EXPECT_EQ(x.controls[m], base.controls[m]);
}

TEST(Crosstalk, PermutationSwapsControls) {
  const ControlSystem base = build_basic_nmr(kIsing, 1);
  RealMatrix alpha(2, 2);
  alpha << 0, 1, 1, 0;
  const ControlSystem x = build_crosstalk(base, alpha);
  EXPECT_EQ(x.controls[0], pauli(PauliAxis::y));
  EXPECT_EQ(x.controls[1], pauli(PauliAxis::x));
}

TEST(Crosstalk, RandomMixingMatchesDirectSum) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RealMatrix alpha(4, 4);
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index j = 0; j < 4; ++j) alpha(i, j) = u(rng);
  const ControlSystem x = build_crosstalk(build_basic_nmr(kIsing, 2), alpha);
  const ComplexMatrix expected = alpha(0, 0) * pauli_string("XI") + alpha(0, 1) * pauli_string("YI") +
                                 alpha(0, 2) * pauli_string("IX") + alpha(0, 3) * pauli_string("IY");
  EXPECT_LE(max_entry_diff(x.controls[0], expected), 1e-15);
}

TEST(Crosstalk, RejectsWrongShape) {
  EXPECT_THROW(build_crosstalk(build_basic_nmr(kIsing, 2), RealMatrix::Identity(3, 3)),
               std::invalid_argument);
}

TEST(GlobalField, TwoQubitDrift) {
  expect_diagonal(build_global_field_model({10, 12}, {}, kIsing).drift, {-10, 0, -2, 12});
}

TEST(GlobalField, CollectiveControls) {
  const ControlSystem sys = build_global_field_model({10, 12}, {1, 1}, kIsing);
  ASSERT_EQ(sys.n_controls(), 2u);
  EXPECT_EQ(sys.controls[0], pauli_string("XI") + pauli_string("IX"));
  EXPECT_EQ(sys.controls[1], pauli_string("YI") + pauli_string("IY"));
}

TEST(GlobalField, ThreeQubitDriftMatchesTermwiseSum) {
  const ControlSystem sys = build_global_field_model({10, 12, 8}, {}, kIsing);
  const ComplexMatrix expected = pauli_string("ZZI") + pauli_string("IZZ") - 5.0 * pauli_string("ZII") -
                                 6.0 * pauli_string("IZI") - 4.0 * pauli_string("IIZ");
  EXPECT_LE(max_entry_diff(sys.drift, expected), 1e-14);
  EXPECT_EQ(sys.controls[1], pauli_string("YII") + pauli_string("IYI") + pauli_string("IIY"));
}

TEST(GlobalField, RejectsArityMismatch) {
  EXPECT_THROW(build_global_field_model({10, 12}, {1, 1, 1}, kIsing), std::invalid_argument);
}

TEST(GlobalField, SingleQubitZeroDetuningReducesToNmrControls) {
  const ControlSystem g = build_global_field_model({0}, {1}, kIsing);
  const ControlSystem b = build_basic_nmr(kIsing, 1);
  EXPECT_EQ(g.drift, b.drift);
  EXPECT_EQ(g.controls[0], b.controls[0]);
  EXPECT_EQ(g.controls[1], b.controls[1]);
}

TEST(Electrode, HeisenbergDrift) {
  const ControlSystem sys = build_electrode_model(0.0, {}, 2, kHeisenberg);
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(0, 0) = 1;
  expected(1, 1) = -1;
  expected(1, 2) = 2;
  expected(2, 1) = 2;
  expected(2, 2) = -1;
  expected(3, 3) = 1;
  EXPECT_LE(max_entry_diff(sys.drift, expected), 1e-15);
}

TEST(Electrode, RabiTermAndControls) {
  const ControlSystem zero = build_electrode_model(0.0, {}, 2, kHeisenberg);
  const ControlSystem sys = build_electrode_model(10.0, {}, 2, kHeisenberg);
  EXPECT_LE(max_entry_diff(sys.drift, zero.drift - 10.0 * (pauli_string("XI") + pauli_string("IX"))),
            1e-14);
  ASSERT_EQ(sys.n_controls(), 2u);
  EXPECT_EQ(sys.controls[0], pauli_string("ZI"));
  EXPECT_EQ(sys.controls[1], pauli_string("IZ"));
}

TEST(Models, AllDriftsTracelessAndHermitian) {
  std::vector<ControlSystem> systems{
      build_basic_nmr(kIsing, 3), build_global_field_model({10, 12, 8}, {}, kIsing),
      build_electrode_model(10.0, {}, 3, kHeisenberg),
      build_electrode_model(7.0, {0.9, 1.1}, 2, CouplingSpec::explicit_matrix(
                                                    CouplingKind::heisenberg,
                                                    (RealMatrix(2, 2) << 0, 0.5, 0.5, 0).finished()))};
  for (const auto& sys : systems) {
    EXPECT_NO_THROW(sys.validate());
    EXPECT_LE(std::abs(sys.drift.trace()), 1e-12);
    EXPECT_LE(hermiticity_defect(sys.drift), 1e-12);
    for (const auto& c : sys.controls) EXPECT_LE(hermiticity_defect(c), 1e-12);
  }
}

TEST(Models, Deterministic) {
  const ControlSystem a = build_global_field_model({10, 12, 8}, {}, kIsing);
  const ControlSystem b = build_global_field_model({10, 12, 8}, {}, kIsing);
  EXPECT_EQ(a.drift, b.drift);
  EXPECT_EQ(a.labels, b.labels);
}

TEST(Models, HamiltonianAssembly) {
  const ControlSystem sys = build_electrode_model(10.0, {}, 2, kHeisenberg);
  const std::vector<double> u{0.5, -1.5};
  EXPECT_LE(max_entry_diff(sys.hamiltonian(u),
                           sys.drift + 0.5 * sys.controls[0] - 1.5 * sys.controls[1]),
            1e-15);
}

}  // namespace
}  // namespace spinopt
