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
#include <sstream>

#include "spinopt/propagation.hpp"
#include "test_util.hpp"

namespace spinopt {
namespace {

using std::numbers::pi;
const auto kIsing = CouplingSpec::nearest_neighbour(CouplingKind::ising);
const auto kHeisenberg = CouplingSpec::nearest_neighbour(CouplingKind::heisenberg);

PiecewiseControl random_control(std::mt19937_64& rng, double t_final, int k, int m,
                                double scale = 3.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  PiecewiseControl c = PiecewiseControl::uniform(t_final, k, m);
  RealMatrix v(k, m);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < m; ++j) v(i, j) = u(rng);
  c.set_values(v);
  return c;
}

/// Each segment re-split into `sub` equal pieces with the same amplitudes.
PiecewiseControl refine(const PiecewiseControl& c, int sub) {
  std::vector<double> times{c.times().front()};
  RealMatrix v(c.segments() * sub, c.n_controls());
  for (Eigen::Index k = 0; k < c.segments(); ++k) {
    const double t0 = c.times()[static_cast<std::size_t>(k)];
    for (int s = 1; s <= sub; ++s) {
      times.push_back(s == sub ? c.times()[static_cast<std::size_t>(k + 1)]
                               : t0 + c.dt(k) * s / sub);
      v.row(k * sub + s - 1) = c.values().row(k);
    }
  }
  return PiecewiseControl(times, v);
}

TEST(PiecewiseControl, ValidatesGrid) {
  EXPECT_THROW(PiecewiseControl({0.0, 1.0, 1.0}, RealMatrix::Zero(2, 1)), std::invalid_argument);
  EXPECT_THROW(PiecewiseControl({0.0, 1.0}, RealMatrix::Zero(2, 1)), std::invalid_argument);
  EXPECT_THROW(PiecewiseControl({0.0, 1.0}, RealMatrix::Constant(1, 1, 5.0), 3.0),
               std::invalid_argument);
  EXPECT_NO_THROW(PiecewiseControl({0.0, 0.2, 1.0}, RealMatrix::Zero(2, 2), 3.0));
}

TEST(PiecewiseControl, UniformGrid) {
  const PiecewiseControl c = PiecewiseControl::uniform(1.0, 10, 2);
  EXPECT_EQ(c.segments(), 10);
  EXPECT_EQ(c.n_controls(), 2);
  EXPECT_DOUBLE_EQ(c.t_final(), 1.0);
  EXPECT_TRUE(c.is_uniform());
  EXPECT_FALSE(PiecewiseControl({0.0, 0.2, 1.0}, RealMatrix::Zero(2, 1)).is_uniform());
}

TEST(SegmentPropagator, TrivialSystem) {
  ControlSystem sys = build_basic_nmr(kIsing, 1);
  const std::vector<double> u{0.0, 0.0};
  EXPECT_LE(max_entry_diff(segment_propagator(sys, u, 0.7), identity(2)), 1e-15);
}

TEST(SegmentPropagator, QuarterTurnAboutX) {
  const ControlSystem sys = build_basic_nmr(kIsing, 1);
  const double dt = 0.2;
  const std::vector<double> u{pi / (4 * dt), 0.0};
  const ComplexMatrix expected =
      std::cos(pi / 4) * identity(2) - Complex(0, std::sin(pi / 4)) * pauli(PauliAxis::x);
  EXPECT_LE(max_entry_diff(segment_propagator(sys, u, dt), expected), 1e-15);
}

TEST(SegmentPropagator, MatchesAssembledHamiltonian) {
  std::mt19937_64 rng(21);
  const ControlSystem sys = build_global_field_model({10, 12}, {}, kIsing);
  const std::vector<double> u{1.3, -0.4};
  EXPECT_EQ(segment_propagator(sys, u, 0.05), herm_expm(sys.hamiltonian(u), 0.05));
}

TEST(Propagate, SingleSegment) {
  std::mt19937_64 rng(22);
  const ControlSystem sys = build_electrode_model(10.0, {}, 2, kHeisenberg);
  const PiecewiseControl c = random_control(rng, 0.3, 1, 2);
  const auto u = c.amplitudes(0);
  EXPECT_LE(max_entry_diff(propagate(sys, c).total, segment_propagator(sys, u, 0.3)), 1e-15);
}

TEST(Propagate, ConstantControlSplitAgrees) {
  const ControlSystem sys = build_electrode_model(10.0, {}, 2, kHeisenberg);
  PiecewiseControl one = PiecewiseControl::uniform(1.0, 1, 2);
  one.set_values(RealMatrix::Constant(1, 2, 0.8));
  PiecewiseControl ten = PiecewiseControl::uniform(1.0, 10, 2);
  ten.set_values(RealMatrix::Constant(10, 2, 0.8));
  EXPECT_LE(max_entry_diff(propagate_total(sys, one), propagate_total(sys, ten)), 1e-10);
}

TEST(Propagate, MatchesFineStepOracle) {
  std::mt19937_64 rng(23);
  const ControlSystem sys = build_global_field_model({10, 12}, {}, kIsing);
  const PiecewiseControl c = random_control(rng, 1.0, 20, 2);
  EXPECT_LE(max_entry_diff(propagate_total(sys, c), propagate_total(sys, refine(c, 100))), 1e-8);
}

TEST(Propagate, RefinementInvariance) {
  std::mt19937_64 rng(24);
  const ControlSystem sys = build_electrode_model(10.0, {}, 3, kHeisenberg);
  const PiecewiseControl c = random_control(rng, 5.0, 13, 3);
  EXPECT_LE(max_entry_diff(propagate_total(sys, c), propagate_total(sys, refine(c, 2))), 1e-10);
}

TEST(Propagate, CacheConsistency) {
  std::mt19937_64 rng(25);
  const ControlSystem sys = build_global_field_model({10, 12, 8}, {}, kIsing);
  const PiecewiseControl c = random_control(rng, 1.0, 12, 2);
  const PropagationCache cache = propagate(sys, c);
  ASSERT_EQ(cache.forward.size(), 13u);
  ASSERT_EQ(cache.backward.size(), 13u);
  EXPECT_EQ(cache.forward[0], identity(8));
  EXPECT_EQ(cache.backward[12], identity(8));
  for (std::size_t k = 1; k <= 12; ++k) {
    EXPECT_LE(max_entry_diff(cache.backward[k] * cache.segment_props[k - 1] * cache.forward[k - 1],
                             cache.total),
              1e-10);
    EXPECT_LE(unitarity_defect(cache.forward[k]), 1e-10);
    EXPECT_LE(unitarity_defect(cache.backward[k - 1]), 1e-10);
  }
  EXPECT_LE(max_entry_diff(propagate_total(sys, c), cache.total), 1e-12);
}

TEST(Propagate, TimeReversal) {
  std::mt19937_64 rng(26);
  ControlSystem sys = build_electrode_model(10.0, {}, 2, kHeisenberg);
  const PiecewiseControl c = random_control(rng, 1.0, 9, 2);
  ControlSystem reversed = sys;
  reversed.drift = -sys.drift;
  RealMatrix v = -c.values().colwise().reverse();
  PiecewiseControl back = PiecewiseControl::uniform(1.0, 9, 2);
  back.set_values(v);
  EXPECT_LE(max_entry_diff(propagate_total(reversed, back), propagate_total(sys, c).adjoint()),
            1e-10);
}

TEST(Propagate, UnitarityAtLargeK) {
  std::mt19937_64 rng(27);
  const ControlSystem sys = build_global_field_model({10, 12, 8}, {}, kIsing);
  const PiecewiseControl c = random_control(rng, 5.0, 1000, 2, 20.0);
  const PropagationCache cache = propagate(sys, c);
  double worst = 0.0;
  for (const auto& u : cache.segment_props) worst = std::max(worst, unitarity_defect(u));
  for (const auto& u : cache.forward) worst = std::max(worst, unitarity_defect(u));
  for (const auto& u : cache.backward) worst = std::max(worst, unitarity_defect(u));
  EXPECT_LE(worst, 1e-9);
  EXPECT_LE(unitarity_defect(cache.total), 1e-9);
}

TEST(EvolveFidelity, Examples) {
  std::mt19937_64 rng(28);
  const ControlSystem sys = build_electrode_model(10.0, {}, 2, kHeisenberg);
  const PiecewiseControl c = random_control(rng, 1.0, 10, 2);
  const GateTarget self{"self", 2, propagate_total(sys, c)};
  EXPECT_NEAR(evolve_fidelity(sys, c, self), 1.0, 1e-14);

  ControlSystem free = build_basic_nmr(kIsing, 1);
  EXPECT_NEAR(evolve_fidelity(free, PiecewiseControl::uniform(1.0, 5, 2), gate_by_name("identity", 1)),
              1.0, 1e-15);

  const PiecewiseControl zero = PiecewiseControl::uniform(1.0, 10, 2);
  EXPECT_NEAR(evolve_fidelity(sys, zero, cnot()), fidelity(cnot(), propagate_total(sys, zero)),
              1e-15);
}

TEST(FieldCsv, BitExactRoundTrip) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.01, 0.3);
  std::vector<double> times{0.0};
  for (int k = 0; k < 17; ++k) times.push_back(times.back() + u(rng));
  const PiecewiseControl c(times, random_control(rng, 1.0, 17, 3).values() * 1.2345678901, 10.0);
  std::stringstream ss;
  write_field_csv(ss, c);
  const PiecewiseControl back = read_field_csv(ss);
  EXPECT_EQ(back, c);
  EXPECT_EQ(back.times(), c.times());
  EXPECT_EQ(back.values(), c.values());
  ASSERT_TRUE(back.bound().has_value());
  EXPECT_EQ(*back.bound(), 10.0);
}

TEST(FieldCsv, RejectsMalformed) {
  std::stringstream missing("t_start,t_end,u_1\n0,0.5,1\n0.6,1,2\n");
  EXPECT_THROW(read_field_csv(missing), std::runtime_error);
  std::stringstream bad("t_start,t_end,u_1\n0,0.5,abc\n");
  EXPECT_THROW(read_field_csv(bad), std::runtime_error);
  std::stringstream ragged("t_start,t_end,u_1,u_2\n0,0.5,1\n");
  EXPECT_THROW(read_field_csv(ragged), std::runtime_error);
}

}  // namespace
}  // namespace spinopt
