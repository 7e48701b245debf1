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

#include <vector>

#include "spinopt/models.hpp"
#include "spinopt/propagation.hpp"

namespace spinopt {

/// exp(-i angle sigma_axis).
ComplexMatrix axis_rotation(PauliAxis axis, double angle);

/// U = U_x(alpha) U_y(beta) U_x(gamma) with U_x(a) = exp(-i a sigma_x).
struct EulerAngles {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

ComplexMatrix reassemble(const EulerAngles& angles);

/// Angles with beta in [0, pi/2] and |alpha| + |gamma| <= pi, which picks one
/// representative of the sign and half-turn ambiguities.
/// Throws std::invalid_argument unless u is in SU(2) to 1e-10.
EulerAngles euler_decompose(const ComplexMatrix& u);

/// A (x) B with A, B in SU(2).
struct LocalPair {
  ComplexMatrix first = identity(2);
  ComplexMatrix second = identity(2);

  ComplexMatrix matrix() const { return tensor_product(first, second); }
};

/// Z(a) = exp(-i a sigma_z (x) sigma_z).
ComplexMatrix ising_interaction(double angle);

/// U = phase * U1 [Uy Z(a3) Uy^-1] [Ux^-1 Z(a2) Ux] Z(a1) U2, where
/// Ux = U_x(pi/4) (x) U_x(pi/4) and likewise Uy. Since the conjugated factors
/// are exp(-i a3 XX) and exp(-i a2 YY), the interaction part equals
/// exp(-i (a3 XX + a2 YY + a1 ZZ)).
///
/// Angles are reported in the Weyl chamber pi/4 >= alpha1 >= alpha2 >= |alpha3|
/// (alpha3 >= 0 when alpha1 = pi/4). `phase` lies in the SU(4) center.
struct CartanDecomposition {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double alpha3 = 0.0;
  LocalPair u1_local;
  LocalPair u2_local;
  Complex phase{1.0, 0.0};
};

/// Reassembled product including `phase`.
ComplexMatrix reassemble(const CartanDecomposition& decomposition);

/// Magic-basis KAK decomposition. Throws std::invalid_argument unless u is in
/// SU(4) to 1e-10.
CartanDecomposition cartan_decompose(const ComplexMatrix& u);

/// Hard-pulse realization of a decomposition on the basic NMR model
/// (controls x1, y1, x2, y2, ...). `coupling_on[k]` is false for pulse
/// segments, which the switchable-coupling idealization evolves without drift.
struct PulseSequence {
  PiecewiseControl control;
  std::vector<bool> coupling_on;
};

/// Single-qubit sequence for build_basic_nmr(.., 1): x(gamma), y(beta), x(alpha).
/// Zero angles produce no segment.
PulseSequence sequence_to_control(const EulerAngles& angles, double pulse_amplitude);

/// Two-qubit sequence for build_basic_nmr(.., 2) with Ising strength `coupling`.
/// Interaction angles become free-evolution segments of length alpha / J.
/// The propagated sequence equals reassemble(d) up to a center phase.
PulseSequence sequence_to_control(const CartanDecomposition& decomposition,
                                  double pulse_amplitude, double coupling = 1.0);

/// Total propagator. With `switchable` set, drift is suppressed on segments
/// whose coupling flag is false.
ComplexMatrix propagate_sequence(const ControlSystem& system, const PulseSequence& sequence,
                                 bool switchable);

/// max over c in {1, i, -1, -i} of fidelity(c * target, u).
double center_phase_fidelity(const ComplexMatrix& target, const ComplexMatrix& u);

/// max-entry distance between u and c * target, minimized over the four
/// center phases.
double center_phase_distance(const ComplexMatrix& target, const ComplexMatrix& u);

}  // namespace spinopt
