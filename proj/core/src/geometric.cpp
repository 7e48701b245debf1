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

#include "spinopt/geometric.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace spinopt {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGroupTol = 1e-10;

const Complex kI(0.0, 1.0);

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);
  return a <= -kPi ? a + 2.0 * kPi : a;
}

void require_special_unitary(const ComplexMatrix& u, Eigen::Index dim, const char* what) {
  if (u.rows() != dim || u.cols() != dim) {
    throw std::invalid_argument(std::string(what) + ": expected a " + std::to_string(dim) + "x" +
                                std::to_string(dim) + " matrix");
  }
  if (!u.allFinite() || unitarity_defect(u) > kGroupTol) {
    throw std::invalid_argument(std::string(what) + ": input is not unitary");
  }
  if (std::abs(u.determinant() - 1.0) > kGroupTol) {
    throw std::invalid_argument(std::string(what) + ": determinant is not 1");
  }
}

ComplexMatrix magic_basis() {
  const double r = 1.0 / std::sqrt(2.0);
  ComplexMatrix m(4, 4);
  m << 1, 0, 0, kI,
       0, kI, 1, 0,
       0, kI, -1, 0,
       1, 0, 0, -kI;
  return r * m;
}

// Splits L = p (A (x) B) with A, B in SU(2).
LocalPair split_local(const ComplexMatrix& l, Complex& phase) {
  Eigen::Index bi = 0, bj = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < 2; ++i) {
    for (Eigen::Index j = 0; j < 2; ++j) {
      const double nrm = l.block(2 * i, 2 * j, 2, 2).norm();
      if (nrm > best) {
        best = nrm;
        bi = i;
        bj = j;
      }
    }
  }
  ComplexMatrix b = l.block(2 * bi, 2 * bj, 2, 2);
  b /= std::sqrt(b.determinant());
  ComplexMatrix a(2, 2);
  for (Eigen::Index i = 0; i < 2; ++i) {
    for (Eigen::Index j = 0; j < 2; ++j) {
      a(i, j) = (b.adjoint() * l.block(2 * i, 2 * j, 2, 2)).trace() / 2.0;
    }
  }
  const Complex p = std::sqrt(a.determinant());
  a /= p;
  phase *= p;
  return {a, b};
}

// Local Clifford-like conjugators used to permute and flip the interaction
// coefficients. Each is a product of single-qubit unitaries.
ComplexMatrix both(const ComplexMatrix& s) { return tensor_product(s, s); }

ComplexMatrix hadamard_xz() {
  return (pauli(PauliAxis::x) + pauli(PauliAxis::z)) / std::sqrt(2.0);
}
ComplexMatrix swap_yz() { return (pauli(PauliAxis::y) + pauli(PauliAxis::z)) / std::sqrt(2.0); }
ComplexMatrix phase_s() {
  ComplexMatrix s = identity(2);
  s(1, 1) = kI;
  return s;
}

struct Canonicalizer {
  // U = phase * l1 * exp(-i (c[0] XX + c[1] YY + c[2] ZZ)) * l2
  std::array<double, 3> c{};
  ComplexMatrix l1;
  ComplexMatrix l2;
  Complex phase{1.0, 0.0};

  static ComplexMatrix pair(int axis) {
    const PauliAxis a = axis == 0 ? PauliAxis::x : (axis == 1 ? PauliAxis::y : PauliAxis::z);
    return both(pauli(a));
  }

  // exp(-i c P) = exp(-i (c - s pi/2) P) exp(-i s pi/2 P), exp(-i s pi/2 P) = -i s P
  void shift(int axis, int steps) {
    if (steps == 0) return;
    c[static_cast<std::size_t>(axis)] -= steps * kPi / 2.0;
    const ComplexMatrix p = pair(axis);
    ComplexMatrix factor = identity(4);
    const int n = ((steps % 4) + 4) % 4;
    for (int i = 0; i < n; ++i) factor = (-kI * p) * factor;
    l2 = factor * l2;
  }

  // exp(-i A) = V^dag exp(-i V A V^dag) V
  void conjugate(const ComplexMatrix& v, const std::array<int, 3>& perm,
                 const std::array<double, 3>& sign) {
    std::array<double, 3> next{};
    for (std::size_t k = 0; k < 3; ++k) {
      next[static_cast<std::size_t>(perm[k])] = sign[k] * c[k];
    }
    c = next;
    l1 = l1 * v.adjoint();
    l2 = v * l2;
  }

  void swap(int a, int b) {
    std::array<int, 3> perm{0, 1, 2};
    perm[static_cast<std::size_t>(a)] = b;
    perm[static_cast<std::size_t>(b)] = a;
    ComplexMatrix v;
    if ((a == 0 && b == 2) || (a == 2 && b == 0)) {
      v = both(hadamard_xz());
    } else if ((a == 0 && b == 1) || (a == 1 && b == 0)) {
      v = both(phase_s());
    } else {
      v = both(swap_yz());
    }
    conjugate(v, perm, {1.0, 1.0, 1.0});
  }

  // Flips the signs of the two coefficients other than `keep`.
  void flip_pair(int keep) {
    const PauliAxis a = keep == 0 ? PauliAxis::x : (keep == 1 ? PauliAxis::y : PauliAxis::z);
    std::array<double, 3> sign{-1.0, -1.0, -1.0};
    sign[static_cast<std::size_t>(keep)] = 1.0;
    conjugate(tensor_product(pauli(a), identity(2)), {0, 1, 2}, sign);
  }

  void run() {
    constexpr double edge = 1e-12;
    for (int k = 0; k < 3; ++k) {
      const double v = c[static_cast<std::size_t>(k)];
      // bring into (-pi/4, pi/4]
      shift(k, static_cast<int>(std::ceil((v - kPi / 4.0 - edge) / (kPi / 2.0))));
    }
    // order |z| >= |y| >= |x|
    if (std::abs(c[0]) > std::abs(c[2])) swap(0, 2);
    if (std::abs(c[1]) > std::abs(c[2])) swap(1, 2);
    if (std::abs(c[0]) > std::abs(c[1])) swap(0, 1);
    if (c[2] < 0.0 && c[1] < 0.0) {
      flip_pair(0);
    } else if (c[2] < 0.0) {
      flip_pair(1);
    }
    if (c[1] < 0.0) flip_pair(2);
    if (std::abs(c[2] - kPi / 4.0) < 1e-12 && c[0] < 0.0) {
      shift(2, 1);
      flip_pair(1);
    }
  }
};

}  // namespace

ComplexMatrix axis_rotation(PauliAxis axis, double angle) {
  return std::cos(angle) * identity(2) - kI * std::sin(angle) * pauli(axis);
}

ComplexMatrix reassemble(const EulerAngles& angles) {
  return axis_rotation(PauliAxis::x, angles.alpha) * axis_rotation(PauliAxis::y, angles.beta) *
         axis_rotation(PauliAxis::x, angles.gamma);
}

EulerAngles euler_decompose(const ComplexMatrix& u) {
  require_special_unitary(u, 2, "euler_decompose");
  // R = exp(i pi/4 Y) maps sigma_x to sigma_z and fixes sigma_y, turning the
  // x-y-x problem into the z-y-z one.
  const ComplexMatrix r = axis_rotation(PauliAxis::y, -kPi / 4.0);
  const ComplexMatrix v = r * u * r.adjoint();
  const Complex p = v(0, 0);
  const Complex q = v(1, 0);
  EulerAngles out;
  out.beta = std::atan2(std::abs(q), std::abs(p));
  constexpr double tiny = 1e-12;
  if (std::abs(q) < tiny) {
    out.alpha = -std::arg(p);
    out.gamma = 0.0;
  } else if (std::abs(p) < tiny) {
    out.alpha = std::arg(q);
    out.gamma = 0.0;
  } else {
    out.alpha = 0.5 * (std::arg(q) - std::arg(p));
    out.gamma = 0.5 * (-std::arg(p) - std::arg(q));
  }
  out.alpha = wrap_angle(out.alpha);
  out.gamma = wrap_angle(out.gamma);
  if (std::abs(out.alpha) < 1e-15) out.alpha = 0.0;
  if (std::abs(out.gamma) < 1e-15) out.gamma = 0.0;
  return out;
}

ComplexMatrix ising_interaction(double angle) {
  return herm_expm(pauli_string("ZZ"), angle);
}

ComplexMatrix reassemble(const CartanDecomposition& d) {
  const ComplexMatrix ux = both(axis_rotation(PauliAxis::x, kPi / 4.0));
  const ComplexMatrix uy = both(axis_rotation(PauliAxis::y, kPi / 4.0));
  return d.phase * d.u1_local.matrix() * (uy * ising_interaction(d.alpha3) * uy.adjoint()) *
         (ux.adjoint() * ising_interaction(d.alpha2) * ux) * ising_interaction(d.alpha1) *
         d.u2_local.matrix();
}

CartanDecomposition cartan_decompose(const ComplexMatrix& u) {
  require_special_unitary(u, 4, "cartan_decompose");
  const ComplexMatrix magic = magic_basis();
  const ComplexMatrix ub = magic.adjoint() * u * magic;
  const ComplexMatrix m = ub.transpose() * ub;

  // m is symmetric unitary, so Re(m) and Im(m) commute and share a real
  // orthogonal eigenbasis; a generic real combination exposes it.
  RealMatrix p;
  bool found = false;
  for (double r : {0.6180339887498949, 1.4142135623730951, 0.3183098861837907,
                   2.718281828459045, -1.7320508075688772}) {
    const RealMatrix s = m.real() + r * m.imag();
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(s);
    p = solver.eigenvectors();
    const ComplexMatrix dm = p.transpose().cast<Complex>() * m * p.cast<Complex>();
    const ComplexMatrix off = dm - ComplexMatrix(dm.diagonal().asDiagonal());
    if (off.cwiseAbs().maxCoeff() < 1e-10) {
      found = true;
      break;
    }
  }
  if (!found) {
    throw NumericalFailure("cartan_decompose: could not diagonalize U^T U in the magic basis");
  }
  if (p.determinant() < 0.0) p.col(0) *= -1.0;
  const ComplexMatrix pc = p.cast<Complex>();
  const Eigen::VectorXcd diag = (pc.transpose() * m * pc).diagonal();
  Eigen::Vector4d theta;
  for (Eigen::Index j = 0; j < 4; ++j) theta(j) = 0.5 * std::arg(diag(j));
  // det(K1) = exp(-i sum theta) must be +1
  if (std::cos(theta.sum()) < 0.0) theta(0) += kPi;

  Eigen::VectorXcd inv_phase(4);
  for (Eigen::Index j = 0; j < 4; ++j) inv_phase(j) = std::polar(1.0, -theta(j));
  const ComplexMatrix k1 = ub * pc * inv_phase.asDiagonal();
  const ComplexMatrix k1_real = k1.real().cast<Complex>();
  const ComplexMatrix k2 = pc.transpose();

  // theta = a s_XX + b s_YY + c s_ZZ + phi, with s_P the magic-basis spectrum of P.
  Eigen::Matrix4d basis;
  const char* names[3] = {"XX", "YY", "ZZ"};
  for (int k = 0; k < 3; ++k) {
    const ComplexMatrix dp = magic.adjoint() * pauli_string(names[k]) * magic;
    basis.col(k) = dp.diagonal().real();
  }
  basis.col(3).setOnes();
  const Eigen::Vector4d coeffs = basis.fullPivLu().solve(theta);

  Canonicalizer canon;
  // exp(i (a XX + b YY + c ZZ)) = exp(-i (-a XX - b YY - c ZZ))
  canon.c = {-coeffs(0), -coeffs(1), -coeffs(2)};
  canon.l1 = magic * k1_real * magic.adjoint();
  canon.l2 = magic * k2 * magic.adjoint();
  canon.phase = std::polar(1.0, coeffs(3));
  canon.run();

  CartanDecomposition out;
  out.alpha3 = canon.c[0];
  out.alpha2 = canon.c[1];
  out.alpha1 = canon.c[2];
  Complex phase = canon.phase;
  out.u1_local = split_local(canon.l1, phase);
  out.u2_local = split_local(canon.l2, phase);
  // snap to the nearest center element; the residual is round-off
  const double quarter = std::round(std::arg(phase) / (kPi / 2.0));
  out.phase = std::polar(1.0, quarter * kPi / 2.0);
  if (max_entry_diff(reassemble(out), u) > 1e-8) {
    throw NumericalFailure("cartan_decompose: reassembly check failed");
  }
  return out;
}

namespace {

// Angles below this produce no segment; they would not advance the time grid.
constexpr double kMinAngle = 1e-13;

struct SequenceBuilder {
  int n_controls;
  std::vector<double> times{0.0};
  std::vector<std::vector<double>> rows{};
  std::vector<bool> coupling{};

  void pulse(std::initializer_list<int> channels, double angle, double amplitude) {
    if (std::abs(angle) < kMinAngle) return;
    std::vector<double> row(static_cast<std::size_t>(n_controls), 0.0);
    for (int ch : channels) row[static_cast<std::size_t>(ch)] = angle > 0 ? amplitude : -amplitude;
    times.push_back(times.back() + std::abs(angle) / amplitude);
    rows.push_back(std::move(row));
    coupling.push_back(false);
  }

  void free_evolution(double duration) {
    if (duration < kMinAngle) return;
    times.push_back(times.back() + duration);
    rows.emplace_back(static_cast<std::size_t>(n_controls), 0.0);
    coupling.push_back(true);
  }

  // x(gamma), y(beta), x(alpha) on qubit `q` (0-based)
  void euler(const EulerAngles& e, int q, double amplitude) {
    pulse({2 * q}, e.gamma, amplitude);
    pulse({2 * q + 1}, e.beta, amplitude);
    pulse({2 * q}, e.alpha, amplitude);
  }

  PulseSequence finish() {
    RealMatrix values(static_cast<Eigen::Index>(rows.size()), n_controls);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      for (int m = 0; m < n_controls; ++m) {
        values(static_cast<Eigen::Index>(k), m) = rows[k][static_cast<std::size_t>(m)];
      }
    }
    return {PiecewiseControl(std::move(times), std::move(values)), std::move(coupling)};
  }
};

void require_amplitude(double amplitude) {
  if (!(amplitude > 0.0) || !std::isfinite(amplitude)) {
    throw std::invalid_argument("sequence_to_control: pulse amplitude must be positive");
  }
}

}  // namespace

PulseSequence sequence_to_control(const EulerAngles& angles, double pulse_amplitude) {
  require_amplitude(pulse_amplitude);
  SequenceBuilder b{2};
  b.euler(angles, 0, pulse_amplitude);
  return b.finish();
}

PulseSequence sequence_to_control(const CartanDecomposition& d, double pulse_amplitude,
                                  double coupling) {
  require_amplitude(pulse_amplitude);
  if (!(coupling > 0.0) || !std::isfinite(coupling)) {
    throw std::invalid_argument("sequence_to_control: coupling must be positive");
  }
  SequenceBuilder b{4};
  auto interaction = [&](double alpha) {
    // Z(a + pi) = -Z(a): negative angles become positive durations
    const double a = alpha < 0.0 ? alpha + kPi : alpha;
    b.free_evolution(a / coupling);
  };
  const double q = kPi / 4.0;
  // time order is right to left in U1 [Uy Z3 Uy^-1][Ux^-1 Z2 Ux] Z1 U2
  b.euler(euler_decompose(d.u2_local.first), 0, pulse_amplitude);
  b.euler(euler_decompose(d.u2_local.second), 1, pulse_amplitude);
  interaction(d.alpha1);
  b.pulse({0, 2}, q, pulse_amplitude);
  interaction(d.alpha2);
  b.pulse({0, 2}, -q, pulse_amplitude);
  b.pulse({1, 3}, -q, pulse_amplitude);
  interaction(d.alpha3);
  b.pulse({1, 3}, q, pulse_amplitude);
  b.euler(euler_decompose(d.u1_local.first), 0, pulse_amplitude);
  b.euler(euler_decompose(d.u1_local.second), 1, pulse_amplitude);
  return b.finish();
}

ComplexMatrix propagate_sequence(const ControlSystem& system, const PulseSequence& sequence,
                                 bool switchable) {
  const auto& control = sequence.control;
  if (control.n_controls() != static_cast<Eigen::Index>(system.n_controls())) {
    throw std::invalid_argument("propagate_sequence: channel count mismatch");
  }
  ComplexMatrix total = identity(system.dim());
  for (Eigen::Index k = 0; k < control.segments(); ++k) {
    const auto u = control.amplitudes(k);
    ComplexMatrix h = system.hamiltonian(u);
    if (switchable && !sequence.coupling_on[static_cast<std::size_t>(k)]) h -= system.drift;
    total = herm_expm(h, control.dt(k)) * total;
  }
  return total;
}

double center_phase_fidelity(const ComplexMatrix& target, const ComplexMatrix& u) {
  double best = -2.0;
  Complex c(1.0, 0.0);
  for (int i = 0; i < 4; ++i, c *= kI) best = std::max(best, fidelity(c * target, u));
  return best;
}

double center_phase_distance(const ComplexMatrix& target, const ComplexMatrix& u) {
  double best = std::numeric_limits<double>::infinity();
  Complex c(1.0, 0.0);
  for (int i = 0; i < 4; ++i, c *= kI) best = std::min(best, max_entry_diff(c * target, u));
  return best;
}

}  // namespace spinopt
