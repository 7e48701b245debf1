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

#include "spinopt/gates.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace spinopt {

namespace {

ComplexMatrix single_qubit(StandardGate gate) {
  const double pi = std::numbers::pi;
  const Complex i(0.0, 1.0);
  switch (gate) {
    case StandardGate::identity:
      return identity(2);
    case StandardGate::had:
      // exp(i a Y) = cos a I + i sin a Y
      return std::cos(pi / 4) * identity(2) + i * std::sin(pi / 4) * pauli(PauliAxis::y);
    case StandardGate::t: {
      ComplexMatrix m = ComplexMatrix::Zero(2, 2);
      m(0, 0) = std::polar(1.0, pi / 8);
      m(1, 1) = std::polar(1.0, -pi / 8);
      return m;
    }
  }
  throw std::invalid_argument("unknown standard gate");
}

const char* gate_name(StandardGate gate) {
  switch (gate) {
    case StandardGate::identity: return "identity";
    case StandardGate::had: return "had";
    case StandardGate::t: return "t";
  }
  return "?";
}

int log2_dim(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  return (Eigen::Index{1} << n) == dim ? n : -1;
}

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a.rows()) + " vs " + std::to_string(b.rows()) +
                                ")");
  }
}

}  // namespace

StandardGate parse_standard_gate(const std::string& name) {
  if (name == "I" || name == "identity") return StandardGate::identity;
  if (name == "Had" || name == "had") return StandardGate::had;
  if (name == "T" || name == "t") return StandardGate::t;
  throw std::invalid_argument("unknown standard gate '" + name + "'");
}

GateTarget standard_gate(StandardGate gate, int qubit, int n_qubits) {
  if (n_qubits < 1 || qubit < 1 || qubit > n_qubits) {
    throw std::invalid_argument("standard_gate: qubit " + std::to_string(qubit) +
                                " outside 1.." + std::to_string(n_qubits));
  }
  ComplexMatrix m = ComplexMatrix::Identity(1, 1);
  for (int q = 1; q <= n_qubits; ++q) {
    m = tensor_product(m, q == qubit ? single_qubit(gate) : identity(2));
  }
  std::string label = gate == StandardGate::identity
                          ? std::string("identity")
                          : std::string(gate_name(gate)) + std::to_string(qubit);
  return {std::move(label), n_qubits, std::move(m)};
}

GateTarget cnot() {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  const Complex phase = std::polar(1.0, -std::numbers::pi / 4);
  m(0, 0) = phase;
  m(1, 1) = phase;
  m(2, 3) = phase;
  m(3, 2) = phase;
  return {"cnot", 2, std::move(m)};
}

GateTarget toffoli_like() {
  ComplexMatrix m = ComplexMatrix::Identity(8, 8);
  m(6, 6) = 0.0;
  m(7, 7) = 0.0;
  m(6, 7) = Complex(0.0, 1.0);
  m(7, 6) = Complex(0.0, 1.0);
  return {"toffoli-like", 3, std::move(m)};
}

std::vector<GateTarget> universal_set_2q() {
  return {standard_gate(StandardGate::identity, 1, 2), standard_gate(StandardGate::had, 1, 2),
          standard_gate(StandardGate::t, 1, 2),        standard_gate(StandardGate::had, 2, 2),
          standard_gate(StandardGate::t, 2, 2),        cnot()};
}

GateTarget gate_by_name(const std::string& name, int n_qubits) {
  if (name == "identity") return standard_gate(StandardGate::identity, 1, n_qubits);
  if (name == "had1") return standard_gate(StandardGate::had, 1, n_qubits);
  if (name == "had2") return standard_gate(StandardGate::had, 2, n_qubits);
  if (name == "t1") return standard_gate(StandardGate::t, 1, n_qubits);
  if (name == "t2") return standard_gate(StandardGate::t, 2, n_qubits);
  if (name == "cnot") return cnot();
  if (name == "toffoli-like") return toffoli_like();
  throw std::invalid_argument("unknown gate name '" + name +
                              "' (expected identity, had1, t1, had2, t2, cnot, toffoli-like)");
}

GateTarget load_gate_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open matrix file " + path.string());
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw std::runtime_error(path.string() + ": bad number '" + cell + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (n == 0) {
    throw std::runtime_error(path.string() + ": empty matrix file");
  }
  ComplexMatrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    if (static_cast<Eigen::Index>(row.size()) != 2 * n) {
      throw std::runtime_error(path.string() + ": row " + std::to_string(r + 1) + " has " +
                               std::to_string(row.size()) + " values, expected " +
                               std::to_string(2 * n));
    }
    for (Eigen::Index c = 0; c < n; ++c) {
      m(r, c) = Complex(row[static_cast<std::size_t>(2 * c)],
                        row[static_cast<std::size_t>(2 * c + 1)]);
    }
  }
  const int nq = log2_dim(n);
  if (nq < 1) {
    throw std::runtime_error(path.string() + ": dimension " + std::to_string(n) +
                             " is not a power of two");
  }
  if (unitarity_defect(m) > 1e-10) {
    throw std::invalid_argument(path.string() + ": matrix is not unitary");
  }
  if (std::abs(m.determinant() - 1.0) > 1e-10) {
    throw std::invalid_argument(path.string() + ": determinant is not 1 (target must be in SU(" +
                                std::to_string(n) + "))");
  }
  return {path.stem().string(), nq, std::move(m)};
}

void save_gate_csv(const std::filesystem::path& path, const ComplexMatrix& m) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write matrix file " + path.string());
  }
  out.precision(17);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << m(r, c).real() << ',' << m(r, c).imag();
    }
    out << '\n';
  }
}

double fidelity(const ComplexMatrix& target, const ComplexMatrix& u) {
  require_same_dim(target, u, "fidelity");
  // Re Tr(A^dagger B) = sum of Re(conj(a_ij) b_ij)
  const double re_trace = (target.conjugate().cwiseProduct(u)).sum().real();
  return re_trace / static_cast<double>(target.rows());
}

double fidelity(const GateTarget& target, const ComplexMatrix& u) {
  return fidelity(target.matrix, u);
}

double gate_error(const GateTarget& target, const ComplexMatrix& u) {
  require_same_dim(target.matrix, u, "gate_error");
  return (u - target.matrix).squaredNorm();
}

}  // namespace spinopt
