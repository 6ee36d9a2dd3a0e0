// Copyright 2026 The phasetomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "phasetomo/qubit.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "phasetomo/quadrature.hpp"

namespace phasetomo::qubit {

namespace {

constexpr double kSelfCheckTol = 1e-10;

QubitOperator reconstruct_unchecked(const QubitOperator& a, ReconstructionForm form,
                                    const SphereQuadrature& quad) {
  QubitOperator out = QubitOperator::Zero();
  for (const SphereNode& node : quad.nodes) {
    const BlochKernels k = bloch_kernels(node.theta, node.phi);
    if (form == ReconstructionForm::kGramTimesTomogram) {
      out += node.weight * (k.projector * a).trace() * k.gram;
    } else {
      out += node.weight * (k.gram * a).trace() * k.projector;
    }
  }
  return out;
}

}  // namespace

QubitOperator pauli_x() {
  QubitOperator m;
  m << 0, 1, 1, 0;
  return m;
}

QubitOperator pauli_y() {
  QubitOperator m;
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

QubitOperator pauli_z() {
  QubitOperator m;
  m << 1, 0, 0, -1;
  return m;
}

BlochKernels bloch_kernels(double theta, double phi) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const Complex e_minus = std::polar(1.0, -phi);
  const Complex e_plus = std::polar(1.0, phi);
  BlochKernels k;
  k.projector << 1.0 + c, e_minus * s, e_plus * s, 1.0 - c;
  k.projector *= 0.5;
  k.gram << 1.0 + 3.0 * c, 3.0 * e_minus * s, 3.0 * e_plus * s, 1.0 - 3.0 * c;
  k.gram /= 4.0 * std::numbers::pi;
  return k;
}

Complex qubit_tomogram(const QubitOperator& a, double theta, double phi) {
  return (bloch_kernels(theta, phi).projector * a).trace();
}

SphereQuadrature SphereQuadrature::product(int n_theta, int n_phi) {
  if (n_theta < 1 || n_phi < 1) {
    throw Error(ErrorCode::kInvalidArgument, "SphereQuadrature: empty rule");
  }
  const QuadratureRule gl = gauss_legendre(n_theta, -1.0, 1.0);
  const double dphi = 2.0 * std::numbers::pi / n_phi;
  SphereQuadrature quad;
  quad.nodes.reserve(static_cast<std::size_t>(n_theta) * n_phi);
  for (int i = 0; i < n_theta; ++i) {
    const double theta = std::acos(gl.nodes[i]);
    for (int j = 0; j < n_phi; ++j) {
      quad.nodes.push_back({theta, j * dphi, gl.weights[i] * dphi});
    }
  }
  return quad;
}

double SphereQuadrature::total_weight() const {
  double sum = 0.0;
  for (const SphereNode& n : nodes) sum += n.weight;
  return sum;
}

QubitOperator qubit_reconstruct(const QubitOperator& a, ReconstructionForm form,
                                const SphereQuadrature& quad) {
  for (const SphereNode& n : quad.nodes) {
    if (n.weight < 0.0) {
      throw Error(ErrorCode::kQuadrature, "sphere quadrature has a negative weight");
    }
  }
  const std::array<QubitOperator, 4> probes = {QubitOperator::Identity(), pauli_x(),
                                               pauli_y(), pauli_z()};
  for (const QubitOperator& probe : probes) {
    const double err = (reconstruct_unchecked(probe, form, quad) - probe).norm();
    if (err > kSelfCheckTol) {
      throw Error(ErrorCode::kQuadrature,
                  "sphere quadrature too coarse: probe reconstruction error " +
                      std::to_string(err));
    }
  }
  return reconstruct_unchecked(a, form, quad);
}

}  // namespace phasetomo::qubit
