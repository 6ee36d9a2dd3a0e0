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

// Bloch-sphere tomography of a single qubit.
//
// The tomographic set is the family of pure-state projectors P(theta, phi);
// the dual (Gram) kernel G(theta, phi) makes both
//   A = int G Tr(P A) sin(theta) dtheta dphi   and
//   A = int P Tr(G A) sin(theta) dtheta dphi
// hold exactly.

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "phasetomo/fock.hpp"

namespace phasetomo::qubit {

using QubitOperator = Eigen::Matrix2cd;

struct BlochKernels {
  QubitOperator projector;
  QubitOperator gram;
};

BlochKernels bloch_kernels(double theta, double phi);

// Tr(P(theta, phi) A).
Complex qubit_tomogram(const QubitOperator& a, double theta, double phi);

struct SphereNode {
  double theta;
  double phi;
  double weight;  // includes sin(theta) dtheta dphi
};

// Gauss-Legendre in cos(theta) times a uniform rule in phi.
struct SphereQuadrature {
  std::vector<SphereNode> nodes;

  static SphereQuadrature product(int n_theta = 3, int n_phi = 4);
  double total_weight() const;
};

enum class ReconstructionForm {
  kGramTimesTomogram,      // sum w G Tr(P A)
  kProjectorTimesGram,     // sum w P Tr(G A)
};

// Before reconstructing A the rule is checked on I and the Pauli matrices;
// a rule too coarse for the degree-2 kernels raises kQuadrature.
QubitOperator qubit_reconstruct(const QubitOperator& a, ReconstructionForm form,
                                const SphereQuadrature& quad = SphereQuadrature::product());

QubitOperator pauli_x();
QubitOperator pauli_y();
QubitOperator pauli_z();

}  // namespace phasetomo::qubit
