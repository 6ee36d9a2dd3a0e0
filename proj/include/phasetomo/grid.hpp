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

// Discretizations of the phase plane with the measure d^2z / pi.

#pragma once

#include <cstddef>
#include <vector>

#include "phasetomo/fock.hpp"

namespace phasetomo {

enum class GridKind { kPolar, kCartesian };

struct GridNode {
  ComplexPoint z;
  double weight;  // quadrature weight for d^2z / pi
};

class PhaseGrid {
 public:
  // Gauss-Legendre radial nodes on [0, radius] times n_angular uniform angles
  // theta_j = 2 pi j / n_angular.  Node order: radial-major, then angular.
  static PhaseGrid polar(double radius, int n_radial, int n_angular);

  // Uniform lattice z = (-L + i h) + i (-L + j h), i, j in [0, 2L/h).
  // Node order: real-part index major.
  static PhaseGrid cartesian(double half_extent, double spacing);

  // Polar grid sized for operators on the given truncation.
  static PhaseGrid default_polar(int truncation);

  GridKind kind() const { return kind_; }
  const std::vector<GridNode>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }

  // Polar parameters.
  double radius() const { return radius_; }
  int n_radial() const { return n_radial_; }
  int n_angular() const { return n_angular_; }
  const std::vector<double>& radial_nodes() const { return radial_nodes_; }

  // Cartesian parameters.
  double half_extent() const { return half_extent_; }
  double spacing() const { return spacing_; }
  int side() const { return side_; }

  // sum_j w_j exp(-|z_j|^2), which should be 1.
  double gaussian_normalization() const;

  bool same_nodes(const PhaseGrid& other) const;

 private:
  PhaseGrid() = default;
  void validate() const;

  GridKind kind_ = GridKind::kPolar;
  std::vector<GridNode> nodes_;
  double radius_ = 0.0;
  int n_radial_ = 0;
  int n_angular_ = 0;
  std::vector<double> radial_nodes_;
  double half_extent_ = 0.0;
  double spacing_ = 0.0;
  int side_ = 0;
};

}  // namespace phasetomo
