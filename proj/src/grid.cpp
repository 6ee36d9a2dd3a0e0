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

#include "phasetomo/grid.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "phasetomo/quadrature.hpp"

namespace phasetomo {

namespace {
constexpr double kNormalizationTol = 1e-10;
}

PhaseGrid PhaseGrid::polar(double radius, int n_radial, int n_angular) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorCode::kInvalidArgument, "polar grid: radius must be > 0");
  }
  if (n_radial < 1) {
    throw Error(ErrorCode::kInvalidArgument, "polar grid: need at least one radial node");
  }
  if (n_angular < 4) {
    throw Error(ErrorCode::kInvalidArgument, "polar grid: need at least 4 angles");
  }
  PhaseGrid grid;
  grid.kind_ = GridKind::kPolar;
  grid.radius_ = radius;
  grid.n_radial_ = n_radial;
  grid.n_angular_ = n_angular;
  const QuadratureRule rule = gauss_legendre(n_radial, 0.0, radius);
  grid.radial_nodes_ = rule.nodes;
  grid.nodes_.reserve(static_cast<std::size_t>(n_radial) * n_angular);
  // r dr dtheta / pi with dtheta = 2 pi / M
  for (int i = 0; i < n_radial; ++i) {
    const double r = rule.nodes[i];
    const double w = 2.0 * r * rule.weights[i] / n_angular;
    for (int j = 0; j < n_angular; ++j) {
      const double theta = 2.0 * std::numbers::pi * j / n_angular;
      grid.nodes_.push_back({std::polar(r, theta), w});
    }
  }
  grid.validate();
  return grid;
}

PhaseGrid PhaseGrid::cartesian(double half_extent, double spacing) {
  if (!(half_extent > 0.0) || !(spacing > 0.0) || !std::isfinite(half_extent) ||
      !std::isfinite(spacing)) {
    throw Error(ErrorCode::kInvalidArgument,
                "cartesian grid: extent and spacing must be > 0");
  }
  const double ratio = 2.0 * half_extent / spacing;
  const int side = static_cast<int>(std::lround(ratio));
  if (side < 4 || std::abs(ratio - side) > 1e-9 * ratio) {
    throw Error(ErrorCode::kInvalidArgument,
                "cartesian grid: 2L/h must be an integer >= 4");
  }
  PhaseGrid grid;
  grid.kind_ = GridKind::kCartesian;
  grid.half_extent_ = half_extent;
  grid.spacing_ = spacing;
  grid.side_ = side;
  const double w = spacing * spacing / std::numbers::pi;
  grid.nodes_.reserve(static_cast<std::size_t>(side) * side);
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      grid.nodes_.push_back({ComplexPoint(-half_extent + i * spacing,
                                          -half_extent + j * spacing), w});
    }
  }
  grid.validate();
  return grid;
}

PhaseGrid PhaseGrid::default_polar(int truncation) {
  return polar(std::sqrt(static_cast<double>(std::max(truncation, 1))) + 4.0, 24, 64);
}

double PhaseGrid::gaussian_normalization() const {
  double sum = 0.0;
  for (const GridNode& n : nodes_) sum += n.weight * std::exp(-std::norm(n.z));
  return sum;
}

void PhaseGrid::validate() const {
  const double dev = std::abs(gaussian_normalization() - 1.0);
  if (dev > kNormalizationTol) {
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "phase grid fails the Gaussian normalization check by %.3g; enlarge the grid", dev);
    throw Error(ErrorCode::kCoverage, buf);
  }
}

bool PhaseGrid::same_nodes(const PhaseGrid& other) const {
  if (kind_ != other.kind_ || nodes_.size() != other.nodes_.size()) return false;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (std::abs(nodes_[i].z - other.nodes_[i].z) > 1e-12 ||
        std::abs(nodes_[i].weight - other.nodes_[i].weight) > 1e-12) {
      return false;
    }
  }
  return true;
}

}  // namespace phasetomo
