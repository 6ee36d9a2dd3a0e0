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

// Coherent-state tomography.
//
// The coherent-state tomogram of an operator A is its Husimi-Kano symbol
// K_A(z) = <z|A|z>.  This module evaluates K, the Sudarshan P-function
// (by Gaussian deconvolution in Fourier space), the Gaussian family of
// s-ordered kernels, and two reconstructions of A from K: the radial-moment
// inversion and a dual frame built on a phase-space grid.

#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "phasetomo/fock.hpp"
#include "phasetomo/grid.hpp"

namespace phasetomo {

enum class SymbolKind { kK, kP, kOrdered, kDeformedK };

std::string_view to_string(SymbolKind kind);

struct Tomogram {
  PhaseGrid grid;
  std::vector<Complex> values;  // one per grid node
  SymbolKind kind = SymbolKind::kK;
  double s = 0.0;               // ordering parameter for kOrdered
  std::string source_hash;      // empty when unknown

  // sum_j w_j value_j, the grid estimate of int d^2z/pi.
  Complex integral() const;
};

// Content hash of an operator (FNV-1a over dimension and entries).
std::string operator_hash(const FockOperator& op);

// K_A(z) = <z|A|z>.  Exact for operators supported on their truncation; an
// operator whose own tail mass exceeds tail_tol is rejected.
Complex husimi_K(const FockOperator& a, ComplexPoint z, const Tolerances& tol = {});

struct KGridOptions {
  double grid_tol = 1e-8;  // allowed |integral - Tr A|
};

Tomogram k_grid(const FockOperator& a, const PhaseGrid& grid,
                const KGridOptions& options = {}, const Tolerances& tol = {});

// Gaussian-ordered delta operator with Omega(w) = exp(s |w|^2 / 2):
//   (2/(1-s)) D(z) ((s+1)/(s-1))^n D(z)^dagger,  s in [-1, 1).
// s = -1 gives |z><z|; s = 1 is a distribution and is refused.
FockOperator s_ordered_kernel(ComplexPoint z, double s, int truncation);

// F_A(z) = Tr[A Delta(z; -s)], s in (-1, 1].  s = 1 is the Husimi-Kano K.
Complex quasi_distribution(const FockOperator& a, ComplexPoint z, double s);

Tomogram quasi_grid(const FockOperator& a, const PhaseGrid& grid, double s);

using KSource = std::function<Complex(ComplexPoint)>;

struct KInversionOptions {
  int n_radial = 0;      // 0: 2N + 4
  double radius = 0.0;   // 0: sqrt(N + 1) + 1.5
  int n_angular = 0;     // 0: 2N + 2
  double max_condition = 1e12;
};

// Recovers <n|A|m>, n, m <= N, from the K-symbol.  The angular Fourier
// sector k = m - n of exp(|z|^2) K(r e^{i theta}) is a polynomial in r
// whose coefficients are A_{n, n+k} / sqrt(n! (n+k)!); each sector is
// fitted by least squares on Gauss radial nodes.
FockOperator reconstruct_from_K(const KSource& k_source, int truncation,
                                const KInversionOptions& options = {});

// Same inversion from a tomogram sampled on a polar grid with at least
// 2N + 2 angles.
FockOperator reconstruct_from_K(const Tomogram& tomogram, int truncation,
                                double max_condition = 1e12);

struct PFunctionOptions {
  // Fourier samples below noise_floor * max|K~| are treated as zero.
  double noise_floor = 10.0 * 2.220446049250313e-16;
  // exp(rho^2/4)|K~| on the outermost retained shell, relative to its peak,
  // must fall below this or the P-function is declared distributional.
  double decay_gate = 1e-3;
};

// Sudarshan P-function on a cartesian grid, phi~ = exp(rho^2/4) K~ with
// K~(xi, eta) = int dz_R dz_I / (2 pi) K exp(-i(xi z_R + eta z_I)).
Tomogram p_function_grid(const FockOperator& a, const PhaseGrid& cartesian_grid,
                         const PFunctionOptions& options = {});

// int d^2z/pi phi(z) exp(-|z - z'|^2) on the tomogram's grid.
Complex convolve_with_gaussian(const Tomogram& p_function, ComplexPoint z_prime);

struct DualFrame {
  PhaseGrid grid;
  int truncation = 0;
  std::vector<FockOperator> gram_ops;  // one per grid node
  double svd_cutoff = 0.0;
  int rank = 0;
  double basis_residual = 0.0;  // max error reconstructing |m><m'|
};

struct DualFrameOptions {
  double svd_cutoff = 1e-10;  // relative to the largest frame eigenvalue
  double frame_tol = 1e-7;
};

// Dual of the projector family |z_j><z_j| on the truncated operator space:
// G_j = S^{-1} P_j with S = sum_j w_j |P_j><P_j| (Hilbert-Schmidt).
DualFrame dual_frame(const PhaseGrid& grid, int truncation,
                     const DualFrameOptions& options = {});

// Same construction for arbitrary (unnormalized) states, one per node.
DualFrame dual_frame_from_states(const PhaseGrid& grid, std::span<const Vector> states,
                                 const DualFrameOptions& options = {});

// sum_j w_j G_j value_j.
FockOperator frame_reconstruct(const DualFrame& frame, const Tomogram& tomogram);
FockOperator frame_reconstruct(const DualFrame& frame, std::span<const Complex> values);

}  // namespace phasetomo
