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

// Photon-number tomography.
//
// The photon-number tomogram of A is w_A(n, z) = <n|D(z)^dagger A D(z)|n>,
// the statistics of the displaced number operator.  A is recovered with the
// one-parameter family of dual kernels
//   G_lambda(n, z) = 4/(1 - lambda^2) v^n D(z) u^{a^dagger a} D(z)^dagger,
// u = (lambda - 1)/(lambda + 1), v = 1/u.  Only lambda in (0, 1) is
// accepted: there |u| < 1 and the core operator is bounded.

#pragma once

#include <string>

#include "phasetomo/cs_tomo.hpp"
#include "phasetomo/fock.hpp"
#include "phasetomo/grid.hpp"

namespace phasetomo {

struct PNKernelParams {
  double lambda = 0.5;

  // u = (lambda - 1)/(lambda + 1)
  double core_ratio() const { return (lambda - 1.0) / (lambda + 1.0); }
  // tau with e^{i tau} = (lambda + 1)/(lambda - 1), principal logarithm:
  // tau = pi - i ln((1 + lambda)/(1 - lambda)).
  Complex tau() const;
  void validate() const;
};

struct PNTomogram {
  int n_max = 0;
  PhaseGrid grid;
  Matrix values;  // (n_max + 1) x nodes
  std::string source_hash;
};

// <n|D(z)^dagger A D(z)|n>.  n may exceed A's truncation; D(z)|n> is
// evaluated exactly on the rows A acts on.
Complex pn_tomogram(const FockOperator& a, int n, ComplexPoint z,
                    const Tolerances& tol = {});

PNTomogram pn_tomogram_grid(const FockOperator& a, const PhaseGrid& grid, int n_max,
                            const Tolerances& tol = {});

FockOperator pn_gram(int n, ComplexPoint z, const PNKernelParams& params, int truncation);

// The sum over n of v^n w(n, z) alternates and only settles once n is well
// past |v| |z|^2, and its rounding error grows like eps e^{2|v||z|^2}, while
// the exact integrand decays like e^{-(2 - u - v)|z|^2}.  Nodes whose exact
// contribution to any operator with entries of modulus <= 1 is below the
// screen threshold are therefore left out of the sum.  With screen_tol = 0
// the threshold minimizes (dropped envelope + rounding noise on kept nodes).
struct PNReconstructOptions {
  double self_check_tol = 1e-5;
  double screen_tol = 0.0;
};

// R = sqrt(N) + 4 with 48 radial nodes and 64 angles: the integrand is a
// Gaussian of width ~ 1/sqrt(6) in |z|, narrower than the K-symbol's.
PhaseGrid pn_default_grid(int truncation);

// Per-node bound on |w_j G_lambda(n, z_j) w(n, z_j)| summed over n, for
// operators on the truncation with entries of modulus <= 1.
std::vector<double> pn_node_envelope(const PhaseGrid& grid, const PNKernelParams& params,
                                     int truncation);

// Smallest cutoff, at least 3N, at which the n-sum has settled on every node
// the envelope keeps.
int pn_default_nmax(const PhaseGrid& grid, const PNKernelParams& params, int truncation,
                    double screen_tol = 1e-17);

// max |reconstruction - |m><m'|| for every basis operator, m, m' <= N, with
// the given grid and photon-number cutoff.  Entry (m, m').
Eigen::MatrixXd pn_basis_residuals(const PhaseGrid& grid, int n_max,
                                   const PNKernelParams& params, int truncation,
                                   double screen_tol = 0.0);

// sum_{n <= n_max} sum_j w_j G_lambda(n, z_j) w(n, z_j).  The basis
// operators are reconstructed first with the same grid and cutoff; a
// residual above self_check_tol raises kQuadrature with the residual table.
FockOperator pn_reconstruct(const PNTomogram& tomogram, const PNKernelParams& params,
                            int truncation, const PNReconstructOptions& options = {});

// <x|G_lambda(n, z)|y> from the closed position-space form,
//   4 sin^2(tau/2) e^{i tau (n + 1/2)} / sqrt(2 pi i sin tau) e^{i mu (x - y)}
//   exp(i[((x-nu)^2 + (y-nu)^2) cos tau / (2 sin tau) - (x-nu)(y-nu)/sin tau]),
// with the square-root branch fixed against the Fock sum at n = 0, z = 0,
// x = y = 0.
Complex pn_gram_position_element(int n, ComplexPoint z, const PNKernelParams& params,
                                 double x, double y);

// Same element as sum_{m,m'} <x|m> G_{m m'} <m'|y> on the given truncation.
Complex pn_gram_position_fock_sum(int n, ComplexPoint z, const PNKernelParams& params,
                                  double x, double y, int truncation);

struct MehlerSeries {
  int n_max = 0;
};

// sum_n (zeta/2)^n H_n(x) H_n(y) / n! in closed form
//   (1 - zeta^2)^{-1/2} exp[(zeta^2 (x^2 + y^2) - 2 zeta x y)/(zeta^2 - 1)],
// principal square root.  |zeta| <= 1, zeta != +-1.
Complex mehler(double x, double y, Complex zeta);
// The partial sum up to n_max.
Complex mehler(double x, double y, Complex zeta, MehlerSeries series);

}  // namespace phasetomo
