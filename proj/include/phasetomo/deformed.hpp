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

// (f, s)-deformed coherent-state and photon-number tomography.
//
// A deformation is a positive function f on the integers with f(n) = 1 for
// n <= 0.  It defines E_f = [f(n)]! = f(n) f(n-1) ... f(1) (diagonal in the
// Fock basis), the deformed ladder pair A = a f(n), A_f^dagger =
// f(n)^{-1} a^dagger, and the deformed states
//   |z; f, s>  = e^{(1+s)|z|^2/2} N_{z,f} E_f^{-1} |z>,
//   |nz; f, s> = e^{(1+s)|z|^2/2} N_{z,f} [f(n)]! E_f^{-1} D(z)|n>,
// with N_{z,f}^{-2} = sum_k |z|^{2k} / (k! ([f(k)]!)^2).

#pragma once

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "phasetomo/cs_tomo.hpp"
#include "phasetomo/fock.hpp"
#include "phasetomo/pn_tomo.hpp"

namespace phasetomo {

enum class DeformationPreset { kIdentity, kQ, kTable };

struct DeformationSpec {
  DeformationPreset preset = DeformationPreset::kIdentity;
  double lambda_q = 0.0;      // kQ: f(n) = sqrt(sinh(lambda n) / (lambda n))
  std::vector<double> table;  // kTable: f(0) = 1, f(1), f(2), ...
  double s = 0.0;             // ordering parameter, [-1, 1]

  static DeformationSpec identity(double s = 0.0);
  static DeformationSpec q(double lambda_q, double s = 0.0);
  static DeformationSpec from_table(std::vector<double> f, double s = 0.0);

  // log f(n).  Throws kInvalidArgument past the end of a table.
  double log_f(int n) const;
  double f(int n) const { return std::exp(log_f(n)); }
  // log [f(n)]!
  double log_factorial_f(int n) const;

  // Checks s and that 0 < [f(n)]! < infinity for n <= truncation.
  void validate(int truncation) const;
};

FockOperator deformation_operator(const DeformationSpec& spec, int truncation);

struct DeformedLadder {
  FockOperator a;      // a f(n)
  FockOperator a_dag;  // f(n)^{-1} a^dagger
};

DeformedLadder deformed_ladder(const DeformationSpec& spec, int truncation);

// N_{z,f}, summed to convergence.  A table deformation must cover the terms
// that matter; otherwise kTruncation.
double deformed_normalization(ComplexPoint z, const DeformationSpec& spec);

// The state keeps its two scalar factors apart from the Fock amplitudes so
// that they can be divided out exactly.
struct DeformedState {
  FockVector base{Vector::Zero(1)};  // E_f^{-1}|z> (or [f(n)]! E_f^{-1} D(z)|n>)
  double norm_factor = 1.0;          // N_{z,f}
  double s_prefactor = 1.0;          // e^{(1+s)|z|^2/2}

  double scale() const { return norm_factor * s_prefactor; }
  Vector vector() const { return scale() * base.amplitudes(); }
  // <state|state>; e^{s|z|^2} when the truncation holds the whole state.
  double norm_squared() const;
};

// Throws kTruncation when the truncated weight exceeds tail_tol.
DeformedState deformed_coherent_state(ComplexPoint z, const DeformationSpec& spec,
                                      int truncation, const Tolerances& tol = {});
DeformedState deformed_number_state(int n, ComplexPoint z, const DeformationSpec& spec,
                                    int truncation, const Tolerances& tol = {});

// E_f^{-1} D(z) E_f, checked against exp(z A_f^dagger - z* A) evaluated on a
// larger truncation.
FockOperator deformed_displacement(ComplexPoint z, const DeformationSpec& spec,
                                   int truncation);

// (phi, psi)_f = <phi| E_f^2 |psi>.
Complex f_scalar_product(const FockVector& phi, const FockVector& psi,
                         const DeformationSpec& spec);

// e^{(1+s)|z|^2} N_{z,f}^2.  Throws kOverflow (with the largest safe |z|)
// when it leaves double range.
double deformed_scalar(ComplexPoint z, const DeformationSpec& spec);

// <z; f, s| B |z; f, s>, exact for B supported on its truncation.
Complex deformed_K(const FockOperator& b, ComplexPoint z, const DeformationSpec& spec);
// <nz; f, s| B |nz; f, s>.
Complex deformed_pn_K(const FockOperator& b, int n, ComplexPoint z,
                      const DeformationSpec& spec);

// B(f) = E_f^{-1} B E_f^{-1}.
FockOperator deformed_operator(const FockOperator& b, const DeformationSpec& spec);

Tomogram deformed_k_grid(const FockOperator& b, const PhaseGrid& grid,
                         const DeformationSpec& spec);

enum class DeformedRoute { kConjugation, kFrame };

// Recovers B from deformed-K samples on a grid.  Conjugation: divide out the
// scalar, invert K_{B(f)} with the radial-moment method (polar grid) and
// return E_f B(f) E_f.  Frame: dual frame of the deformed projectors.
FockOperator deformed_reconstruct(const Tomogram& k_values, const DeformationSpec& spec,
                                  DeformedRoute route, int truncation);

// Conjugation route from a callable.
FockOperator deformed_reconstruct(const KSource& k_source, const DeformationSpec& spec,
                                  int truncation, const KInversionOptions& options = {});

// e^{-(1+s)|z|^2} / (([f(n)]!)^2 N_{z,f}^2) E_f G_lambda(n, z) E_f.
FockOperator deformed_pn_gram(int n, ComplexPoint z, const DeformationSpec& spec,
                              const PNKernelParams& params, int truncation);

PNTomogram deformed_pn_tomogram_grid(const FockOperator& b, const PhaseGrid& grid,
                                     int n_max, const DeformationSpec& spec);

// Divides out the scalar factors, reconstructs B(f) with the photon-number
// kernel and returns E_f B(f) E_f.
FockOperator deformed_pn_reconstruct(const PNTomogram& tomogram, const DeformationSpec& spec,
                                     const PNKernelParams& params, int truncation,
                                     const PNReconstructOptions& options = {});

}  // namespace phasetomo
