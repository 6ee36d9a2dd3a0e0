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

// Truncated Fock-space arithmetic.
//
// Every operator and vector lives on the span of {|0>, ..., |N>}; N is the
// truncation level and dim = N + 1.  Objects built from infinite-dimensional
// states carry the probability weight lost to truncation ("tail mass") so
// that callers can decide whether a result is trustworthy.

#pragma once

#include <complex>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "phasetomo/error.hpp"

namespace phasetomo {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// A point of the phase plane, z = re + i im.
using ComplexPoint = Complex;

// Converts the position/momentum splitting z = (nu + i mu) / sqrt(2).
ComplexPoint from_quadratures(double nu, double mu);
double quadrature_nu(ComplexPoint z);
double quadrature_mu(ComplexPoint z);

struct Tolerances {
  double tail_tol = 1e-10;
};

class FockOperator {
 public:
  explicit FockOperator(Matrix entries, double tail_mass = 0.0);

  static FockOperator zero(int dim);
  static FockOperator identity(int dim);
  // |row><col|
  static FockOperator basis(int dim, int row, int col);

  int dim() const { return static_cast<int>(entries_.rows()); }
  int truncation() const { return dim() - 1; }
  const Matrix& matrix() const { return entries_; }
  Complex operator()(int row, int col) const { return entries_(row, col); }
  double tail_mass() const { return tail_mass_; }

  Complex trace() const { return entries_.trace(); }
  bool is_hermitian(double tol) const;

  // Throws kInvalidArgument unless Hermitian to `tol`, trace within
  // `tail_mass + tol` of one and no eigenvalue below -tol.
  void check_density(double tol = 1e-10) const;

  // Crops or zero-pads to a new dimension.
  FockOperator resized(int new_dim) const;

 private:
  Matrix entries_;
  double tail_mass_ = 0.0;
};

class FockVector {
 public:
  explicit FockVector(Vector amplitudes, double tail_mass = 0.0);

  int dim() const { return static_cast<int>(amplitudes_.size()); }
  const Vector& amplitudes() const { return amplitudes_; }
  Complex operator[](int n) const { return amplitudes_(n); }
  double tail_mass() const { return tail_mass_; }
  double norm() const { return amplitudes_.norm(); }

  FockOperator projector() const;

 private:
  Vector amplitudes_;
  double tail_mass_ = 0.0;
};

struct LadderOperators {
  FockOperator a;
  FockOperator a_dag;
  FockOperator n_op;
};

LadderOperators ladder_operators(int truncation);

// <m|D(z)|n> from the associated-Laguerre closed form.
Complex displacement_element(int m, int n, ComplexPoint z);

// Rows [0, rows) x columns [0, cols) of D(z).  The elements are exact; only
// the index range is finite.
Matrix displacement_block(ComplexPoint z, int rows, int cols);

FockOperator displacement(ComplexPoint z, int truncation);

// Largest index M such that every column n <= M of the truncated D(z) keeps
// all but `tol` of its unit norm; -1 if even column 0 leaks.
int converged_block(ComplexPoint z, int truncation, double tol);

// Sum_k ratio^k D(z)|k><k|D(z)^dagger restricted to rows/cols [0, N], with
// the k-sum carried past N until the remaining terms are negligible.
struct DisplacedSeries {
  Matrix sum;
  double max_term = 0.0;   // largest |term| met; measures cancellation
};
DisplacedSeries displaced_geometric_sum(ComplexPoint z, int truncation,
                                        double ratio);

// D(z) t^{a^dagger a} D(z)^dagger on rows/cols [0, N] for real t, from the
// normal-ordered form e^{(t-1)|z|^2} e^{c a^dagger} t^{a^dagger a} e^{c* a},
// c = (1 - t) z.  Each entry is a finite sum, so any t is allowed.
Matrix displaced_power(ComplexPoint z, double t, int truncation);
// Same, with max_term bounding the entrywise sum of |terms|.
DisplacedSeries displaced_power_terms(ComplexPoint z, double t, int truncation);

// Probability weight of |z> beyond level N.
double coherent_tail_mass(ComplexPoint z, int truncation);
// Smallest truncation whose coherent tail at |z| is below tol.
int suggested_truncation(ComplexPoint z, double tol);

// e^{-|z|^2/2} z^n / sqrt(n!), n = 0..N; no tail check.
Vector coherent_amplitudes(ComplexPoint z, int truncation);

FockVector coherent_state(ComplexPoint z, int truncation,
                          const Tolerances& tol = {});

struct FockSpec { int n = 0; };
struct CoherentSpec { ComplexPoint z; };
struct ThermalSpec { double nbar = 0.0; };
struct CatSpec { ComplexPoint z; };
using StateSpec = std::variant<FockSpec, CoherentSpec, ThermalSpec, CatSpec>;

FockOperator build_state(const StateSpec& spec, int truncation,
                         const Tolerances& tol = {});

// Normalized Hermite function <q|n>, by the three-term recurrence on the
// normalized functions.
double hermite_function(int n, double q);
// <q|0> ... <q|n_max>.
std::vector<double> hermite_functions(int n_max, double q);

// <y|D(z)|n> = exp[i(mu y - mu nu / 2)] <y - nu|n>, z = (nu + i mu)/sqrt(2).
Complex displaced_number_wavefunction(int n, ComplexPoint z, double y);

}  // namespace phasetomo
