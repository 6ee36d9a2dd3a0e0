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

#include "phasetomo/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>

namespace phasetomo {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kTruncation: return "truncation";
    case ErrorCode::kUnderflow: return "underflow";
    case ErrorCode::kIllConditioned: return "ill_conditioned";
    case ErrorCode::kDistributional: return "distributional";
    case ErrorCode::kCoverage: return "coverage";
    case ErrorCode::kQuadrature: return "quadrature";
    case ErrorCode::kNodeMismatch: return "node_mismatch";
    case ErrorCode::kBranch: return "branch";
    case ErrorCode::kSchema: return "schema";
    case ErrorCode::kOverflow: return "overflow";
  }
  return "unknown";
}

namespace {

std::string format_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

void require_truncation(int truncation, int minimum, const char* what) {
  if (truncation < minimum) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + ": truncation must be >= " +
                    std::to_string(minimum) + ", got " +
                    std::to_string(truncation));
  }
}

void require_finite(ComplexPoint z, const char* what) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + ": phase-space point is not finite");
  }
}

// exp(-|z|^2/2) must stay representable for the closed forms below.
void require_no_underflow(ComplexPoint z) {
  const double x = std::norm(z);
  if (std::exp(-0.5 * x) < std::numeric_limits<double>::min()) {
    throw Error(ErrorCode::kUnderflow,
                "underflow at this truncation: exp(-|z|^2/2) vanishes for "
                "|z|^2 = " + format_g(x));
  }
}

}  // namespace

ComplexPoint from_quadratures(double nu, double mu) {
  return ComplexPoint(nu, mu) / std::numbers::sqrt2;
}

double quadrature_nu(ComplexPoint z) { return std::numbers::sqrt2 * z.real(); }
double quadrature_mu(ComplexPoint z) { return std::numbers::sqrt2 * z.imag(); }

// ---------------------------------------------------------------------------
// FockOperator / FockVector

FockOperator::FockOperator(Matrix entries, double tail_mass)
    : entries_(std::move(entries)), tail_mass_(tail_mass) {
  if (entries_.rows() < 1 || entries_.rows() != entries_.cols()) {
    throw Error(ErrorCode::kInvalidArgument,
                "FockOperator: entries must be a non-empty square matrix");
  }
  if (!entries_.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument,
                "FockOperator: entries contain NaN or Inf");
  }
}

FockOperator FockOperator::zero(int dim) {
  return FockOperator(Matrix::Zero(dim, dim));
}

FockOperator FockOperator::identity(int dim) {
  return FockOperator(Matrix::Identity(dim, dim));
}

FockOperator FockOperator::basis(int dim, int row, int col) {
  if (row < 0 || col < 0 || row >= dim || col >= dim) {
    throw Error(ErrorCode::kInvalidArgument,
                "FockOperator::basis: index outside the truncation");
  }
  Matrix m = Matrix::Zero(dim, dim);
  m(row, col) = 1.0;
  return FockOperator(std::move(m));
}

bool FockOperator::is_hermitian(double tol) const {
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

void FockOperator::check_density(double tol) const {
  if (!is_hermitian(tol)) {
    throw Error(ErrorCode::kInvalidArgument,
                "density matrix is not Hermitian");
  }
  const double trace_dev = std::abs(trace() - 1.0);
  if (trace_dev > tail_mass_ + tol) {
    throw Error(ErrorCode::kInvalidArgument,
                "density matrix trace deviates from 1 by " +
                    format_g(trace_dev));
  }
  const Matrix herm = 0.5 * (entries_ + entries_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -tol) {
    throw Error(ErrorCode::kInvalidArgument,
                "density matrix has a negative eigenvalue " +
                    format_g(solver.eigenvalues().minCoeff()));
  }
}

FockOperator FockOperator::resized(int new_dim) const {
  if (new_dim < 1) {
    throw Error(ErrorCode::kInvalidArgument, "resized: dimension must be >= 1");
  }
  Matrix m = Matrix::Zero(new_dim, new_dim);
  const int keep = std::min(new_dim, dim());
  m.topLeftCorner(keep, keep) = entries_.topLeftCorner(keep, keep);
  return FockOperator(std::move(m), tail_mass_);
}

FockVector::FockVector(Vector amplitudes, double tail_mass)
    : amplitudes_(std::move(amplitudes)), tail_mass_(tail_mass) {
  if (amplitudes_.size() < 1) {
    throw Error(ErrorCode::kInvalidArgument, "FockVector: empty amplitudes");
  }
  if (!amplitudes_.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument,
                "FockVector: amplitudes contain NaN or Inf");
  }
}

FockOperator FockVector::projector() const {
  return FockOperator(amplitudes_ * amplitudes_.adjoint(), tail_mass_);
}

// ---------------------------------------------------------------------------
// Ladder and displacement operators

LadderOperators ladder_operators(int truncation) {
  require_truncation(truncation, 1, "ladder_operators");
  const int dim = truncation + 1;
  Matrix a = Matrix::Zero(dim, dim);
  Matrix n_op = Matrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  for (int n = 0; n < dim; ++n) n_op(n, n) = n;
  Matrix a_dag = a.adjoint();
  return {FockOperator(std::move(a)), FockOperator(std::move(a_dag)),
          FockOperator(std::move(n_op))};
}

namespace {

// Fills one diagonal (m - n = offset) of D(z) inside rows x cols.
//   m >= n:  sqrt(n!/m!) z^k e^{-x/2} L_n^{(k)}(x)
//   m <  n:  sqrt(m!/n!) (-z*)^k e^{-x/2} L_m^{(k)}(x)
template <typename Sink>
void fill_diagonal(ComplexPoint z, int offset, int rows, int cols, Sink&& sink) {
  const int k = std::abs(offset);
  const int row0 = offset >= 0 ? offset : 0;
  const int col0 = offset >= 0 ? 0 : k;
  const int count = std::min(rows - row0, cols - col0);
  if (count <= 0) return;

  const double x = std::norm(z);
  const double r = std::abs(z);
  if (r == 0.0) {
    if (k != 0) return;
    for (int j = 0; j < count; ++j) sink(j, j, Complex(1.0, 0.0));
    return;
  }
  const double theta = std::arg(z);
  const double sign = (offset < 0 && (k % 2 == 1)) ? -1.0 : 1.0;
  const Complex phase =
      sign * std::polar(1.0, std::remainder(offset >= 0 ? k * theta : -k * theta,
                                            2.0 * std::numbers::pi));
  const double alpha = k;

  // pref_j = sqrt(j!/(j+k)!) r^k e^{-x/2}, built by products in extended
  // precision: each factor is O(1) and the running value never exceeds 1.
  using Wide = long double;
  const Wide xw = static_cast<Wide>(x);
  const Wide rw = static_cast<Wide>(r);
  Wide pref = std::exp(-0.5L * xw);
  for (int i = 1; i <= k; ++i) pref *= rw / std::sqrt(static_cast<Wide>(i));

  Wide lag_prev = 0.0L;
  Wide lag = 1.0L;
  for (int j = 0; j < count; ++j) {
    if (j == 1) {
      lag_prev = lag;
      lag = 1.0L + alpha - xw;
    } else if (j > 1) {
      const Wide jj = j - 1;
      const Wide next =
          ((2.0L * jj + 1.0L + alpha - xw) * lag - (jj + alpha) * lag_prev) / (jj + 1.0L);
      lag_prev = lag;
      lag = next;
    }
    if (j > 0) pref *= std::sqrt(static_cast<Wide>(j) / static_cast<Wide>(j + k));
    sink(row0 + j, col0 + j, phase * static_cast<double>(pref * lag));
  }
}

}  // namespace

Complex displacement_element(int m, int n, ComplexPoint z) {
  if (m < 0 || n < 0) {
    throw Error(ErrorCode::kInvalidArgument, "displacement_element: negative index");
  }
  require_finite(z, "displacement_element");
  require_no_underflow(z);
  Complex out = 0.0;
  fill_diagonal(z, m - n, m + 1, n + 1, [&](int row, int col, Complex v) {
    if (row == m && col == n) out = v;
  });
  return out;
}

Matrix displacement_block(ComplexPoint z, int rows, int cols) {
  if (rows < 1 || cols < 1) {
    throw Error(ErrorCode::kInvalidArgument, "displacement_block: empty block");
  }
  require_finite(z, "displacement");
  require_no_underflow(z);
  Matrix d = Matrix::Zero(rows, cols);
  for (int offset = -(cols - 1); offset <= rows - 1; ++offset) {
    fill_diagonal(z, offset, rows, cols,
                  [&](int row, int col, Complex v) { d(row, col) = v; });
  }
  return d;
}

FockOperator displacement(ComplexPoint z, int truncation) {
  require_truncation(truncation, 0, "displacement");
  return FockOperator(displacement_block(z, truncation + 1, truncation + 1));
}

int converged_block(ComplexPoint z, int truncation, double tol) {
  const Matrix d = displacement(z, truncation).matrix();
  int last = -1;
  for (int n = 0; n <= truncation; ++n) {
    if (1.0 - d.col(n).squaredNorm() > tol) break;
    last = n;
  }
  return last;
}

DisplacedSeries displaced_geometric_sum(ComplexPoint z, int truncation,
                                        double ratio) {
  require_truncation(truncation, 0, "displaced_geometric_sum");
  const int rows = truncation + 1;
  if (ratio == 0.0) {
    const Matrix d = displacement_block(z, rows, 1);
    DisplacedSeries out{d.col(0) * d.col(0).adjoint(), 0.0};
    out.max_term = out.sum.cwiseAbs().maxCoeff();
    return out;
  }

  const double x = std::norm(z);
  const double log_ratio = std::log(std::abs(ratio));
  int cols = rows + 16 + static_cast<int>(std::ceil(2.0 * x + 8.0 * std::sqrt(x)));
  constexpr int kMaxCols = 8192;
  for (;;) {
    const Matrix d = displacement_block(z, rows, cols);
    std::vector<double> weight(cols);
    double peak = 0.0;
    for (int k = 0; k < cols; ++k) {
      weight[k] = std::exp(k * log_ratio + std::log(d.col(k).cwiseAbs2().maxCoeff() + 1e-320));
      peak = std::max(peak, weight[k]);
    }
    double tail = 0.0;
    for (int k = std::max(0, cols - 8); k < cols; ++k) tail = std::max(tail, weight[k]);
    if (tail <= 1e-18 * peak || cols >= kMaxCols) {
      if (tail > 1e-18 * peak) {
        throw Error(ErrorCode::kIllConditioned,
                    "displaced series did not converge within " +
                        std::to_string(kMaxCols) + " Fock levels");
      }
      DisplacedSeries out{Matrix::Zero(rows, rows), peak};
      for (int k = 0; k < cols; ++k) {
        const double sign = (ratio < 0.0 && k % 2 == 1) ? -1.0 : 1.0;
        out.sum.noalias() += sign * std::exp(k * log_ratio) * (d.col(k) * d.col(k).adjoint());
      }
      return out;
    }
    cols *= 2;
  }
}

DisplacedSeries displaced_power_terms(ComplexPoint z, double t, int truncation) {
  require_truncation(truncation, 0, "displaced_power");
  require_finite(z, "displaced_power");
  const int dim = truncation + 1;
  const Complex c = (1.0 - t) * z;
  // e[m][k] = <m|e^{c a^dagger}|k> = c^{m-k} sqrt(m!/k!) / (m-k)!
  std::vector<Complex> c_pow(dim, 1.0);
  for (int j = 1; j < dim; ++j) c_pow[j] = c_pow[j - 1] * c;
  Matrix e = Matrix::Zero(dim, dim);
  for (int m = 0; m < dim; ++m) {
    for (int k = 0; k <= m; ++k) {
      e(m, k) = c_pow[m - k] *
                std::exp(0.5 * (log_factorial(m) - log_factorial(k)) - log_factorial(m - k));
    }
  }
  Vector tk(dim);
  for (int k = 0; k < dim; ++k) tk(k) = std::pow(t, k);
  const double scale = std::exp((t - 1.0) * std::norm(z));
  const Eigen::MatrixXd abs_e = e.cwiseAbs();
  const Eigen::MatrixXd bound = abs_e * tk.cwiseAbs().real().asDiagonal() * abs_e.transpose();
  return {scale * (e * tk.asDiagonal() * e.adjoint()), scale * bound.maxCoeff()};
}

Matrix displaced_power(ComplexPoint z, double t, int truncation) {
  return displaced_power_terms(z, t, truncation).sum;
}

// ---------------------------------------------------------------------------
// Coherent states and test states

double coherent_tail_mass(ComplexPoint z, int truncation) {
  const double x = std::norm(z);
  if (x == 0.0) return 0.0;
  const double log_x = std::log(x);
  double sum = 0.0;
  for (int n = truncation + 1;; ++n) {
    const double term = std::exp(-x + n * log_x - log_factorial(n));
    sum += term;
    if (n > x && (term <= 1e-20 * sum || term == 0.0)) break;
  }
  return sum;
}

int suggested_truncation(ComplexPoint z, double tol) {
  int n = 0;
  while (coherent_tail_mass(z, n) > tol) ++n;
  return n;
}

Vector coherent_amplitudes(ComplexPoint z, int truncation) {
  require_truncation(truncation, 0, "coherent_amplitudes");
  require_finite(z, "coherent_amplitudes");
  require_no_underflow(z);
  Vector c = Vector::Zero(truncation + 1);
  const double x = std::norm(z);
  if (x == 0.0) {
    c(0) = 1.0;
    return c;
  }
  const double log_r = std::log(std::abs(z));
  const double theta = std::arg(z);
  for (int n = 0; n <= truncation; ++n) {
    const double mag = std::exp(-0.5 * x + n * log_r - 0.5 * log_factorial(n));
    c(n) = std::polar(mag, n * theta);
  }
  return c;
}

FockVector coherent_state(ComplexPoint z, int truncation, const Tolerances& tol) {
  Vector c = coherent_amplitudes(z, truncation);
  const double tail = coherent_tail_mass(z, truncation);
  if (tail > tol.tail_tol) {
    throw Error(ErrorCode::kTruncation,
                "coherent state tail mass " + format_g(tail) +
                    " exceeds tail_tol at truncation " +
                    std::to_string(truncation) + "; suggested truncation " +
                    std::to_string(suggested_truncation(z, tol.tail_tol)));
  }
  return FockVector(std::move(c), tail);
}

namespace {

FockOperator build(const FockSpec& spec, int truncation, const Tolerances&) {
  if (spec.n < 0 || spec.n > truncation) {
    throw Error(ErrorCode::kInvalidArgument,
                "fock state n = " + std::to_string(spec.n) +
                    " outside truncation " + std::to_string(truncation));
  }
  return FockOperator::basis(truncation + 1, spec.n, spec.n);
}

FockOperator build(const CoherentSpec& spec, int truncation, const Tolerances& tol) {
  return coherent_state(spec.z, truncation, tol).projector();
}

FockOperator build(const ThermalSpec& spec, int truncation, const Tolerances& tol) {
  const double nbar = spec.nbar;
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
    throw Error(ErrorCode::kInvalidArgument,
                "thermal state needs a finite mean photon number >= 0");
  }
  Matrix rho = Matrix::Zero(truncation + 1, truncation + 1);
  if (nbar == 0.0) {
    rho(0, 0) = 1.0;
    return FockOperator(std::move(rho), 0.0);
  }
  const double log_nbar = std::log(nbar);
  const double log_np1 = std::log1p(nbar);
  for (int n = 0; n <= truncation; ++n) {
    rho(n, n) = std::exp(n * log_nbar - (n + 1) * log_np1);
  }
  const double tail = std::exp((truncation + 1) * (log_nbar - log_np1));
  if (tail > tol.tail_tol) {
    const int needed = static_cast<int>(
        std::ceil(std::log(tol.tail_tol) / (log_nbar - log_np1))) - 1;
    throw Error(ErrorCode::kTruncation,
                "thermal state tail mass " + format_g(tail) +
                    " exceeds tail_tol; suggested truncation " +
                    std::to_string(needed));
  }
  return FockOperator(std::move(rho), tail);
}

FockOperator build(const CatSpec& spec, int truncation, const Tolerances& tol) {
  const Vector plus = coherent_amplitudes(spec.z, truncation);
  const Vector minus = coherent_amplitudes(-spec.z, truncation);
  const double norm2 = 2.0 + 2.0 * std::exp(-2.0 * std::norm(spec.z));
  const Vector v = (plus + minus) / std::sqrt(norm2);
  const double tail = std::max(0.0, 1.0 - v.squaredNorm());
  if (tail > tol.tail_tol) {
    throw Error(ErrorCode::kTruncation,
                "cat state tail mass " + format_g(tail) +
                    " exceeds tail_tol; suggested truncation " +
                    std::to_string(suggested_truncation(spec.z, tol.tail_tol)));
  }
  return FockVector(v, tail).projector();
}

}  // namespace

FockOperator build_state(const StateSpec& spec, int truncation, const Tolerances& tol) {
  require_truncation(truncation, 0, "build_state");
  return std::visit([&](const auto& s) { return build(s, truncation, tol); }, spec);
}

// ---------------------------------------------------------------------------
// Position representation

std::vector<double> hermite_functions(int n_max, double q) {
  if (n_max < 0) {
    throw Error(ErrorCode::kInvalidArgument, "hermite_functions: n_max < 0");
  }
  std::vector<double> psi(n_max + 1);
  psi[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * q * q);
  if (n_max >= 1) psi[1] = std::numbers::sqrt2 * q * psi[0];
  for (int n = 1; n < n_max; ++n) {
    psi[n + 1] = std::sqrt(2.0 / (n + 1)) * q * psi[n] -
                 std::sqrt(static_cast<double>(n) / (n + 1)) * psi[n - 1];
  }
  return psi;
}

double hermite_function(int n, double q) {
  if (n < 0) throw Error(ErrorCode::kInvalidArgument, "hermite_function: n < 0");
  return hermite_functions(n, q)[n];
}

Complex displaced_number_wavefunction(int n, ComplexPoint z, double y) {
  require_finite(z, "displaced_number_wavefunction");
  const double nu = quadrature_nu(z);
  const double mu = quadrature_mu(z);
  return std::polar(hermite_function(n, y - nu), mu * y - 0.5 * mu * nu);
}

}  // namespace phasetomo
