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

#include "phasetomo/deformed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "phasetomo/parallel.hpp"

namespace phasetomo {

namespace {

constexpr double kLogMax = 700.0;

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// log sinh(y) / y for y >= 0.
double log_sinhc(double y) {
  if (y < 1e-3) return y * y / 6.0 - y * y * y * y / 180.0;
  return y + std::log(-std::expm1(-2.0 * y)) - std::log(2.0) - std::log(y);
}

void require_truncation(int truncation, const char* where) {
  if (truncation < 0) {
    throw Error(ErrorCode::kInvalidArgument, std::string(where) + ": truncation must be >= 0");
  }
}

int last_known_index(const DeformationSpec& spec) {
  if (spec.preset == DeformationPreset::kTable) return static_cast<int>(spec.table.size()) - 1;
  return std::numeric_limits<int>::max();
}

// log of sum_k |z|^{2k} / (k! ([f(k)]!)^2) and of the part with k > N.
struct NormSeries {
  double log_total = 0.0;
  double log_beyond = -std::numeric_limits<double>::infinity();
};

NormSeries norm_series(double x, const DeformationSpec& spec, int truncation) {
  NormSeries out;
  if (spec.preset == DeformationPreset::kIdentity) {
    out.log_total = x;
    const double tail = coherent_tail_mass(ComplexPoint(std::sqrt(x), 0.0), truncation);
    out.log_beyond = tail > 0.0 ? x + std::log(tail) : out.log_beyond;
    return out;
  }
  if (x == 0.0) return out;
  const double log_x = std::log(x);
  const int last = last_known_index(spec);
  double total = -std::numeric_limits<double>::infinity();
  double log_fact_f = 0.0;
  double prev = total;
  for (int k = 0;; ++k) {
    if (k > last) {
      std::ostringstream msg;
      msg << "N_{z,f} series not converged at n = " << last << " for |z|^2 = " << x
          << "; extend the deformation table";
      throw Error(ErrorCode::kTruncation, msg.str());
    }
    if (k > 0) log_fact_f += spec.log_f(k);
    const double term = k * log_x - log_factorial(k) - 2.0 * log_fact_f;
    total = log_add(total, term);
    if (k > truncation) out.log_beyond = log_add(out.log_beyond, term);
    if (term < prev && term < total - 40.0 && k > truncation) break;
    prev = term;
    if (k > 100000) throw Error(ErrorCode::kTruncation, "N_{z,f} series not converged");
  }
  out.log_total = total;
  return out;
}

// log of e^{(1+s)|z|^2} N_{z,f}^2.
double log_scalar(double x, const DeformationSpec& spec) {
  return (1.0 + spec.s) * x - norm_series(x, spec, 0).log_total;
}

void check_scalar_range(double x, const DeformationSpec& spec, double log_value) {
  if (log_value <= kLogMax) return;
  double lo = 0.0;
  double hi = x;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (log_scalar(mid, spec) > kLogMax ? hi : lo) = mid;
  }
  std::ostringstream msg;
  msg << "deformed scalar e^{(1+s)|z|^2} N^2 overflows at |z| = " << std::sqrt(x)
      << "; use a grid radius below " << std::sqrt(lo);
  throw Error(ErrorCode::kOverflow, msg.str());
}

// E_f^{-1}|z>, rows 0..N.
Vector inverse_deformed_coherent(ComplexPoint z, const DeformationSpec& spec, int truncation) {
  const double r = std::abs(z);
  const double theta = std::arg(z);
  const double x = r * r;
  Vector v = Vector::Zero(truncation + 1);
  double log_fact_f = 0.0;
  for (int k = 0; k <= truncation; ++k) {
    if (k > 0) log_fact_f += spec.log_f(k);
    if (r == 0.0) {
      if (k == 0) v(0) = 1.0;
      continue;
    }
    const double mag =
        std::exp(-0.5 * x + k * std::log(r) - 0.5 * log_factorial(k) - log_fact_f);
    v(k) = std::polar(mag, std::remainder(k * theta, 2.0 * M_PI));
  }
  return v;
}

// [f(n)]! E_f^{-1} D(z)|n>, rows 0..N.
Vector inverse_deformed_number(int n, ComplexPoint z, const DeformationSpec& spec,
                               int truncation) {
  const Matrix block = displacement_block(z, truncation + 1, n + 1);
  const double log_fn = spec.log_factorial_f(n);
  Vector v(truncation + 1);
  for (int m = 0; m <= truncation; ++m) {
    v(m) = block(m, n) * std::exp(log_fn - spec.log_factorial_f(m));
  }
  return v;
}

std::vector<double> log_factorials_f(const DeformationSpec& spec, int truncation) {
  std::vector<double> out(truncation + 1, 0.0);
  for (int n = 1; n <= truncation; ++n) out[n] = out[n - 1] + spec.log_f(n);
  return out;
}

Matrix conjugate_by_e(const Matrix& m, const std::vector<double>& log_e, double sign) {
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      out(r, c) = m(r, c) * std::exp(sign * (log_e[r] + log_e[c]));
    }
  }
  return out;
}

}  // namespace

DeformationSpec DeformationSpec::identity(double s) {
  DeformationSpec spec;
  spec.s = s;
  return spec;
}

DeformationSpec DeformationSpec::q(double lambda_q, double s) {
  DeformationSpec spec;
  spec.preset = DeformationPreset::kQ;
  spec.lambda_q = lambda_q;
  spec.s = s;
  return spec;
}

DeformationSpec DeformationSpec::from_table(std::vector<double> f, double s) {
  DeformationSpec spec;
  spec.preset = DeformationPreset::kTable;
  spec.table = std::move(f);
  spec.s = s;
  return spec;
}

double DeformationSpec::log_f(int n) const {
  if (n <= 0) return 0.0;
  switch (preset) {
    case DeformationPreset::kIdentity:
      return 0.0;
    case DeformationPreset::kQ:
      return 0.5 * log_sinhc(std::abs(lambda_q) * n);
    case DeformationPreset::kTable:
      if (n >= static_cast<int>(table.size())) {
        throw Error(ErrorCode::kInvalidArgument,
                    "deformation table covers n <= " + std::to_string(table.size() - 1) +
                        ", f(" + std::to_string(n) + ") requested");
      }
      return std::log(table[n]);
  }
  return 0.0;
}

double DeformationSpec::log_factorial_f(int n) const {
  double out = 0.0;
  for (int m = 1; m <= n; ++m) out += log_f(m);
  return out;
}

void DeformationSpec::validate(int truncation) const {
  if (!(s >= -1.0 && s <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "deformation: s must lie in [-1, 1]");
  }
  if (preset == DeformationPreset::kQ && !std::isfinite(lambda_q)) {
    throw Error(ErrorCode::kInvalidArgument, "deformation: lambda_q must be finite");
  }
  if (preset == DeformationPreset::kTable) {
    if (table.empty() || std::abs(table[0] - 1.0) > 1e-12) {
      throw Error(ErrorCode::kInvalidArgument, "deformation table must start with f(0) = 1");
    }
    if (static_cast<int>(table.size()) <= truncation) {
      throw Error(ErrorCode::kInvalidArgument,
                  "deformation table covers n <= " + std::to_string(table.size() - 1) +
                      ", truncation is " + std::to_string(truncation));
    }
    for (int n = 1; n <= truncation; ++n) {
      if (!(table[n] > 0.0) || !std::isfinite(table[n])) {
        throw Error(ErrorCode::kInvalidArgument,
                    "deformation: f(" + std::to_string(n) + ") must be positive and finite");
      }
    }
  }
  double log_fact = 0.0;
  for (int n = 1; n <= truncation; ++n) {
    log_fact += log_f(n);
    if (!std::isfinite(log_fact) || std::abs(log_fact) > kLogMax) {
      throw Error(ErrorCode::kOverflow,
                  "deformation: [f(" + std::to_string(n) + ")]! leaves double range");
    }
  }
}

FockOperator deformation_operator(const DeformationSpec& spec, int truncation) {
  require_truncation(truncation, "deformation_operator");
  spec.validate(truncation);
  const std::vector<double> log_e = log_factorials_f(spec, truncation);
  Matrix e = Matrix::Zero(truncation + 1, truncation + 1);
  for (int n = 0; n <= truncation; ++n) e(n, n) = std::exp(log_e[n]);
  return FockOperator(e);
}

DeformedLadder deformed_ladder(const DeformationSpec& spec, int truncation) {
  require_truncation(truncation, "deformed_ladder");
  spec.validate(truncation);
  const int dim = truncation + 1;
  Matrix a = Matrix::Zero(dim, dim);
  Matrix a_dag = Matrix::Zero(dim, dim);
  for (int m = 0; m + 1 < dim; ++m) {
    const double root = std::sqrt(static_cast<double>(m + 1));
    const double f = spec.f(m + 1);
    a(m, m + 1) = root * f;
    a_dag(m + 1, m) = root / f;
  }
  return {FockOperator(a), FockOperator(a_dag)};
}

double deformed_normalization(ComplexPoint z, const DeformationSpec& spec) {
  return std::exp(-0.5 * norm_series(std::norm(z), spec, 0).log_total);
}

double DeformedState::norm_squared() const {
  return scale() * scale() * base.amplitudes().squaredNorm();
}

DeformedState deformed_coherent_state(ComplexPoint z, const DeformationSpec& spec,
                                      int truncation, const Tolerances& tol) {
  require_truncation(truncation, "deformed_coherent_state");
  spec.validate(truncation);
  const double x = std::norm(z);
  const NormSeries series = norm_series(x, spec, truncation);
  const double tail = std::exp(series.log_beyond - series.log_total);
  if (tail > tol.tail_tol) {
    std::ostringstream msg;
    msg << "deformed coherent state at |z| = " << std::abs(z) << " loses " << tail
        << " of its weight beyond N = " << truncation;
    throw Error(ErrorCode::kTruncation, msg.str());
  }
  DeformedState out;
  out.base = FockVector(inverse_deformed_coherent(z, spec, truncation), tail);
  out.norm_factor = std::exp(-0.5 * series.log_total);
  out.s_prefactor = std::exp(0.5 * (1.0 + spec.s) * x);
  return out;
}

DeformedState deformed_number_state(int n, ComplexPoint z, const DeformationSpec& spec,
                                    int truncation, const Tolerances& tol) {
  require_truncation(truncation, "deformed_number_state");
  if (n < 0) throw Error(ErrorCode::kInvalidArgument, "deformed_number_state: n must be >= 0");
  spec.validate(truncation);
  // Weight beyond N, from an extended column of D(z).
  const int rows = std::min(std::max(truncation, n) + suggested_truncation(z, 1e-20) + 10,
                            last_known_index(spec));
  double tail = 0.0;
  if (rows > truncation) {
    const Vector full = inverse_deformed_number(n, z, spec, rows);
    const double total = full.squaredNorm();
    tail = total > 0.0 ? full.tail(rows - truncation).squaredNorm() / total : 0.0;
  }
  if (tail > tol.tail_tol) {
    std::ostringstream msg;
    msg << "deformed displaced number state n = " << n << " at |z| = " << std::abs(z)
        << " loses " << tail << " of its weight beyond N = " << truncation;
    throw Error(ErrorCode::kTruncation, msg.str());
  }
  const double x = std::norm(z);
  DeformedState out;
  out.base = FockVector(inverse_deformed_number(n, z, spec, truncation), tail);
  out.norm_factor = deformed_normalization(z, spec);
  out.s_prefactor = std::exp(0.5 * (1.0 + spec.s) * x);
  return out;
}

FockOperator deformed_displacement(ComplexPoint z, const DeformationSpec& spec,
                                   int truncation) {
  require_truncation(truncation, "deformed_displacement");
  spec.validate(truncation);
  const std::vector<double> log_e = log_factorials_f(spec, truncation);
  const Matrix d = displacement(z, truncation).matrix();
  const int dim = truncation + 1;
  Matrix d_f(dim, dim);
  for (int m = 0; m < dim; ++m) {
    for (int k = 0; k < dim; ++k) d_f(m, k) = d(m, k) * std::exp(log_e[k] - log_e[m]);
  }

  // exp(z A_f^dagger - z* A) on a larger truncation.  The generator is
  // conjugated back by E_f before exponentiating (exact on any truncation),
  // then the block is conjugated forward again.
  const int big = std::min(std::max(2 * truncation + 2,
                                    truncation + suggested_truncation(z, 1e-20) + 10),
                           last_known_index(spec));
  if (big > truncation) {
    const DeformedLadder ladder = deformed_ladder(spec, big);
    const std::vector<double> log_big = log_factorials_f(spec, big);
    Matrix gen = z * ladder.a_dag.matrix() - std::conj(z) * ladder.a.matrix();
    for (int m = 0; m <= big; ++m) {
      for (int k = 0; k <= big; ++k) gen(m, k) *= std::exp(log_big[m] - log_big[k]);
    }
    const Matrix expd = gen.exp();
    double diff = 0.0;
    double scale = 1.0;
    for (int m = 0; m < dim; ++m) {
      for (int k = 0; k < dim; ++k) {
        const Complex via_exp = expd(m, k) * std::exp(log_e[k] - log_e[m]);
        diff = std::max(diff, std::abs(via_exp - d_f(m, k)));
        scale = std::max(scale, std::abs(d_f(m, k)));
      }
    }
    if (diff > 1e-6 * scale) {
      std::ostringstream msg;
      msg << "deformed_displacement: matrix-exponential check differs by " << diff / scale
          << " at |z| = " << std::abs(z);
      throw Error(ErrorCode::kTruncation, msg.str());
    }
  }
  return FockOperator(d_f);
}

Complex f_scalar_product(const FockVector& phi, const FockVector& psi,
                         const DeformationSpec& spec) {
  if (phi.dim() != psi.dim()) {
    throw Error(ErrorCode::kInvalidArgument, "f_scalar_product: dimension mismatch");
  }
  const std::vector<double> log_e = log_factorials_f(spec, phi.dim() - 1);
  Complex out = 0.0;
  for (int k = 0; k < phi.dim(); ++k) {
    out += std::conj(phi[k]) * std::exp(2.0 * log_e[k]) * psi[k];
  }
  return out;
}

double deformed_scalar(ComplexPoint z, const DeformationSpec& spec) {
  const double x = std::norm(z);
  const double value = log_scalar(x, spec);
  check_scalar_range(x, spec, value);
  return std::exp(value);
}

FockOperator deformed_operator(const FockOperator& b, const DeformationSpec& spec) {
  spec.validate(b.truncation());
  return FockOperator(conjugate_by_e(b.matrix(), log_factorials_f(spec, b.truncation()), -1.0),
                      b.tail_mass());
}

Complex deformed_K(const FockOperator& b, ComplexPoint z, const DeformationSpec& spec) {
  spec.validate(b.truncation());
  const Vector psi = inverse_deformed_coherent(z, spec, b.truncation());
  return deformed_scalar(z, spec) * psi.dot(b.matrix() * psi);
}

Complex deformed_pn_K(const FockOperator& b, int n, ComplexPoint z,
                      const DeformationSpec& spec) {
  if (n < 0) throw Error(ErrorCode::kInvalidArgument, "deformed_pn_K: n must be >= 0");
  spec.validate(b.truncation());
  const Vector psi = inverse_deformed_number(n, z, spec, b.truncation());
  return deformed_scalar(z, spec) * psi.dot(b.matrix() * psi);
}

Tomogram deformed_k_grid(const FockOperator& b, const PhaseGrid& grid,
                         const DeformationSpec& spec) {
  spec.validate(b.truncation());
  Tomogram out{grid, std::vector<Complex>(grid.size()), SymbolKind::kDeformedK, spec.s,
               operator_hash(b)};
  parallel_for(grid.size(), [&](std::size_t j) {
    out.values[j] = deformed_K(b, grid.nodes()[j].z, spec);
  });
  return out;
}

FockOperator deformed_reconstruct(const Tomogram& k_values, const DeformationSpec& spec,
                                  DeformedRoute route, int truncation) {
  require_truncation(truncation, "deformed_reconstruct");
  spec.validate(truncation);
  if (k_values.kind != SymbolKind::kDeformedK) {
    throw Error(ErrorCode::kInvalidArgument, "deformed_reconstruct: tomogram is not a K_f symbol");
  }
  if (k_values.values.size() != k_values.grid.size()) {
    throw Error(ErrorCode::kNodeMismatch, "deformed_reconstruct: value count differs from grid");
  }
  const auto& nodes = k_values.grid.nodes();
  std::vector<double> scalar(nodes.size());
  for (std::size_t j = 0; j < nodes.size(); ++j) scalar[j] = deformed_scalar(nodes[j].z, spec);

  if (route == DeformedRoute::kFrame) {
    std::vector<Vector> states(nodes.size());
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      states[j] = std::sqrt(scalar[j]) * inverse_deformed_coherent(nodes[j].z, spec, truncation);
    }
    const DualFrame frame = dual_frame_from_states(k_values.grid, states);
    return frame_reconstruct(frame, k_values.values);
  }

  Tomogram plain{k_values.grid, k_values.values, SymbolKind::kK, 0.0, k_values.source_hash};
  for (std::size_t j = 0; j < nodes.size(); ++j) plain.values[j] /= scalar[j];
  const FockOperator b_f = reconstruct_from_K(plain, truncation);
  return FockOperator(conjugate_by_e(b_f.matrix(), log_factorials_f(spec, truncation), 1.0));
}

FockOperator deformed_reconstruct(const KSource& k_source, const DeformationSpec& spec,
                                  int truncation, const KInversionOptions& options) {
  require_truncation(truncation, "deformed_reconstruct");
  spec.validate(truncation);
  const KSource plain = [&](ComplexPoint z) { return k_source(z) / deformed_scalar(z, spec); };
  const FockOperator b_f = reconstruct_from_K(plain, truncation, options);
  return FockOperator(conjugate_by_e(b_f.matrix(), log_factorials_f(spec, truncation), 1.0));
}

FockOperator deformed_pn_gram(int n, ComplexPoint z, const DeformationSpec& spec,
                              const PNKernelParams& params, int truncation) {
  require_truncation(truncation, "deformed_pn_gram");
  spec.validate(truncation);
  // A_f^dagger A must be diagonal with entries 0..N for u^{A_f^dagger A} to
  // be the undeformed core.
  const DeformedLadder ladder = deformed_ladder(spec, truncation);
  const Matrix number = ladder.a_dag.matrix() * ladder.a.matrix();
  Matrix off = number;
  for (int k = 0; k <= truncation; ++k) off(k, k) -= static_cast<double>(k);
  if (off.cwiseAbs().maxCoeff() > 1e-12 * std::max(1, truncation)) {
    throw Error(ErrorCode::kInvalidArgument,
                "deformed_pn_gram: A_f^dagger A is not the number operator");
  }
  const double x = std::norm(z);
  const double log_factor = -(1.0 + spec.s) * x + norm_series(x, spec, 0).log_total -
                            2.0 * spec.log_factorial_f(n);
  if (std::abs(log_factor) > kLogMax) {
    throw Error(ErrorCode::kOverflow, "deformed_pn_gram: scalar factor leaves double range");
  }
  const Matrix g = pn_gram(n, z, params, truncation).matrix();
  return FockOperator(std::exp(log_factor) *
                      conjugate_by_e(g, log_factorials_f(spec, truncation), 1.0));
}

PNTomogram deformed_pn_tomogram_grid(const FockOperator& b, const PhaseGrid& grid,
                                     int n_max, const DeformationSpec& spec) {
  PNTomogram out = pn_tomogram_grid(deformed_operator(b, spec), grid, n_max);
  out.source_hash = operator_hash(b);
  std::vector<double> log_fact(n_max + 1, 0.0);
  for (int n = 1; n <= n_max; ++n) log_fact[n] = log_fact[n - 1] + spec.log_f(n);
  const auto& nodes = grid.nodes();
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const double x = std::norm(nodes[j].z);
    const double ls = log_scalar(x, spec);
    check_scalar_range(x, spec, ls);
    for (int n = 0; n <= n_max; ++n) {
      const double lf = ls + 2.0 * log_fact[n];
      if (lf > kLogMax) {
        throw Error(ErrorCode::kOverflow,
                    "deformed photon-number tomogram: [f(n)]!^2 factor overflows at n = " +
                        std::to_string(n) + "; lower n_max");
      }
      out.values(n, static_cast<Eigen::Index>(j)) *= std::exp(lf);
    }
  }
  return out;
}

FockOperator deformed_pn_reconstruct(const PNTomogram& tomogram, const DeformationSpec& spec,
                                     const PNKernelParams& params, int truncation,
                                     const PNReconstructOptions& options) {
  require_truncation(truncation, "deformed_pn_reconstruct");
  spec.validate(truncation);
  PNTomogram plain = tomogram;
  std::vector<double> log_fact(tomogram.n_max + 1, 0.0);
  for (int n = 1; n <= tomogram.n_max; ++n) log_fact[n] = log_fact[n - 1] + spec.log_f(n);
  const auto& nodes = tomogram.grid.nodes();
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const double ls = log_scalar(std::norm(nodes[j].z), spec);
    for (int n = 0; n <= tomogram.n_max; ++n) {
      plain.values(n, static_cast<Eigen::Index>(j)) *= std::exp(-ls - 2.0 * log_fact[n]);
    }
  }
  const FockOperator b_f = pn_reconstruct(plain, params, truncation, options);
  return FockOperator(conjugate_by_e(b_f.matrix(), log_factorials_f(spec, truncation), 1.0));
}

}  // namespace phasetomo
