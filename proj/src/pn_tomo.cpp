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

#include "phasetomo/pn_tomo.hpp"

#include <cmath>
#include <algorithm>
#include <cstdio>
#include <limits>
#include <numeric>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "phasetomo/parallel.hpp"

namespace phasetomo {

namespace {

constexpr Complex kI(0.0, 1.0);

// v^n with v = 1/u, evaluated without repeated multiplication.
double power_of_inverse_ratio(double u, int n) {
  const double mag = std::exp(-n * std::log(std::abs(u)));
  return (u < 0.0 && n % 2 == 1) ? -mag : mag;
}

double gram_prefactor(const PNKernelParams& p) { return 4.0 / (1.0 - p.lambda * p.lambda); }

struct NodeData {
  std::vector<std::size_t> kept;  // node indices that pass the screen
  std::vector<Matrix> cores;   // 4/(1-l^2) sum_k u^k D|k><k|D^dagger, rows <= N
  std::vector<Matrix> blocks;  // D(z) rows [0, N], cols [0, n_max]
  double threshold = 0.0;
  double estimated_error = 0.0;  // dropped envelope + rounding on kept nodes
};

NodeData node_data(const PhaseGrid& grid, int n_max, const PNKernelParams& params,
                   int truncation, double screen_tol) {
  const std::size_t count = grid.size();
  const int dim = truncation + 1;
  const double pref = gram_prefactor(params);
  const double u = params.core_ratio();
  const std::vector<double> env = pn_node_envelope(grid, params, truncation);
  std::vector<Matrix> cores(count), blocks(count);
  std::vector<double> noise(count);
  parallel_for(count, [&](std::size_t j) {
    const ComplexPoint z = grid.nodes()[j].z;
    cores[j] = pref * displaced_geometric_sum(z, truncation, u).sum;
    blocks[j] = displacement_block(z, dim, n_max + 1);
    double worst = 0.0;
    for (int m = 0; m < dim; ++m) {
      double sum = 0.0;
      for (int n = 0; n <= n_max; ++n) {
        sum += std::abs(power_of_inverse_ratio(u, n)) * std::norm(blocks[j](m, n));
      }
      worst = std::max(worst, sum);
    }
    noise[j] = std::numeric_limits<double>::epsilon() * grid.nodes()[j].weight *
               cores[j].cwiseAbs().maxCoeff() * worst * dim * dim;
  });

  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return env[a] < env[b]; });
  NodeData data;
  if (screen_tol > 0.0) {
    data.threshold = screen_tol;
  } else {
    // Dropping the i smallest envelopes costs their sum; keeping the rest
    // costs their rounding noise.  Take the cheapest split.
    // kept[i]: noise of nodes order[i..], summed from the quiet end
    std::vector<double> kept(count + 1, 0.0);
    for (std::size_t i = count; i-- > 0;) kept[i] = kept[i + 1] + noise[order[i]];
    double dropped = 0.0;
    double best = kept[0];
    data.threshold = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      dropped += env[order[i]];
      if (dropped + kept[i + 1] < best) {
        best = dropped + kept[i + 1];
        data.threshold = i + 1 < count ? env[order[i + 1]] : env[order[i]] * 2.0;
      }
    }
  }
  for (std::size_t j = 0; j < count; ++j) {
    if (env[j] >= data.threshold) {
      data.kept.push_back(j);
      data.cores.push_back(std::move(cores[j]));
      data.blocks.push_back(std::move(blocks[j]));
      data.estimated_error += noise[j];
    } else {
      data.estimated_error += env[j];
    }
  }
  return data;
}

Eigen::MatrixXd basis_residuals(const PhaseGrid& grid, const NodeData& data, int n_max,
                                const PNKernelParams& params, int truncation) {
  const int dim = truncation + 1;
  const double u = params.core_ratio();
  std::vector<double> vpow(n_max + 1);
  for (int n = 0; n <= n_max; ++n) vpow[n] = power_of_inverse_ratio(u, n);
  Eigen::MatrixXd residual(dim, dim);
  parallel_for(static_cast<std::size_t>(dim * dim), [&](std::size_t idx) {
    const int m = static_cast<int>(idx) / dim;
    const int mp = static_cast<int>(idx) % dim;
    Matrix rec = Matrix::Zero(dim, dim);
    for (std::size_t i = 0; i < data.kept.size(); ++i) {
      const Matrix& d = data.blocks[i];
      Complex s = 0.0;
      for (int n = 0; n <= n_max; ++n) s += vpow[n] * std::conj(d(m, n)) * d(mp, n);
      rec.noalias() += (grid.nodes()[data.kept[i]].weight * s) * data.cores[i];
    }
    rec(m, mp) -= 1.0;
    residual(m, mp) = rec.cwiseAbs().maxCoeff();
  });
  return residual;
}

Complex closed_element_unsigned(int n, ComplexPoint z, const PNKernelParams& params, double x,
                                double y) {
  const Complex tau = params.tau();
  const Complex sin_t = std::sin(tau);
  const Complex cos_t = std::cos(tau);
  const double nu = quadrature_nu(z);
  const double mu = quadrature_mu(z);
  const double xs = x - nu;
  const double ys = y - nu;
  const Complex quad = kI * ((xs * xs + ys * ys) * cos_t / (2.0 * sin_t) - xs * ys / sin_t);
  return gram_prefactor(params) * std::exp(kI * tau * (n + 0.5) + kI * mu * (x - y) + quad) /
         std::sqrt(2.0 * std::numbers::pi * kI * sin_t);
}

// Sign multiplying the principal root, fixed once per lambda against the
// Fock sum at the reference point.
double branch_sign(const PNKernelParams& params) {
  const double u = params.core_ratio();
  double reference = 0.0;
  double power = 1.0;
  const std::vector<double> psi0 = hermite_functions(1, 0.0);
  // psi_m(0)^2 for even m follows from the recurrence at q = 0
  double psi_sq = psi0[0] * psi0[0];
  for (int m = 0;; m += 2) {
    const double term = power * psi_sq;
    reference += term;
    if (std::abs(term) < 1e-18 * std::abs(reference)) break;
    power *= u * u;
    psi_sq *= static_cast<double>(m + 1) / (m + 2);
  }
  reference *= gram_prefactor(params);
  const Complex principal = closed_element_unsigned(0, 0.0, params, 0.0, 0.0);
  const double err_plus = std::abs(principal - reference);
  const double err_minus = std::abs(principal + reference);
  const double best = std::min(err_plus, err_minus);
  if (best > 1e-8 * std::abs(reference)) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "no square-root branch reproduces the Fock sum at lambda=%g (mismatch %.3g)",
                  params.lambda, best / std::abs(reference));
    throw Error(ErrorCode::kBranch, buf);
  }
  return err_plus <= err_minus ? 1.0 : -1.0;
}

}  // namespace

Complex PNKernelParams::tau() const {
  return std::numbers::pi - kI * std::log((1.0 + lambda) / (1.0 - lambda));
}

void PNKernelParams::validate() const {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "lambda must lie in (0, 1); outside it the core operator is unbounded on "
                "the truncated space");
  }
}

Complex pn_tomogram(const FockOperator& a, int n, ComplexPoint z, const Tolerances& tol) {
  if (n < 0) throw Error(ErrorCode::kInvalidArgument, "pn_tomogram: n must be >= 0");
  if (a.tail_mass() > tol.tail_tol) {
    throw Error(ErrorCode::kTruncation,
                "operator tail mass exceeds tail_tol; raise the truncation");
  }
  const Vector d = displacement_block(z, a.dim(), n + 1).col(n);
  return d.dot(a.matrix() * d);
}

PNTomogram pn_tomogram_grid(const FockOperator& a, const PhaseGrid& grid, int n_max,
                            const Tolerances& tol) {
  if (n_max < 0) throw Error(ErrorCode::kInvalidArgument, "pn_tomogram_grid: n_max < 0");
  if (a.tail_mass() > tol.tail_tol) {
    throw Error(ErrorCode::kTruncation,
                "operator tail mass exceeds tail_tol; raise the truncation");
  }
  PNTomogram t{n_max, grid, Matrix(n_max + 1, static_cast<Eigen::Index>(grid.size())),
               operator_hash(a)};
  parallel_for(grid.size(), [&](std::size_t j) {
    const Matrix d = displacement_block(grid.nodes()[j].z, a.dim(), n_max + 1);
    const Matrix ad = a.matrix() * d;
    for (int n = 0; n <= n_max; ++n) t.values(n, j) = d.col(n).dot(ad.col(n));
  });
  return t;
}

FockOperator pn_gram(int n, ComplexPoint z, const PNKernelParams& params, int truncation) {
  params.validate();
  if (n < 0) throw Error(ErrorCode::kInvalidArgument, "pn_gram: n must be >= 0");
  const double u = params.core_ratio();
  const DisplacedSeries core = displaced_geometric_sum(z, truncation, u);
  return FockOperator(gram_prefactor(params) * power_of_inverse_ratio(u, n) * core.sum);
}

PhaseGrid pn_default_grid(int truncation) {
  return PhaseGrid::polar(std::sqrt(static_cast<double>(std::max(truncation, 1))) + 4.0, 48, 64);
}

std::vector<double> pn_node_envelope(const PhaseGrid& grid, const PNKernelParams& params,
                                     int truncation) {
  params.validate();
  const double u = params.core_ratio();
  const double pref = gram_prefactor(params);
  const int dim = truncation + 1;
  std::vector<double> env(grid.size());
  parallel_for(grid.size(), [&](std::size_t j) {
    const ComplexPoint z = grid.nodes()[j].z;
    // sum_n v^n <n|D^dagger X D|n> = Tr[X D v^N D^dagger]
    const double core = pref * displaced_power(z, u, truncation).cwiseAbs().maxCoeff();
    const double dual = displaced_power(z, 1.0 / u, truncation).cwiseAbs().maxCoeff();
    env[j] = grid.nodes()[j].weight * core * dual * dim * dim;
  });
  return env;
}

int pn_default_nmax(const PhaseGrid& grid, const PNKernelParams& params, int truncation,
                    double screen_tol) {
  const std::vector<double> env = pn_node_envelope(grid, params, truncation);
  const double log_v = -std::log(std::abs(params.core_ratio()));
  int n_max = 3 * truncation;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (env[j] < screen_tol) continue;
    const ComplexPoint z = grid.nodes()[j].z;
    const double core = gram_prefactor(params) *
                        displaced_power(z, params.core_ratio(), truncation).cwiseAbs().maxCoeff();
    const double limit = 1e-3 * screen_tol / (grid.nodes()[j].weight * core);
    // settled once the terms past the Poisson peak at |v||z|^2 fall below limit
    const int start =
        std::max(n_max, static_cast<int>(std::exp(log_v) * std::norm(z)) + truncation);
    int n = -1;
    for (int cols = start + 64; n < 0; cols *= 2) {
      const Matrix d = displacement_block(z, truncation + 1, cols);
      for (int k = start; k < cols; ++k) {
        if (std::exp(k * log_v) * d.col(k).squaredNorm() < limit) {
          n = k;
          break;
        }
      }
    }
    n_max = std::max(n_max, n);
  }
  return n_max;
}

Eigen::MatrixXd pn_basis_residuals(const PhaseGrid& grid, int n_max,
                                   const PNKernelParams& params, int truncation,
                                   double screen_tol) {
  params.validate();
  const NodeData data = node_data(grid, n_max, params, truncation, screen_tol);
  return basis_residuals(grid, data, n_max, params, truncation);
}

FockOperator pn_reconstruct(const PNTomogram& tomogram, const PNKernelParams& params,
                            int truncation, const PNReconstructOptions& options) {
  params.validate();
  if (truncation < 0) throw Error(ErrorCode::kInvalidArgument, "pn_reconstruct: N < 0");
  const PhaseGrid& grid = tomogram.grid;
  if (tomogram.values.cols() != static_cast<Eigen::Index>(grid.size()) ||
      tomogram.values.rows() != tomogram.n_max + 1) {
    throw Error(ErrorCode::kNodeMismatch, "photon-number tomogram has inconsistent shape");
  }
  const NodeData data = node_data(grid, tomogram.n_max, params, truncation, options.screen_tol);
  const Eigen::MatrixXd residual =
      basis_residuals(grid, data, tomogram.n_max, params, truncation);
  if (residual.maxCoeff() > options.self_check_tol) {
    std::ostringstream msg;
    char head[200];
    std::snprintf(head, sizeof head,
                  "photon-number reconstruction self-check failed (n_max=%d, tol %.2g, "
                  "estimated floor %.2g); basis residuals:",
                  tomogram.n_max, options.self_check_tol, data.estimated_error);
    msg << head;
    for (int m = 0; m <= truncation; ++m) {
      for (int mp = 0; mp <= truncation; ++mp) {
        char buf[48];
        std::snprintf(buf, sizeof buf, " (%d,%d)=%.2e", m, mp, residual(m, mp));
        msg << buf;
      }
    }
    throw Error(ErrorCode::kQuadrature, msg.str());
  }
  const double u = params.core_ratio();
  const int dim = truncation + 1;
  Matrix sum = Matrix::Zero(dim, dim);
  for (std::size_t i = 0; i < data.kept.size(); ++i) {
    const auto j = static_cast<Eigen::Index>(data.kept[i]);
    Complex s = 0.0;
    for (int n = 0; n <= tomogram.n_max; ++n) {
      s += power_of_inverse_ratio(u, n) * tomogram.values(n, j);
    }
    sum.noalias() += (grid.nodes()[j].weight * s) * data.cores[i];
  }
  return FockOperator(std::move(sum));
}

Complex pn_gram_position_element(int n, ComplexPoint z, const PNKernelParams& params,
                                 double x, double y) {
  params.validate();
  if (n < 0) throw Error(ErrorCode::kInvalidArgument, "n must be >= 0");
  return branch_sign(params) * closed_element_unsigned(n, z, params, x, y);
}

Complex pn_gram_position_fock_sum(int n, ComplexPoint z, const PNKernelParams& params,
                                  double x, double y, int truncation) {
  const Matrix g = pn_gram(n, z, params, truncation).matrix();
  const std::vector<double> px = hermite_functions(truncation, x);
  const std::vector<double> py = hermite_functions(truncation, y);
  const Eigen::Map<const Eigen::VectorXd> vx(px.data(), truncation + 1);
  const Eigen::Map<const Eigen::VectorXd> vy(py.data(), truncation + 1);
  return vx.cast<Complex>().dot(g * vy.cast<Complex>());
}

Complex mehler(double x, double y, Complex zeta) {
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(zeta.real()) ||
      !std::isfinite(zeta.imag())) {
    throw Error(ErrorCode::kInvalidArgument, "mehler: arguments must be finite");
  }
  if (std::abs(zeta) > 1.0 + 1e-15) {
    throw Error(ErrorCode::kInvalidArgument, "mehler: |zeta| must not exceed 1");
  }
  if (zeta == Complex(1.0) || zeta == Complex(-1.0)) {
    throw Error(ErrorCode::kDistributional,
                "mehler: delta-function limit at zeta = +-1, the sum is sqrt(pi) "
                "exp((x^2+y^2)/2) delta(x -+ y)");
  }
  const Complex z2 = zeta * zeta;
  return std::exp((z2 * (x * x + y * y) - 2.0 * zeta * (x * y)) / (z2 - 1.0)) /
         std::sqrt(1.0 - z2);
}

Complex mehler(double x, double y, Complex zeta, MehlerSeries series) {
  if (series.n_max < 0) throw Error(ErrorCode::kInvalidArgument, "mehler: n_max < 0");
  // H_n(q) / sqrt(2^n n!) = pi^{1/4} phi_n(q), phi_n = e^{q^2/2} psi_n, so each
  // term is sqrt(pi) zeta^n phi_n(x) phi_n(y).
  const double c = std::pow(std::numbers::pi, -0.25);
  double ax = c, ay = c;
  double bx = std::numbers::sqrt2 * x * c, by = std::numbers::sqrt2 * y * c;
  Complex sum = ax * ay;
  Complex power = 1.0;
  for (int n = 1; n <= series.n_max; ++n) {
    power *= zeta;
    sum += power * (bx * by);
    const double f1 = std::sqrt(2.0 / (n + 1));
    const double f0 = std::sqrt(static_cast<double>(n) / (n + 1));
    const double nx = f1 * x * bx - f0 * ax;
    const double ny = f1 * y * by - f0 * ay;
    ax = bx;
    bx = nx;
    ay = by;
    by = ny;
  }
  return std::sqrt(std::numbers::pi) * sum;
}

}  // namespace phasetomo
