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

#include "phasetomo/cs_tomo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <limits>
#include <numbers>
#include <string>

#include <unsupported/Eigen/FFT>

#include "phasetomo/parallel.hpp"
#include "phasetomo/quadrature.hpp"

namespace phasetomo {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

int require_truncation(int truncation, const char* what) {
  if (truncation < 0) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + ": truncation must be >= 0");
  }
  return truncation;
}

// Column-major vectorization; Tr(P X) = vec(P)^dagger vec(X) for Hermitian P.
Vector vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, int dim) {
  return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

// Recovers A from the angular Fourier sectors of F(r, theta) = e^{r^2} K.
// samples(i, j) is F at radius radii[i] and angle 2 pi j / M.
FockOperator invert_polar_samples(const std::vector<double>& radii, int n_angular,
                                  const Matrix& samples, int truncation,
                                  double max_condition) {
  const int n_r = static_cast<int>(radii.size());
  const int dim = truncation + 1;
  Eigen::FFT<double> fft;
  // sectors(i, idx) = g_k(r_i), negative k stored at M + k
  Matrix sectors(n_r, n_angular);
  std::vector<Complex> in(n_angular), out(n_angular);
  for (int i = 0; i < n_r; ++i) {
    for (int j = 0; j < n_angular; ++j) in[j] = samples(i, j);
    fft.fwd(out, in);
    for (int j = 0; j < n_angular; ++j) sectors(i, j) = out[j] / double(n_angular);
  }

  Matrix result = Matrix::Zero(dim, dim);
  for (int k = -truncation; k <= truncation; ++k) {
    const int first = std::max(0, -k);
    const int count = dim - std::abs(k);
    Eigen::MatrixXd design(n_r, count);
    for (int i = 0; i < n_r; ++i) {
      const double log_r = std::log(radii[i]);
      for (int c = 0; c < count; ++c) {
        const int n = first + c;
        const int m = n + k;
        design(i, c) = std::exp((n + m) * log_r - 0.5 * (log_factorial(n) + log_factorial(m)));
      }
    }
    Vector rhs = sectors.col(k >= 0 ? k : n_angular + k);
    // Rounding in K is uniform, so the error in e^{r^2} K grows like e^{r^2}.
    for (int i = 0; i < n_r; ++i) {
      const double w = std::exp(-radii[i] * radii[i]);
      design.row(i) *= w;
      rhs(i) *= w;
    }
    Eigen::VectorXd scale(count);
    for (int c = 0; c < count; ++c) {
      scale(c) = design.col(c).norm();
      design.col(c) /= scale(c);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                                 : std::numeric_limits<double>::infinity();
    if (!(cond <= max_condition)) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "radial fit for Fourier sector k=%d is ill-conditioned (condition %.3g)", k,
                    cond);
      throw Error(ErrorCode::kIllConditioned, buf);
    }
    const Vector re = svd.solve(rhs.real()).cast<Complex>();
    const Vector im = svd.solve(rhs.imag()).cast<Complex>();
    for (int c = 0; c < count; ++c) {
      const int n = first + c;
      result(n, n + k) = (re(c) + Complex(0.0, 1.0) * im(c)) / scale(c);
    }
  }
  return FockOperator(std::move(result));
}

DualFrame build_frame(const PhaseGrid& grid, int dim, const std::vector<Vector>& states,
                      const DualFrameOptions& options) {
  const int d2 = dim * dim;
  const std::size_t count = states.size();
  if (count < static_cast<std::size_t>(d2)) {
    throw Error(ErrorCode::kIllConditioned,
                "dual frame: grid has " + std::to_string(count) + " nodes but " +
                    std::to_string(d2) + " are needed for truncation " +
                    std::to_string(dim - 1));
  }
  Matrix frame_op = Matrix::Zero(d2, d2);
  std::vector<Vector> vecs(count);
  for (std::size_t j = 0; j < count; ++j) {
    vecs[j] = vec(states[j] * states[j].adjoint());
    frame_op.noalias() += grid.nodes()[j].weight * (vecs[j] * vecs[j].adjoint());
  }
  frame_op = 0.5 * (frame_op + frame_op.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(frame_op);
  const Eigen::VectorXd& ev = eig.eigenvalues();
  const double cutoff = options.svd_cutoff * ev.cwiseAbs().maxCoeff();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(d2);
  int rank = 0;
  for (int i = 0; i < d2; ++i) {
    if (ev(i) > cutoff) {
      inv(i) = 1.0 / ev(i);
      ++rank;
    }
  }
  if (rank < d2) {
    throw Error(ErrorCode::kIllConditioned,
                "dual frame: grid too coarse, frame rank " + std::to_string(rank) + " of " +
                    std::to_string(d2) + " after cutoff");
  }
  const Matrix s_inv = eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().adjoint();

  DualFrame frame{grid, dim - 1, {}, options.svd_cutoff, rank, 0.0};
  frame.gram_ops.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    frame.gram_ops.emplace_back(unvec(s_inv * vecs[j], dim));
  }
  frame.basis_residual =
      (s_inv * frame_op - Matrix::Identity(d2, d2)).cwiseAbs().maxCoeff();
  if (frame.basis_residual > options.frame_tol) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "dual frame: basis residual %.3g exceeds %.3g",
                  frame.basis_residual, options.frame_tol);
    throw Error(ErrorCode::kIllConditioned, buf);
  }
  return frame;
}

// 2-D FFT of a side x side array stored with the first index major.
void fft2(std::vector<Complex>& data, int side, bool inverse) {
  Eigen::FFT<double> fft;
  std::vector<Complex> in(side), out(side);
  for (int pass = 0; pass < 2; ++pass) {
    for (int a = 0; a < side; ++a) {
      for (int b = 0; b < side; ++b) {
        in[b] = pass == 0 ? data[a * side + b] : data[b * side + a];
      }
      if (inverse) {
        fft.inv(out, in);
      } else {
        fft.fwd(out, in);
      }
      for (int b = 0; b < side; ++b) {
        (pass == 0 ? data[a * side + b] : data[b * side + a]) = out[b];
      }
    }
  }
}

}  // namespace

std::string_view to_string(SymbolKind kind) {
  switch (kind) {
    case SymbolKind::kK: return "K";
    case SymbolKind::kP: return "P";
    case SymbolKind::kOrdered: return "W_s";
    case SymbolKind::kDeformedK: return "K_f";
  }
  return "?";
}

Complex Tomogram::integral() const {
  Complex sum = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) sum += grid.nodes()[j].weight * values[j];
  return sum;
}

std::string operator_hash(const FockOperator& op) {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](const void* p, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ull;
    }
  };
  const std::int64_t dim = op.dim();
  mix(&dim, sizeof dim);
  for (int r = 0; r < op.dim(); ++r) {
    for (int c = 0; c < op.dim(); ++c) {
      // +0.0 and -0.0 hash alike
      const double parts[2] = {op(r, c).real() + 0.0, op(r, c).imag() + 0.0};
      mix(parts, sizeof parts);
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Complex husimi_K(const FockOperator& a, ComplexPoint z, const Tolerances& tol) {
  if (a.tail_mass() > tol.tail_tol) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "operator tail mass %.3g exceeds tail_tol %.3g; raise the truncation",
                  a.tail_mass(), tol.tail_tol);
    throw Error(ErrorCode::kTruncation, buf);
  }
  const Vector c = coherent_amplitudes(z, a.truncation());
  return c.dot(a.matrix() * c);
}

Tomogram k_grid(const FockOperator& a, const PhaseGrid& grid, const KGridOptions& options,
                const Tolerances& tol) {
  Tomogram t{grid, std::vector<Complex>(grid.size()), SymbolKind::kK, 0.0, operator_hash(a)};
  parallel_for(grid.size(), [&](std::size_t j) {
    t.values[j] = husimi_K(a, grid.nodes()[j].z, tol);
  });
  const double dev = std::abs(t.integral() - a.trace());
  if (dev > options.grid_tol) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "grid integral of K differs from Tr A by %.3g (grid_tol %.3g); enlarge the grid",
                  dev, options.grid_tol);
    throw Error(ErrorCode::kCoverage, buf);
  }
  return t;
}

FockOperator s_ordered_kernel(ComplexPoint z, double s, int truncation) {
  require_truncation(truncation, "s_ordered_kernel");
  if (!std::isfinite(s) || s < -1.0 || s > 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "s_ordered_kernel: s must lie in [-1, 1)");
  }
  if (s == 1.0) {
    throw Error(ErrorCode::kDistributional,
                "distributional kernel; use derivative or frame reconstruction");
  }
  if (s == -1.0) {
    const Vector c = coherent_amplitudes(z, truncation);
    return FockOperator(c * c.adjoint());
  }
  const double ratio = (s + 1.0) / (s - 1.0);
  const double pref = 2.0 / (1.0 - s);
  // The normal-ordered closed form is cheap but cancels at large |z|; the
  // k-series is used whenever its terms would cost more than ~1e-13.
  const DisplacedSeries closed = displaced_power_terms(z, ratio, truncation);
  if (closed.max_term * pref * kEps < 1e-13) return FockOperator(pref * closed.sum);
  const DisplacedSeries series = displaced_geometric_sum(z, truncation, ratio);
  const double err = series.max_term * pref * kEps;
  if (err > 1e-6) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "s-ordered kernel at s=%g, |z|=%g loses accuracy to cancellation (error ~%.2g)",
                  s, std::abs(z), err);
    throw Error(ErrorCode::kIllConditioned, buf);
  }
  return FockOperator(pref * series.sum);
}

Complex quasi_distribution(const FockOperator& a, ComplexPoint z, double s) {
  if (!std::isfinite(s) || s < -1.0 || s > 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "quasi_distribution: s must lie in (-1, 1]");
  }
  if (s == 1.0) return husimi_K(a, z);
  if (s == -1.0) {
    throw Error(ErrorCode::kDistributional,
                "s=-1 needs the distributional Wick kernel; use p_function_grid");
  }
  const FockOperator kernel = s_ordered_kernel(z, -s, a.truncation());
  return (a.matrix() * kernel.matrix()).trace();
}

Tomogram quasi_grid(const FockOperator& a, const PhaseGrid& grid, double s) {
  Tomogram t{grid, std::vector<Complex>(grid.size()),
             s == 1.0 ? SymbolKind::kK : SymbolKind::kOrdered, s, operator_hash(a)};
  parallel_for(grid.size(), [&](std::size_t j) {
    t.values[j] = quasi_distribution(a, grid.nodes()[j].z, s);
  });
  return t;
}

FockOperator reconstruct_from_K(const KSource& k_source, int truncation,
                                const KInversionOptions& options) {
  require_truncation(truncation, "reconstruct_from_K");
  const int n_radial = options.n_radial > 0 ? options.n_radial : 2 * truncation + 4;
  const int n_angular = options.n_angular > 0 ? options.n_angular : 2 * truncation + 2;
  const double radius =
      options.radius > 0.0 ? options.radius : std::sqrt(truncation + 1.0) + 1.5;
  if (n_angular < 2 * truncation + 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "reconstruct_from_K: need at least 2N+1 angles to separate the sectors");
  }
  if (n_radial < truncation + 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "reconstruct_from_K: need at least N+1 radial nodes");
  }
  const QuadratureRule rule = gauss_legendre(n_radial, 0.0, radius);
  Matrix samples(n_radial, n_angular);
  for (int i = 0; i < n_radial; ++i) {
    const double r = rule.nodes[i];
    for (int j = 0; j < n_angular; ++j) {
      const Complex k = k_source(std::polar(r, 2.0 * std::numbers::pi * j / n_angular));
      if (!std::isfinite(k.real()) || !std::isfinite(k.imag())) {
        throw Error(ErrorCode::kInvalidArgument, "reconstruct_from_K: K sample is not finite");
      }
      samples(i, j) = std::exp(r * r) * k;
    }
  }
  return invert_polar_samples(rule.nodes, n_angular, samples, truncation,
                              options.max_condition);
}

FockOperator reconstruct_from_K(const Tomogram& tomogram, int truncation,
                                double max_condition) {
  require_truncation(truncation, "reconstruct_from_K");
  const PhaseGrid& grid = tomogram.grid;
  if (grid.kind() != GridKind::kPolar) {
    throw Error(ErrorCode::kInvalidArgument, "moment reconstruction needs a polar grid");
  }
  if (tomogram.values.size() != grid.size()) {
    throw Error(ErrorCode::kNodeMismatch, "tomogram has the wrong number of values");
  }
  const int m = grid.n_angular();
  if (m < 2 * truncation + 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "moment reconstruction at truncation " + std::to_string(truncation) +
                    " needs at least " + std::to_string(2 * truncation + 2) + " angles");
  }
  const auto& radii = grid.radial_nodes();
  Matrix samples(grid.n_radial(), m);
  for (int i = 0; i < grid.n_radial(); ++i) {
    for (int j = 0; j < m; ++j) {
      samples(i, j) = std::exp(radii[i] * radii[i]) * tomogram.values[i * m + j];
    }
  }
  return invert_polar_samples(radii, m, samples, truncation, max_condition);
}

Tomogram p_function_grid(const FockOperator& a, const PhaseGrid& grid,
                         const PFunctionOptions& options) {
  if (grid.kind() != GridKind::kCartesian) {
    throw Error(ErrorCode::kInvalidArgument, "p_function_grid needs a cartesian grid");
  }
  const int side = grid.side();
  const double h = grid.spacing();
  const double ext = grid.half_extent();
  const std::size_t total = grid.size();
  std::vector<Complex> data(total);
  parallel_for(total, [&](std::size_t j) { data[j] = husimi_K(a, grid.nodes()[j].z); });

  fft2(data, side, false);
  std::vector<double> freq(side);
  const double dxi = 2.0 * std::numbers::pi / (side * h);
  for (int p = 0; p < side; ++p) freq[p] = dxi * (p < (side + 1) / 2 ? p : p - side);
  std::vector<double> rho(total);
  double peak = 0.0;
  for (int p = 0; p < side; ++p) {
    for (int q = 0; q < side; ++q) {
      const std::size_t idx = static_cast<std::size_t>(p) * side + q;
      const double phase = (freq[p] + freq[q]) * ext;
      data[idx] *= h * h / (2.0 * std::numbers::pi) * std::polar(1.0, phase);
      rho[idx] = std::hypot(freq[p], freq[q]);
      peak = std::max(peak, std::abs(data[idx]));
    }
  }
  const double floor = options.noise_floor * peak;
  double rho_used = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    if (std::abs(data[i]) > floor) rho_used = std::max(rho_used, rho[i]);
  }
  double phi_peak = 0.0;
  double shell_peak = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    if (rho[i] > rho_used) {
      data[i] = 0.0;
      continue;
    }
    data[i] *= std::exp(rho[i] * rho[i] / 4.0);
    const double mag = std::abs(data[i]);
    phi_peak = std::max(phi_peak, mag);
    if (rho[i] > rho_used - dxi) shell_peak = std::max(shell_peak, mag);
  }
  if (!(shell_peak <= options.decay_gate * phi_peak)) {
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "P-function is distributional for this operator: amplified transform "
                  "does not decay (edge/peak %.3g) within the retained band",
                  phi_peak > 0.0 ? shell_peak / phi_peak : 1.0);
    throw Error(ErrorCode::kDistributional, buf);
  }
  for (int p = 0; p < side; ++p) {
    for (int q = 0; q < side; ++q) {
      data[static_cast<std::size_t>(p) * side + q] *=
          std::polar(1.0, -(freq[p] + freq[q]) * ext);
    }
  }
  fft2(data, side, true);
  // (dxi^2 / 2 pi) * side^2 undoes the 1/side^2 of the inverse transform.
  const double scale = dxi * dxi / (2.0 * std::numbers::pi) * side * side;
  for (Complex& v : data) v *= scale;
  return Tomogram{grid, std::move(data), SymbolKind::kP, 0.0, operator_hash(a)};
}

Complex convolve_with_gaussian(const Tomogram& p_function, ComplexPoint z_prime) {
  Complex sum = 0.0;
  const auto& nodes = p_function.grid.nodes();
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    sum += nodes[j].weight * p_function.values[j] * std::exp(-std::norm(nodes[j].z - z_prime));
  }
  return sum;
}

DualFrame dual_frame(const PhaseGrid& grid, int truncation, const DualFrameOptions& options) {
  require_truncation(truncation, "dual_frame");
  std::vector<Vector> states(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    states[j] = coherent_amplitudes(grid.nodes()[j].z, truncation);
  }
  return build_frame(grid, truncation + 1, states, options);
}

DualFrame dual_frame_from_states(const PhaseGrid& grid, std::span<const Vector> states,
                                 const DualFrameOptions& options) {
  if (states.size() != grid.size() || states.empty()) {
    throw Error(ErrorCode::kNodeMismatch, "dual frame: one state per grid node is required");
  }
  const int dim = static_cast<int>(states[0].size());
  for (const Vector& s : states) {
    if (s.size() != dim) {
      throw Error(ErrorCode::kInvalidArgument, "dual frame: states differ in dimension");
    }
  }
  return build_frame(grid, dim, std::vector<Vector>(states.begin(), states.end()), options);
}

FockOperator frame_reconstruct(const DualFrame& frame, std::span<const Complex> values) {
  if (values.size() != frame.gram_ops.size()) {
    throw Error(ErrorCode::kNodeMismatch,
                "frame reconstruction: " + std::to_string(values.size()) +
                    " samples for " + std::to_string(frame.gram_ops.size()) + " frame nodes");
  }
  const int dim = frame.truncation + 1;
  Matrix sum = Matrix::Zero(dim, dim);
  const auto& nodes = frame.grid.nodes();
  for (std::size_t j = 0; j < values.size(); ++j) {
    sum.noalias() += (nodes[j].weight * values[j]) * frame.gram_ops[j].matrix();
  }
  return FockOperator(std::move(sum));
}

FockOperator frame_reconstruct(const DualFrame& frame, const Tomogram& tomogram) {
  if (!frame.grid.same_nodes(tomogram.grid)) {
    throw Error(ErrorCode::kNodeMismatch,
                "tomogram was not sampled on the frame's nodes");
  }
  return frame_reconstruct(frame, std::span<const Complex>(tomogram.values));
}

}  // namespace phasetomo
