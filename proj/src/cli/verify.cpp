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

#include "phasetomo/cli/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "phasetomo/cs_tomo.hpp"
#include "phasetomo/deformed.hpp"
#include "phasetomo/pn_tomo.hpp"
#include "phasetomo/qubit.hpp"

namespace phasetomo::cli {

namespace {

using Rng = std::mt19937_64;

Matrix random_matrix(int dim, Rng& rng) {
  std::normal_distribution<double> normal;
  Matrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) m(r, c) = Complex(normal(rng), normal(rng));
  }
  return m;
}

Matrix random_hermitian(int dim, Rng& rng) {
  const Matrix m = random_matrix(dim, rng);
  return 0.5 * (m + m.adjoint());
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

std::vector<CheckResult> qubit_suite(Rng& rng) {
  double err_a1 = 0.0;
  double err_a2 = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const qubit::QubitOperator a = random_matrix(2, rng);
    err_a1 = std::max(err_a1, (qubit::qubit_reconstruct(a, qubit::ReconstructionForm::kGramTimesTomogram) - a).norm());
    err_a2 = std::max(err_a2, (qubit::qubit_reconstruct(a, qubit::ReconstructionForm::kProjectorTimesGram) - a).norm());
  }
  return {{"qubit: A = int G Tr(P A)", err_a1, 1e-10},
          {"qubit: A = int P Tr(G A)", err_a2, 1e-10}};
}

std::vector<CheckResult> cs_suite(Rng& rng) {
  std::vector<CheckResult> out;
  double closed = 0.0;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const ComplexPoint w(-2.0 + i, 1.5 - 0.75 * j);
      const FockOperator proj = coherent_state(w, 40).projector();
      const ComplexPoint z(1.0 - 0.5 * j, -1.0 + 0.5 * i);
      closed = std::max(closed, std::abs(husimi_K(proj, z) - std::exp(-std::norm(z - w))));
    }
  }
  out.push_back({"cs: K of |w><w| is exp(-|z-w|^2)", closed, 1e-10});

  double inversion = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const FockOperator a(random_hermitian(5, rng));
    const FockOperator back = reconstruct_from_K([&](ComplexPoint z) { return husimi_K(a, z); }, 4);
    inversion = std::max(inversion, max_abs(back.matrix() - a.matrix()));
  }
  out.push_back({"cs: K inversion round trip, N = 4", inversion, 1e-6});

  const DualFrame frame = dual_frame(PhaseGrid::polar(5.0, 24, 32), 4);
  out.push_back({"cs: dual frame basis residual, N = 4", frame.basis_residual, 1e-7});

  const FockOperator a(random_hermitian(6, rng));
  double husimi = 0.0;
  double projector = 0.0;
  for (const ComplexPoint z : {ComplexPoint(0.3, -0.2), ComplexPoint(-1.1, 0.7), ComplexPoint(0.0, 1.4)}) {
    husimi = std::max(husimi, std::abs(quasi_distribution(a, z, 1.0) - husimi_K(a, z)));
    const Matrix kernel = s_ordered_kernel(z, -1.0, 30).matrix();
    projector = std::max(projector, max_abs(kernel - coherent_amplitudes(z, 30) *
                                                         coherent_amplitudes(z, 30).adjoint()));
  }
  out.push_back({"cs: quasi-distribution at s = 1 equals K", husimi, 1e-12});
  out.push_back({"cs: s = -1 kernel is |z><z|", projector, 1e-12});
  return out;
}

std::vector<CheckResult> pn_suite(Rng& rng) {
  std::vector<CheckResult> out;
  const PNKernelParams params{0.5};
  const int truncation = 3;
  const PhaseGrid grid = pn_default_grid(truncation);
  const int n_max = pn_default_nmax(grid, params, truncation);
  out.push_back({"pn: |m><m'| from tomograms, N = 3, lambda = 0.5",
                 pn_basis_residuals(grid, n_max, params, truncation).maxCoeff(), 1e-5});

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double position = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const int n = static_cast<int>(unit(rng) * 3);
    const ComplexPoint z(unit(rng) - 0.5, unit(rng) - 0.5);
    const PNKernelParams p{0.2 + 0.6 * unit(rng)};
    const double x = 2.0 * unit(rng) - 1.0;
    const double y = 2.0 * unit(rng) - 1.0;
    position = std::max(position, std::abs(pn_gram_position_element(n, z, p, x, y) -
                                           pn_gram_position_fock_sum(n, z, p, x, y, 60)));
  }
  out.push_back({"pn: position-space kernel vs Fock sum, N = 60", position, 1e-6});

  const FockOperator rho(random_hermitian(4, rng));
  double sum_rule = 0.0;
  for (const ComplexPoint z : {ComplexPoint(0.2, 0.1), ComplexPoint(-0.6, 0.4)}) {
    Complex total = 0.0;
    for (int n = 0; n <= 60; ++n) total += pn_tomogram(rho, n, z);
    sum_rule = std::max(sum_rule, std::abs(total - rho.trace()));
  }
  out.push_back({"pn: sum over n of w(n, z) is Tr A", sum_rule, 1e-10});
  return out;
}

std::vector<CheckResult> deformed_suite(Rng& rng) {
  std::vector<CheckResult> out;
  const FockOperator b(random_hermitian(5, rng));
  const DeformationSpec identity = DeformationSpec::identity();
  double undeformed = 0.0;
  for (const ComplexPoint z : {ComplexPoint(0.4, -0.3), ComplexPoint(-1.0, 0.5)}) {
    undeformed = std::max(undeformed, std::abs(deformed_K(b, z, identity) - husimi_K(b, z)));
    undeformed = std::max(undeformed, (deformed_coherent_state(z, identity, 30).vector() -
                                       coherent_state(z, 30).amplitudes()).norm());
  }
  out.push_back({"deformed: identity preset reproduces K and |z>", undeformed, 1e-12});

  const DeformationSpec q = DeformationSpec::q(0.2);
  const DeformedLadder ladder = deformed_ladder(q, 10);
  const Matrix comm = ladder.a.matrix() * ladder.a_dag.matrix() - ladder.a_dag.matrix() * ladder.a.matrix();
  out.push_back({"deformed: [A, A_f^dagger] = 1 on interior block",
                 max_abs(comm.topLeftCorner(10, 10) - Matrix::Identity(10, 10)), 1e-12});

  // The truncated ladder misses only v_{N+1} in row N, and
  // |z v_N| = sqrt(N+1) f(N+1) |v_{N+1}|.
  const DeformationSpec q5 = DeformationSpec::q(0.5);
  const ComplexPoint z0(1.2, 0.7);
  const int big = 20;
  const DeformedState state = deformed_coherent_state(z0, q5, big);
  const Vector v = state.vector();
  const double eigen = (deformed_ladder(q5, big).a.matrix() * v - z0 * v).norm();
  const double bound = std::sqrt((big + 1) * state.base.tail_mass() * state.norm_squared()) *
                       q5.f(big + 1);
  out.push_back({"deformed: A|z; f> = z|z; f> beyond the tail bound",
                 std::max(0.0, eigen - bound), 1e-12});

  const DeformationSpec qs = DeformationSpec::q(0.2, 0.3);
  double factor = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const ComplexPoint z(unit(rng), unit(rng));
    const Complex direct = deformed_K(b, z, qs);
    const Complex factored = deformed_scalar(z, qs) * husimi_K(deformed_operator(b, qs), z);
    factor = std::max(factor, std::abs(direct - factored) / std::max(1.0, std::abs(direct)));
  }
  out.push_back({"deformed: K_f factorizes through B(f)", factor, 1e-10});

  const int truncation = 4;
  const DeformationSpec q1 = DeformationSpec::q(0.1);
  const FockOperator target(random_hermitian(truncation + 1, rng));
  const Tomogram samples = deformed_k_grid(target, PhaseGrid::default_polar(truncation), q1);
  const FockOperator conj = deformed_reconstruct(samples, q1, DeformedRoute::kConjugation, truncation);
  const FockOperator frame = deformed_reconstruct(samples, q1, DeformedRoute::kFrame, truncation);
  out.push_back({"deformed: conjugation round trip, N = 4", max_abs(conj.matrix() - target.matrix()), 1e-5});
  out.push_back({"deformed: conjugation and frame routes agree", max_abs(conj.matrix() - frame.matrix()), 1e-4});
  return out;
}

std::vector<CheckResult> mehler_suite() {
  double worst = 0.0;
  for (int i = 0; i < 9; ++i) {
    for (int j = 0; j < 9; ++j) {
      for (int k = 0; k < 9; ++k) {
        const double x = -3.0 + 0.75 * i;
        const double y = -3.0 + 0.75 * j;
        const Complex zeta = -0.9 + 0.225 * k;
        const Complex closed = mehler(x, y, zeta);
        const Complex series = mehler(x, y, zeta, MehlerSeries{200});
        worst = std::max(worst, std::abs(closed - series) / std::abs(closed));
      }
    }
  }
  return {{"mehler: closed form vs 200-term series, |x|, |y| <= 3, |zeta| <= 0.9", worst, 1e-10}};
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"qubit", "cs-identity", "pn-identity",
                                                 "deformed", "mehler", "all"};
  return names;
}

std::vector<CheckResult> run_suite(std::string_view suite, std::uint64_t seed) {
  Rng rng(seed);
  if (suite == "qubit") return qubit_suite(rng);
  if (suite == "cs-identity") return cs_suite(rng);
  if (suite == "pn-identity") return pn_suite(rng);
  if (suite == "deformed") return deformed_suite(rng);
  if (suite == "mehler") return mehler_suite();
  if (suite == "all") {
    std::vector<CheckResult> out;
    for (const auto& name : suite_names()) {
      if (name == "all") continue;
      auto part = run_suite(name, seed);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown verify suite \"" + std::string(suite) + "\"");
}

}  // namespace phasetomo::cli
