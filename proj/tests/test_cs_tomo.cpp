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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "phasetomo/cs_tomo.hpp"
#include "phasetomo/quadrature.hpp"
#include "support.hpp"

using namespace phasetomo;
using phasetomo::testing::error_code_of;
using phasetomo::testing::Gen;
using phasetomo::testing::max_abs;

namespace {

FockOperator coherent_projector(ComplexPoint w, int truncation) {
  const Vector c = coherent_amplitudes(w, truncation);
  return FockOperator(c * c.adjoint());
}

}  // namespace

TEST_CASE("K of a coherent projector is a Gaussian [PAPER]") {
  const ComplexPoint w(0.6, -0.9);
  const FockOperator proj = coherent_projector(w, 40);
  for (const ComplexPoint z : {ComplexPoint(0.0, 0.0), ComplexPoint(1.2, 0.3), ComplexPoint(-0.5, -1.5)}) {
    CHECK(std::abs(husimi_K(proj, z) - std::exp(-std::norm(z - w))) < 1e-12);
  }
}

TEST_CASE("K of the vacuum at the origin [TRIVIAL]") {
  CHECK(std::abs(husimi_K(build_state(FockSpec{0}, 5), 0.0) - 1.0) < 1e-15);
}

TEST_CASE("K of the nbar = 1 thermal state at z = 1 [DERIVED]") {
  const Complex k = husimi_K(build_state(ThermalSpec{1.0}, 60), 1.0);
  CHECK(k.real() == doctest::Approx(std::exp(-0.5) / 2.0).epsilon(1e-12));
  CHECK(k.real() == doctest::Approx(0.303265).epsilon(1e-6));
}

TEST_CASE("K rejects operators carrying tail mass [TRIVIAL]") {
  const FockOperator leaky(Matrix::Identity(3, 3) / 3.0, 1e-3);
  CHECK(error_code_of([&] { husimi_K(leaky, 0.5); }) == ErrorCode::kTruncation);
}

TEST_CASE("K grid of the vacuum integrates to one [PAPER]") {
  const Tomogram t = k_grid(build_state(FockSpec{0}, 6), PhaseGrid::polar(6.0, 24, 32));
  CHECK(std::abs(t.integral() - 1.0) < 1e-10);
  CHECK(t.kind == SymbolKind::kK);
  CHECK(t.source_hash.size() == 16);
}

TEST_CASE("K of fock(3) is real and peaks on the |z|^2 = 3 ring [DERIVED]") {
  const PhaseGrid grid = PhaseGrid::polar(6.0, 48, 16);
  const Tomogram t = k_grid(build_state(FockSpec{3}, 6), grid);
  std::size_t best = 0;
  for (std::size_t j = 0; j < t.values.size(); ++j) {
    CHECK(std::abs(t.values[j].imag()) < 1e-15);
    if (t.values[j].real() > t.values[best].real()) best = j;
  }
  // Nearest Gauss node to r = sqrt(3).
  double nearest = 1e9;
  for (double r : grid.radial_nodes()) {
    if (std::abs(r - std::sqrt(3.0)) < std::abs(nearest - std::sqrt(3.0))) nearest = r;
  }
  CHECK(std::abs(grid.nodes()[best].z) == doctest::Approx(nearest).epsilon(1e-12));
}

TEST_CASE("K of the annihilation operator is z [DERIVED]") {
  const FockOperator a = ladder_operators(40).a;
  for (const ComplexPoint z : {ComplexPoint(0.3, 0.4), ComplexPoint(-1.0, 0.2)}) {
    CHECK(std::abs(husimi_K(a, z) - z) < 1e-10);
  }
}

TEST_CASE("K grid reports a grid that does not cover the operator [TRIVIAL]") {
  CHECK(error_code_of([] { k_grid(build_state(FockSpec{30}, 30), PhaseGrid::polar(5.0, 24, 32)); }) ==
        ErrorCode::kCoverage);
}

TEST_CASE("s = -1 kernel at the origin is the vacuum projector [PAPER]") {
  CHECK(max_abs(s_ordered_kernel(0.0, -1.0, 6).matrix() - build_state(FockSpec{0}, 6).matrix()) == 0.0);
}

TEST_CASE("s-ordered kernels for s < 0 have unit trace [DERIVED]") {
  for (double s : {-0.9, -0.5, -0.2}) {
    CHECK(std::abs(s_ordered_kernel(ComplexPoint(0.3, 0.1), s, 60).trace() - 1.0) < 1e-10);
  }
}

TEST_CASE("s = -0.5 kernel matches the Gaussian-weighted displacement integral [DERIVED]") {
  // int d^2w/pi exp(s|w|^2/2) D(-w) at z = 0 on a |w| <= 8 polar rule.
  const double s = -0.5;
  const int truncation = 8;
  const QuadratureRule radial = gauss_legendre(80, 0.0, 8.0);
  const int angles = 64;
  Matrix sum = Matrix::Zero(truncation + 1, truncation + 1);
  for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
    const double r = radial.nodes[i];
    const double weight = radial.weights[i] * 2.0 * r / angles * std::exp(0.5 * s * r * r);
    for (int j = 0; j < angles; ++j) {
      sum += weight * displacement_block(-std::polar(r, 2.0 * M_PI * j / angles), truncation + 1, truncation + 1);
    }
  }
  CHECK(max_abs(sum - s_ordered_kernel(0.0, s, truncation).matrix()) < 1e-6);
}

TEST_CASE("s = 1 kernel is refused as distributional [TRIVIAL]") {
  try {
    s_ordered_kernel(0.0, 1.0, 4);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDistributional);
    CHECK(std::string(e.what()).find("frame reconstruction") != std::string::npos);
  }
}

TEST_CASE("quasi-distribution at s = 1 is the K symbol [PAPER]") {
  Gen gen(41);
  for (int trial = 0; trial < 10; ++trial) {
    const FockOperator a(gen.matrix(7));
    const ComplexPoint z = gen.point(2.0);
    CHECK(std::abs(quasi_distribution(a, z, 1.0) - husimi_K(a, z)) < 1e-12);
  }
}

TEST_CASE("Wigner-type symbol at the origin is twice the parity [DERIVED]") {
  CHECK(std::abs(quasi_distribution(build_state(FockSpec{0}, 6), 0.0, 0.0) - 2.0) < 1e-12);
  CHECK(std::abs(quasi_distribution(build_state(FockSpec{1}, 6), 0.0, 0.0) + 2.0) < 1e-12);
}

TEST_CASE("quasi-distribution at s = -1 points to the P-function [TRIVIAL]") {
  CHECK(error_code_of([] { quasi_distribution(build_state(FockSpec{0}, 4), 0.0, -1.0); }) ==
        ErrorCode::kDistributional);
}

TEST_CASE("K inversion recovers the vacuum [TRIVIAL]") {
  const FockOperator vac = build_state(FockSpec{0}, 6);
  const FockOperator back = reconstruct_from_K([&](ComplexPoint z) { return husimi_K(vac, z); }, 6);
  CHECK(max_abs(back.matrix() - vac.matrix()) < 1e-8);
}

TEST_CASE("K inversion recovers a random Hermitian operator at N = 6 [DERIVED]") {
  Gen gen(42);
  const FockOperator a(gen.hermitian(7));
  const FockOperator back = reconstruct_from_K([&](ComplexPoint z) { return husimi_K(a, z); }, 6);
  CHECK(max_abs(back.matrix() - a.matrix()) < 1e-6);
}

TEST_CASE("K inversion of exp(-|z - w|^2) gives the coherent projector [PAPER]") {
  const ComplexPoint w(0.5, 0.0);
  const FockOperator back = reconstruct_from_K([&](ComplexPoint z) { return Complex(std::exp(-std::norm(z - w))); }, 12);
  CHECK(max_abs(back.matrix() - coherent_projector(w, 12).matrix()) < 1e-6);
}

TEST_CASE("K inversion names the ill-conditioned sector [TRIVIAL]") {
  const FockOperator vac = build_state(FockSpec{0}, 6);
  KInversionOptions options;
  options.max_condition = 10.0;
  try {
    reconstruct_from_K([&](ComplexPoint z) { return husimi_K(vac, z); }, 6, options);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIllConditioned);
    CHECK(std::string(e.what()).find("sector k=") != std::string::npos);
  }
}

TEST_CASE("K inversion from a sampled polar tomogram [DERIVED]") {
  Gen gen(43);
  const FockOperator a(gen.hermitian(5));
  const Tomogram t = k_grid(a, PhaseGrid::default_polar(4));
  CHECK(max_abs(reconstruct_from_K(t, 4).matrix() - a.matrix()) < 1e-8);
  CHECK(error_code_of([&] { reconstruct_from_K(k_grid(a, PhaseGrid::polar(6.0, 24, 8)), 4); }) ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("P-function of the nbar = 1 thermal state [DERIVED]") {
  const PhaseGrid cart = PhaseGrid::cartesian(12.0, 0.2);
  const Tomogram p = p_function_grid(build_state(ThermalSpec{1.0}, 80), cart);
  double worst = 0.0;
  for (std::size_t j = 0; j < cart.size(); ++j) {
    const ComplexPoint z = cart.nodes()[j].z;
    if (std::abs(z) <= 3.0) worst = std::max(worst, std::abs(p.values[j] - std::exp(-std::norm(z))));
  }
  CHECK(worst < 1e-4);
  CHECK(std::abs(p.integral() - 1.0) < 1e-6);
  CHECK(p.kind == SymbolKind::kP);
}

TEST_CASE("re-convolving the nbar = 2 P-function reproduces K [PAPER]") {
  const PhaseGrid cart = PhaseGrid::cartesian(12.0, 0.2);
  const FockOperator rho = build_state(ThermalSpec{2.0}, 80);
  const Tomogram p = p_function_grid(rho, cart);
  for (const ComplexPoint z : {ComplexPoint(0.0, 0.0), ComplexPoint(0.7, -1.1), ComplexPoint(2.0, 0.5)}) {
    CHECK(std::abs(convolve_with_gaussian(p, z) - husimi_K(rho, z)) < 1e-5);
  }
}

TEST_CASE("P-function of the vacuum is distributional [TRIVIAL]") {
  CHECK(error_code_of([] { p_function_grid(build_state(FockSpec{0}, 6), PhaseGrid::cartesian(12.0, 0.2)); }) ==
        ErrorCode::kDistributional);
}

TEST_CASE("dual frame reconstructs every basis operator at N = 4 [DERIVED]") {
  const DualFrame frame = dual_frame(PhaseGrid::polar(5.0, 24, 32), 4);
  CHECK(frame.basis_residual < 1e-7);
  CHECK(frame.rank == 25);
  for (int m = 0; m <= 4; ++m) {
    for (int mp = 0; mp <= 4; ++mp) {
      const FockOperator x = FockOperator::basis(5, m, mp);
      std::vector<Complex> k(frame.grid.size());
      for (std::size_t j = 0; j < k.size(); ++j) k[j] = husimi_K(x, frame.grid.nodes()[j].z);
      CHECK(max_abs(frame_reconstruct(frame, k).matrix() - x.matrix()) < 1e-7);
    }
  }
}

TEST_CASE("dual frame weak reproducing property [PAPER]") {
  // sum_j w_j Tr(P_i G_j) f(z_j) = f(z_i) for f in the span of K symbols.
  const DualFrame frame = dual_frame(PhaseGrid::polar(5.0, 24, 32), 4);
  const auto& nodes = frame.grid.nodes();
  const std::vector<FockOperator> tests = {FockOperator::basis(5, 0, 0), ladder_operators(4).n_op,
                                           FockOperator::basis(5, 0, 1)};
  for (const FockOperator& x : tests) {
    for (std::size_t i : {std::size_t{5}, std::size_t{300}, std::size_t{700}}) {
      Complex sum = 0.0;
      for (std::size_t j = 0; j < nodes.size(); ++j) {
        sum += nodes[j].weight * husimi_K(frame.gram_ops[j], nodes[i].z) * husimi_K(x, nodes[j].z);
      }
      CHECK(std::abs(sum - husimi_K(x, nodes[i].z)) < 1e-7);
    }
  }
}

TEST_CASE("dual frame keeps the trace of a random density matrix [DERIVED]") {
  Gen gen(44);
  const FockOperator rho(gen.density(5));
  const DualFrame frame = dual_frame(PhaseGrid::polar(6.0, 24, 32), 4);
  const FockOperator back = frame_reconstruct(frame, k_grid(rho, frame.grid));
  CHECK(std::abs(back.trace() - 1.0) < 1e-8);
}

TEST_CASE("dual frame refuses a grid that is too coarse [TRIVIAL]") {
  // 64 nodes for 81 unknowns, then enough nodes but too few angles.
  CHECK(error_code_of([] { dual_frame(PhaseGrid::polar(5.0, 16, 4), 8); }) == ErrorCode::kIllConditioned);
  CHECK(error_code_of([] { dual_frame(PhaseGrid::polar(5.0, 16, 4), 4); }) == ErrorCode::kIllConditioned);
}

TEST_CASE("frame reconstruction of the vacuum and of the number operator [DERIVED]") {
  const DualFrame frame = dual_frame(PhaseGrid::polar(5.0, 24, 32), 4);
  const FockOperator vac = build_state(FockSpec{0}, 4);
  CHECK(max_abs(frame_reconstruct(frame, k_grid(vac, frame.grid)).matrix() - vac.matrix()) < 1e-7);
  const FockOperator n = ladder_operators(4).n_op;
  CHECK(max_abs(frame_reconstruct(frame, k_grid(n, frame.grid, {1.0})).matrix() - n.matrix()) < 1e-6);
}

TEST_CASE("frame and moment reconstructions agree [DERIVED]") {
  Gen gen(45);
  const FockOperator a(gen.hermitian(5));
  const PhaseGrid grid = PhaseGrid::polar(6.0, 24, 32);
  const Tomogram t = k_grid(a, grid, {1.0});
  const FockOperator via_frame = frame_reconstruct(dual_frame(grid, 4), t);
  const FockOperator via_moments = reconstruct_from_K(t, 4);
  CHECK(max_abs(via_frame.matrix() - via_moments.matrix()) < 1e-5);
}

TEST_CASE("frame reconstruction refuses foreign nodes [TRIVIAL]") {
  const DualFrame frame = dual_frame(PhaseGrid::polar(5.0, 24, 32), 4);
  const Tomogram t = k_grid(build_state(FockSpec{0}, 4), PhaseGrid::polar(5.0, 24, 36));
  CHECK(error_code_of([&] { frame_reconstruct(frame, t); }) == ErrorCode::kNodeMismatch);
}

TEST_CASE("property: K of a density matrix lies in [0, 1]") {
  Gen gen(46);
  for (int trial = 0; trial < 50; ++trial) {
    const FockOperator rho(gen.density(gen.integer(1, 10)));
    const Complex k = husimi_K(rho, gen.point(3.0));
    CHECK(std::abs(k.imag()) < 1e-12);
    CHECK(k.real() >= -1e-12);
    CHECK(k.real() <= 1.0 + 1e-12);
  }
}

TEST_CASE("property: built-in states integrate to one") {
  Gen gen(47);
  const PhaseGrid grid = PhaseGrid::polar(9.0, 48, 64);
  for (int trial = 0; trial < 8; ++trial) {
    StateSpec spec;
    switch (trial % 4) {
      case 0: spec = FockSpec{gen.integer(0, 6)}; break;
      case 1: spec = CoherentSpec{gen.point(2.0)}; break;
      case 2: spec = ThermalSpec{gen.uniform(0.0, 1.0)}; break;
      default: spec = CatSpec{gen.point(2.0)}; break;
    }
    const Tomogram t = k_grid(build_state(spec, 50), grid);
    CHECK(std::abs(t.integral() - 1.0) < 1e-8);
  }
}

TEST_CASE("property: K is covariant under displacement") {
  Gen gen(48);
  for (int trial = 0; trial < 10; ++trial) {
    const int truncation = 60;
    const Matrix rho = Matrix(gen.density(4)).eval();
    Matrix big = Matrix::Zero(truncation + 1, truncation + 1);
    big.topLeftCorner(4, 4) = rho;
    const ComplexPoint w = gen.point(1.0);
    const Matrix d = displacement(w, truncation).matrix();
    const FockOperator shifted(d * big * d.adjoint());
    const ComplexPoint z = gen.point(2.0);
    CHECK(std::abs(husimi_K(shifted, z) - husimi_K(FockOperator(big), z - w)) < 1e-9);
  }
}

TEST_CASE("property: K -> inversion -> K is a fixed point") {
  Gen gen(49);
  for (int trial = 0; trial < 6; ++trial) {
    const int truncation = gen.integer(1, 6);
    const FockOperator a(gen.hermitian(truncation + 1));
    const FockOperator back = reconstruct_from_K([&](ComplexPoint z) { return husimi_K(a, z); }, truncation);
    const ComplexPoint z = gen.point(2.0);
    CHECK(std::abs(husimi_K(back, z) - husimi_K(a, z)) < 1e-6);
  }
}

TEST_CASE("quasi grid of the vacuum at s = 0 integrates to one [DERIVED]") {
  const Tomogram t = quasi_grid(build_state(FockSpec{0}, 10), PhaseGrid::polar(5.0, 24, 8), 0.0);
  CHECK(t.kind == SymbolKind::kOrdered);
  CHECK(t.s == 0.0);
  CHECK(std::abs(t.integral() - 1.0) < 1e-10);
  // 2 exp(-2|z|^2)
  const ComplexPoint z = t.grid.nodes()[17].z;
  CHECK(std::abs(t.values[17] - 2.0 * std::exp(-2.0 * std::norm(z))) < 1e-12);
}

TEST_CASE("operator hash is stable and content-sensitive [TRIVIAL]") {
  const FockOperator a = build_state(FockSpec{1}, 4);
  CHECK(operator_hash(a) == operator_hash(build_state(FockSpec{1}, 4)));
  CHECK(operator_hash(a) != operator_hash(build_state(FockSpec{2}, 4)));
}
