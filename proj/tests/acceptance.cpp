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

// Acceptance run: one PASS/FAIL line per criterion.  Exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "phasetomo/cs_tomo.hpp"
#include "phasetomo/deformed.hpp"
#include "phasetomo/pn_tomo.hpp"
#include "phasetomo/quadrature.hpp"
#include "phasetomo/qubit.hpp"

using namespace phasetomo;

namespace {

using Clock = std::chrono::steady_clock;

struct Part {
  std::string label;
  double value;
  double limit;
  bool ok() const { return value < limit; }
};

struct Outcome {
  std::vector<Part> parts;
  std::string note;
};

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

Matrix random_matrix(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) m(r, c) = Complex(normal(rng), normal(rng));
  }
  return m;
}

Matrix random_hermitian(int dim, std::mt19937_64& rng) {
  const Matrix m = random_matrix(dim, rng);
  return 0.5 * (m + m.adjoint());
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Outcome qubit_identity() {
  std::mt19937_64 rng(1);
  const auto start = Clock::now();
  double a1 = 0.0;
  double a2 = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const qubit::QubitOperator a = random_matrix(2, rng);
    a1 = std::max(a1, (qubit::qubit_reconstruct(a, qubit::ReconstructionForm::kGramTimesTomogram) - a).norm());
    a2 = std::max(a2, (qubit::qubit_reconstruct(a, qubit::ReconstructionForm::kProjectorTimesGram) - a).norm());
  }
  return {{{"int G Tr(P A)", a1, 1e-12}, {"int P Tr(G A)", a2, 1e-12}, {"seconds", seconds_since(start), 1.0}}, ""};
}

Outcome coherent_closed_form() {
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const ComplexPoint w = std::polar(2.0 * i / 9.0, 0.7 * i);
    const FockOperator proj = coherent_state(w, 40).projector();
    for (int j = 0; j < 10; ++j) {
      const ComplexPoint z = std::polar(2.0 * j / 9.0, 2.0 + 1.3 * j);
      worst = std::max(worst, std::abs(husimi_K(proj, z) - std::exp(-std::norm(z - w))));
    }
  }
  return {{{"max |K - exp(-|z-w|^2)|", worst, 1e-10}}, ""};
}

Outcome k_inversion() {
  std::mt19937_64 rng(3);
  const auto start = Clock::now();
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const FockOperator a(random_hermitian(7, rng));
    const FockOperator back = reconstruct_from_K([&](ComplexPoint z) { return husimi_K(a, z); }, 6);
    worst = std::max(worst, max_abs(back.matrix() - a.matrix()));
  }
  return {{{"max entry error", worst, 1e-6}, {"seconds", seconds_since(start), 10.0}}, ""};
}

Outcome p_function() {
  const PhaseGrid cart = PhaseGrid::cartesian(12.0, 0.2);
  double phi = 0.0;
  double reconv = 0.0;
  for (double nbar : {0.5, 1.0, 2.0}) {
    const FockOperator rho = build_state(ThermalSpec{nbar}, 80);
    const Tomogram p = p_function_grid(rho, cart);
    for (std::size_t j = 0; j < cart.size(); ++j) {
      const ComplexPoint z = cart.nodes()[j].z;
      if (std::abs(z) > 3.0) continue;
      phi = std::max(phi, std::abs(p.values[j] - std::exp(-std::norm(z) / nbar) / nbar));
    }
    for (int k = 0; k < 12; ++k) {
      const ComplexPoint z = std::polar(0.25 * k, 0.9 * k);
      reconv = std::max(reconv, std::abs(convolve_with_gaussian(p, z) - husimi_K(rho, z)));
    }
  }
  return {{{"max |phi - exp(-|z|^2/nbar)/nbar|", phi, 1e-4}, {"re-convolution vs K", reconv, 1e-5}}, ""};
}

Outcome photon_number_duality() {
  const auto start = Clock::now();
  const PhaseGrid grid = PhaseGrid::polar(5.0, 48, 64);
  const int truncation = 4;
  const int n_max = 12;
  const double at_half = pn_basis_residuals(grid, n_max, PNKernelParams{0.5}, truncation).maxCoeff();

  // lambda = 0.3 against lambda = 0.6 on every basis operator.
  double spread = 0.0;
  for (int m = 0; m <= truncation; ++m) {
    for (int mp = 0; mp <= truncation; ++mp) {
      const PNTomogram t = pn_tomogram_grid(FockOperator::basis(truncation + 1, m, mp), grid, n_max);
      PNReconstructOptions loose;
      loose.self_check_tol = INFINITY;
      const FockOperator low = pn_reconstruct(t, PNKernelParams{0.3}, truncation, loose);
      const FockOperator high = pn_reconstruct(t, PNKernelParams{0.6}, truncation, loose);
      spread = std::max(spread, max_abs(low.matrix() - high.matrix()));
    }
  }
  const double elapsed = seconds_since(start);

  // Same questions with the self-sized cutoff and grid.
  const PhaseGrid def = pn_default_grid(truncation);
  const int auto_nmax = pn_default_nmax(def, PNKernelParams{0.5}, truncation);
  const double converged = pn_basis_residuals(def, auto_nmax, PNKernelParams{0.5}, truncation).maxCoeff();
  char note[200];
  std::snprintf(note, sizeof note, "with R = %.2f, 48x64 nodes and n_max = %d: basis residual %.2e",
                def.radius(), auto_nmax, converged);
  return {{{"basis residual (0.5, 12, R=5)", at_half, 1e-5},
           {"|G_0.3 - G_0.6| reconstruction", spread, 1e-5},
           {"seconds", elapsed, 60.0}},
          note};
}

Outcome position_kernel() {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = static_cast<int>(unit(rng) * 4.0);
    const ComplexPoint z = std::polar(unit(rng), 2.0 * M_PI * unit(rng));
    const double x = -1.5 + 3.0 * unit(rng);
    const double y = -1.5 + 3.0 * unit(rng);
    const PNKernelParams p{0.2 + 0.6 * unit(rng)};
    const Complex closed = pn_gram_position_element(n, z, p, x, y);
    const Complex sum = pn_gram_position_fock_sum(n, z, p, x, y, 60);
    worst = std::max(worst, std::abs(closed - sum));
  }
  return {{{"max |closed - Fock sum|", worst, 1e-6}}, ""};
}

Outcome mehler_formula() {
  double lattice = 0.0;
  for (int i = 0; i < 9; ++i) {
    for (int j = 0; j < 9; ++j) {
      for (int k = 0; k < 9; ++k) {
        const double x = -3.0 + 0.75 * i;
        const double y = -3.0 + 0.75 * j;
        const Complex zeta = -0.9 + 0.225 * k;
        const Complex closed = mehler(x, y, zeta);
        lattice = std::max(lattice, std::abs(mehler(x, y, zeta, MehlerSeries{200}) - closed) / std::abs(closed));
      }
    }
  }
  double inner = 0.0;
  for (int i = 0; i < 9; ++i) {
    for (int j = 0; j < 9; ++j) {
      for (int k = 0; k < 9; ++k) {
        const double x = -1.0 + 0.25 * i;
        const double y = -1.0 + 0.25 * j;
        const Complex zeta = -0.5 + 0.125 * k;
        const Complex closed = mehler(x, y, zeta);
        inner = std::max(inner, std::abs(mehler(x, y, zeta, MehlerSeries{200}) - closed) / std::abs(closed));
      }
    }
  }
  const Complex i_unit(0.0, 1.0);
  const double unit = std::abs(mehler(0.7, 0.7, i_unit, MehlerSeries{200}) - mehler(0.7, 0.7, i_unit)) /
                      std::abs(mehler(0.7, 0.7, i_unit));
  char note[160];
  std::snprintf(note, sizeof note, "|x|,|y| <= 1 and |zeta| <= 0.5: %.2e", inner);
  return {{{"lattice |x|,|y| <= 3, |zeta| <= 0.9", lattice, 1e-10}, {"zeta = i, x = y = 0.7", unit, 1e-8}}, note};
}

Outcome deformation() {
  std::mt19937_64 rng(8);
  const FockOperator b(random_hermitian(5, rng));
  const DeformationSpec identity = DeformationSpec::identity();
  double undeformed = 0.0;
  for (const ComplexPoint z : {ComplexPoint(0.4, -0.3), ComplexPoint(-1.0, 0.5), ComplexPoint(1.5, 1.0)}) {
    undeformed = std::max(undeformed, std::abs(deformed_K(b, z, identity) - husimi_K(b, z)));
    undeformed = std::max(undeformed, std::abs(deformed_pn_K(b, 2, z, identity) - pn_tomogram(b, 2, z)));
    undeformed = std::max(undeformed, (deformed_coherent_state(z, identity, 40).vector() -
                                       coherent_state(z, 40).amplitudes()).norm());
  }

  const double lambda = 0.2;
  const double q = std::exp(lambda);
  const int inner = 12;
  const Matrix a = deformed_ladder(DeformationSpec::q(lambda), inner).a.matrix();
  const Matrix rel = a * a.adjoint() - q * a.adjoint() * a;
  double q1 = 0.0;
  for (int r = 0; r < inner; ++r) {
    for (int c = 0; c < inner; ++c) {
      q1 = std::max(q1, std::abs(rel(r, c) - (r == c ? std::pow(q, r) : 0.0)));
    }
  }

  double excess = 0.0;
  for (double lq : {0.1, 0.3, 0.5}) {
    for (const ComplexPoint z : {ComplexPoint(1.2, 0.7), ComplexPoint(-2.0, 0.0), ComplexPoint(0.3, -1.1)}) {
      const DeformationSpec spec = DeformationSpec::q(lq);
      const int truncation = 25;
      const DeformedState st = deformed_coherent_state(z, spec, truncation);
      const Vector v = st.vector();
      const double residual = (deformed_ladder(spec, truncation).a.matrix() * v - z * v).norm();
      const double bound = std::sqrt((truncation + 1) * st.base.tail_mass() * st.norm_squared()) *
                           spec.f(truncation + 1);
      excess = std::max(excess, residual - bound);
    }
  }

  const DeformationSpec q01 = DeformationSpec::q(0.1);
  const FockOperator target(random_hermitian(7, rng));
  const Tomogram t = deformed_k_grid(target, PhaseGrid::default_polar(6), q01);
  const double round_trip =
      max_abs(deformed_reconstruct(t, q01, DeformedRoute::kConjugation, 6).matrix() - target.matrix());

  return {{{"identity preset", undeformed, 1e-12},
           {"q1 residual", q1, 1e-10},
           {"q2 residual - tail bound", excess, 1e-12},
           {"round trip N=6", round_trip, 1e-5}},
          ""};
}

Outcome s_ordered() {
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
  const double aw = max_abs(sum - s_ordered_kernel(0.0, s, truncation).matrix());

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unit(-2.0, 2.0);
  double wick = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const FockOperator a(random_matrix(7, rng));
    const ComplexPoint z(unit(rng), unit(rng));
    wick = std::max(wick, std::abs(quasi_distribution(a, z, 1.0) - husimi_K(a, z)));
  }
  return {{{"s=-0.5 kernel vs quadrature", aw, 1e-6}, {"s=1 vs K", wick, 1e-12}}, ""};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"qubit resolution of identity", qubit_identity},
      {"coherent-state tomogram closed form", coherent_closed_form},
      {"K inversion round trip", k_inversion},
      {"P-function Fourier relation", p_function},
      {"photon-number duality", photon_number_duality},
      {"position-kernel cross-check", position_kernel},
      {"Mehler formula", mehler_formula},
      {"deformation consistency", deformation},
      {"s-ordered kernel family", s_ordered},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = Clock::now();
    std::string detail;
    bool ok = true;
    try {
      const Outcome out = criteria[k].second();
      for (const Part& p : out.parts) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s%s %.2e (< %.0e)", detail.empty() ? "" : "; ", p.label.c_str(),
                      p.value, p.limit);
        detail += buf;
        ok = ok && p.ok();
      }
      if (!out.note.empty()) detail += " [" + out.note + "]";
    } catch (const Error& e) {
      ok = false;
      detail = std::string("error: ") + e.what();
    }
    if (!ok) ++failures;
    std::printf("%s  %zu  %s: %s  (%.2fs)\n", ok ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                detail.c_str(), seconds_since(start));
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
