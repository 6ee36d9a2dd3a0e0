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

#include "phasetomo/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "phasetomo/error.hpp"

namespace phasetomo {

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "gauss_legendre: n < 1");
  if (!(b > a)) throw Error(ErrorCode::kInvalidArgument, "gauss_legendre: empty interval");
  QuadratureRule rule{std::vector<double>(n), std::vector<double>(n)};
  const double mid = 0.5 * (b + a);
  const double half = 0.5 * (b - a);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton on P_n from the Tricomi initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double deriv = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p0 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p0;
        p0 = p1;
        p1 = ((2.0 * j - 1.0) * x * p0 - (j - 1.0) * p2) / j;
      }
      deriv = n * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / deriv;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const double w = 2.0 * half / ((1.0 - x * x) * deriv * deriv);
    rule.nodes[i] = mid - half * x;
    rule.nodes[n - 1 - i] = mid + half * x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace phasetomo
