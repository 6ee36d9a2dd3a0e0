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

// Hand-rolled generators and small helpers shared by the test binaries.

#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <stdexcept>
#include <string>

#include "phasetomo/error.hpp"
#include "phasetomo/fock.hpp"

namespace phasetomo::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double normal() { return normal_(rng_); }
  Complex complex_normal() { return {normal(), normal()}; }

  // Uniform in the disk |z| <= radius.
  ComplexPoint point(double radius) {
    const double r = radius * std::sqrt(uniform(0.0, 1.0));
    return std::polar(r, uniform(0.0, 2.0 * M_PI));
  }

  Matrix matrix(int dim) {
    Matrix m(dim, dim);
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c < dim; ++c) m(r, c) = complex_normal();
    }
    return m;
  }

  Matrix hermitian(int dim) {
    const Matrix m = matrix(dim);
    return 0.5 * (m + m.adjoint());
  }

  Matrix density(int dim) {
    const Matrix g = matrix(dim);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return 0.5 * (rho + rho.adjoint());
  }

  Vector vector(int dim) {
    Vector v(dim);
    for (int k = 0; k < dim; ++k) v(k) = complex_normal();
    return v;
  }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
};

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// Runs fn and returns the error code it throws; fails the calling test if
// nothing is thrown.
template <typename Fn>
ErrorCode error_code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  throw std::logic_error("expected a phasetomo::Error");
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("phasetomo-test-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace phasetomo::testing
