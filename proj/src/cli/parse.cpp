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

#include <charconv>
#include <cmath>
#include <random>
#include <string>

#include "phasetomo/cli/app.hpp"

namespace phasetomo::cli {

namespace {

class Cursor {
 public:
  Cursor(std::string_view text, std::string_view what) : text_(text), what_(what) {}

  [[noreturn]] void fail(const std::string& expected) const {
    throw Error(ErrorCode::kInvalidArgument, std::string(what_) + " \"" + std::string(text_) +
                                                 "\": expected " + expected + " at column " +
                                                 std::to_string(pos_ + 1));
  }

  bool done() const { return pos_ == text_.size(); }
  char peek() const { return done() ? '\0' : text_[pos_]; }

  bool accept(std::string_view token) {
    if (text_.substr(pos_, token.size()) != token) return false;
    pos_ += token.size();
    return true;
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("'") + c + "'");
    ++pos_;
  }

  double real(bool allow_sign = true) {
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    if (!allow_sign && (*first == '-' || *first == '+')) fail("an unsigned number");
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || !std::isfinite(value)) fail("a number");
    pos_ += static_cast<std::size_t>(ptr - first);
    return value;
  }

  int integer() {
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    int value = 0;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc()) fail("an integer");
    pos_ += static_cast<std::size_t>(ptr - first);
    return value;
  }

  Complex complex() {
    const double re = real();
    double sign = 1.0;
    if (peek() == '-') {
      sign = -1.0;
    } else if (peek() != '+') {
      fail("'+' or '-'");
    }
    ++pos_;
    const double im = real(false);
    expect('i');
    return {re, sign * im};
  }

  void end() {
    if (!done()) fail("end of input");
  }

 private:
  std::string_view text_;
  std::string_view what_;
  std::size_t pos_ = 0;
};

}  // namespace

StateSpec parse_state_spec(std::string_view text) {
  Cursor cur(text, "state spec");
  StateSpec spec;
  if (cur.accept("fock:")) {
    const int n = cur.integer();
    if (n < 0) cur.fail("a non-negative integer");
    spec = FockSpec{n};
  } else if (cur.accept("coherent:")) {
    spec = CoherentSpec{cur.complex()};
  } else if (cur.accept("thermal:")) {
    const double nbar = cur.real(false);
    spec = ThermalSpec{nbar};
  } else if (cur.accept("cat:")) {
    spec = CatSpec{cur.complex()};
  } else {
    cur.fail("one of fock:, coherent:, thermal:, cat:");
  }
  cur.end();
  return spec;
}

PhaseGrid parse_grid(std::string_view text) {
  Cursor cur(text, "grid");
  if (cur.accept("cart:")) {
    const double half = cur.real(false);
    cur.expect(':');
    const double h = cur.real(false);
    cur.end();
    return PhaseGrid::cartesian(half, h);
  }
  const double radius = cur.real(false);
  cur.expect(':');
  const int radial = cur.integer();
  cur.expect(':');
  const int angular = cur.integer();
  cur.end();
  return PhaseGrid::polar(radius, radial, angular);
}

FockOperator random_density(int truncation, std::uint64_t seed) {
  if (truncation < 0) throw Error(ErrorCode::kInvalidArgument, "random_density: truncation < 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const int dim = truncation + 1;
  Matrix g(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) g(r, c) = Complex(normal(rng), normal(rng));
  }
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return FockOperator(0.5 * (rho + rho.adjoint()));
}

}  // namespace phasetomo::cli
