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

// Numerical self-checks behind `phasetomo verify`.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace phasetomo::cli {

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed() const { return residual <= tolerance; }
};

// qubit, cs-identity, pn-identity, deformed, mehler, all.
const std::vector<std::string>& suite_names();

// Throws kInvalidArgument for an unknown suite.
std::vector<CheckResult> run_suite(std::string_view suite, std::uint64_t seed);

}  // namespace phasetomo::cli
