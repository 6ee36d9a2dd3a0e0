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

// Command-line front end.  run() is the whole program; tools/phasetomo.cpp
// only forwards argv.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string_view>

#include "phasetomo/fock.hpp"
#include "phasetomo/grid.hpp"

namespace phasetomo::cli {

// fock:<n>, coherent:<re>(+|-)<im>i, thermal:<nbar>, cat:<re>(+|-)<im>i.
// Errors name the 1-based column where parsing stopped.
StateSpec parse_state_spec(std::string_view text);

// R:radial:angular (polar) or cart:L:h (Cartesian).
PhaseGrid parse_grid(std::string_view text);

// G G^dagger / Tr, G with standard complex Gaussian entries.
FockOperator random_density(int truncation, std::uint64_t seed);

// Exit codes: 0 ok, 1 verification or numerical failure, 2 usage or input
// error.  Every error is one JSON line on err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace phasetomo::cli
