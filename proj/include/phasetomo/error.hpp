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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace phasetomo {

enum class ErrorCode {
  kInvalidArgument,
  kTruncation,       // Fock-space tail mass above tolerance
  kUnderflow,        // exp(-|z|^2/2) no longer representable
  kIllConditioned,   // radial fit / frame inversion / kernel cancellation
  kDistributional,   // requested object is a distribution, not a function
  kCoverage,         // phase-space grid does not cover the operator
  kQuadrature,       // quadrature too coarse for the integrand
  kNodeMismatch,
  kBranch,           // square-root branch could not be fixed
  kSchema,           // malformed input file
  kOverflow,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a machine-readable code so the
// command-line front end can emit a structured diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace phasetomo
