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

// File formats: operators and deformations as JSON, tomograms as CSV with a
// JSON sidecar (<file>.json) holding the grid and provenance.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "phasetomo/cs_tomo.hpp"
#include "phasetomo/deformed.hpp"
#include "phasetomo/pn_tomo.hpp"

namespace phasetomo::io {

using Json = nlohmann::json;

// {"dim": d, "entries": [[[re, im], ...], ...]}, row-major.
Json to_json(const FockOperator& op);
Json to_json(const FockVector& v);
FockOperator operator_from_json(const Json& j);
FockVector vector_from_json(const Json& j);

Json to_json(const PhaseGrid& grid);
PhaseGrid grid_from_json(const Json& j);

// {"preset": "identity" | "q" | "table", "lambda_q": .., "f": [1, f(1), ..], "s": ..}
Json to_json(const DeformationSpec& spec);
DeformationSpec deformation_from_json(const Json& j);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

std::filesystem::path sidecar_path(const std::filesystem::path& csv);

enum class Scheme { kCs, kQuasi, kPn, kDeformed };
std::string to_string(Scheme scheme);
Scheme scheme_from_string(const std::string& name);

struct Sidecar {
  Scheme scheme = Scheme::kCs;
  SymbolKind kind = SymbolKind::kK;
  double s = 0.0;
  int truncation = 0;
  int n_max = 0;  // photon-number tomograms only
  PhaseGrid grid = PhaseGrid::polar(5.0, 24, 32);
  std::string source_hash;
  std::optional<FockOperator> source;  // when the operator is known
  std::optional<DeformationSpec> deformation;
};

Json to_json(const Sidecar& sidecar);
Sidecar sidecar_from_json(const Json& j);

// z_re,z_im,value_re,value_im,weight
void write_tomogram_csv(std::ostream& out, const Tomogram& tomogram);
// n,z_re,z_im,value,weight.  Values must be real.
void write_pn_csv(std::ostream& out, const PNTomogram& tomogram);

// Rebuild from CSV rows, checking every node and weight against the grid.
Tomogram read_tomogram_csv(std::istream& in, const Sidecar& sidecar);
PNTomogram read_pn_csv(std::istream& in, const Sidecar& sidecar);

}  // namespace phasetomo::io
