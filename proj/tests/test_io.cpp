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

#include <sstream>
#include <string>

#include "phasetomo/cli/io.hpp"
#include "support.hpp"

using namespace phasetomo;
using namespace phasetomo::io;
using phasetomo::testing::error_code_of;
using phasetomo::testing::Gen;
using phasetomo::testing::max_abs;
using phasetomo::testing::TempDir;

TEST_CASE("operators survive a JSON round trip bit for bit [TRIVIAL]") {
  Gen gen(81);
  const FockOperator a(gen.matrix(4));
  const FockOperator back = operator_from_json(Json::parse(to_json(a).dump()));
  CHECK(max_abs(back.matrix() - a.matrix()) == 0.0);
  const FockVector v(gen.vector(5));
  CHECK((vector_from_json(Json::parse(to_json(v).dump())).amplitudes() - v.amplitudes()).norm() == 0.0);
}

TEST_CASE("malformed operator JSON is a schema error [TRIVIAL]") {
  CHECK(error_code_of([] { operator_from_json(Json::parse(R"({"entries": []})")); }) == ErrorCode::kSchema);
  CHECK(error_code_of([] { operator_from_json(Json::parse(R"({"dim": 2, "entries": [[[1, 0]]]})")); }) ==
        ErrorCode::kSchema);
  CHECK(error_code_of([] { operator_from_json(Json::parse(R"({"dim": 1, "entries": [[[1, 0, 0]]]})")); }) ==
        ErrorCode::kSchema);
}

TEST_CASE("grids round trip through JSON [TRIVIAL]") {
  for (const PhaseGrid& g : {PhaseGrid::polar(5.0, 24, 32), PhaseGrid::cartesian(6.0, 0.5)}) {
    CHECK(grid_from_json(Json::parse(to_json(g).dump())).same_nodes(g));
  }
  CHECK(error_code_of([] { grid_from_json(Json::parse(R"({"kind": "hex"})")); }) == ErrorCode::kSchema);
}

TEST_CASE("deformation specs round trip through JSON [TRIVIAL]") {
  const DeformationSpec q = deformation_from_json(Json::parse(R"({"preset": "q", "lambda_q": 0.2, "s": 0.0})"));
  CHECK(q.preset == DeformationPreset::kQ);
  CHECK(q.lambda_q == 0.2);
  const DeformationSpec t =
      deformation_from_json(Json::parse(R"({"preset": "table", "f": [1.0, 1.1, 1.3], "s": -0.5})"));
  CHECK(t.preset == DeformationPreset::kTable);
  CHECK(t.f(2) == doctest::Approx(1.3));
  CHECK(t.s == -0.5);
  const DeformationSpec again = deformation_from_json(to_json(t));
  CHECK(again.table == t.table);
  CHECK(error_code_of([] { deformation_from_json(Json::parse(R"({"preset": "z"})")); }) == ErrorCode::kSchema);
}

TEST_CASE("sidecars round trip through JSON [TRIVIAL]") {
  Sidecar sc;
  sc.scheme = Scheme::kPn;
  sc.n_max = 9;
  sc.truncation = 3;
  sc.grid = PhaseGrid::polar(6.0, 24, 16);
  sc.source = build_state(FockSpec{1}, 3);
  sc.source_hash = operator_hash(*sc.source);
  sc.deformation = DeformationSpec::q(0.3, 0.1);
  const Sidecar back = sidecar_from_json(Json::parse(to_json(sc).dump()));
  CHECK(back.scheme == Scheme::kPn);
  CHECK(back.n_max == 9);
  CHECK(back.truncation == 3);
  CHECK(back.grid.same_nodes(sc.grid));
  CHECK(back.source_hash == sc.source_hash);
  REQUIRE(back.source.has_value());
  CHECK(operator_hash(*back.source) == sc.source_hash);
  REQUIRE(back.deformation.has_value());
  CHECK(back.deformation->lambda_q == 0.3);
}

TEST_CASE("tomogram CSV round trip keeps every value [TRIVIAL]") {
  const Tomogram t = k_grid(build_state(CoherentSpec{ComplexPoint(0.5, -0.2)}, 30), PhaseGrid::polar(6.0, 24, 16));
  std::stringstream buf;
  write_tomogram_csv(buf, t);
  Sidecar sc;
  sc.grid = t.grid;
  const Tomogram back = read_tomogram_csv(buf, sc);
  REQUIRE(back.values.size() == t.values.size());
  for (std::size_t j = 0; j < t.values.size(); ++j) CHECK(back.values[j] == t.values[j]);
}

TEST_CASE("photon-number CSV round trip [TRIVIAL]") {
  const PNTomogram t = pn_tomogram_grid(build_state(ThermalSpec{0.3}, 30), PhaseGrid::polar(6.0, 24, 8), 5);
  std::stringstream buf;
  write_pn_csv(buf, t);
  Sidecar sc;
  sc.scheme = Scheme::kPn;
  sc.grid = t.grid;
  sc.n_max = 5;
  const PNTomogram back = read_pn_csv(buf, sc);
  CHECK(max_abs(back.values - Matrix(t.values.real().cast<Complex>())) == 0.0);
}

TEST_CASE("photon-number CSV refuses complex values [TRIVIAL]") {
  const PNTomogram t = pn_tomogram_grid(FockOperator::basis(3, 0, 1), PhaseGrid::polar(6.0, 24, 8), 2);
  std::stringstream buf;
  CHECK(error_code_of([&] { write_pn_csv(buf, t); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("CSV readers check header, rows and nodes [TRIVIAL]") {
  const Tomogram t = k_grid(build_state(FockSpec{0}, 4), PhaseGrid::polar(5.0, 24, 8));
  std::stringstream good;
  write_tomogram_csv(good, t);
  const std::string text = good.str();
  Sidecar sc;
  sc.grid = t.grid;

  std::stringstream bad_header("z,value\n" + text.substr(text.find('\n') + 1));
  CHECK(error_code_of([&] { read_tomogram_csv(bad_header, sc); }) == ErrorCode::kSchema);

  std::stringstream truncated(text.substr(0, text.rfind('\n', text.size() - 2) + 1));
  CHECK(error_code_of([&] { read_tomogram_csv(truncated, sc); }) == ErrorCode::kNodeMismatch);

  std::stringstream garbage(text + "1,2,x,4,5\n");
  CHECK(error_code_of([&] { read_tomogram_csv(garbage, sc); }) == ErrorCode::kNodeMismatch);

  Sidecar other;
  other.grid = PhaseGrid::polar(5.0, 24, 12);
  std::stringstream moved(text);
  CHECK(error_code_of([&] { read_tomogram_csv(moved, other); }) == ErrorCode::kNodeMismatch);
}

TEST_CASE("JSON files round trip on disk [TRIVIAL]") {
  TempDir dir;
  const Json j = to_json(build_state(FockSpec{2}, 3));
  write_json_file(dir / "op.json", j);
  CHECK(read_json_file(dir / "op.json") == j);
  CHECK(sidecar_path("a/b.csv") == std::filesystem::path("a/b.csv.json"));
  CHECK(error_code_of([&] { read_json_file(dir / "missing.json"); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("scheme names round trip [TRIVIAL]") {
  for (Scheme s : {Scheme::kCs, Scheme::kQuasi, Scheme::kPn, Scheme::kDeformed}) {
    CHECK(scheme_from_string(to_string(s)) == s);
  }
  CHECK(error_code_of([] { scheme_from_string("wigner"); }) == ErrorCode::kSchema);
}
