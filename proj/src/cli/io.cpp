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

#include "phasetomo/cli/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace phasetomo::io {

namespace {

[[noreturn]] void schema(const std::string& message) {
  throw Error(ErrorCode::kSchema, message);
}

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) schema(std::string("missing field \"") + name + "\"");
  return j.at(name);
}

double number(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_number()) schema(std::string("field \"") + name + "\" must be a number");
  return v.get<double>();
}

int integer(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_number_integer()) schema(std::string("field \"") + name + "\" must be an integer");
  return v.get<int>();
}

std::string text(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_string()) schema(std::string("field \"") + name + "\" must be a string");
  return v.get<std::string>();
}

Json complex_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Complex complex_from(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    schema("complex entries are [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> split_row(const std::string& line, std::size_t columns, std::size_t row) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (cell.empty() || end != cell.c_str() + cell.size()) {
      schema("CSV row " + std::to_string(row) + ": malformed number \"" + cell + "\"");
    }
    out.push_back(v);
  }
  if (out.size() != columns) {
    schema("CSV row " + std::to_string(row) + ": expected " + std::to_string(columns) +
           " columns, found " + std::to_string(out.size()));
  }
  return out;
}

void expect_header(std::istream& in, const std::string& header) {
  std::string line;
  if (!std::getline(in, line)) schema("empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) schema("CSV header must be \"" + header + "\", found \"" + line + "\"");
}

void check_node(const GridNode& node, double re, double im, double weight, std::size_t row) {
  const double scale = std::max(1.0, std::abs(node.z));
  if (std::abs(node.z - Complex(re, im)) > 1e-12 * scale ||
      std::abs(node.weight - weight) > 1e-12 * std::max(1.0, std::abs(node.weight))) {
    throw Error(ErrorCode::kNodeMismatch,
                "CSV row " + std::to_string(row) + " does not match the sidecar grid");
  }
}

SymbolKind kind_from_string(const std::string& name) {
  for (SymbolKind k : {SymbolKind::kK, SymbolKind::kP, SymbolKind::kOrdered,
                       SymbolKind::kDeformedK}) {
    if (phasetomo::to_string(k) == name) return k;
  }
  schema("unknown symbol kind \"" + name + "\"");
}

}  // namespace

Json to_json(const FockOperator& op) {
  Json rows = Json::array();
  for (int r = 0; r < op.dim(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < op.dim(); ++c) row.push_back(complex_json(op(r, c)));
    rows.push_back(std::move(row));
  }
  return {{"dim", op.dim()}, {"entries", std::move(rows)}};
}

Json to_json(const FockVector& v) {
  Json entries = Json::array();
  for (int k = 0; k < v.dim(); ++k) entries.push_back(complex_json(v[k]));
  return {{"dim", v.dim()}, {"entries", std::move(entries)}};
}

FockOperator operator_from_json(const Json& j) {
  const int dim = integer(j, "dim");
  const Json& rows = field(j, "entries");
  if (dim < 1 || !rows.is_array() || static_cast<int>(rows.size()) != dim) {
    schema("operator: \"entries\" must hold dim rows");
  }
  Matrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != dim) {
      schema("operator: row " + std::to_string(r) + " must hold dim entries");
    }
    for (int c = 0; c < dim; ++c) m(r, c) = complex_from(rows[r][c]);
  }
  return FockOperator(m);
}

FockVector vector_from_json(const Json& j) {
  const int dim = integer(j, "dim");
  const Json& entries = field(j, "entries");
  if (dim < 1 || !entries.is_array() || static_cast<int>(entries.size()) != dim) {
    schema("vector: \"entries\" must hold dim values");
  }
  Vector v(dim);
  for (int k = 0; k < dim; ++k) v(k) = complex_from(entries[k]);
  return FockVector(v);
}

Json to_json(const PhaseGrid& grid) {
  if (grid.kind() == GridKind::kPolar) {
    return {{"kind", "polar"},
            {"radius", grid.radius()},
            {"n_radial", grid.n_radial()},
            {"n_angular", grid.n_angular()}};
  }
  return {{"kind", "cartesian"}, {"half_extent", grid.half_extent()}, {"spacing", grid.spacing()}};
}

PhaseGrid grid_from_json(const Json& j) {
  const std::string kind = text(j, "kind");
  if (kind == "polar") {
    return PhaseGrid::polar(number(j, "radius"), integer(j, "n_radial"), integer(j, "n_angular"));
  }
  if (kind == "cartesian") return PhaseGrid::cartesian(number(j, "half_extent"), number(j, "spacing"));
  schema("grid kind must be \"polar\" or \"cartesian\"");
}

Json to_json(const DeformationSpec& spec) {
  switch (spec.preset) {
    case DeformationPreset::kIdentity:
      return {{"preset", "identity"}, {"s", spec.s}};
    case DeformationPreset::kQ:
      return {{"preset", "q"}, {"lambda_q", spec.lambda_q}, {"s", spec.s}};
    case DeformationPreset::kTable:
      return {{"preset", "table"}, {"f", spec.table}, {"s", spec.s}};
  }
  return {};
}

DeformationSpec deformation_from_json(const Json& j) {
  const std::string preset = text(j, "preset");
  const double s = j.contains("s") ? number(j, "s") : 0.0;
  if (preset == "identity") return DeformationSpec::identity(s);
  if (preset == "q") return DeformationSpec::q(number(j, "lambda_q"), s);
  if (preset == "table") {
    const Json& f = field(j, "f");
    if (!f.is_array() || f.empty()) schema("deformation: \"f\" must be a non-empty array");
    std::vector<double> table;
    for (const Json& v : f) {
      if (!v.is_number()) schema("deformation: \"f\" entries must be numbers");
      table.push_back(v.get<double>());
    }
    return DeformationSpec::from_table(std::move(table), s);
  }
  schema("deformation preset must be \"identity\", \"q\" or \"table\"");
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    schema(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
  return std::filesystem::path(csv.string() + ".json");
}

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::kCs: return "cs";
    case Scheme::kQuasi: return "quasi";
    case Scheme::kPn: return "pn";
    case Scheme::kDeformed: return "deformed";
  }
  return "";
}

Scheme scheme_from_string(const std::string& name) {
  for (Scheme s : {Scheme::kCs, Scheme::kQuasi, Scheme::kPn, Scheme::kDeformed}) {
    if (to_string(s) == name) return s;
  }
  schema("unknown scheme \"" + name + "\"");
}

Json to_json(const Sidecar& sidecar) {
  Json j = {{"scheme", to_string(sidecar.scheme)},
            {"kind", std::string(phasetomo::to_string(sidecar.kind))},
            {"s", sidecar.s},
            {"truncation", sidecar.truncation},
            {"grid", to_json(sidecar.grid)},
            {"source_hash", sidecar.source_hash}};
  if (sidecar.scheme == Scheme::kPn) j["n_max"] = sidecar.n_max;
  if (sidecar.source) j["source"] = to_json(*sidecar.source);
  if (sidecar.deformation) j["deformation"] = to_json(*sidecar.deformation);
  return j;
}

Sidecar sidecar_from_json(const Json& j) {
  Sidecar out;
  out.scheme = scheme_from_string(text(j, "scheme"));
  out.kind = kind_from_string(text(j, "kind"));
  out.s = number(j, "s");
  out.truncation = integer(j, "truncation");
  out.grid = grid_from_json(field(j, "grid"));
  out.source_hash = text(j, "source_hash");
  if (out.scheme == Scheme::kPn) out.n_max = integer(j, "n_max");
  if (j.contains("source")) out.source = operator_from_json(j.at("source"));
  if (j.contains("deformation")) out.deformation = deformation_from_json(j.at("deformation"));
  return out;
}

void write_tomogram_csv(std::ostream& out, const Tomogram& tomogram) {
  out << "z_re,z_im,value_re,value_im,weight\n";
  const auto& nodes = tomogram.grid.nodes();
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    out << fmt(nodes[j].z.real()) << ',' << fmt(nodes[j].z.imag()) << ','
        << fmt(tomogram.values[j].real()) << ',' << fmt(tomogram.values[j].imag()) << ','
        << fmt(nodes[j].weight) << '\n';
  }
}

void write_pn_csv(std::ostream& out, const PNTomogram& tomogram) {
  const double scale = std::max(1.0, tomogram.values.cwiseAbs().maxCoeff());
  if (tomogram.values.imag().cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error(ErrorCode::kInvalidArgument,
                "photon-number CSV holds real values; the operator is not Hermitian");
  }
  out << "n,z_re,z_im,value,weight\n";
  const auto& nodes = tomogram.grid.nodes();
  for (int n = 0; n <= tomogram.n_max; ++n) {
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      out << n << ',' << fmt(nodes[j].z.real()) << ',' << fmt(nodes[j].z.imag()) << ','
          << fmt(tomogram.values(n, static_cast<Eigen::Index>(j)).real()) << ','
          << fmt(nodes[j].weight) << '\n';
    }
  }
}

Tomogram read_tomogram_csv(std::istream& in, const Sidecar& sidecar) {
  expect_header(in, "z_re,z_im,value_re,value_im,weight");
  Tomogram out{sidecar.grid, {}, sidecar.kind, sidecar.s, sidecar.source_hash};
  const auto& nodes = sidecar.grid.nodes();
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (row >= nodes.size()) throw Error(ErrorCode::kNodeMismatch, "CSV has more rows than grid nodes");
    const std::vector<double> v = split_row(line, 5, row + 1);
    check_node(nodes[row], v[0], v[1], v[4], row + 1);
    out.values.emplace_back(v[2], v[3]);
    ++row;
  }
  if (row != nodes.size()) throw Error(ErrorCode::kNodeMismatch, "CSV has fewer rows than grid nodes");
  return out;
}

PNTomogram read_pn_csv(std::istream& in, const Sidecar& sidecar) {
  expect_header(in, "n,z_re,z_im,value,weight");
  const auto& nodes = sidecar.grid.nodes();
  const std::size_t expected = nodes.size() * static_cast<std::size_t>(sidecar.n_max + 1);
  PNTomogram out{sidecar.n_max, sidecar.grid,
                 Matrix::Zero(sidecar.n_max + 1, static_cast<Eigen::Index>(nodes.size())),
                 sidecar.source_hash};
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (row >= expected) throw Error(ErrorCode::kNodeMismatch, "CSV has more rows than expected");
    const std::vector<double> v = split_row(line, 5, row + 1);
    const int n = static_cast<int>(row / nodes.size());
    const std::size_t j = row % nodes.size();
    if (v[0] != n) schema("CSV row " + std::to_string(row + 1) + ": expected n = " + std::to_string(n));
    check_node(nodes[j], v[1], v[2], v[4], row + 1);
    out.values(n, static_cast<Eigen::Index>(j)) = v[3];
    ++row;
  }
  if (row != expected) throw Error(ErrorCode::kNodeMismatch, "CSV has fewer rows than expected");
  return out;
}

}  // namespace phasetomo::io
