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

#include "phasetomo/cli/app.hpp"

#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "phasetomo/cli/io.hpp"
#include "phasetomo/cli/verify.hpp"
#include "phasetomo/cs_tomo.hpp"
#include "phasetomo/deformed.hpp"
#include "phasetomo/pn_tomo.hpp"

namespace phasetomo::cli {

namespace {

// Settings shared by every subcommand.  A --config JSON file supplies
// defaults; explicit flags win.
struct RunConfig {
  std::string config_path;
  int truncation = 40;
  double tail_tol = 1e-10;
  std::string grid;
  std::string deformation;
  std::string out;
  std::uint64_t seed = 7;
};

struct StateArgs {
  std::string state;
  bool random = false;
};

struct TomogramArgs {
  std::string state;
  std::string operator_path;
  std::string scheme = "cs";
  int n_max = -1;
  double lambda = 0.5;
};

struct ReconstructArgs {
  std::string input;
  std::string method = "moments";
  std::string route = "conjugation";
  double lambda = 0.5;
};

struct VerifyArgs {
  std::string suite = "all";
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

void apply_config(RunConfig& cfg, const CLI::App& app) {
  if (cfg.config_path.empty()) return;
  const io::Json j = io::read_json_file(cfg.config_path);
  if (!j.is_object()) throw Error(ErrorCode::kSchema, "config must be a JSON object");
  auto unset = [&](const char* flag) { return app.count(flag) == 0; };
  try {
    if (j.contains("truncation") && unset("--truncation")) cfg.truncation = j.at("truncation").get<int>();
    if (j.contains("tail_tol") && unset("--tail-tol")) cfg.tail_tol = j.at("tail_tol").get<double>();
    if (j.contains("grid") && unset("--grid")) cfg.grid = j.at("grid").get<std::string>();
    if (j.contains("deformation") && unset("--deformation")) cfg.deformation = j.at("deformation").get<std::string>();
    if (j.contains("out") && unset("--out")) cfg.out = j.at("out").get<std::string>();
    if (j.contains("seed") && unset("--seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  } catch (const io::Json::exception& e) {
    throw Error(ErrorCode::kSchema, std::string("config: ") + e.what());
  }
}

void validate(const RunConfig& cfg) {
  if (cfg.truncation < 1) throw Error(ErrorCode::kInvalidArgument, "truncation must be >= 1");
  if (!(cfg.tail_tol > 0.0)) throw Error(ErrorCode::kInvalidArgument, "tail tolerance must be > 0");
}

Tolerances tolerances(const RunConfig& cfg) { return Tolerances{cfg.tail_tol}; }

DeformationSpec load_deformation(const RunConfig& cfg) {
  if (cfg.deformation.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "a deformation spec file (--deformation) is required");
  }
  return io::deformation_from_json(io::read_json_file(cfg.deformation));
}

FockOperator load_operator(const RunConfig& cfg, const std::string& state,
                           const std::string& operator_path) {
  if (!state.empty() && !operator_path.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "give either --state or --operator, not both");
  }
  if (!operator_path.empty()) return io::operator_from_json(io::read_json_file(operator_path));
  if (state.empty()) throw Error(ErrorCode::kInvalidArgument, "--state or --operator is required");
  return build_state(parse_state_spec(state), cfg.truncation, tolerances(cfg));
}

void write_json_output(const RunConfig& cfg, const io::Json& j, std::ostream& out) {
  if (cfg.out.empty()) {
    out << j.dump() << '\n';
  } else {
    io::write_json_file(cfg.out, j);
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream file(path);
  if (!file) throw Error(ErrorCode::kInvalidArgument, "cannot write " + path);
  return file;
}

int cmd_state(const RunConfig& cfg, const StateArgs& args, std::ostream& out) {
  FockOperator rho = FockOperator::zero(1);
  if (args.random) {
    if (!args.state.empty()) throw Error(ErrorCode::kInvalidArgument, "give either --state or --random");
    rho = random_density(cfg.truncation, cfg.seed);
  } else {
    if (args.state.empty()) throw Error(ErrorCode::kInvalidArgument, "--state or --random is required");
    rho = build_state(parse_state_spec(args.state), cfg.truncation, tolerances(cfg));
  }
  write_json_output(cfg, io::to_json(rho), out);
  return 0;
}

int cmd_tomogram(const RunConfig& cfg, const TomogramArgs& args, std::ostream& out) {
  if (cfg.out.empty()) throw Error(ErrorCode::kInvalidArgument, "--out is required for tomogram");
  const FockOperator rho = load_operator(cfg, args.state, args.operator_path);
  const int truncation = rho.truncation();

  io::Sidecar side;
  side.truncation = truncation;
  side.source_hash = operator_hash(rho);
  side.source = rho;

  std::ofstream csv = open_output(cfg.out);
  std::string scheme = args.scheme;
  double s = 0.0;
  if (scheme.rfind("quasi:", 0) == 0) {
    const std::string arg = scheme.substr(6);
    std::size_t used = 0;
    try {
      s = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != arg.size()) {
      throw Error(ErrorCode::kInvalidArgument, "scheme quasi:<s> needs a number, got \"" + arg + "\"");
    }
    scheme = "quasi";
  }
  side.scheme = io::scheme_from_string(scheme);

  if (side.scheme == io::Scheme::kPn) {
    const PNKernelParams params{args.lambda};
    params.validate();
    side.grid = cfg.grid.empty() ? pn_default_grid(truncation) : parse_grid(cfg.grid);
    side.n_max = args.n_max >= 0 ? args.n_max : pn_default_nmax(side.grid, params, truncation);
    const PNTomogram tomo = pn_tomogram_grid(rho, side.grid, side.n_max, tolerances(cfg));
    io::write_pn_csv(csv, tomo);
    double worst = 0.0;
    for (Eigen::Index j = 0; j < tomo.values.cols(); ++j) {
      worst = std::max(worst, std::abs(tomo.values.col(j).sum() - rho.trace()));
    }
    out << "normalization residual: " << fmt(worst) << " (max over nodes of |sum_n w - Tr|, n <= "
        << side.n_max << ")\n";
  } else {
    side.grid = cfg.grid.empty() ? PhaseGrid::default_polar(truncation) : parse_grid(cfg.grid);
    Tomogram tomo{side.grid, {}, SymbolKind::kK, 0.0, side.source_hash};
    Complex reference = rho.trace();
    if (side.scheme == io::Scheme::kCs) {
      tomo = k_grid(rho, side.grid, {}, tolerances(cfg));
    } else if (side.scheme == io::Scheme::kQuasi) {
      tomo = quasi_grid(rho, side.grid, s);
    } else {
      const DeformationSpec spec = load_deformation(cfg);
      side.deformation = spec;
      tomo = deformed_k_grid(rho, side.grid, spec);
      reference = deformed_operator(rho, spec).trace();
    }
    side.kind = tomo.kind;
    side.s = tomo.s;
    tomo.source_hash = side.source_hash;
    io::write_tomogram_csv(csv, tomo);
    Complex integral = 0.0;
    const auto& nodes = side.grid.nodes();
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      Complex value = tomo.values[j];
      if (side.scheme == io::Scheme::kDeformed) value /= deformed_scalar(nodes[j].z, *side.deformation);
      integral += nodes[j].weight * value;
    }
    out << "normalization residual: " << fmt(std::abs(integral - reference)) << '\n';
  }
  csv.close();
  io::write_json_file(io::sidecar_path(cfg.out), io::to_json(side));
  return 0;
}

int cmd_reconstruct(const RunConfig& cfg, const ReconstructArgs& args, bool truncation_given,
                    std::ostream& out, std::ostream& err) {
  if (args.input.empty()) throw Error(ErrorCode::kInvalidArgument, "--input is required");
  const io::Sidecar side = io::sidecar_from_json(io::read_json_file(io::sidecar_path(args.input)));
  const int truncation = truncation_given ? cfg.truncation : side.truncation;
  std::ifstream csv(args.input);
  if (!csv) throw Error(ErrorCode::kInvalidArgument, "cannot open " + args.input);

  auto need = [&](io::Scheme scheme) {
    if (side.scheme != scheme) {
      throw Error(ErrorCode::kSchema, "method " + args.method + " needs a " + io::to_string(scheme) +
                                          " tomogram, found " + io::to_string(side.scheme));
    }
  };

  FockOperator result = FockOperator::zero(truncation + 1);
  if (args.method == "moments") {
    need(io::Scheme::kCs);
    result = reconstruct_from_K(io::read_tomogram_csv(csv, side), truncation);
  } else if (args.method == "frame") {
    need(io::Scheme::kCs);
    const Tomogram tomo = io::read_tomogram_csv(csv, side);
    result = frame_reconstruct(dual_frame(tomo.grid, truncation), tomo);
  } else if (args.method == "pn") {
    need(io::Scheme::kPn);
    result = pn_reconstruct(io::read_pn_csv(csv, side), PNKernelParams{args.lambda}, truncation);
  } else if (args.method == "deformed") {
    need(io::Scheme::kDeformed);
    const DeformationSpec spec = cfg.deformation.empty() && side.deformation
                                     ? *side.deformation
                                     : load_deformation(cfg);
    DeformedRoute route = DeformedRoute::kConjugation;
    if (args.route == "frame") {
      route = DeformedRoute::kFrame;
    } else if (args.route != "conjugation") {
      throw Error(ErrorCode::kInvalidArgument, "route must be conjugation or frame");
    }
    result = deformed_reconstruct(io::read_tomogram_csv(csv, side), spec, route, truncation);
  } else {
    throw Error(ErrorCode::kInvalidArgument, "method must be moments, frame, pn or deformed");
  }

  write_json_output(cfg, io::to_json(result), out);
  if (side.source) {
    if (operator_hash(*side.source) != side.source_hash) {
      throw Error(ErrorCode::kSchema, "sidecar source operator does not match its hash");
    }
    if (side.source->dim() == result.dim()) {
      const double residual = (result.matrix() - side.source->matrix()).cwiseAbs().maxCoeff();
      (cfg.out.empty() ? err : out) << "round-trip residual: " << fmt(residual) << '\n';
    }
  }
  return 0;
}

int cmd_verify(const RunConfig& cfg, const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  const std::vector<CheckResult> results = run_suite(args.suite, cfg.seed);
  std::vector<std::string> failed;
  for (const CheckResult& r : results) {
    out << (r.passed() ? "PASS " : "FAIL ") << fmt(r.residual) << " <= " << fmt(r.tolerance) << "  "
        << r.name << '\n';
    if (!r.passed()) failed.push_back(r.name);
  }
  if (failed.empty()) return 0;
  err << io::Json{{"error", "verification"}, {"failed", failed}}.dump() << '\n';
  return 1;
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kSchema:
    case ErrorCode::kNodeMismatch:
      return 2;
    default:
      return 1;
  }
}

void report(std::ostream& err, std::string_view code, const std::string& message) {
  err << io::Json{{"error", std::string(code)}, {"message", message}}.dump() << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Phase-space tomography on a truncated Fock space", "phasetomo"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  app.add_option("--config", cfg.config_path, "JSON file with default settings");
  app.add_option("--truncation,-N", cfg.truncation, "Fock truncation N (dim = N + 1)");
  app.add_option("--tail-tol", cfg.tail_tol, "tail-mass tolerance");
  app.add_option("--grid", cfg.grid, "R:radial:angular or cart:L:h");
  app.add_option("--deformation", cfg.deformation, "deformation spec JSON file");
  app.add_option("--out", cfg.out, "output path");
  app.add_option("--seed", cfg.seed, "seed for randomized states and suites");

  StateArgs state_args;
  CLI::App* state = app.add_subcommand("state", "write a density operator as JSON");
  state->add_option("--state", state_args.state, "fock:<n> | coherent:<re>+<im>i | thermal:<nbar> | cat:<re>+<im>i");
  state->add_flag("--random", state_args.random, "random density operator from --seed");

  TomogramArgs tomo_args;
  CLI::App* tomogram = app.add_subcommand("tomogram", "evaluate a tomogram on a grid");
  tomogram->add_option("--state", tomo_args.state, "state spec");
  tomogram->add_option("--operator", tomo_args.operator_path, "operator JSON file");
  tomogram->add_option("--scheme", tomo_args.scheme, "cs | pn | quasi:<s> | deformed");
  tomogram->add_option("--nmax", tomo_args.n_max, "photon-number cutoff");
  tomogram->add_option("--lambda", tomo_args.lambda, "photon-number kernel parameter, sizes --nmax");

  ReconstructArgs rec_args;
  CLI::App* reconstruct = app.add_subcommand("reconstruct", "recover an operator from a tomogram");
  reconstruct->add_option("--input", rec_args.input, "tomogram CSV (sidecar at <file>.json)");
  reconstruct->add_option("--method", rec_args.method, "moments | frame | pn | deformed");
  reconstruct->add_option("--route", rec_args.route, "deformed route: conjugation | frame");
  reconstruct->add_option("--lambda", rec_args.lambda, "photon-number kernel parameter");

  VerifyArgs verify_args;
  CLI::App* verify = app.add_subcommand("verify", "run numerical self-checks");
  verify->add_option("suite", verify_args.suite, "qubit | cs-identity | pn-identity | deformed | mehler | all");
  CLI::App* qubit_verify = app.add_subcommand("qubit-verify", "same as verify qubit");
  CLI::App* pn_verify = app.add_subcommand("pn-verify", "same as verify pn-identity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    report(err, "usage", e.what());
    return 2;
  }

  try {
    apply_config(cfg, app);
    validate(cfg);
    if (state->parsed()) return cmd_state(cfg, state_args, out);
    if (tomogram->parsed()) return cmd_tomogram(cfg, tomo_args, out);
    if (reconstruct->parsed()) {
      return cmd_reconstruct(cfg, rec_args, app.count("--truncation") > 0, out, err);
    }
    if (verify->parsed()) return cmd_verify(cfg, verify_args, out, err);
    if (qubit_verify->parsed()) return cmd_verify(cfg, VerifyArgs{"qubit"}, out, err);
    if (pn_verify->parsed()) return cmd_verify(cfg, VerifyArgs{"pn-identity"}, out, err);
  } catch (const Error& e) {
    report(err, to_string(e.code()), e.what());
    return exit_code(e.code());
  } catch (const std::exception& e) {
    report(err, "internal", e.what());
    return 1;
  }
  return 2;
}

}  // namespace phasetomo::cli
