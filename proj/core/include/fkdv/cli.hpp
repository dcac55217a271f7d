#pragma once

// The command layer behind the fkdv5 executable. Each command is a pure
// function from options to a report; the executable only parses flags and
// writes the outputs.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fkdv/function.hpp"
#include "fkdv/ode.hpp"
#include "fkdv/verify.hpp"

namespace fkdv::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "fkdv5-report/1";

enum ExitCode { kOk = 0, kInputError = 1, kGeneric = 2 };

struct Options {
  double n = 2.0;
  std::string alpha = "0";
  std::string beta = "1";
  Interval t_range{1.0, 2.0};
  double tol = 1e-7;
  std::optional<std::string> subalgebra;  ///< NAME[:param]
  std::optional<OdeState> ic;
  Interval omega_span{0.0, 1.0};
  int grid_nt = 40;
  int grid_nx = 40;
  std::optional<Interval> x_range;
  int epsilon = -1;
  std::string solution;  ///< CSV path or catalog entry name
};

struct Outcome {
  Json report;
  int exit_code = kOk;
  std::string csv;  ///< t,x,u,residual rows; empty when the command has none
};

Outcome cmd_classify(const Options& o);
Outcome cmd_criterion(const Options& o);
Outcome cmd_reduce(const Options& o);
Outcome cmd_catalog(const Options& o);
Outcome cmd_verify(const Options& o);

/// Dispatches by name and turns library and input errors into exit code 1
/// with an error report.
Outcome run_command(const std::string& command, const Options& o);

/// Deterministic text: insertion order, floats as %.12e, non-finite as null.
std::string dump(const Json& j);

Interval parse_range(const std::string& text);
OdeState parse_ic(const std::string& text);
/// "NtxNx", e.g. "40x60".
std::pair<int, int> parse_grid(const std::string& text);
std::pair<std::string, std::optional<double>> parse_subalgebra(const std::string& text);

/// Reads t,x,u[,residual] rows (optional header) into a full lattice.
SampledField read_csv(std::istream& in);

/// {"value": v, "tolerance": tol}
Json measured(double value, double tolerance);
Json residual_json(const ResidualReport& r, double tolerance);

}  // namespace fkdv::cli
