#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "fkdv/cli.hpp"
#include "fkdv/error.hpp"

namespace {

int write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "fkdv5: cannot write " << path << "\n";
    return fkdv::cli::kInputError;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace fkdv::cli;
  CLI::App app{"Symmetry classification, reductions and exact solutions of fifth-order KdV equations"};
  app.require_subcommand(1);

  Options o;
  std::string t_range, ic, omega_span, grid, x_range, json_path, csv_path;

  auto common = [&](CLI::App* sub, bool equation) {
    sub->add_option("--n", o.n, "Exponent n of the nonlinearity u^n u_x")->capture_default_str();
    sub->add_option("--alpha", o.alpha, "Damping coefficient alpha(t)")->capture_default_str();
    if (equation) sub->add_option("--beta", o.beta, "Dispersion coefficient beta(t)")->capture_default_str();
    sub->add_option("--t-range", t_range, "Time interval a:b (default 1:2)");
    sub->add_option("--grid", grid, "Residual grid NtxNx (default 40x40)");
    sub->add_option("--json", json_path, "Write the report here instead of stdout");
  };

  CLI::App* classify = app.add_subcommand("classify", "Classify an equation and list its symmetries");
  common(classify, true);
  classify->add_option("--tol", o.tol, "Classification tolerance")->capture_default_str();

  CLI::App* criterion = app.add_subcommand("criterion", "Test reducibility to constant coefficients");
  common(criterion, true);

  CLI::App* reduce = app.add_subcommand("reduce", "Integrate a similarity reduction and lift it");
  reduce->alias("solve");
  common(reduce, true);
  reduce->add_option("--tol", o.tol, "Classification tolerance")->capture_default_str();
  reduce->add_option("--subalgebra", o.subalgebra, "Subalgebra NAME[:param] of the optimal system")->required();
  reduce->add_option("--ic", ic, "Initial values phi, phi', ..., phi'''' as v0,v1,v2,v3,v4")->required();
  reduce->add_option("--omega-span", omega_span, "Integration span a:b of the invariant (default 0:1)");
  reduce->add_option("--csv", csv_path, "Write lifted samples t,x,u,residual");

  CLI::App* catalog = app.add_subcommand("catalog", "Closed-form solutions with residuals");
  common(catalog, false);
  catalog->add_option("--epsilon", o.epsilon, "Sign of the dispersion (+1 or -1)")->capture_default_str();
  catalog->add_option("--x-range", x_range, "x interval a:b of the residual grid");

  CLI::App* verify = app.add_subcommand("verify", "Residual and symmetry checks of a solution");
  common(verify, true);
  verify->add_option("--solution", o.solution, "CSV file t,x,u[,residual] or catalog entry name")->required();
  verify->add_option("--epsilon", o.epsilon, "Sign of the dispersion for catalog entries")->capture_default_str();
  verify->add_option("--x-range", x_range, "x interval a:b of the residual grid");
  verify->add_option("--tol", o.tol, "Residual tolerance for CSV data")->capture_default_str();
  verify->add_option("--csv", csv_path, "Write samples t,x,u,residual of a catalog entry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  CLI::App* chosen = app.get_subcommands().front();
  Outcome out;
  try {
    if (!t_range.empty()) o.t_range = parse_range(t_range);
    if (!omega_span.empty()) o.omega_span = parse_range(omega_span);
    if (!x_range.empty()) o.x_range = parse_range(x_range);
    if (!ic.empty()) o.ic = parse_ic(ic);
    if (!grid.empty()) std::tie(o.grid_nt, o.grid_nx) = parse_grid(grid);
    out = run_command(chosen->get_name(), o);
  } catch (const fkdv::Error& e) {
    std::cerr << "fkdv5: " << e.what() << "\n";
    return kInputError;
  }

  const std::string text = dump(out.report);
  if (out.report.contains("error")) std::cerr << "fkdv5: " << out.report["error"]["message"].get<std::string>() << "\n";
  if (json_path.empty()) {
    std::cout << text;
  } else if (int rc = write_file(json_path, text)) {
    return rc;
  }
  if (!csv_path.empty() && !out.csv.empty())
    if (int rc = write_file(csv_path, out.csv)) return rc;
  return out.exit_code;
}
