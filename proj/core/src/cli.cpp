#include "fkdv/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include "fkdv/algebra.hpp"
#include "fkdv/classify.hpp"
#include "fkdv/error.hpp"
#include "fkdv/expr.hpp"
#include "fkdv/format.hpp"
#include "fkdv/gauge.hpp"
#include "fkdv/reduce.hpp"

namespace fkdv::cli {
namespace {

constexpr double kReducibleTol = 1e-8;
constexpr double kOdeTol = 1e-10;
constexpr double kLiftTol = 1e-6;
constexpr int kTrajectorySamples = 21;

Json interval_json(const Interval& i) { return Json::array({i.lo, i.hi}); }

Json header(const std::string& command) {
  Json j;
  j["schema"] = kSchema;
  j["command"] = command;
  return j;
}

Json input_json(const Options& o) {
  Json j;
  j["n"] = o.n;
  j["alpha"] = o.alpha;
  j["beta"] = o.beta;
  j["interval"] = interval_json(o.t_range);
  return j;
}

EquationSpec equation_from(const Options& o) {
  return EquationSpec::make(o.n, Function(parse(o.alpha)), Function(parse(o.beta)), o.t_range);
}

Json classification_json(const ClassificationResult& c) {
  Json j;
  j["case"] = case_name(c.kind);
  j["case_number"] = case_number(c.kind);
  j["epsilon"] = c.epsilon;
  switch (c.kind) {
    case Case::Power:
      j["rho"] = measured(c.rho, c.tol);
      j["kappa"] = measured(c.kappa, c.tol);
      j["lambda"] = measured(c.lambda, c.tol);
      break;
    case Case::Exponential:
      j["m"] = measured(c.m, c.tol);
      j["lambda"] = measured(c.lambda, c.tol);
      break;
    case Case::Constant: j["lambda"] = measured(c.lambda, c.tol); break;
    case Case::Generic: break;
  }
  j["fit_residual"] = measured(c.fit.residual, c.tol);
  j["flatness"] = measured(c.fit.flatness, c.tol);
  j["fit_samples"] = c.fit.samples;
  j["canonicalizer"] = c.canonicalizer.describe();
  j["normalizer"] = c.normalizer.describe();
  j["canonical_beta"] = c.canonical.beta.describe();
  j["canonical_interval"] = interval_json(c.canonical.interval);
  return j;
}

Json basis_json(const std::vector<VectorField>& basis) {
  Json arr = Json::array();
  for (const VectorField& v : basis) arr.push_back({{"label", v.label}, {"generator", v.describe()}});
  return arr;
}

Json algebra_json(const std::vector<VectorField>& basis, Interval window) {
  constexpr double kClosureTol = 1e-12;
  const StructureConstants s = structure_constants(basis, window, kClosureTol);
  const AlgebraType a = identify_algebra(s);
  Json j;
  j["label"] = a.label;
  j["display"] = a.display();
  if (a.a) j["a"] = measured(*a.a, 1e-10);
  else j["a"] = nullptr;
  if (!a.detail.empty()) j["detail"] = a.detail;
  j["closure_residual"] = measured(s.closure_residual, kClosureTol);
  j["antisymmetry_defect"] = measured(s.antisymmetry_defect(), kClosureTol);
  j["jacobi_defect"] = measured(s.jacobi_defect(), kClosureTol);
  Json brackets = Json::array();
  for (int i = 0; i < s.dim; ++i)
    for (int k = i + 1; k < s.dim; ++k) {
      Json coeffs = Json::array();
      for (int m = 0; m < s.dim; ++m) coeffs.push_back(s(i, k, m));
      brackets.push_back({{"pair", basis[i].label + "," + basis[k].label}, {"coefficients", coeffs}});
    }
  j["brackets"] = brackets;
  return j;
}

const char* param_name(ParamKind k) {
  switch (k) {
    case ParamKind::None: return "none";
    case ParamKind::Real: return "real";
    case ParamKind::Sign: return "sign";
  }
  return "none";
}

Json reduction_json(const Reduction& r) {
  Json j;
  j["subalgebra"] = r.sub.display();
  j["row"] = r.row;
  j["omega"] = r.omega_text();
  j["ansatz"] = r.ansatz_text();
  j["ode"] = r.ode.describe();
  return j;
}

std::string csv_rows(const SolutionField& f, const EquationSpec& e, const Grid& g) {
  std::string out = "t,x,u,residual\n";
  for (int i = 0; i < g.nt; ++i) {
    const double t = g.t.sample(i, g.nt);
    for (int k = 0; k < g.nx; ++k) {
      const double x = g.x.sample(k, g.nx);
      const FieldJet j = f.jet(t, x);
      out += sci12(t) + "," + sci12(x) + "," + sci12(j.u) + "," + sci12(point_residual(j, e, t)) + "\n";
    }
  }
  return out;
}

Interval intersect(const Interval& a, const Interval& b) { return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)}; }


Json entry_json(const CatalogEntry& entry, const Grid& g) {
  Json j;
  j["name"] = entry.name;
  j["description"] = entry.field.description();
  j["provenance"] = provenance_name(entry.field.provenance());
  j["equation"] = {{"n", entry.equation.n},
                   {"alpha", entry.equation.alpha.describe()},
                   {"beta", entry.equation.beta.describe()},
                   {"interval", interval_json(entry.equation.interval)}};
  const ResidualReport r = pde_residual(entry.field, entry.equation, g);
  j["residual"] = residual_json(r, entry.tolerance);
  j["passed"] = r.max_rel <= entry.tolerance;
  return j;
}

const CatalogEntry& find_entry(const std::vector<CatalogEntry>& entries, const std::string& name) {
  for (const CatalogEntry& e : entries)
    if (e.name == name) return e;
  std::string known;
  for (const CatalogEntry& e : entries) known += (known.empty() ? "" : ", ") + e.name;
  throw InvariantError("no catalog entry '" + name + "' for these parameters (available: " + known + ")");
}

Interval shrunk(const Interval& i, double frac) {
  const double d = frac * i.width();
  return {i.lo + d, i.hi - d};
}

std::string shortest_or_null(double v) { return std::isfinite(v) ? sci12(v) : "null"; }

void dump_into(const Json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(it.key()).dump() + ": ";
        dump_into(it.value(), out, indent + 2);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump_into(j[i], out, indent + 2);
      }
      out += "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float: out += shortest_or_null(j.get<double>()); return;
    default: out += j.dump(); return;
  }
}

}  // namespace

Json measured(double value, double tolerance) { return {{"value", value}, {"tolerance", tolerance}}; }

Json residual_json(const ResidualReport& r, double tolerance) {
  Json j;
  j["grid"] = {{"t", interval_json(r.grid.t)}, {"x", interval_json(r.grid.x)}, {"nt", r.grid.nt}, {"nx", r.grid.nx}};
  j["max_rel"] = measured(r.max_rel, tolerance);
  j["mean_rel"] = measured(r.mean_rel, tolerance);
  j["worst"] = Json::array({r.worst_t, r.worst_x});
  j["points"] = r.points;
  j["derivatives"] = r.analytic ? "analytic" : "finite-difference";
  if (!r.analytic) j["fd_estimate"] = measured(r.fd_estimate, tolerance);
  return j;
}

std::string dump(const Json& j) {
  std::string out;
  dump_into(j, out, 0);
  return out + "\n";
}

Interval parse_range(const std::string& text) {
  // The separator is the first ':' not at the start (so "-5:5" works).
  const std::size_t colon = text.find(':', 1);
  if (colon == std::string::npos) throw InvariantError("range '" + text + "' must look like a:b");
  try {
    std::size_t used_a = 0, used_b = 0;
    const std::string sa = text.substr(0, colon), sb = text.substr(colon + 1);
    const double a = std::stod(sa, &used_a), b = std::stod(sb, &used_b);
    if (used_a != sa.size() || used_b != sb.size()) throw std::invalid_argument("trailing text");
    if (!(a < b)) throw InvariantError("range '" + text + "' needs a < b");
    return {a, b};
  } catch (const std::logic_error&) {
    throw InvariantError("range '" + text + "' must look like a:b with numbers a < b");
  }
}

OdeState parse_ic(const std::string& text) {
  OdeState y{};
  std::stringstream ss(text);
  std::string item;
  int k = 0;
  while (std::getline(ss, item, ',')) {
    if (k >= kOdeDim) throw InvariantError("--ic takes exactly five values");
    try {
      std::size_t used = 0;
      y[static_cast<std::size_t>(k)] = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument("trailing text");
    } catch (const std::logic_error&) {
      throw InvariantError("--ic value '" + item + "' is not a number");
    }
    ++k;
  }
  if (k != kOdeDim) throw InvariantError("--ic takes exactly five values");
  return y;
}

std::pair<int, int> parse_grid(const std::string& text) {
  const std::size_t sep = text.find('x');
  try {
    if (sep == std::string::npos) throw std::invalid_argument("no separator");
    std::size_t ua = 0, ub = 0;
    const std::string sa = text.substr(0, sep), sb = text.substr(sep + 1);
    const int a = std::stoi(sa, &ua), b = std::stoi(sb, &ub);
    if (ua != sa.size() || ub != sb.size() || a < 1 || b < 1) throw std::invalid_argument("bad counts");
    return {a, b};
  } catch (const std::logic_error&) {
    throw InvariantError("grid '" + text + "' must look like NtxNx with positive counts");
  }
}

std::pair<std::string, std::optional<double>> parse_subalgebra(const std::string& text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string::npos) return {text, std::nullopt};
  const std::string p = text.substr(colon + 1);
  try {
    std::size_t used = 0;
    const double v = std::stod(p, &used);
    if (used != p.size()) throw std::invalid_argument("trailing text");
    return {text.substr(0, colon), v};
  } catch (const std::logic_error&) {
    throw InvariantError("subalgebra parameter '" + p + "' is not a number");
  }
}

SampledField read_csv(std::istream& in) {
  std::map<std::pair<double, double>, double> values;
  std::set<double> ts, xs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (used != cell.size()) numeric = false;
      } catch (const std::logic_error&) {
        numeric = false;
      }
    }
    if (!numeric) {
      if (lineno == 1) continue;  // header
      throw InvariantError("CSV line " + std::to_string(lineno) + " is not numeric");
    }
    if (row.size() < 3) throw InvariantError("CSV line " + std::to_string(lineno) + " needs t,x,u");
    if (!values.emplace(std::make_pair(row[0], row[1]), row[2]).second)
      throw InvariantError("CSV line " + std::to_string(lineno) + " repeats a (t, x) point");
    ts.insert(row[0]);
    xs.insert(row[1]);
  }
  if (values.empty()) throw InvariantError("CSV has no data rows");
  SampledField f;
  f.t.assign(ts.begin(), ts.end());
  f.x.assign(xs.begin(), xs.end());
  if (values.size() != f.t.size() * f.x.size()) throw InvariantError("CSV points do not form a full (t, x) lattice");
  f.u.reserve(values.size());
  for (double t : f.t)
    for (double x : f.x) f.u.push_back(values.at({t, x}));
  return f;
}

Outcome cmd_classify(const Options& o) {
  const EquationSpec e = equation_from(o);
  const ClassificationResult c = classify(e, o.tol);
  Outcome out;
  Json& r = out.report = header("classify");
  r["input"] = input_json(o);
  r["gauge"] = {{"alpha_zero", e.alpha.is_zero()},
                {"transform", c.gauge.describe()},
                {"gauged_beta", c.gauged.beta.describe()},
                {"gauged_interval", interval_json(c.gauged.interval)}};
  const double red = reducibility_residual(e);
  r["reducibility"] = {{"reducible", red <= kReducibleTol}, {"residual", measured(red, kReducibleTol)}};
  r["classification"] = classification_json(c);

  const std::vector<VectorField> canonical = symmetry_basis(c, e.n);
  const std::vector<VectorField> original = symmetry_basis_original(e, c);
  r["symmetries"] = {{"count", canonical.size()}, {"canonical", basis_json(canonical)}, {"original", basis_json(original)},
                    {"original_time_map", c.normalizer.time().describe()}};
  r["algebra"] = algebra_json(canonical, c.canonical.interval);

  Json warnings = Json::array();
  Json optimal = Json::array();
  Json reductions = Json::array();
  if (c.kind == Case::Generic) {
    warnings.push_back("GENERIC: only the kernel d_x is admitted; no similarity reductions beyond constants");
    out.exit_code = kGeneric;
  } else {
    for (const SubalgebraFamily& fam : optimal_system(c, e.n)) {
      Json members = Json::array();
      for (const Subalgebra& s : fam.members()) {
        members.push_back(s.display());
        if (s.name == "g0") continue;
        reductions.push_back(reduction_json(reduction_for(s, c, e.n)));
      }
      optimal.push_back({{"name", fam.name}, {"parameter", param_name(fam.param)}, {"representatives", members}});
    }
  }
  r["optimal_system"] = optimal;
  r["reductions"] = reductions;
  r["warnings"] = warnings;
  r["exit_code"] = out.exit_code;
  return out;
}

Outcome cmd_criterion(const Options& o) {
  const EquationSpec e = equation_from(o);
  Outcome out;
  Json& r = out.report = header("criterion");
  r["input"] = input_json(o);
  const double res = reducibility_residual(e);
  const bool reducible = res <= kReducibleTol;
  r["residual"] = measured(res, kReducibleTol);
  r["reducible"] = reducible;
  if (reducible) {
    const Constantization k = constantize(e, kReducibleTol);
    r["transform"] = k.transform.describe();
    r["A"] = measured(k.A, kReducibleTol);
    r["B"] = measured(k.B, kReducibleTol);
    r["alpha_spread"] = measured(k.alpha_spread, kReducibleTol);
    r["beta_spread"] = measured(k.beta_spread, kReducibleTol);
    r["image"] = {{"alpha", k.image.alpha.describe()},
                  {"beta", k.image.beta.describe()},
                  {"interval", interval_json(k.image.interval)}};
  } else {
    r["transform"] = nullptr;
  }
  r["exit_code"] = out.exit_code;
  return out;
}

Outcome cmd_reduce(const Options& o) {
  if (!o.subalgebra) throw InvariantError("reduce needs --subalgebra NAME[:param]");
  const EquationSpec e = equation_from(o);
  const ClassificationResult c = classify(e, o.tol);
  Outcome out;
  Json& r = out.report = header("reduce");
  r["input"] = input_json(o);
  r["classification"] = classification_json(c);
  if (c.kind == Case::Generic) {
    out.exit_code = kGeneric;
    r["error"] = {{"kind", "generic"}, {"message", "GENERIC equation: no extension of the kernel, nothing to reduce"}};
    r["exit_code"] = out.exit_code;
    return out;
  }
  const auto [name, param] = parse_subalgebra(*o.subalgebra);
  const Subalgebra sub = named_subalgebra(c, e.n, name, param);
  const Reduction red = reduction_for(sub, c, e.n);
  if (!o.ic) throw InvariantError("reduce needs --ic v0,v1,v2,v3,v4");
  r["reduction"] = reduction_json(red);

  const Interval window = c.canonical.interval;
  const EquationSpec reduced_eq = red.equation(window);
  const Trajectory traj = integrate_reduced(red.ode, *o.ic, o.omega_span.lo, o.omega_span.hi, kOdeTol);
  Json tj;
  tj["ic"] = Json::array();
  for (double v : *o.ic) tj["ic"].push_back(v);
  tj["requested_span"] = interval_json(o.omega_span);
  tj["reached_span"] = interval_json(Interval::ordered(traj.start(), traj.end()));
  tj["truncated"] = traj.truncated();
  tj["blow_up"] = traj.truncated();
  tj["steps"] = traj.steps();
  tj["rejected"] = traj.rejected();
  tj["ode_tolerance"] = kOdeTol;
  Json samples = Json::array();
  for (int i = 0; i < kTrajectorySamples; ++i) {
    const double w = traj.start() + (traj.end() - traj.start()) * i / (kTrajectorySamples - 1);
    samples.push_back(Json::array({w, traj(w)[0]}));
  }
  tj["samples"] = samples;
  r["trajectory"] = tj;

  Json lj;
  try {
    const Interval span = Interval::ordered(traj.start(), traj.end());
    const Interval xr = lift_x_range(red, span, window);
    const SolutionField field = lift(red, traj, Rect{window, xr});
    const Grid g{window, xr, o.grid_nt, o.grid_nx};
    const ResidualReport canon = pde_residual(field, reduced_eq, g);
    lj["canonical"] = residual_json(canon, kLiftTol);
    bool passed = canon.max_rel <= kLiftTol;
    if (c.normalizer.is_identity()) {
      out.csv = csv_rows(field, reduced_eq, g);
    } else {
      const SolutionField back = transform_solution(invert(c.normalizer), field, e.n);
      const Rect dom = back.domain();
      const Grid go{intersect(dom.t, e.interval), dom.x, o.grid_nt, o.grid_nx};
      const ResidualReport orig = pde_residual(back, e, go);
      lj["original"] = residual_json(orig, kLiftTol);
      passed = passed && orig.max_rel <= kLiftTol;
      out.csv = csv_rows(back, e, go);
    }
    lj["passed"] = passed;
  } catch (const DomainError& err) {
    lj = {{"error", err.what()}, {"passed", false}};
  }
  r["lift"] = lj;
  r["exit_code"] = out.exit_code;
  return out;
}

Outcome cmd_catalog(const Options& o) {
  const Function alpha{parse(o.alpha)};
  const std::vector<CatalogEntry> entries = exact_catalog(o.n, o.epsilon, alpha, o.t_range);
  Outcome out;
  Json& r = out.report = header("catalog");
  r["input"] = {{"n", o.n}, {"epsilon", o.epsilon}, {"alpha", o.alpha}, {"interval", interval_json(o.t_range)}};
  Json arr = Json::array();
  for (const CatalogEntry& entry : entries) {
    const Interval xr = o.x_range.value_or(entry.x_range);
    arr.push_back(entry_json(entry, {o.t_range, xr, o.grid_nt, o.grid_nx}));
  }
  r["entries"] = arr;
  if (entries.empty()) r["warnings"] = Json::array({"no real closed-form solution for these parameters"});
  r["exit_code"] = out.exit_code;
  return out;
}

Outcome cmd_verify(const Options& o) {
  if (o.solution.empty()) throw InvariantError("verify needs --solution (CSV path or catalog entry name)");
  Outcome out;
  Json& r = out.report = header("verify");
  if (std::filesystem::is_regular_file(o.solution)) {
    const EquationSpec e = equation_from(o);
    r["input"] = input_json(o);
    std::ifstream in(o.solution);
    const SampledField f = read_csv(in);
    const ResidualReport rep = sampled_residual(f, e);
    r["solution"] = {{"source", "csv"}, {"t_samples", f.t.size()}, {"x_samples", f.x.size()}};
    r["residual"] = residual_json(rep, o.tol);
    r["passed"] = rep.max_rel <= o.tol;
  } else {
    const Function alpha{parse(o.alpha)};
    const std::vector<CatalogEntry> entries = exact_catalog(o.n, o.epsilon, alpha, o.t_range);
    const CatalogEntry& entry = find_entry(entries, o.solution);
    r["input"] = {{"n", o.n}, {"epsilon", o.epsilon}, {"alpha", o.alpha}, {"interval", interval_json(o.t_range)}};
    const Interval xr = o.x_range.value_or(entry.x_range);
    const Grid g{o.t_range, xr, o.grid_nt, o.grid_nx};
    r["solution"] = entry_json(entry, g);

    // Symmetry flows on an inner grid so that moved fields still cover it.
    const Grid inner{shrunk(g.t, 0.2), shrunk(g.x, 0.2), o.grid_nt, o.grid_nx};
    const ClassificationResult c = classify(entry.equation);
    Json checks = Json::array();
    bool all = true;
    for (const VectorField& v : symmetry_basis_original(entry.equation, c)) {
      const double eps = flow_step(v, inner.rect());
      const SymmetryCheck sc = symmetry_check(v, entry.field, entry.equation, {-eps, eps}, inner, entry.tolerance);
      Json cj;
      cj["generator"] = v.label + " = " + v.describe();
      cj["baseline"] = measured(sc.baseline.max_rel, entry.tolerance);
      Json flows = Json::array();
      for (std::size_t i = 0; i < sc.eps.size(); ++i)
        flows.push_back({{"eps", sc.eps[i]}, {"max_rel", measured(sc.reports[i].max_rel, sc.threshold)}});
      cj["flows"] = flows;
      cj["threshold"] = sc.threshold;
      cj["passed"] = sc.passed;
      all = all && sc.passed;
      checks.push_back(cj);
    }
    r["symmetry_checks"] = checks;
    r["passed"] = r["solution"]["passed"].get<bool>() && all;
    out.csv = csv_rows(entry.field, entry.equation, g);
  }
  r["exit_code"] = out.exit_code;
  return out;
}

Outcome run_command(const std::string& command, const Options& o) {
  try {
    if (command == "classify") return cmd_classify(o);
    if (command == "criterion") return cmd_criterion(o);
    if (command == "reduce" || command == "solve") return cmd_reduce(o);
    if (command == "catalog") return cmd_catalog(o);
    if (command == "verify") return cmd_verify(o);
    throw InvariantError("unknown command '" + command + "'");
  } catch (const Error& err) {
    Outcome out;
    out.exit_code = kInputError;
    out.report = header(command);
    Json ej;
    const char* kind = "invariant";
    if (dynamic_cast<const ParseError*>(&err)) kind = "parse";
    else if (dynamic_cast<const DomainError*>(&err)) kind = "domain";
    else if (dynamic_cast<const ConvergenceError*>(&err)) kind = "convergence";
    ej["kind"] = kind;
    ej["message"] = err.what();
    if (const auto* pe = dynamic_cast<const ParseError*>(&err)) ej["offset"] = pe->offset();
    out.report["error"] = ej;
    out.report["exit_code"] = out.exit_code;
    return out;
  }
}

}  // namespace fkdv::cli
