// End-to-end acceptance checks. One PASS/FAIL line per criterion; the exit
// status is nonzero when any criterion fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "fkdv/algebra.hpp"
#include "fkdv/classify.hpp"
#include "fkdv/error.hpp"
#include "fkdv/gauge.hpp"
#include "fkdv/reduce.hpp"
#include "fkdv/verify.hpp"

using namespace fkdv;

namespace {

struct Verdict {
  bool passed = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail << " [failed: " << what << "]";
    }
  }
};

EquationSpec eq(double n, const char* alpha, const char* beta, Interval I = {1, 2}) {
  return EquationSpec::make(n, Function(parse(alpha)), Function(parse(beta)), I);
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

// 1. Canonical beta0 -> random restricted transform -> random gauge -> classify.
void classification_round_trip(Verdict& v) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> mag(0.5, 2.0), shift(-1.0, 1.0), rho_dist(-3.0, 3.0);
  std::uniform_int_distribution<int> sign(0, 1), kind(0, 3), alpha_kind(0, 2), n_kind(0, 3);
  const std::array<double, 4> ns{2.0, 3.0, 2.5, -1.5};
  const std::array<const char*, 3> alphas{"0.4", "1/t", "sin(t)+2"};
  int agree = 0, total = 0;
  double worst_rho = 0.0;
  while (total < 100) {
    const double n = ns[n_kind(rng)];
    Case expected;
    Expr beta0;
    std::optional<double> rho;
    const Expr t = Expr::variable();
    switch (kind(rng)) {
      case 0: {
        double r = rho_dist(rng);
        if (std::fabs(r) < 0.05 || std::fabs(r + 1) < 0.05) r = 1.7;
        beta0 = pow(t, r);
        expected = Case::Power;
        rho = r;
        break;
      }
      case 1:
        beta0 = pow(t, -1.0);
        expected = Case::Power;
        rho = -1.0;
        break;
      case 2:
        beta0 = exp(t);
        expected = Case::Exponential;
        break;
      default:
        beta0 = Expr(1.0);
        expected = Case::Constant;
        break;
    }
    const Function alpha(parse(alphas[alpha_kind(rng)]));
    const Interval window{1, 2};
    const Interval img = gauge_time_map(alpha, n, window).image(window);
    const Interval target{img.lo - 0.01 * img.width(), img.hi + 0.01 * img.width()};
    // Restricted transform t~ = d3 t + d4 taking I0 = [a, a + w/|d3|] onto target.
    const double d3 = (sign(rng) ? 1.0 : -1.0) * mag(rng);
    const double a = 0.5 + mag(rng);
    const Interval I0{a, a + target.width() / std::fabs(d3)};
    const double d4 = d3 > 0 ? target.lo - d3 * I0.lo : target.lo - d3 * I0.hi;
    const double d1 = (d3 > 0 ? 1.0 : -1.0) * mag(rng);
    const EquationSpec base = EquationSpec::make(n, Function(), Function(beta0), I0);
    const EquationSpec gauged = apply_equiv(EquivTransform::restricted(d1, shift(rng), d3, d4), base);
    const EquationSpec e = attach_alpha(gauged, alpha, window);
    const ClassificationResult c = classify(e);
    ++total;
    bool ok = c.kind == expected;
    if (ok && rho) {
      worst_rho = std::fmax(worst_rho, std::fabs(c.rho - *rho));
      ok = std::fabs(c.rho - *rho) <= 1e-6;
    }
    agree += ok;
  }
  v.detail << agree << "/" << total << " instances agree, worst |rho error| " << sci(worst_rho);
  v.require(agree == total, "case label or rho mismatch");
}

// 2. The reducibility criterion.
void reducibility(Verdict& v) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mag(0.5, 2.0), c(-2.0, 2.0), shift(-1.0, 1.0);
  std::uniform_int_distribution<int> kind(0, 3), sgn(0, 1);
  double worst = 0.0;
  int built = 0;
  for (int i = 0; i < 80 && built < 50; ++i) {
    const double s = sgn(rng) ? 1.0 : -1.0;
    TimeMap T;
    switch (kind(rng)) {
      case 0: T = TimeMap::affine(s * mag(rng), shift(rng)); break;
      case 1: T = TimeMap::exponential(s * mag(rng), sgn(rng) ? mag(rng) : -mag(rng), shift(rng)); break;
      case 2: T = TimeMap::power(s * mag(rng), sgn(rng) ? mag(rng) : -mag(rng), shift(rng)); break;
      default: T = TimeMap::logarithmic(s * mag(rng), shift(rng)); break;
    }
    const double d1 = (T.jet(1.5, 1)[1] > 0 ? 1.0 : -1.0) * mag(rng);
    const EquationSpec base = EquationSpec::make(2 + i % 3, Function(c(rng)), Function(sgn(rng) ? 1.5 : -0.5), {1, 2});
    EquationSpec img;
    try {
      img = apply_equiv(EquivTransform(T, d1, shift(rng)), base);
    } catch (const InvariantError&) {
      continue;  // orientation not preserved on the whole interval
    }
    worst = std::fmax(worst, reducibility_residual(img));
    ++built;
  }
  v.require(built >= 40, "too few transformed instances");
  v.require(worst <= 1e-10, "transformed constant-coefficient equation not flagged");

  double least = 1e300;
  for (double rho : {-3.0, -2.0, -0.5, 0.5, 1.0, 2.0, 3.0, 1.7}) {
    const EquationSpec e = EquationSpec::make(2, Function(), Function(pow(Expr::variable(), rho)), {1, 2});
    least = std::fmin(least, reducibility_residual(e));
  }
  v.require(least >= 1e-2, "a power law was flagged reducible");

  const EquationSpec inv = eq(2, "0", "1/t");
  const Constantization k = constantize(inv);
  // Independent check of the output coefficients.
  const EquationSpec out = apply_equiv(k.transform, inv);
  double spread = 0.0;
  for (int i = 0; i < 33; ++i) {
    const double s = out.interval.sample(i, 33);
    spread = std::fmax(spread, std::fabs(out.alpha(s) - k.A) + std::fabs(out.beta(s) - k.B));
  }
  v.require(reducibility_residual(inv) <= 1e-10, "1/t not flagged reducible");
  v.require(spread <= 1e-8, "constantized coefficients are not constant");
  v.detail << built << " transformed instances, max residual " << sci(worst) << "; power laws min " << sci(least)
           << "; 1/t -> " << k.transform.time().describe() << ", coefficient spread " << sci(spread);
}

// 3. Closed-form solutions.
void exact_solutions(Verdict& v) {
  const auto entries = exact_catalog(2, -1);
  bool have_stationary = false, have_wave = false;
  double worst = 0.0;
  for (const auto& e : entries) {
    const double r = pde_residual(e.field, e.equation, {e.equation.interval, e.x_range, 40, 40}).max_rel;
    worst = std::fmax(worst, r);
    if (e.name == "stationary") {
      have_stationary = true;
      for (double x : {0.7, 1.3, 2.9})
        v.require(std::fabs(e.field(1.5, x) - 6 * std::sqrt(10.0) / (x * x)) <= 1e-12 * e.field(1.5, x),
                  "stationary profile is not 6 sqrt(10) x^-2");
    }
    if (e.name == "travelling-wave+") {
      have_wave = true;
      for (double x : {25.0, 36.0, 47.0}) {
        const double th = std::tanh(x - 24 * 1.5);
        v.require(std::fabs(e.field(1.5, x) - 2 * std::sqrt(10.0) * (3 * th * th - 2)) <= 1e-12, "wave profile");
      }
    }
  }
  v.require(have_stationary && have_wave, "catalog entries missing");
  v.require(worst <= 1e-9, "exact residual above 1e-9");
  double worst_lifted = 0.0;
  int lifted = 0;
  for (const char* alpha : {"0.3", "1/t"}) {
    for (const auto& e : exact_catalog(2, -1, Function(parse(alpha)))) {
      if (e.name.find("lifted") == std::string::npos) continue;
      ++lifted;
      worst_lifted = std::fmax(
          worst_lifted, pde_residual(e.field, e.equation, {e.equation.interval, e.x_range, 40, 40}).max_rel);
    }
  }
  v.require(lifted == 6, "lifted entries missing");
  v.require(worst_lifted <= 1e-8, "lifted residual above 1e-8");
  v.detail << "plain max " << sci(worst) << ", alpha-lifted (0.3, 1/t) max " << sci(worst_lifted);
}

struct RowRun {
  const char* label;
  double n;
  const char* beta;
  const char* sub;
  std::optional<double> param;
  OdeState ic;
  Interval span;
};

const std::vector<RowRun>& row_runs() {
  static const std::vector<RowRun> runs{
      {"row 1", 2.0, "t^2", "g2.1", std::nullopt, {0.5, 0.1, 0.0, 0.0, 0.0}, {0.0, 1.0}},
      {"row 2", 3.0, "-1/t", "g2.2", 0.7, {0.4, -0.1, 0.2, 0.0, 0.1}, {-1.0, 1.0}},
      {"row 3", 2.5, "exp(t)", "g3", std::nullopt, {1.0, 0.2, 0.0, -0.1, 0.0}, {0.0, 1.0}},
      {"row 4", 2.0, "-1", "g4.1", 1.0,
       {-2.5819888974716116, 0.0, 1.5811388300841902, 0.0, -2.5819888974716125}, {-3.0, 3.0}},
      {"row 5", 2.0, "-1", "g4.2", std::nullopt, {0.2, 0.3, 0.0, 0.0, 0.1}, {0.0, 1.2}},
  };
  return runs;
}

struct Lifted {
  ClassificationResult c;
  Reduction red;
  SolutionField u;
  EquationSpec e;
  double residual;
};

Lifted lift_row(const RowRun& r) {
  const EquationSpec input = eq(r.n, "0", r.beta);
  const ClassificationResult c = classify(input);
  const Reduction red = reduction_for(named_subalgebra(c, r.n, r.sub, r.param), c, r.n);
  const Trajectory tr = integrate_reduced(red.ode, r.ic, r.span.lo, r.span.hi, 1e-10);
  const Interval window{1, 2};
  const Rect rect{window, lift_x_range(red, r.span, window)};
  const SolutionField u = lift(red, tr, rect);
  const EquationSpec e = red.equation(window);
  return {c, red, u, e, pde_residual(u, e, {window, rect.x, 40, 40}).max_rel};
}

// 4. Every reduction row integrates and lifts.
void table_rows(Verdict& v) {
  const char* sep = "";
  for (const RowRun& r : row_runs()) {
    const Lifted l = lift_row(r);
    v.detail << sep << r.label << " " << sci(l.residual);
    sep = ", ";
    v.require(l.residual <= 1e-6, std::string(r.label) + " residual above 1e-6");
  }
}

// 5. Structure constants.
void algebras(Verdict& v) {
  const auto check = [&v](const char* name, const EquationSpec& e, const std::string& label) {
    const ClassificationResult c = classify(e);
    const StructureConstants s = structure_constants(symmetry_basis(c, e.n));
    const AlgebraType a = identify_algebra(s);
    v.require(a.label == label, std::string(name) + " gives " + a.label);
    v.require(s.antisymmetry_defect() <= 1e-12, std::string(name) + " antisymmetry");
    v.require(s.jacobi_defect() <= 1e-12, std::string(name) + " Jacobi");
    return a;
  };
  check("case 2 rho=-1", eq(2, "0", "1/t"), "2A1");
  for (const char* beta : {"t^2", "-t^(-3)", "t^0.5"}) check("case 2", eq(2, "0", beta), "A2");
  check("case 3", eq(3, "0", "exp(t)"), "A2");
  double worst_a = 0.0;
  for (double n : {2.0, 3.0, 0.5, -1.5}) {
    const AlgebraType a = check("case 4", EquationSpec::make(n, Function(), Function(-1.0), {1, 2}), "A3.5");
    if (!a.a) {
      v.require(false, "case 4 without parameter");
      continue;
    }
    worst_a = std::fmax(worst_a, std::fabs(*a.a - 0.2));
  }
  v.require(worst_a <= 1e-12, "a != 1/5");
  v.detail << "2A1, A2 (case 2 and 3), A3.5 with |a - 1/5| <= " << sci(worst_a);
}

// 6. Flows of the generators.
void flows(Verdict& v) {
  struct Subject {
    std::string name;
    SolutionField u;
    EquationSpec e;
    ClassificationResult c;
    Rect rect;
  };
  std::vector<Subject> subjects;
  const auto inner = [](const Rect& r) {
    return Rect{{1.2, 1.8}, {r.x.lo + 0.2 * r.x.width(), r.x.hi - 0.2 * r.x.width()}};
  };
  {
    const auto w = exact_catalog(2, -1)[1];
    subjects.push_back({"case 4 wave", w.field, w.equation, classify(w.equation), {{1.2, 1.8}, {30, 42}}});
    const auto st = exact_catalog(2, -1)[0];
    subjects.push_back({"case 4 stationary", st.field, st.equation, classify(st.equation), inner({{1, 2}, st.x_range})});
  }
  for (const RowRun& r : row_runs()) {
    const Lifted l = lift_row(r);
    subjects.push_back({std::string(r.label) + " lift", l.u, l.e, l.c, inner(l.u.domain())});
  }
  double worst_ratio = 0.0;
  int generators = 0;
  for (const Subject& s : subjects) {
    const Grid g{s.rect.t, s.rect.x, 16, 16};
    const double base = pde_residual(s.u, s.e, g).max_rel;
    const double floor = std::fmax(base, 1e-15);  // round-off level of an exact field
    for (const VectorField& gen : symmetry_basis(s.c, s.e.n)) {
      const double h = flow_step(gen, s.rect);
      for (double eps : {-h, h}) {
        const double r = pde_residual(flow_transform(gen, eps, s.u), s.e, g).max_rel;
        worst_ratio = std::fmax(worst_ratio, r / floor);
        v.require(r <= 10 * floor, s.name + ": " + gen.describe() + " raised the residual to " + sci(r));
      }
      ++generators;
    }
  }
  // Negative control: d_t on a power-law equation.
  const Lifted l = lift_row(row_runs()[0]);
  const Rect r = inner(l.u.domain());
  const double neg = pde_residual(flow_transform(VectorField::d_t(), 0.15, l.u), l.e, {r.t, r.x, 16, 16}).max_rel;
  v.require(neg >= 1e-2, "d_t left a case 2 solution a solution");
  v.detail << generators << " generators on " << subjects.size() << " solutions, worst residual ratio "
           << sci(worst_ratio) << "; d_t on case 2 gives " << sci(neg);
}

struct Run {
  int code;
  std::string out;
};

Run run_cli(const std::string& args) {
  FILE* p = popen((std::string(FKDV5_CLI_PATH) + " " + args + " 2>/dev/null").c_str(), "r");
  if (!p) throw Error("cannot start the CLI");
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t k = std::fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), k);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

// 7. Determinism of the reports.
void determinism(Verdict& v) {
  const std::vector<std::string> commands{
      "classify --n 2 --alpha 0 --beta 't^2'",
      "classify --n 3 --alpha 'sin(t)+2' --beta 1",
      "criterion --n 2 --beta '1/t'",
      "reduce --n 2 --beta -1 --subalgebra g4.1:1 --omega-span -3:3 "
      "--ic=-2.5819888974716116,0,1.5811388300841902,0,-2.5819888974716125",
      "catalog --n 2 --epsilon -1 --alpha '1/t'",
      "verify --n 2 --beta -1 --solution travelling-wave-",
  };
  int same = 0;
  for (const auto& c : commands) {
    const Run a = run_cli(c), b = run_cli(c);
    const bool ok = !a.out.empty() && a.out == b.out && a.code == b.code;
    same += ok;
    v.require(ok, "differs: " + c);
  }
  v.detail << same << "/" << commands.size() << " commands byte-identical across runs";
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Verdict&)>>> criteria{
      {"classification round trip", classification_round_trip},
      {"reducibility criterion", reducibility},
      {"exact solutions", exact_solutions},
      {"reduction rows", table_rows},
      {"algebra structure", algebras},
      {"symmetry flows", flows},
      {"determinism", determinism},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    try {
      fn(v);
    } catch (const std::exception& e) {
      v.passed = false;
      v.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > 10.0) {
      v.passed = false;
      v.detail << " [took " << secs << " s]";
    }
    failed += !v.passed;
    std::printf("%s %d %s: %s (%.2f s)\n", v.passed ? "PASS" : "FAIL", index, name, v.detail.str().c_str(), secs);
  }
  return failed == 0 ? 0 : 1;
}
