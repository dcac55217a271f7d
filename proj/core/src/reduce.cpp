#include "fkdv/reduce.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fkdv/error.hpp"
#include "fkdv/format.hpp"

namespace fkdv {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_integer(double v) { return std::floor(v) == v && std::fabs(v) < 1e15; }

double real_power(double base, double n) {
  if (base < 0.0 && !is_integer(n))
    throw DomainError("phi = " + shortest(base) + " < 0 with non-integer n = " + shortest(n));
  return std::pow(base, n);
}

std::string num(double v) { return shortest(v); }

}  // namespace

double ReducedODE::fifth(double w, const OdeState& y) const {
  return -epsilon * ((real_power(y[0], n) - c_omega * w - c0) * y[1] + c_phi * y[0]);
}

OdeState ReducedODE::rhs(double w, const OdeState& y) const { return {y[1], y[2], y[3], y[4], fifth(w, y)}; }

std::string ReducedODE::describe() const {
  std::string s = num(epsilon) + "*phi''''' + (phi^" + num(n);
  if (c_omega != 0.0) s += " - " + num(c_omega) + "*w";
  if (c0 != 0.0) s += " - " + num(c0);
  s += ")*phi'";
  if (c_phi != 0.0) s += " + " + num(c_phi) + "*phi";
  return s + " = 0";
}

double Reduction::omega(double t, double x) const { return x * eval(s, t) - eval(r, t); }

EquationSpec Reduction::equation(Interval window) const {
  if (!t_domain.contains(window))
    throw DomainError("window [" + num(window.lo) + ", " + num(window.hi) + "] outside the reduction's t-domain");
  return EquationSpec::make(ode.n, Function(), Function(beta), window);
}

std::string Reduction::omega_text() const { return "x*" + print(s) + " - " + print(r); }
std::string Reduction::ansatz_text() const { return "u = " + print(mu) + " * phi(omega)"; }

Reduction reduction_for(const Subalgebra& sub, const ClassificationResult& c, double n) {
  if (sub.name == "g0") throw InvariantError("reduction yields constants only (g0 = <d_x>)");
  const Expr t = Expr::variable();
  const double eps = c.epsilon;
  Reduction red;
  red.sub = sub;
  red.ode.n = n;
  red.ode.epsilon = eps;
  red.t_domain = Interval::whole();
  const Interval positive{0.0, kInf};
  if (sub.name == "g2.1") {
    if (c.kind != Case::Power) throw InvariantError("g2.1 needs the POWER case");
    const double rho = c.rho;
    red.row = 1;
    red.s = pow(t, -(rho + 1) / 5);
    red.r = Expr(0.0);
    red.mu = pow(t, (rho - 4) / (5 * n));
    red.ode.c_omega = (rho + 1) / 5;
    red.ode.c_phi = (rho - 4) / (5 * n);
    red.t_domain = positive;
    red.beta = eps * pow(t, rho);
  } else if (sub.name == "g2.2") {
    if (c.kind != Case::Power) throw InvariantError("g2.2 needs the POWER case");
    const double a = sub.param.value_or(0.0);
    red.row = 2;
    red.s = Expr(1.0);
    red.r = (a / n) * ln(t);
    red.mu = pow(t, -1.0 / n);
    red.ode.c0 = a / n;
    red.ode.c_phi = -1.0 / n;
    red.t_domain = positive;
    red.beta = eps / t;
  } else if (sub.name == "g3") {
    if (c.kind != Case::Exponential) throw InvariantError("g3 needs the EXPONENTIAL case");
    red.row = 3;
    red.s = exp(-0.2 * t);
    red.r = Expr(0.0);
    red.mu = exp(t / (5 * n));
    red.ode.c_omega = 0.2;
    red.ode.c_phi = 1.0 / (5 * n);
    red.beta = eps * exp(t);
  } else if (sub.name == "g4.1") {
    if (c.kind != Case::Constant) throw InvariantError("g4.1 needs the CONSTANT case");
    const double sigma = sub.param.value_or(0.0);
    red.row = 4;
    red.s = Expr(1.0);
    red.r = sigma * t;
    red.mu = Expr(1.0);
    red.ode.c0 = sigma;
    red.beta = Expr(eps);
  } else if (sub.name == "g4.2") {
    if (c.kind != Case::Constant) throw InvariantError("g4.2 needs the CONSTANT case");
    red.row = 5;
    red.s = pow(t, -0.2);
    red.r = Expr(0.0);
    red.mu = pow(t, -4.0 / (5 * n));
    red.ode.c_omega = 0.2;
    red.ode.c_phi = -4.0 / (5 * n);
    red.t_domain = positive;
    red.beta = Expr(eps);
  } else {
    throw InvariantError("no similarity reduction for subalgebra " + sub.name);
  }
  return red;
}

Trajectory integrate_reduced(const ReducedODE& ode, const OdeState& ic, double w0, double w1, double tol,
                             double overflow) {
  OdeOptions opt;
  opt.rtol = tol;
  opt.atol = tol * 1e-2;
  opt.overflow = overflow;
  if (!is_integer(ode.n) && !(ic[0] > 0.0))
    throw DomainError("non-integer n needs phi > 0 (initial phi = " + shortest(ic[0]) + ")");
  return integrate_dopri5([&ode](double w, const OdeState& y) { return ode.rhs(w, y); }, w0, w1, ic, opt);
}

Interval lift_x_range(const Reduction& r, Interval span, Interval window) {
  constexpr int kSamples = 65;
  Interval x = Interval::whole();
  for (int i = 0; i < kSamples; ++i) {
    const double t = window.sample(i, kSamples);
    const double s = eval(r.s, t), rr = eval(r.r, t);
    const Interval xi = Interval::ordered((span.lo + rr) / s, (span.hi + rr) / s);
    x.lo = std::max(x.lo, xi.lo);
    x.hi = std::min(x.hi, xi.hi);
  }
  if (!(x.lo < x.hi)) throw DomainError("no x-range keeps omega inside the trajectory span over the window");
  return x;
}

SolutionField lift(const Reduction& r, const Trajectory& traj, const Rect& rect) {
  if (!r.t_domain.contains(rect.t)) throw DomainError("lift rectangle leaves the reduction's t-domain");
  const Interval span = Interval::ordered(traj.start(), traj.end());
  const double slack = 1e-12 * (1.0 + span.width());
  constexpr int kSamples = 65;
  for (int i = 0; i < kSamples; ++i) {
    const double t = rect.t.sample(i, kSamples);
    for (double x : {rect.x.lo, rect.x.hi}) {
      const double w = r.omega(t, x);
      if (w < span.lo - slack || w > span.hi + slack)
        throw DomainError("lift rectangle maps to omega = " + shortest(w) + " outside the trajectory span [" +
                          shortest(span.lo) + ", " + shortest(span.hi) + "]");
    }
  }
  const Reduction red = r;
  const Trajectory tr = traj;
  return SolutionField::analytic(
      [red, tr](double t, double x) {
        const Taylor mu = eval_jet(red.mu, t, 1), s = eval_jet(red.s, t, 1), rr = eval_jet(red.r, t, 1);
        const double w = x * s[0] - rr[0];
        const OdeState y = tr(w);
        const double phi5 = red.ode.fifth(w, y);
        FieldJet j;
        double sk = mu[0];
        for (int k = 0; k <= 5; ++k) {
          j.ux[k] = sk * (k < 5 ? y[k] : phi5);
          sk *= s[0];
        }
        j.u = j.ux[0];
        j.ut = mu[1] * y[0] + mu[0] * y[1] * (x * s[1] - rr[1]);
        return j;
      },
      rect, Provenance::Lifted,
      "row " + std::to_string(r.row) + " lift, omega = " + r.omega_text() + ", " + r.ansatz_text());
}

std::optional<double> stationary_constant(double n, int epsilon) {
  const double base = -8.0 * epsilon * (n + 1) * (n + 2) * (n + 4) * (3 * n + 4);
  if (base > 0.0) return std::pow(base, 1.0 / n);
  if (base < 0.0 && is_integer(n) && static_cast<long long>(n) % 2 != 0) return -std::pow(-base, 1.0 / n);
  return std::nullopt;
}

std::vector<CatalogEntry> exact_catalog(double n, int epsilon, const Function& alpha, Interval window) {
  if (epsilon != 1 && epsilon != -1) throw InvariantError("epsilon must be +1 or -1");
  const Expr t = Expr::variable();
  std::vector<CatalogEntry> out;
  const bool lifted = !alpha.is_zero();
  const double t0 = window.lo;

  Function A;
  if (lifted) {
    if (const Expr* a = alpha.expr(); a && is_constant_expr(*a))
      A = Function(eval(*a, t0) * (t - t0));
    else
      A = antiderivative_function(alpha, t0, window);
  }
  const Function lifted_beta =
      lifted ? Function(static_cast<double>(epsilon)) * exp(Function(-n) * A) : Function(static_cast<double>(epsilon));
  const EquationSpec plain = EquationSpec::make(n, Function(), Function(static_cast<double>(epsilon)), window);
  const EquationSpec with_alpha = lifted ? EquationSpec::make(n, alpha, lifted_beta, window) : plain;

  const Interval stationary_x = n > 0 ? Interval{0.5, 3.0} : Interval{-3.0, -0.5};
  if (auto C = stationary_constant(n, epsilon)) {
    const double c = *C;
    const double p = -4.0 / n;
    // (n x)^{-4/n} is real for n x > 0.
    const Interval xdom = n > 0 ? Interval{std::numeric_limits<double>::min(), kInf}
                                : Interval{-kInf, -std::numeric_limits<double>::min()};
    auto spatial = [c, n, p](double x) {
      const Taylor X = Taylor::variable(x, 5) * n;
      return c * pow(X, p);
    };
    const std::string desc = shortest(c) + "*(" + shortest(n) + "x)^(" + shortest(p) + ")";
    out.push_back({"stationary",
                   SolutionField::analytic(
                       [spatial](double, double x) {
                         const Taylor f = spatial(x);
                         FieldJet j;
                         for (int k = 0; k <= 5; ++k) j.ux[k] = f.derivative(k);
                         j.u = j.ux[0];
                         return j;
                       },
                       Rect{window, xdom}, Provenance::Exact, "u = " + desc),
                   plain, 1e-9, stationary_x});
    if (lifted) {
      out.push_back({"stationary-lifted",
                     SolutionField::analytic(
                         [spatial, A, alpha](double tt, double x) {
                           const Taylor f = spatial(x);
                           const double damp = std::exp(-A(tt));
                           FieldJet j;
                           for (int k = 0; k <= 5; ++k) j.ux[k] = damp * f.derivative(k);
                           j.u = j.ux[0];
                           j.ut = -alpha(tt) * j.u;
                           return j;
                         },
                         Rect{window, xdom}, Provenance::Exact, "u = " + desc + "*exp(-int alpha)"),
                     with_alpha, 1e-8, stationary_x});
    }
  }

  if (n == 2.0 && epsilon == -1) {
    const double amp = 2.0 * std::sqrt(10.0);
    const double speed = 24.0 * epsilon;
    const TimeMap T = lifted ? gauge_time_map(alpha, 2.0, window) : TimeMap::identity();
    // The crest sits at x = 24 T(t).
    const Interval Ti = T.image(window);
    const Interval plain_x{-speed * window.lo - 4.0, -speed * window.hi + 4.0};
    const Interval lifted_x{-speed * Ti.lo - 4.0, -speed * Ti.hi + 4.0};
    for (int sign : {1, -1}) {
      const double a = sign * amp;
      auto profile = [a](double w) {
        const Taylor th = tanh(Taylor::variable(w, 6));
        return a * (3.0 * th * th - 2.0);
      };
      const std::string sname = sign > 0 ? "+" : "-";
      out.push_back({"travelling-wave" + sname,
                     SolutionField::analytic(
                         [profile, speed](double tt, double x) {
                           const Taylor f = profile(x + speed * tt);
                           FieldJet j;
                           for (int k = 0; k <= 5; ++k) j.ux[k] = f.derivative(k);
                           j.u = j.ux[0];
                           j.ut = speed * f.derivative(1);
                           return j;
                         },
                         Rect{window, Interval::whole()}, Provenance::Exact,
                         "u = " + sname + "2sqrt(10)(3tanh^2(x " + (speed < 0 ? "- " : "+ ") +
                             shortest(std::fabs(speed)) + "t) - 2)"),
                     plain, 1e-9, plain_x});
      if (lifted) {
        out.push_back({"travelling-wave-lifted" + sname,
                       SolutionField::analytic(
                           [profile, speed, T, A, alpha](double tt, double x) {
                             const Taylor Tj = T.jet(tt, 1);
                             const Taylor f = profile(x + speed * Tj[0]);
                             const double damp = std::exp(-A(tt));
                             FieldJet j;
                             for (int k = 0; k <= 5; ++k) j.ux[k] = damp * f.derivative(k);
                             j.u = j.ux[0];
                             j.ut = damp * speed * Tj[1] * f.derivative(1) - alpha(tt) * j.u;
                             return j;
                           },
                           Rect{window, Interval::whole()}, Provenance::Exact,
                           "u = " + sname + "2sqrt(10)(3tanh^2(x - 24 T(t)) - 2) exp(-int alpha), T = " +
                               T.describe()),
                       with_alpha, 1e-8, lifted_x});
      }
    }
  }
  return out;
}

}  // namespace fkdv
