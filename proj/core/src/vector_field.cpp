#include "fkdv/vector_field.hpp"

#include <cmath>

#include "fkdv/error.hpp"
#include "fkdv/format.hpp"

namespace fkdv {
namespace {

std::optional<double> constant_of(const Function& f) {
  const Expr* e = f.expr();
  if (!e || !is_constant_expr(*e)) return std::nullopt;
  return eval(*e, 0.0);
}

Function time_function(const TimeMap& T) {
  if (const Expr* e = T.expr()) return Function(*e);
  return Function::numeric([T](double t, int k) { return T.jet(t, k); }, T.describe());
}

std::string linear(double slope, const char* var, double offset) {
  std::string s;
  auto add = [&s](double c, const std::string& what) {
    if (c == 0.0) return;
    if (s.empty()) s = c < 0 ? "-" : "";
    else s += c < 0 ? " - " : " + ";
    const double m = std::fabs(c);
    s += (m == 1.0 && !what.empty()) ? what : shortest(m) + what;
  };
  add(slope, var);
  add(offset, "");
  return s.empty() ? "0" : s;
}

}  // namespace

VectorField VectorField::affine(const AffineGenerator& g, std::string label) {
  const Expr t = Expr::variable();
  VectorField v;
  v.tau = Function(g.tau0 + g.tau1 * t);
  v.xi_x = Function(g.a);
  v.xi_0 = Function(g.b);
  v.eta_u = Function(g.c);
  v.label = std::move(label);
  return v;
}

std::optional<AffineGenerator> VectorField::as_affine() const {
  const auto a = constant_of(xi_x);
  const auto b = constant_of(xi_0);
  const auto c = constant_of(eta_u);
  const Expr* e = tau.expr();
  if (!a || !b || !c || !e) return std::nullopt;
  const Expr d1 = differentiate(*e);
  if (!is_constant_expr(d1)) return std::nullopt;
  AffineGenerator g;
  g.tau1 = eval(d1, 0.0);
  g.tau0 = eval(*e, 0.0);
  g.a = *a;
  g.b = *b;
  g.c = *c;
  return g;
}

VectorField::Values VectorField::at(double t) const { return {tau(t), xi_x(t), xi_0(t), eta_u(t)}; }

std::string VectorField::describe() const {
  if (auto g = as_affine()) {
    std::string s;
    auto part = [&s](const std::string& coef, const char* op) {
      if (coef == "0") return;
      if (!s.empty()) s += " + ";
      s += coef == "1" ? std::string(op) : "(" + coef + ")" + op;
    };
    part(linear(g->tau1, "t", g->tau0), "d_t");
    part(linear(g->a, "x", g->b), "d_x");
    part(linear(0.0, "", g->c), "u d_u");
    return s.empty() ? "0" : s;
  }
  return "(" + tau.describe() + ")d_t + ((" + xi_x.describe() + ")x + " + xi_0.describe() + ")d_x + (" +
         eta_u.describe() + ")u d_u";
}

VectorField operator*(double s, const VectorField& v) {
  VectorField w;
  w.tau = Function(s) * v.tau;
  w.xi_x = Function(s) * v.xi_x;
  w.xi_0 = Function(s) * v.xi_0;
  w.eta_u = Function(s) * v.eta_u;
  w.label = v.label;
  if (v.frame) {
    auto f = std::make_shared<Frame>(*v.frame);
    f->canonical = {s * f->canonical.tau0, s * f->canonical.tau1, s * f->canonical.a, s * f->canonical.b,
                    s * f->canonical.c};
    w.frame = std::move(f);
  }
  return w;
}

VectorField operator+(const VectorField& v, const VectorField& w) {
  VectorField r;
  r.tau = v.tau + w.tau;
  r.xi_x = v.xi_x + w.xi_x;
  r.xi_0 = v.xi_0 + w.xi_0;
  r.eta_u = v.eta_u + w.eta_u;
  if (v.frame && w.frame && v.frame->normalizer.describe() == w.frame->normalizer.describe() &&
      v.frame->n == w.frame->n) {
    auto f = std::make_shared<Frame>(*v.frame);
    const AffineGenerator& p = v.frame->canonical;
    const AffineGenerator& q = w.frame->canonical;
    f->canonical = {p.tau0 + q.tau0, p.tau1 + q.tau1, p.a + q.a, p.b + q.b, p.c + q.c};
    r.frame = std::move(f);
  }
  return r;
}

VectorField conjugate(const AffineGenerator& g, const EquivTransform& N, double n, std::string label) {
  if (N.is_identity()) {
    VectorField v = VectorField::affine(g, std::move(label));
    return v;
  }
  Function T = time_function(N.time()), T1, T2;
  if (T.is_symbolic()) {
    T1 = derivative(T);
    T2 = derivative(T1);
  } else {
    // Numeric maps print as T, T', T'' (the map itself is described by the frame).
    const TimeMap map = N.time();
    auto shifted = [map](int d) {
      return [map, d](double t, int k) {
        Taylor j = map.jet(t, k + d);
        for (int i = 0; i < d; ++i) j = differentiate(j);
        return j;
      };
    };
    T = Function::numeric(shifted(0), "T");
    T1 = Function::numeric(shifted(1), "T'");
    T2 = Function::numeric(shifted(2), "T''");
  }
  VectorField v;
  v.tau = (Function(g.tau0) + Function(g.tau1) * T) / T1;
  v.xi_x = Function(g.a);
  v.xi_0 = Function((g.a * N.delta2() + g.b) / N.delta1());
  v.eta_u = Function(g.c) + T2 / T1 * v.tau / Function(n);
  v.label = std::move(label);
  v.frame = std::make_shared<const Frame>(Frame{g, N, n});
  return v;
}

}  // namespace fkdv
