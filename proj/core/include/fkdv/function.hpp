#pragma once

// Smooth functions of t with exact derivatives of every order.
//
// A Function is either symbolic (backed by an Expr) or numeric (backed by a
// jet evaluator, e.g. a quadrature-backed antiderivative or a coefficient
// pulled back through a numeric time map). Both kinds expose Taylor jets, so
// downstream code never needs finite differences in t.

#include <functional>
#include <limits>
#include <memory>
#include <string>

#include "fkdv/expr.hpp"
#include "fkdv/taylor.hpp"

namespace fkdv {

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  static Interval whole() { return {}; }
  static Interval ordered(double a, double b) { return a <= b ? Interval{a, b} : Interval{b, a}; }

  bool bounded() const { return lo > -std::numeric_limits<double>::infinity() && hi < std::numeric_limits<double>::infinity(); }
  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double t) const { return t >= lo && t <= hi; }
  bool contains(const Interval& o) const { return o.lo >= lo && o.hi <= hi; }
  /// Sample point i of n uniformly spaced points including both end points.
  double sample(int i, int n) const { return n <= 1 ? mid() : lo + (hi - lo) * i / (n - 1); }
};

using JetEvaluator = std::function<Taylor(double t, int order)>;

class Function {
 public:
  /// The zero function.
  Function();
  Function(Expr e);    // NOLINT(google-explicit-constructor)
  Function(double c);  // NOLINT(google-explicit-constructor)

  static Function numeric(JetEvaluator jet, std::string description);

  double operator()(double t) const;
  Taylor jet(double t, int order) const;
  /// k-th derivative at t.
  double derivative(double t, int k) const;

  bool is_symbolic() const;
  /// The backing expression, or nullptr for numeric functions.
  const Expr* expr() const;
  /// Structurally zero (symbolic constant 0).
  bool is_zero() const;
  std::string describe() const;

  struct Impl;

 private:
  std::shared_ptr<const Impl> impl_;
};

Function operator+(const Function& a, const Function& b);
Function operator-(const Function& a, const Function& b);
Function operator*(const Function& a, const Function& b);
Function operator/(const Function& a, const Function& b);
Function operator-(const Function& a);
Function exp(const Function& a);
Function derivative(const Function& f);

/// F(t) = integral of f from t0 to t on `domain`, evaluated from a cache of
/// node values so that each call integrates over one short subinterval only.
Function antiderivative_function(const Function& f, double t0, Interval domain,
                                 double tol = 1e-13, int nodes = 64);

}  // namespace fkdv
