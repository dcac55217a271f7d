#pragma once

// Scalar expressions in the single independent variable t.
//
// Grammar accepted by parse():
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := ("-")? base ("^" factor)?
//   base   := number | "t" | "(" expr ")" | ident "(" expr ")"
//   ident  := exp | ln | sin | cos | tanh | sqrt | abs

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "fkdv/taylor.hpp"

namespace fkdv {

enum class Op {
  Constant,
  Variable,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Neg,
  Exp,
  Ln,
  Sin,
  Cos,
  Tanh,
  Sqrt,
  Abs,
};

int arity(Op op);
const char* op_name(Op op);

/// Immutable expression tree. Copies share structure.
class Expr {
 public:
  /// The constant 0.
  Expr();
  /// A constant. Implicit so that `2.0 * t` reads naturally.
  Expr(double value);  // NOLINT(google-explicit-constructor)

  static Expr variable();
  /// Builds a node verbatim, without any simplification.
  static Expr node(Op op, Expr a);
  static Expr node(Op op, Expr a, Expr b);

  Op op() const;
  /// Value of a Constant node; 0 for other kinds.
  double constant_value() const;
  const Expr& child(int i) const;
  int child_count() const;

  bool is_constant() const { return op() == Op::Constant; }
  bool is_constant(double v) const { return is_constant() && constant_value() == v; }
  bool is_zero() const { return is_constant(0.0); }

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Simplifying constructors: constant folding and the 0/1 identities only.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, const Expr& exponent);
Expr exp(const Expr& a);
Expr ln(const Expr& a);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr tanh(const Expr& a);
Expr sqrt(const Expr& a);
Expr abs(const Expr& a);
Expr apply(Op unary, const Expr& a);

Expr parse(std::string_view text);

/// Fully parenthesised text that parses back to the same tree.
std::string print(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

/// Throws DomainError naming the offending subexpression.
double eval(const Expr& e, double t);

/// Taylor jet of e at t of the given order; same domain rules as eval().
Taylor eval_jet(const Expr& e, double t, int order);

Expr differentiate(const Expr& e);
Expr differentiate(const Expr& e, int times);

/// e with every occurrence of t replaced by `replacement`.
Expr substitute(const Expr& e, const Expr& replacement);

/// True if e contains no Variable node.
bool is_constant_expr(const Expr& e);

/// Definite integral of e over [t0, t] by adaptive Gauss-Kronrod quadrature.
double antiderivative(const Expr& e, double t0, double t, double tol = 1e-12);

}  // namespace fkdv
