#include "fkdv/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <optional>

#include "fkdv/error.hpp"
#include "fkdv/quadrature.hpp"

namespace fkdv {

struct Expr::Node {
  Op op;
  double value = 0.0;
  std::vector<Expr> children;
};

int arity(Op op) {
  switch (op) {
    case Op::Constant:
    case Op::Variable:
      return 0;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
    case Op::Pow:
      return 2;
    default:
      return 1;
  }
}

const char* op_name(Op op) {
  switch (op) {
    case Op::Constant: return "const";
    case Op::Variable: return "t";
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Pow: return "^";
    case Op::Neg: return "neg";
    case Op::Exp: return "exp";
    case Op::Ln: return "ln";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Tanh: return "tanh";
    case Op::Sqrt: return "sqrt";
    case Op::Abs: return "abs";
  }
  return "?";
}

Expr::Expr() : Expr(0.0) {}

Expr::Expr(double value) : node_(std::make_shared<const Node>(Node{Op::Constant, value, {}})) {}

Expr Expr::variable() {
  static const Expr t{std::make_shared<const Node>(Node{Op::Variable, 0.0, {}})};
  return t;
}

Expr Expr::node(Op op, Expr a) {
  if (arity(op) != 1) throw InvariantError(std::string("operator ") + op_name(op) + " is not unary");
  return Expr{std::make_shared<const Node>(Node{op, 0.0, {std::move(a)}})};
}

Expr Expr::node(Op op, Expr a, Expr b) {
  if (arity(op) != 2) throw InvariantError(std::string("operator ") + op_name(op) + " is not binary");
  return Expr{std::make_shared<const Node>(Node{op, 0.0, {std::move(a), std::move(b)}})};
}

Op Expr::op() const { return node_->op; }
double Expr::constant_value() const { return node_->op == Op::Constant ? node_->value : 0.0; }
const Expr& Expr::child(int i) const { return node_->children.at(static_cast<std::size_t>(i)); }
int Expr::child_count() const { return static_cast<int>(node_->children.size()); }

// ---------------------------------------------------------------------------
// Simplifying constructors

namespace {

std::optional<double> fold_unary(Op op, double a) {
  double r = 0.0;
  switch (op) {
    case Op::Neg: r = -a; break;
    case Op::Exp: r = std::exp(a); break;
    case Op::Ln:
      if (a <= 0.0) return std::nullopt;
      r = std::log(a);
      break;
    case Op::Sin: r = std::sin(a); break;
    case Op::Cos: r = std::cos(a); break;
    case Op::Tanh: r = std::tanh(a); break;
    case Op::Sqrt:
      if (a < 0.0) return std::nullopt;
      r = std::sqrt(a);
      break;
    case Op::Abs: r = std::fabs(a); break;
    default: return std::nullopt;
  }
  if (!std::isfinite(r)) return std::nullopt;
  return r;
}

bool is_integer(double v) { return std::isfinite(v) && v == std::floor(v); }

}  // namespace

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return a.constant_value() + b.constant_value();
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return Expr::node(Op::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return a.constant_value() - b.constant_value();
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  return Expr::node(Op::Sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return a.constant_value() * b.constant_value();
  if (a.is_zero() || b.is_zero()) return 0.0;
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  return Expr::node(Op::Mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant() && b.constant_value() != 0.0)
    return a.constant_value() / b.constant_value();
  if (b.is_constant(1.0)) return a;
  if (a.is_zero() && !b.is_zero()) return 0.0;
  return Expr::node(Op::Div, a, b);
}

Expr operator-(const Expr& a) {
  if (a.is_constant()) return -a.constant_value();
  if (a.op() == Op::Neg) return a.child(0);
  return Expr::node(Op::Neg, a);
}

Expr pow(const Expr& base, const Expr& exponent) {
  if (exponent.is_zero()) return 1.0;
  if (exponent.is_constant(1.0)) return base;
  if (base.is_constant() && exponent.is_constant()) {
    const double b = base.constant_value();
    const double e = exponent.constant_value();
    const double r = std::pow(b, e);
    if (std::isfinite(r) && (b > 0.0 || is_integer(e))) return r;
  }
  return Expr::node(Op::Pow, base, exponent);
}

Expr apply(Op unary, const Expr& a) {
  if (unary == Op::Neg) return -a;
  if (a.is_constant()) {
    if (auto v = fold_unary(unary, a.constant_value())) return *v;
  }
  return Expr::node(unary, a);
}

Expr exp(const Expr& a) { return apply(Op::Exp, a); }
Expr ln(const Expr& a) { return apply(Op::Ln, a); }
Expr sin(const Expr& a) { return apply(Op::Sin, a); }
Expr cos(const Expr& a) { return apply(Op::Cos, a); }
Expr tanh(const Expr& a) { return apply(Op::Tanh, a); }
Expr sqrt(const Expr& a) { return apply(Op::Sqrt, a); }
Expr abs(const Expr& a) { return apply(Op::Abs, a); }

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  Expr run() {
    skip_ws();
    if (pos_ == s_.size()) throw ParseError("empty input", pos_);
    Expr e = expr();
    skip_ws();
    if (pos_ != s_.size()) throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])) != 0) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= s_.size()) throw ParseError(std::string("expected '") + c + "' before end of input", pos_);
      throw ParseError(std::string("expected '") + c + "' but found '" + s_[pos_] + "'", pos_);
    }
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = Expr::node(Op::Add, lhs, term());
      } else if (accept('-')) {
        lhs = Expr::node(Op::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = Expr::node(Op::Mul, lhs, factor());
      } else if (accept('/')) {
        lhs = Expr::node(Op::Div, lhs, factor());
      } else {
        return lhs;
      }
    }
  }

  Expr factor() {
    const bool negate = accept('-');
    Expr b = base();
    if (accept('^')) b = Expr::node(Op::Pow, b, factor());
    return negate ? Expr::node(Op::Neg, b) : b;
  }

  Expr base() {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) != 0 || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_') return identifier();
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  Expr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])) != 0) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw ParseError("malformed number", start);
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (digits() == 0) throw ParseError("malformed exponent", start);
    }
    double v = 0.0;
    const char* first = s_.data() + start;
    const char* last = s_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw ParseError("number out of range", start);
    return v;
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) != 0 || s_[pos_] == '_'))
      ++pos_;
    const std::string_view name = s_.substr(start, pos_ - start);
    if (name == "t") return Expr::variable();
    static constexpr std::pair<std::string_view, Op> kFunctions[] = {
        {"exp", Op::Exp}, {"ln", Op::Ln},     {"sin", Op::Sin}, {"cos", Op::Cos},
        {"tanh", Op::Tanh}, {"sqrt", Op::Sqrt}, {"abs", Op::Abs},
    };
    for (const auto& [fname, op] : kFunctions) {
      if (name == fname) {
        expect('(');
        Expr arg = expr();
        expect(')');
        return Expr::node(op, arg);
      }
    }
    throw ParseError("unknown identifier '" + std::string(name) + "'", start);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).run(); }

// ---------------------------------------------------------------------------
// Printing and comparison

namespace {

void print_number(double v, std::string& out) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), std::fabs(v));
  (void)ec;
  if (v < 0.0 || std::signbit(v)) {
    out += "(-";
    out.append(buf, ptr);
    out += ")";
  } else {
    out.append(buf, ptr);
  }
}

void print_into(const Expr& e, std::string& out) {
  switch (e.op()) {
    case Op::Constant: print_number(e.constant_value(), out); return;
    case Op::Variable: out += 't'; return;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
    case Op::Pow:
      out += '(';
      print_into(e.child(0), out);
      out += op_name(e.op());
      print_into(e.child(1), out);
      out += ')';
      return;
    case Op::Neg:
      out += "(-";
      print_into(e.child(0), out);
      out += ')';
      return;
    default:
      out += op_name(e.op());
      out += '(';
      print_into(e.child(0), out);
      out += ')';
      return;
  }
}

}  // namespace

std::string print(const Expr& e) {
  std::string out;
  print_into(e, out);
  return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.op() != b.op()) return false;
  if (a.is_constant()) return a.constant_value() == b.constant_value();
  for (int i = 0; i < a.child_count(); ++i)
    if (!structurally_equal(a.child(i), b.child(i))) return false;
  return true;
}

bool is_constant_expr(const Expr& e) {
  if (e.op() == Op::Variable) return false;
  for (int i = 0; i < e.child_count(); ++i)
    if (!is_constant_expr(e.child(i))) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

[[noreturn]] void domain_error(const char* what, const Expr& e, double t) {
  throw DomainError(std::string(what) + " in " + print(e) + " at t=" + std::to_string(t));
}

double checked(double r, const Expr& e, double t) {
  if (!std::isfinite(r)) domain_error("non-finite value", e, t);
  return r;
}

double eval_pow(double b, double x, const Expr& e, double t) {
  if (b < 0.0 && !is_integer(x)) domain_error("negative base with non-integer exponent", e, t);
  if (b == 0.0 && x < 0.0) domain_error("zero base with negative exponent", e, t);
  return std::pow(b, x);
}

}  // namespace

double eval(const Expr& e, double t) {
  switch (e.op()) {
    case Op::Constant: return e.constant_value();
    case Op::Variable: return t;
    case Op::Add: return checked(eval(e.child(0), t) + eval(e.child(1), t), e, t);
    case Op::Sub: return checked(eval(e.child(0), t) - eval(e.child(1), t), e, t);
    case Op::Mul: return checked(eval(e.child(0), t) * eval(e.child(1), t), e, t);
    case Op::Div: {
      const double num = eval(e.child(0), t);
      const double den = eval(e.child(1), t);
      if (den == 0.0) domain_error("division by zero", e, t);
      return checked(num / den, e, t);
    }
    case Op::Pow:
      return checked(eval_pow(eval(e.child(0), t), eval(e.child(1), t), e, t), e, t);
    case Op::Neg: return -eval(e.child(0), t);
    case Op::Exp: return checked(std::exp(eval(e.child(0), t)), e, t);
    case Op::Ln: {
      const double a = eval(e.child(0), t);
      if (a <= 0.0) domain_error("logarithm of nonpositive value", e, t);
      return std::log(a);
    }
    case Op::Sin: return std::sin(eval(e.child(0), t));
    case Op::Cos: return std::cos(eval(e.child(0), t));
    case Op::Tanh: return std::tanh(eval(e.child(0), t));
    case Op::Sqrt: {
      const double a = eval(e.child(0), t);
      if (a < 0.0) domain_error("square root of negative value", e, t);
      return std::sqrt(a);
    }
    case Op::Abs: return std::fabs(eval(e.child(0), t));
  }
  return 0.0;
}

namespace {

Taylor checked(Taylor r, const Expr& e, double t) {
  for (double c : r.coefficients())
    if (!std::isfinite(c)) domain_error("non-finite value", e, t);
  return r;
}

Taylor jet_of(const Expr& e, double t, int K) {
  switch (e.op()) {
    case Op::Constant: return Taylor::constant(e.constant_value(), K);
    case Op::Variable: return Taylor::variable(t, K);
    case Op::Add: return jet_of(e.child(0), t, K) + jet_of(e.child(1), t, K);
    case Op::Sub: return jet_of(e.child(0), t, K) - jet_of(e.child(1), t, K);
    case Op::Mul: return checked(jet_of(e.child(0), t, K) * jet_of(e.child(1), t, K), e, t);
    case Op::Div: {
      Taylor num = jet_of(e.child(0), t, K);
      Taylor den = jet_of(e.child(1), t, K);
      if (den.value() == 0.0) domain_error("division by zero", e, t);
      return checked(num / den, e, t);
    }
    case Op::Pow: {
      Taylor b = jet_of(e.child(0), t, K);
      const Expr& xe = e.child(1);
      if (is_constant_expr(xe)) {
        const double x = eval(xe, t);
        eval_pow(b.value(), x, e, t);
        if (b.value() == 0.0 && !(x >= 0.0 && x <= 16.0 && is_integer(x)) && K > 0)
          domain_error("non-smooth power at zero base", e, t);
        return checked(pow(b, x), e, t);
      }
      if (b.value() <= 0.0) domain_error("nonpositive base with variable exponent", e, t);
      return checked(exp(jet_of(xe, t, K) * log(b)), e, t);
    }
    case Op::Neg: return -jet_of(e.child(0), t, K);
    case Op::Exp: return checked(exp(jet_of(e.child(0), t, K)), e, t);
    case Op::Ln: {
      Taylor a = jet_of(e.child(0), t, K);
      if (a.value() <= 0.0) domain_error("logarithm of nonpositive value", e, t);
      return log(a);
    }
    case Op::Sin: return sin(jet_of(e.child(0), t, K));
    case Op::Cos: return cos(jet_of(e.child(0), t, K));
    case Op::Tanh: return tanh(jet_of(e.child(0), t, K));
    case Op::Sqrt: {
      Taylor a = jet_of(e.child(0), t, K);
      if (a.value() < 0.0 || (a.value() == 0.0 && K > 0)) domain_error("square root outside domain", e, t);
      return checked(sqrt(a), e, t);
    }
    case Op::Abs: {
      Taylor a = jet_of(e.child(0), t, K);
      if (a.value() == 0.0 && K > 0) domain_error("abs is not differentiable at zero", e, t);
      return abs(a);
    }
  }
  return Taylor::constant(0.0, K);
}

}  // namespace

Taylor eval_jet(const Expr& e, double t, int order) { return jet_of(e, t, order); }

// ---------------------------------------------------------------------------
// Symbolic differentiation and substitution

Expr differentiate(const Expr& e) {
  switch (e.op()) {
    case Op::Constant: return 0.0;
    case Op::Variable: return 1.0;
    case Op::Add: return differentiate(e.child(0)) + differentiate(e.child(1));
    case Op::Sub: return differentiate(e.child(0)) - differentiate(e.child(1));
    case Op::Mul: {
      const Expr& a = e.child(0);
      const Expr& b = e.child(1);
      return differentiate(a) * b + a * differentiate(b);
    }
    case Op::Div: {
      const Expr& a = e.child(0);
      const Expr& b = e.child(1);
      const Expr db = differentiate(b);
      if (db.is_zero()) return differentiate(a) / b;
      return (differentiate(a) * b - a * db) / pow(b, 2.0);
    }
    case Op::Pow: {
      const Expr& a = e.child(0);
      const Expr& x = e.child(1);
      if (is_constant_expr(x)) return x * pow(a, x - 1.0) * differentiate(a);
      return e * (differentiate(x) * ln(a) + x * differentiate(a) / a);
    }
    case Op::Neg: return -differentiate(e.child(0));
    case Op::Exp: return e * differentiate(e.child(0));
    case Op::Ln: return differentiate(e.child(0)) / e.child(0);
    case Op::Sin: return cos(e.child(0)) * differentiate(e.child(0));
    case Op::Cos: return -(sin(e.child(0)) * differentiate(e.child(0)));
    case Op::Tanh: return (1.0 - pow(e, 2.0)) * differentiate(e.child(0));
    case Op::Sqrt: return differentiate(e.child(0)) / (2.0 * e);
    case Op::Abs: return differentiate(e.child(0)) * e / e.child(0);
  }
  return 0.0;
}

Expr differentiate(const Expr& e, int times) {
  Expr d = e;
  for (int i = 0; i < times; ++i) d = differentiate(d);
  return d;
}

Expr substitute(const Expr& e, const Expr& replacement) {
  switch (e.op()) {
    case Op::Constant: return e;
    case Op::Variable: return replacement;
    case Op::Add: return substitute(e.child(0), replacement) + substitute(e.child(1), replacement);
    case Op::Sub: return substitute(e.child(0), replacement) - substitute(e.child(1), replacement);
    case Op::Mul: return substitute(e.child(0), replacement) * substitute(e.child(1), replacement);
    case Op::Div: return substitute(e.child(0), replacement) / substitute(e.child(1), replacement);
    case Op::Pow: return pow(substitute(e.child(0), replacement), substitute(e.child(1), replacement));
    default: return apply(e.op(), substitute(e.child(0), replacement));
  }
}

double antiderivative(const Expr& e, double t0, double t, double tol) {
  if (e.is_zero() || t0 == t) return 0.0;
  return integrate([&e](double s) { return eval(e, s); }, t0, t, tol);
}

}  // namespace fkdv
