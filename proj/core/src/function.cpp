#include "fkdv/function.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "fkdv/error.hpp"
#include "fkdv/quadrature.hpp"

namespace fkdv {

struct Function::Impl {
  std::optional<Expr> expr;
  JetEvaluator jet;
  std::string description;
};

Function::Function() : Function(Expr(0.0)) {}

Function::Function(double c) : Function(Expr(c)) {}

Function::Function(Expr e) {
  auto impl = std::make_shared<Impl>();
  impl->description = print(e);
  impl->jet = [e](double t, int order) { return eval_jet(e, t, order); };
  impl->expr = std::move(e);
  impl_ = std::move(impl);
}

Function Function::numeric(JetEvaluator jet, std::string description) {
  Function f;
  auto impl = std::make_shared<Impl>();
  impl->jet = std::move(jet);
  impl->description = std::move(description);
  f.impl_ = std::move(impl);
  return f;
}

double Function::operator()(double t) const {
  if (impl_->expr) return eval(*impl_->expr, t);
  return impl_->jet(t, 0).value();
}

Taylor Function::jet(double t, int order) const { return impl_->jet(t, order); }

double Function::derivative(double t, int k) const { return jet(t, k).derivative(k); }

bool Function::is_symbolic() const { return impl_->expr.has_value(); }

const Expr* Function::expr() const { return impl_->expr ? &*impl_->expr : nullptr; }

bool Function::is_zero() const { return impl_->expr && impl_->expr->is_zero(); }

std::string Function::describe() const { return impl_->description; }

namespace {

template <class SymOp, class JetOp>
Function combine(const Function& a, const Function& b, const char* symbol, SymOp sym, JetOp op) {
  if (a.is_symbolic() && b.is_symbolic()) return Function(sym(*a.expr(), *b.expr()));
  return Function::numeric(
      [a, b, op](double t, int k) { return op(a.jet(t, k), b.jet(t, k)); },
      "(" + a.describe() + symbol + b.describe() + ")");
}

}  // namespace

Function operator+(const Function& a, const Function& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return combine(
      a, b, "+", [](const Expr& x, const Expr& y) { return x + y; },
      [](const Taylor& x, const Taylor& y) { return x + y; });
}

Function operator-(const Function& a, const Function& b) {
  if (b.is_zero()) return a;
  return combine(
      a, b, "-", [](const Expr& x, const Expr& y) { return x - y; },
      [](const Taylor& x, const Taylor& y) { return x - y; });
}

Function operator*(const Function& a, const Function& b) {
  if (a.is_zero() || b.is_zero()) return Function();
  if (a.is_symbolic() && a.expr()->is_constant(1.0)) return b;
  if (b.is_symbolic() && b.expr()->is_constant(1.0)) return a;
  return combine(
      a, b, "*", [](const Expr& x, const Expr& y) { return x * y; },
      [](const Taylor& x, const Taylor& y) { return x * y; });
}

Function operator/(const Function& a, const Function& b) {
  if (a.is_zero()) return Function();
  if (b.is_symbolic() && b.expr()->is_constant(1.0)) return a;
  return combine(
      a, b, "/", [](const Expr& x, const Expr& y) { return x / y; },
      [](const Taylor& x, const Taylor& y) {
        if (y.value() == 0.0) throw DomainError("division by zero in numeric function");
        return x / y;
      });
}

Function operator-(const Function& a) {
  if (a.is_symbolic()) return Function(-*a.expr());
  return Function::numeric([a](double t, int k) { return -a.jet(t, k); }, "(-" + a.describe() + ")");
}

Function exp(const Function& a) {
  if (a.is_symbolic()) return Function(exp(*a.expr()));
  return Function::numeric([a](double t, int k) { return exp(a.jet(t, k)); },
                           "exp(" + a.describe() + ")");
}

Function derivative(const Function& f) {
  if (f.is_symbolic()) return Function(differentiate(*f.expr()));
  return Function::numeric([f](double t, int k) { return differentiate(f.jet(t, k + 1)); },
                           "d/dt[" + f.describe() + "]");
}

namespace {

class AntiderivativeCache {
 public:
  AntiderivativeCache(Function f, double t0, Interval domain, double tol, int nodes)
      : f_(std::move(f)), domain_(domain), tol_(tol) {
    if (!domain.bounded() || !(domain.width() > 0.0))
      throw InvariantError("antiderivative needs a bounded, nonempty domain");
    if (!domain.contains(t0)) throw InvariantError("antiderivative base point outside its domain");
    nodes = std::max(nodes, 2);
    t_.resize(static_cast<std::size_t>(nodes));
    F_.resize(t_.size());
    for (int i = 0; i < nodes; ++i) t_[static_cast<std::size_t>(i)] = domain.sample(i, nodes);
    auto integrand = [this](double s) { return f_(s); };
    // Cumulative values relative to the first node, then shift to the base point.
    F_[0] = 0.0;
    for (std::size_t i = 1; i < t_.size(); ++i)
      F_[i] = F_[i - 1] + integrate(integrand, t_[i - 1], t_[i], tol_ / static_cast<double>(nodes));
    const std::size_t k = nearest(t0);
    const double at_base = F_[k] + integrate(integrand, t_[k], t0, tol_);
    for (double& v : F_) v -= at_base;
  }

  double value(double t) const {
    const double slack = 1e-9 * domain_.width();
    if (t < domain_.lo - slack || t > domain_.hi + slack)
      throw DomainError("antiderivative evaluated at t=" + std::to_string(t) + " outside [" +
                        std::to_string(domain_.lo) + ", " + std::to_string(domain_.hi) + "]");
    t = std::clamp(t, domain_.lo, domain_.hi);
    const std::size_t k = nearest(t);
    if (t == t_[k]) return F_[k];
    return F_[k] + integrate([this](double s) { return f_(s); }, t_[k], t, tol_);
  }

  Taylor jet(double t, int order) const {
    const double v = value(t);
    if (order == 0) return Taylor::constant(v, 0);
    return integrate(f_.jet(std::clamp(t, domain_.lo, domain_.hi), order - 1), v);
  }

 private:
  std::size_t nearest(double t) const {
    const double pos = (t - domain_.lo) / domain_.width() * static_cast<double>(t_.size() - 1);
    const long idx = std::lround(pos);
    return static_cast<std::size_t>(std::clamp<long>(idx, 0, static_cast<long>(t_.size()) - 1));
  }

  Function f_;
  Interval domain_;
  double tol_;
  std::vector<double> t_;
  std::vector<double> F_;
};

}  // namespace

Function antiderivative_function(const Function& f, double t0, Interval domain, double tol, int nodes) {
  if (f.is_zero()) return Function();
  auto cache = std::make_shared<const AntiderivativeCache>(f, t0, domain, tol, nodes);
  return Function::numeric([cache](double t, int k) { return cache->jet(t, k); },
                           "int_{" + std::to_string(t0) + "}^{t} " + f.describe() + " ds");
}

}  // namespace fkdv
