#include "fkdv/time_map.hpp"

#include <cmath>
#include <optional>
#include <utility>

#include "fkdv/error.hpp"
#include "fkdv/format.hpp"

namespace fkdv {

struct TimeMap::Impl {
  virtual ~Impl() = default;
  virtual double value(double t) const = 0;
  virtual Taylor jet(double t, int order) const = 0;
  virtual double inverse(double s) const = 0;
  virtual Interval domain() const = 0;
  virtual std::string describe() const = 0;
  virtual const Expr* expr() const { return nullptr; }
  virtual const Expr* inverse_expr() const { return nullptr; }
  virtual bool identity() const { return false; }
  /// Image of the whole domain when the domain is unbounded.
  virtual Interval range() const { return Interval::whole(); }
};

namespace {

// Root of value(t) = s for a monotone map on `dom`, starting from `guess`.
template <class Value, class Slope>
double solve_monotone(const Value& value, const Slope& slope, double s, Interval dom, double guess) {
  double a = dom.lo;
  double b = dom.hi;
  if (!std::isfinite(a) || !std::isfinite(b)) {
    // Expand a bracket outwards from the guess.
    double x0 = std::isfinite(guess) && dom.contains(guess) ? guess : 0.0;
    if (!dom.contains(x0)) x0 = std::isfinite(dom.lo) ? dom.lo + 1.0 : dom.hi - 1.0;
    const double dir = slope(x0) > 0.0 ? 1.0 : -1.0;
    auto g = [&](double t) { return (value(t) - s) * dir; };
    const bool right = g(x0) < 0.0;
    double near = x0;
    double far = x0;
    double step = 1.0;
    bool found = false;
    for (int i = 0; i < 1100 && !found; ++i) {
      near = far;
      far = right ? far + step : far - step;
      if (right && std::isfinite(dom.hi)) far = std::min(far, dom.hi);
      if (!right && std::isfinite(dom.lo)) far = std::max(far, dom.lo);
      double gf = 0.0;
      try {
        gf = g(far);
      } catch (const DomainError&) {
        // Stepped past the real domain of the expression: halve back.
        far = near;
        step *= 0.5;
        continue;
      }
      found = right ? gf >= 0.0 : gf <= 0.0;
      step *= 2.0;
    }
    if (!found) throw DomainError("time map inverse: no preimage for s=" + shortest(s));
    a = std::min(near, far);
    b = std::max(near, far);
  }
  double fa = value(a) - s;
  double fb = value(b) - s;
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  const double scale_s = 1e-12 * (1.0 + std::fabs(s));
  if (fa * fb > 0.0) {
    // Tolerate round-off at the end points of the image.
    if (std::fabs(fa) <= scale_s) return a;
    if (std::fabs(fb) <= scale_s) return b;
    throw DomainError("time map inverse: s=" + shortest(s) + " outside the image of the domain");
  }
  double x = (guess > a && guess < b) ? guess : 0.5 * (a + b);
  for (int iter = 0; iter < 200; ++iter) {
    const double fx = value(x) - s;
    if (fx == 0.0) return x;
    if ((fx < 0.0) == (fa < 0.0)) {
      a = x;
      fa = fx;
    } else {
      b = x;
      fb = fx;
    }
    const double d = slope(x);
    double next = x - fx / d;
    if (!(next > a && next < b) || !std::isfinite(next)) next = 0.5 * (a + b);
    const double tol = 4e-16 * std::max(1.0, std::fabs(next));
    if (std::fabs(next - x) <= tol || std::fabs(b - a) <= tol) return next;
    x = next;
  }
  return x;
}

class SymbolicMap final : public TimeMap::Impl {
 public:
  SymbolicMap(Expr forward, std::optional<Expr> inverse, Interval domain, bool identity = false,
              Interval range = Interval::whole())
      : forward_(std::move(forward)),
        slope_(differentiate(forward_)),
        inverse_(std::move(inverse)),
        domain_(domain),
        identity_(identity),
        range_(range) {}

  double value(double t) const override { return eval(forward_, t); }
  Taylor jet(double t, int order) const override { return eval_jet(forward_, t, order); }
  double inverse(double s) const override {
    if (inverse_) return eval(*inverse_, s);
    return solve_monotone([this](double t) { return eval(forward_, t); },
                          [this](double t) { return eval(slope_, t); }, s, domain_, domain_.bounded() ? domain_.mid() : s);
  }
  Interval domain() const override { return domain_; }
  std::string describe() const override { return "T(t) = " + print(forward_); }
  const Expr* expr() const override { return &forward_; }
  const Expr* inverse_expr() const override { return inverse_ ? &*inverse_ : nullptr; }
  bool identity() const override { return identity_; }
  Interval range() const override { return range_; }

 private:
  Expr forward_;
  Expr slope_;
  std::optional<Expr> inverse_;
  Interval domain_;
  bool identity_;
  Interval range_;
};

class IntegralMap final : public TimeMap::Impl {
 public:
  IntegralMap(Function rate, double t0, Interval domain)
      : rate_(rate), t0_(t0), domain_(domain), F_(antiderivative_function(rate, t0, domain)) {
    if (!domain.bounded()) throw InvariantError("integral time map needs a bounded domain");
  }
  double value(double t) const override { return F_(t); }
  Taylor jet(double t, int order) const override { return F_.jet(t, order); }
  double inverse(double s) const override {
    // Secant-style first guess from the end-point values.
    const double va = F_(domain_.lo);
    const double vb = F_(domain_.hi);
    double guess = domain_.mid();
    if (vb != va) guess = domain_.lo + (s - va) / (vb - va) * domain_.width();
    return solve_monotone([this](double t) { return F_(t); }, [this](double t) { return rate_(t); }, s,
                          domain_, guess);
  }
  Interval domain() const override { return domain_; }
  std::string describe() const override {
    return "T(t) = int_{" + shortest(t0_) + "}^{t} [" + rate_.describe() + "] ds";
  }

 private:
  Function rate_;
  double t0_;
  Interval domain_;
  Function F_;
};

class ComposedMap final : public TimeMap::Impl {
 public:
  ComposedMap(TimeMap outer, TimeMap inner, Interval domain)
      : outer_(std::move(outer)), inner_(std::move(inner)), domain_(domain) {}
  double value(double t) const override { return outer_(inner_(t)); }
  Taylor jet(double t, int order) const override {
    Taylor in = inner_.jet(t, order);
    return compose(outer_.jet(in.value(), order), in);
  }
  double inverse(double s) const override { return inner_.inverse(outer_.inverse(s)); }
  Interval domain() const override { return domain_; }
  std::string describe() const override { return "(" + outer_.describe() + ") o (" + inner_.describe() + ")"; }

 private:
  TimeMap outer_;
  TimeMap inner_;
  Interval domain_;
};

class InvertedMap final : public TimeMap::Impl {
 public:
  InvertedMap(TimeMap base, Interval domain) : base_(std::move(base)), domain_(domain) {}
  double value(double s) const override { return base_.inverse(s); }
  Taylor jet(double s, int order) const override { return base_.inverse_jet(s, order); }
  double inverse(double t) const override { return base_(t); }
  Interval domain() const override { return domain_; }
  std::string describe() const override { return "inverse of (" + base_.describe() + ")"; }

 private:
  TimeMap base_;
  Interval domain_;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

Interval positive_axis() { return {0.0, kInf}; }

Interval half_line(double from, bool upward) { return upward ? Interval{from, kInf} : Interval{-kInf, from}; }

}  // namespace

TimeMap::TimeMap() {
  static const auto id = std::make_shared<const SymbolicMap>(Expr::variable(), Expr::variable(), Interval::whole(), true);
  impl_ = id;
}

TimeMap TimeMap::affine(double a, double b) {
  if (a == 0.0 || !std::isfinite(a) || !std::isfinite(b)) throw InvariantError("affine time map needs a finite nonzero slope");
  const Expr t = Expr::variable();
  return TimeMap(std::make_shared<const SymbolicMap>(a * t + b, (t - b) / a, Interval::whole(), a == 1.0 && b == 0.0));
}

TimeMap TimeMap::exponential(double c, double k, double d) {
  if (c == 0.0 || k == 0.0) throw InvariantError("exponential time map needs c*k != 0");
  const Expr t = Expr::variable();
  return TimeMap(std::make_shared<const SymbolicMap>(c * exp(k * t) + d, ln((t - d) / c) / k, Interval::whole(),
                                                     false, half_line(d, c > 0.0)));
}

TimeMap TimeMap::power(double c, double p, double d) {
  if (c == 0.0 || p == 0.0) throw InvariantError("power time map needs c*p != 0");
  const Expr t = Expr::variable();
  return TimeMap(std::make_shared<const SymbolicMap>(c * pow(t, p) + d, pow((t - d) / c, 1.0 / p), positive_axis(),
                                                     false, half_line(d, c > 0.0)));
}

TimeMap TimeMap::logarithmic(double c, double d) {
  if (c == 0.0) throw InvariantError("logarithmic time map needs c != 0");
  const Expr t = Expr::variable();
  return TimeMap(std::make_shared<const SymbolicMap>(c * ln(t) + d, exp((t - d) / c), positive_axis()));
}

TimeMap TimeMap::from_expr(Expr forward, Interval domain) {
  return TimeMap(std::make_shared<const SymbolicMap>(std::move(forward), std::nullopt, domain));
}

TimeMap TimeMap::integral(Function rate, double t0, Interval domain) {
  return TimeMap(std::make_shared<const IntegralMap>(std::move(rate), t0, domain));
}

double TimeMap::operator()(double t) const { return impl_->value(t); }
Taylor TimeMap::jet(double t, int order) const { return impl_->jet(t, order); }
double TimeMap::inverse(double s) const { return impl_->inverse(s); }

Taylor TimeMap::inverse_jet(double s, int order) const {
  if (const Expr* inv = impl_->inverse_expr()) return eval_jet(*inv, s, order);
  const double t = inverse(s);
  Taylor forward = jet(t, order);
  if (order >= 1 && forward[1] == 0.0) throw DomainError("time map is not invertible at t=" + shortest(t));
  return revert(forward, t);
}

Interval TimeMap::domain() const { return impl_->domain(); }

Interval TimeMap::image(const Interval& interval) const {
  if (is_identity()) return interval;
  if (interval.bounded()) return Interval::ordered(impl_->value(interval.lo), impl_->value(interval.hi));
  const Interval dom = domain();
  if (interval.lo == dom.lo && interval.hi == dom.hi) return impl_->range();
  return Interval::whole();
}

const Expr* TimeMap::expr() const { return impl_->expr(); }
const Expr* TimeMap::inverse_expr() const { return impl_->inverse_expr(); }
bool TimeMap::is_identity() const { return impl_->identity(); }
std::string TimeMap::describe() const { return impl_->describe(); }

TimeMap TimeMap::inverted() const {
  if (is_identity()) return *this;
  const Interval img = image(domain());
  if (const Expr* fwd = expr()) {
    if (const Expr* inv = inverse_expr())
      return TimeMap(std::make_shared<const SymbolicMap>(*inv, *fwd, img, false, domain()));
  }
  return TimeMap(std::make_shared<const InvertedMap>(*this, img));
}

TimeMap compose(const TimeMap& outer, const TimeMap& inner) {
  if (outer.is_identity()) return inner;
  if (inner.is_identity()) return outer;
  const Interval outer_dom = outer.domain();
  Interval dom = inner.domain();
  if (dom.bounded()) {
    const Interval img = inner.image(dom);
    if (!outer_dom.contains(img))
      throw InvariantError("compose: image [" + shortest(img.lo) + ", " + shortest(img.hi) +
                           "] leaves the domain [" + shortest(outer_dom.lo) + ", " + shortest(outer_dom.hi) + "]");
  } else if (outer_dom.bounded()) {
    dom = Interval::ordered(inner.inverse(outer_dom.lo), inner.inverse(outer_dom.hi));
  }
  const Expr* fo = outer.expr();
  const Expr* fi = inner.expr();
  const Expr* io = outer.inverse_expr();
  const Expr* ii = inner.inverse_expr();
  if (fo && fi && io && ii) {
    return TimeMap(std::make_shared<const SymbolicMap>(substitute(*fo, *fi), substitute(*ii, *io), dom));
  }
  return TimeMap(std::make_shared<const ComposedMap>(outer, inner, dom));
}

}  // namespace fkdv
