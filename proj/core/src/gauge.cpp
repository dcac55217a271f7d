#include "fkdv/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "fkdv/error.hpp"
#include "fkdv/format.hpp"

namespace fkdv {
namespace {

constexpr int kSignSamples = 129;

}  // namespace

EquationSpec EquationSpec::make(double n, Function alpha, Function beta, Interval interval) {
  EquationSpec e{n, std::move(alpha), std::move(beta), interval};
  e.validate();
  return e;
}

void EquationSpec::validate() const {
  if (!std::isfinite(n) || n == 0.0 || n == 1.0)
    throw InvariantError("exponent n must be finite and not 0 or 1 (got " + shortest(n) + ")");
  if (!interval.bounded() || !(interval.lo < interval.hi))
    throw InvariantError("working interval must be bounded and nonempty");
  (void)beta_sign();
  for (int i = 0; i < kSignSamples; ++i) {
    const double a = alpha(interval.sample(i, kSignSamples));
    if (!std::isfinite(a)) throw DomainError("alpha is not finite on the working interval");
  }
}

int EquationSpec::beta_sign() const {
  int sign = 0;
  for (int i = 0; i < kSignSamples; ++i) {
    const double t = interval.sample(i, kSignSamples);
    const double b = beta(t);
    if (!(b != 0.0) || !std::isfinite(b))
      throw DomainError("beta vanishes or is not finite at t=" + shortest(t));
    const int s = b > 0.0 ? 1 : -1;
    if (sign == 0) sign = s;
    if (s != sign) throw DomainError("beta changes sign on the working interval near t=" + shortest(t));
  }
  return sign;
}

EquivTransform::EquivTransform(TimeMap time, double delta1, double delta2)
    : time_(std::move(time)), delta1_(delta1), delta2_(delta2) {
  if (!(delta1 != 0.0) || !std::isfinite(delta1) || !std::isfinite(delta2))
    throw InvariantError("delta1 must be finite and nonzero");
}

EquivTransform EquivTransform::restricted(double delta1, double delta2, double delta3, double delta4) {
  if (!(delta1 * delta3 > 0.0)) throw InvariantError("restricted transform needs delta1*delta3 > 0");
  return {TimeMap::affine(delta3, delta4), delta1, delta2};
}

Taylor EquivTransform::u_factor_jet(double t, double n, int order) const {
  Taylor slope = differentiate(time_.jet(t, order + 1));
  return pow(delta1_ / slope, 1.0 / n);
}

void EquivTransform::check_on(const Interval& interval) const {
  const Interval dom = time_.domain();
  if (!dom.contains(interval))
    throw InvariantError("time map domain [" + shortest(dom.lo) + ", " + shortest(dom.hi) +
                         "] does not cover the working interval");
  for (int i = 0; i < kSignSamples; ++i) {
    const double t = interval.sample(i, kSignSamples);
    const double slope = time_.jet(t, 1)[1];
    if (!(delta1_ * slope > 0.0))
      throw InvariantError("delta1*T_t = " + shortest(delta1_ * slope) + " <= 0 at t=" + shortest(t));
  }
}

std::string EquivTransform::describe() const {
  return time_.describe() + "; x~ = " + shortest(delta1_) + "*x + " + shortest(delta2_);
}

EquationSpec apply_equiv(const EquivTransform& g, const EquationSpec& e) {
  if (g.is_identity()) return e;
  g.check_on(e.interval);
  const double n = e.n;
  const double d5 = std::pow(g.delta1(), 5);
  EquationSpec out;
  out.n = n;
  out.interval = g.time().image(e.interval);

  const Expr* T = g.time().expr();
  const Expr* Tinv = g.time().inverse_expr();
  if (T && Tinv && e.alpha.is_symbolic() && e.beta.is_symbolic()) {
    const Expr Tp = differentiate(*T);
    const Expr Tpp = differentiate(Tp);
    const Expr alpha_t = *e.alpha.expr() / Tp + Tpp / (n * pow(Tp, 2.0));
    const Expr beta_t = d5 * *e.beta.expr() / Tp;
    out.alpha = Function(substitute(alpha_t, *Tinv));
    out.beta = Function(substitute(beta_t, *Tinv));
  } else {
    const TimeMap time = g.time();
    const Function alpha = e.alpha;
    const Function beta = e.beta;
    out.alpha = Function::numeric(
        [time, alpha, n](double s, int K) {
          const Taylor inv = time.inverse_jet(s, K);
          const double t = inv.value();
          const Taylor Tj = time.jet(t, K + 2);
          const Taylor T1 = differentiate(Tj);
          const Taylor T2 = differentiate(T1);
          const Taylor in_t = alpha.jet(t, K) / T1 + T2 / (n * T1 * T1);
          return compose(in_t.truncated(K), inv);
        },
        "alpha~ pulled back through " + time.describe());
    out.beta = Function::numeric(
        [time, beta, d5](double s, int K) {
          const Taylor inv = time.inverse_jet(s, K);
          const double t = inv.value();
          const Taylor T1 = differentiate(time.jet(t, K + 1));
          const Taylor in_t = d5 * beta.jet(t, K) / T1;
          return compose(in_t.truncated(K), inv);
        },
        "beta~ pulled back through " + time.describe());
  }
  const int before = e.beta_sign();
  int after = 0;
  try {
    after = out.beta_sign();
  } catch (const DomainError& err) {
    throw InvariantError(std::string("transformed beta is degenerate: ") + err.what());
  }
  if (before != after) throw InvariantError("transformed beta changed sign; inconsistent transform");
  return out;
}

EquivTransform compose(const EquivTransform& g2, const EquivTransform& g1) {
  if (g2.is_identity()) return g1;
  if (g1.is_identity()) return g2;
  return {compose(g2.time(), g1.time()), g2.delta1() * g1.delta1(), g2.delta1() * g1.delta2() + g2.delta2()};
}

EquivTransform invert(const EquivTransform& g) {
  if (g.is_identity()) return g;
  return {g.time().inverted(), 1.0 / g.delta1(), -g.delta2() / g.delta1()};
}

TimeMap gauge_time_map(const Function& alpha, double n, Interval window) {
  if (alpha.is_zero()) return TimeMap::identity();
  const double t0 = window.lo;
  if (const Expr* a = alpha.expr(); a && is_constant_expr(*a)) {
    // int_{t0}^t e^{-n a (s - t0)} ds = (1 - e^{-n a (t - t0)}) / (n a)
    const double na = n * eval(*a, t0);
    if (na != 0.0) return TimeMap::exponential(-std::exp(na * t0) / na, -na, 1.0 / na);
  }
  const Function A = antiderivative_function(alpha, t0, window);
  const Function rate = Function::numeric([A, n](double t, int K) { return exp(-n * A.jet(t, K)); },
                                          "exp(-" + shortest(n) + "*[" + A.describe() + "])");
  return TimeMap::integral(rate, t0, window);
}

GaugeResult gauge_to_zero_alpha(const EquationSpec& e) {
  if (e.alpha.is_zero()) return {EquivTransform::identity(), e};
  EquivTransform g(gauge_time_map(e.alpha, e.n, e.interval), 1.0, 0.0);
  EquationSpec gauged = apply_equiv(g, e);
  gauged.alpha = Function();
  return {g, gauged};
}

EquationSpec attach_alpha(const EquationSpec& gauged, const Function& alpha, Interval window) {
  EquationSpec out;
  out.n = gauged.n;
  out.alpha = alpha;
  out.interval = window;
  const TimeMap T = gauge_time_map(alpha, gauged.n, window);
  if (T.is_identity()) {
    out.beta = gauged.beta;
    out.validate();
    return out;
  }
  const Interval img = T.image(window);
  const double slack = 1e-12 * (1.0 + img.width());
  if (img.lo < gauged.interval.lo - slack || img.hi > gauged.interval.hi + slack)
    throw InvariantError("gauged equation is not defined on the gauge image [" + shortest(img.lo) + ", " +
                         shortest(img.hi) + "]");
  const Expr* Te = T.expr();
  if (Te && gauged.beta.is_symbolic()) {
    out.beta = Function(differentiate(*Te) * substitute(*gauged.beta.expr(), *Te));
  } else {
    const Function bt = gauged.beta;
    out.beta = Function::numeric(
        [T, bt](double t, int K) {
          const Taylor Tj = T.jet(t, K + 1);
          return compose(bt.jet(Tj.value(), K), Tj.truncated(K)) * differentiate(Tj);
        },
        "T_t * beta~(T) with T = " + T.describe());
  }
  out.validate();
  return out;
}

double reducibility_residual(const EquationSpec& e, int samples) {
  samples = std::max(samples, 2);
  const double n = e.n;
  double worst = 0.0;
  if (e.alpha.is_symbolic() && e.beta.is_symbolic()) {
    const Expr& alpha = *e.alpha.expr();
    const Expr& beta = *e.beta.expr();
    const Expr lhs = n * differentiate(alpha / beta);
    const Expr rhs = differentiate(1.0 / beta, 2);
    for (int i = 0; i < samples; ++i) {
      const double t = e.interval.sample(i, samples);
      if (eval(beta, t) == 0.0) throw DomainError("beta vanishes at t=" + shortest(t));
      const double r = eval(rhs, t);
      worst = std::max(worst, std::fabs(eval(lhs, t) - r) / (1.0 + std::fabs(r)));
    }
    return worst;
  }
  for (int i = 0; i < samples; ++i) {
    const double t = e.interval.sample(i, samples);
    const Taylor b = e.beta.jet(t, 2);
    if (b.value() == 0.0) throw DomainError("beta vanishes at t=" + shortest(t));
    const Taylor q = e.alpha.jet(t, 2) / b;
    const Taylor r = 1.0 / b;
    const double lhs = n * q.derivative(1);
    const double rhs = r.derivative(2);
    worst = std::max(worst, std::fabs(lhs - rhs) / (1.0 + std::fabs(rhs)));
  }
  return worst;
}

namespace {

// int_{lo}^t rate in closed form when rate is c, c/t, c t^p or c e^{kt} on the window.
std::optional<TimeMap> closed_form_integral(const Function& rate, Interval window) {
  constexpr int kProbe = 17;
  const double t0 = window.lo;
  auto constant_on = [&](auto&& f) -> std::optional<double> {
    const double ref = f(window.mid());
    for (int i = 0; i < kProbe; ++i)
      if (std::fabs(f(window.sample(i, kProbe)) - ref) > 1e-12 * (1.0 + std::fabs(ref))) return std::nullopt;
    return ref;
  };
  auto log_slope = [&](double t) {
    const Taylor j = rate.jet(t, 1);
    return j[1] / j[0];
  };
  const double r0 = rate(t0);
  if (auto c = constant_on([&](double t) { return rate(t); })) return TimeMap::affine(*c, -*c * t0);
  if (window.lo > 0.0) {
    if (auto p = constant_on([&](double t) { return t * log_slope(t); })) {
      const double q = *p + 1.0;
      const double c = r0 / std::pow(t0, *p);
      if (std::fabs(q) < 1e-12) return TimeMap::logarithmic(c, -c * std::log(t0));
      return TimeMap::power(c / q, q, -c * std::pow(t0, q) / q);
    }
  }
  if (auto k = constant_on(log_slope)) return TimeMap::exponential(r0 * std::exp(-*k * t0) / *k, *k, -r0 / *k);
  return std::nullopt;
}

}  // namespace

Constantization constantize(const EquationSpec& e, double tol) {
  const double residual = reducibility_residual(e);
  if (residual > tol)
    throw InvariantError("not reducible to constant coefficients: criterion residual " + sci12(residual) +
                         " exceeds " + sci12(tol));
  const double eps = e.beta_sign();
  Constantization out;
  out.criterion_residual = residual;
  out.B = eps;
  if (e.beta.is_symbolic() && e.beta.expr()->is_constant(eps)) {
    out.transform = EquivTransform::identity();
  } else {
    const Function rate = e.beta * Function(eps);
    const auto closed = closed_form_integral(rate, e.interval);
    out.transform = EquivTransform(closed ? *closed : TimeMap::integral(rate, e.interval.lo, e.interval), 1.0, 0.0);
  }
  out.image = apply_equiv(out.transform, e);
  const Interval& img = out.image.interval;
  out.A = out.image.alpha(img.mid());
  constexpr int kCheck = 33;
  for (int i = 0; i < kCheck; ++i) {
    const double s = img.sample(i, kCheck);
    out.alpha_spread = std::max(out.alpha_spread, std::fabs(out.image.alpha(s) - out.A));
    out.beta_spread = std::max(out.beta_spread, std::fabs(out.image.beta(s) - out.B));
  }
  return out;
}

}  // namespace fkdv
